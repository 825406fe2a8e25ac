#pragma once

#include <string>
#include <vector>

#include "gramdet/scoring.hpp"
#include "gramdet/simulate.hpp"

namespace gramdet {

struct BaselineSpec {
    BaselineKind kind = BaselineKind::Chi2Mi;
    int k = 0;  // <= 0 means the default d-1 for topk-volume / kyfan
    std::string name(int d) const;
};

struct ComparisonCell {
    double mean = 0.0;
    double se = 0.0;
    int trials = 0;
};

struct RankConsistency {
    std::string a, b;
    bool consistent = false;  // per-p mean curves induce the same strict order
};

struct ComparisonResult {
    std::vector<std::string> kind_names;  // Gram determinant reference first
    std::vector<double> p_levels;
    std::vector<std::vector<ComparisonCell>> cells;  // [kind][p]
    std::vector<RankConsistency> rank_consistency;
};

/// Runs the shared trial stream of run_trials and scores every requested
/// baseline on the empirical joint of (observation, corrupted report), next
/// to the Gram determinant reference. All kinds see identical reports per
/// trial, so comparisons are paired.
ComparisonResult compare_scores(const TrialConfig& cfg, const std::vector<BaselineSpec>& kinds);

} // namespace gramdet
