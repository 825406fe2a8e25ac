#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gramdet/dataset.hpp"
#include "gramdet/kernels.hpp"
#include "gramdet/rng.hpp"
#include "gramdet/scoring.hpp"

namespace gramdet {

struct MixedPolicyParams {
    double alpha_off = 0.2;
    double alpha_diag = 6.0;
    double lambda_loc = 1.0;
    double lambda_up = 0.4;
    double gamma = 0.5;
    double lambda_def = 0.6;
    int default_label = 1;  // j0
};

struct PolicySpec {
    enum class Kind { Uniform, AsymNeighbor, RowSim2nd, Merge01, GroupUpDown, Mixed };
    Kind kind = Kind::Uniform;
    MixedPolicyParams mixed;
};

const char* policy_name(PolicySpec::Kind kind);

struct ObsModel {
    enum class Kind { Categorical, Gaussian };
    Kind kind = Kind::Categorical;
    int alphabet = 8;      // categorical observation space size
    int width = 8;         // gaussian embedding width
    double sigma = 1.0;    // gaussian noise scale
    double spacing = 0.0;  // class-mean axis spacing; <= 0 means 4*sigma
};

struct TrialConfig {
    int d = 5;
    int n = 2000;
    ObsModel obs;
    std::vector<double> p_levels = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5};
    PolicySpec policy;
    int trials = 20;  // M
    ScoreReport::Estimator estimator = ScoreReport::Estimator::PlugIn;
    KernelSpec kernel;
    uint64_t master_seed = 0;
    int workers = 1;
};

struct TrialCell {
    double score = 0.0;
    double hamming = 0.0;  // count of disagreements with the truth
    double l2 = 0.0;       // euclidean distance treating label ids as reals
};

struct TrialAggregate {
    double score_mean = 0.0, score_se = 0.0;
    double hamming_mean = 0.0, hamming_se = 0.0;
    double l2_mean = 0.0, l2_se = 0.0;
};

struct TrialResult {
    std::vector<double> p_levels;
    std::vector<std::vector<TrialCell>> cells;  // [p][trial]
    std::vector<TrialAggregate> aggregates;     // per p
};

/// Mean and standard error of the mean (sample std / sqrt(M)).
TrialAggregate aggregate_cells(const std::vector<TrialCell>& cells);

/// k x d experiment with i.i.d. Uniform(0,1) entries, columns normalized.
ExperimentMatrix random_experiment(int d, int k, uint64_t seed);

Labels random_labels(int d, int n, uint64_t seed);

/// y_n drawn from the experiment column of the true label, independently.
ObservationSet sample_observations(const Labels& truth, const ExperimentMatrix& experiment,
                                   uint64_t seed);

/// y_n = means(x_n) + sigma * standard normal vector.
ObservationSet gaussian_observations(const Labels& truth, const Mat& means, double sigma,
                                     uint64_t seed);

/// d class means in R^m on signed coordinate axes, pairwise distance at least
/// spacing * sqrt(2). Requires d <= 2m.
Mat separated_means(int d, int m, double spacing);

/// Each slot kept with probability 1-p, otherwise replaced per policy.
/// Row-sim-2nd needs the experiment that generated the observations.
Labels corrupt(const Labels& truth, double p, const PolicySpec& policy,
               const ExperimentMatrix* experiment, uint64_t seed);

/// The mixed policy's row-stochastic confusion matrix (one Dirichlet draw per
/// row); resampled once per corrupt call.
Mat sample_mixed_policy_matrix(int d, const MixedPolicyParams& params, Rng& rng);

/// Ground truth shared by every trial of a batch.
struct GroundTruth {
    std::optional<ExperimentMatrix> experiment;  // categorical observation model
    Mat means;                                   // gaussian observation model
    Labels truth;
    ObservationSet obs;
};

GroundTruth make_ground_truth(const TrialConfig& cfg);

/// Seed of the (p, trial) cell; compare runners reuse it so score families are
/// evaluated on identical corrupted reports.
uint64_t cell_seed(uint64_t master, int p_index, int trial);

/// Seed of a cell's estimator stage (stratified draws).
uint64_t cell_score_seed(uint64_t master, int p_index, int trial);

Labels corrupted_report(const TrialConfig& cfg, const GroundTruth& gt, int p_index, int trial);

/// Corrupt + score + error metrics over the full (p, trial) grid; one fixed
/// ground truth per batch. Deterministic for a given master seed regardless
/// of worker count (cells are merged in index order).
TrialResult run_trials(const TrialConfig& cfg);

/// True when the strictly descending order of scores equals the strictly
/// ascending order of the reference metric; any tie on either side fails.
bool ranking_matches_desc_asc(std::span<const double> scores, std::span<const double> reference);

} // namespace gramdet
