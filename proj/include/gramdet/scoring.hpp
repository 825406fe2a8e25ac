#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gramdet/dataset.hpp"
#include "gramdet/kernels.hpp"
#include "gramdet/mat.hpp"

namespace gramdet {

/// Column-stochastic |Y| x d experiment: column x is the observation
/// distribution of true label x.
struct ExperimentMatrix {
    Mat p;
    ExperimentMatrix() = default;
    explicit ExperimentMatrix(Mat m);

    int observation_count() const { return p.rows(); }
    int label_count() const { return p.cols(); }
};

/// Nonnegative |Y| x d matrix summing to one: a joint distribution of
/// (observation, reported label), e.g. the product P*Q or its empirical
/// counterpart.
struct JointDistribution {
    Mat j;
    JointDistribution() = default;
    explicit JointDistribution(Mat m);
};

struct ScoreReport {
    enum class Estimator { PartialKnowledge, PlugIn, Stratified };

    double value = 0.0;
    Estimator estimator = Estimator::PlugIn;
    KernelSpec kernel;
    std::optional<uint64_t> seed;  // always present for stratified scores
    int64_t n = 0;
    struct Diagnostics {
        int64_t min_report_label_occurrence = 0;
        bool degenerate = false;  // a label missing or below the estimator's floor
    } diagnostics;
};

const char* estimator_name(ScoreReport::Estimator e);

/// Partial-knowledge Gram determinant score det(Q^T G_K Q). The joint matrix
/// q is taken as-is (it need not sum to one), so closed-form fixtures can be
/// scored directly.
double gram_score(const Mat& experiment, const Mat& q_joint, const KernelSpec& kernel,
                  const Mat* kmat = nullptr);
double gram_score(const Mat& experiment, const MisreportCounts& q, const KernelSpec& kernel,
                  const Mat* kmat = nullptr);

/// Empirical kernel co-occurrence matrix G_bar of the plug-in estimator,
/// including the n = n' self-pairs.
Mat plugin_gram(const Labels& report, const ObservationSet& obs, const KernelSpec& kernel);

ScoreReport plugin_score(const Labels& report, const ObservationSet& obs, const KernelSpec& kernel);

/// Single-draw stratified-matching estimate: disjoint Col/Row index sets with
/// one record per reported label (Col drawn first, Row from the remainder),
/// one uniform permutation. Returns 0 with the degenerate flag when any
/// reported label occurs fewer than twice.
ScoreReport stratified_score(const Labels& report, const ObservationSet& obs,
                             const KernelSpec& kernel, uint64_t seed);

struct WhitenResult {
    Mat m;
    std::vector<int> kept_rows;  // rows of the input that had positive marginals
    std::vector<int> kept_cols;
};

/// Centered, marginal-normalized joint: D_y^{-1/2} (J - mu_y mu_x^T) D_x^{-1/2}.
/// Rows/columns with zero marginal are dropped and recorded.
WhitenResult whiten(const JointDistribution& joint);

enum class BaselineKind { TopkVolume, MaxCorrelation, KyFan, Chi2Mi, KlMi };

const char* baseline_name(BaselineKind kind);

/// Alternative reliability scores on the whitened joint's singular values,
/// plus the KL mutual information computed directly from the joint.
double baseline_score(const JointDistribution& joint, BaselineKind kind, int k = 0);

/// Empirical joint distribution of (categorical observation, reported label).
JointDistribution empirical_joint(const ObservationSet& obs, const Labels& report);

} // namespace gramdet
