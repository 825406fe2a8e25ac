#include "gramdet/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <thread>

#include "gramdet/errors.hpp"
#include "gramdet/rng.hpp"

namespace gramdet {

namespace {

namespace streams {
constexpr uint64_t experiment = 1;
constexpr uint64_t truth = 2;
constexpr uint64_t observations = 3;
constexpr uint64_t corrupt_stage = 1;
constexpr uint64_t score_stage = 2;
} // namespace streams

int draw_from_distribution(std::span<const double> weights, Rng& rng) {
    const double u = rng.uniform01();
    double acc = 0.0;
    for (size_t i = 0; i < weights.size(); ++i) {
        acc += weights[i];
        if (u < acc) return static_cast<int>(i);
    }
    return static_cast<int>(weights.size()) - 1;
}

/// Per-label most-similar other label by cosine similarity of experiment
/// columns; ties go to the smallest index.
std::vector<int> second_best_labels(const ExperimentMatrix& experiment) {
    const Mat& p = experiment.p;
    const int d = p.cols();
    const int k = p.rows();
    std::vector<double> norms(d, 0.0);
    for (int j = 0; j < d; ++j) {
        double s = 0.0;
        for (int r = 0; r < k; ++r) s += p(r, j) * p(r, j);
        norms[j] = std::sqrt(s);
    }
    std::vector<int> best(d, 0);
    for (int x = 0; x < d; ++x) {
        double best_sim = -2.0;
        int best_j = -1;
        for (int j = 0; j < d; ++j) {
            if (j == x) continue;
            double dot = 0.0;
            for (int r = 0; r < k; ++r) dot += p(r, x) * p(r, j);
            const double denom = norms[x] * norms[j];
            const double sim = denom > 0.0 ? dot / denom : 0.0;
            if (sim > best_sim) {
                best_sim = sim;
                best_j = j;
            }
        }
        best[x] = best_j + 1;
    }
    return best;
}

double sample_standard_error(std::span<const double> values, double mean) {
    const size_t m = values.size();
    if (m < 2) return 0.0;
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return std::sqrt(ss / static_cast<double>(m - 1)) / std::sqrt(static_cast<double>(m));
}

} // namespace

const char* policy_name(PolicySpec::Kind kind) {
    switch (kind) {
        case PolicySpec::Kind::Uniform: return "uniform";
        case PolicySpec::Kind::AsymNeighbor: return "asym-neighbor";
        case PolicySpec::Kind::RowSim2nd: return "row-sim-2nd";
        case PolicySpec::Kind::Merge01: return "merge-01";
        case PolicySpec::Kind::GroupUpDown: return "group-updown";
        case PolicySpec::Kind::Mixed: return "mixed";
    }
    return "?";
}

TrialAggregate aggregate_cells(const std::vector<TrialCell>& cells) {
    TrialAggregate agg;
    if (cells.empty()) return agg;
    std::vector<double> s, h, l;
    s.reserve(cells.size());
    h.reserve(cells.size());
    l.reserve(cells.size());
    for (const auto& c : cells) {
        s.push_back(c.score);
        h.push_back(c.hamming);
        l.push_back(c.l2);
    }
    const double m = static_cast<double>(cells.size());
    agg.score_mean = std::accumulate(s.begin(), s.end(), 0.0) / m;
    agg.hamming_mean = std::accumulate(h.begin(), h.end(), 0.0) / m;
    agg.l2_mean = std::accumulate(l.begin(), l.end(), 0.0) / m;
    agg.score_se = sample_standard_error(s, agg.score_mean);
    agg.hamming_se = sample_standard_error(h, agg.hamming_mean);
    agg.l2_se = sample_standard_error(l, agg.l2_mean);
    return agg;
}

ExperimentMatrix random_experiment(int d, int k, uint64_t seed) {
    if (d < 1 || k < 1) throw ConfigError("random_experiment: d and k must be >= 1");
    Rng rng(seed);
    Mat p(k, d);
    for (int j = 0; j < d; ++j) {
        double sum = 0.0;
        for (int r = 0; r < k; ++r) {
            p(r, j) = rng.uniform01();
            sum += p(r, j);
        }
        if (sum == 0.0) {
            for (int r = 0; r < k; ++r) p(r, j) = 1.0 / k;
        } else {
            for (int r = 0; r < k; ++r) p(r, j) /= sum;
        }
    }
    return ExperimentMatrix(p);
}

Labels random_labels(int d, int n, uint64_t seed) {
    Rng rng(seed);
    std::vector<int> v(n);
    for (int i = 0; i < n; ++i) v[i] = 1 + rng.uniform_int(d);
    return Labels(std::move(v), d);
}

ObservationSet sample_observations(const Labels& truth, const ExperimentMatrix& experiment,
                                   uint64_t seed) {
    if (truth.d > experiment.label_count())
        throw DimensionError("sample_observations: labels exceed experiment columns");
    Rng rng(seed);
    const Mat& p = experiment.p;
    const int k = p.rows();
    std::vector<double> column(k);
    std::vector<int> ids(truth.n());
    for (int i = 0; i < truth.n(); ++i) {
        const int x = truth.values[i] - 1;
        for (int r = 0; r < k; ++r) column[r] = p(r, x);
        ids[i] = 1 + draw_from_distribution(column, rng);
    }
    return ObservationSet::categorical(std::move(ids), k);
}

ObservationSet gaussian_observations(const Labels& truth, const Mat& means, double sigma,
                                     uint64_t seed) {
    if (sigma <= 0.0) throw ConfigError("gaussian_observations: sigma must be positive");
    if (means.rows() < truth.d)
        throw DimensionError("gaussian_observations: means rows must cover the label alphabet");
    Rng rng(seed);
    const int m = means.cols();
    std::vector<double> values(static_cast<size_t>(truth.n()) * m);
    for (int i = 0; i < truth.n(); ++i) {
        const int x = truth.values[i] - 1;
        for (int c = 0; c < m; ++c)
            values[static_cast<size_t>(i) * m + c] = means(x, c) + sigma * rng.normal();
    }
    return ObservationSet::embeddings(std::move(values), m);
}

Mat separated_means(int d, int m, double spacing) {
    if (d > 2 * m) throw ConfigError("separated_means: requires d <= 2m");
    Mat means(d, m);
    for (int i = 0; i < d; ++i) means(i, i % m) = i < m ? spacing : -spacing;
    return means;
}

Mat sample_mixed_policy_matrix(int d, const MixedPolicyParams& params, Rng& rng) {
    Mat pi(d, d);
    std::vector<double> alpha(d);
    for (int i = 1; i <= d; ++i) {
        for (int j = 1; j <= d; ++j) {
            const int ring = std::min(std::abs(i - j), d - std::abs(i - j));
            alpha[j - 1] = params.alpha_off + params.alpha_diag * (j == i ? 1.0 : 0.0) +
                           params.lambda_loc * std::exp(-static_cast<double>(ring)) +
                           params.lambda_up * std::exp(params.gamma * static_cast<double>(j - i)) +
                           params.lambda_def * (j == params.default_label ? 1.0 : 0.0);
        }
        const auto row = rng.dirichlet(alpha);
        for (int j = 0; j < d; ++j) pi(i - 1, j) = row[j];
    }
    return pi;
}

Labels corrupt(const Labels& truth, double p, const PolicySpec& policy,
               const ExperimentMatrix* experiment, uint64_t seed) {
    if (p < 0.0 || p > 1.0) throw ConfigError("corrupt: p must be in [0,1]");
    const int d = truth.d;
    if (policy.kind == PolicySpec::Kind::RowSim2nd && experiment == nullptr)
        throw ConfigError("row-sim-2nd policy needs the experiment matrix");
    if (policy.kind == PolicySpec::Kind::Merge01 && d < 2)
        throw ConfigError("merge-01 policy needs d >= 2");

    Rng rng(seed);
    std::vector<int> second;
    Mat pi;
    if (policy.kind == PolicySpec::Kind::RowSim2nd) second = second_best_labels(*experiment);
    if (policy.kind == PolicySpec::Kind::Mixed) pi = sample_mixed_policy_matrix(d, policy.mixed, rng);

    std::vector<int> out(truth.values);
    std::vector<double> pi_row(d);
    for (int i = 0; i < truth.n(); ++i) {
        if (rng.uniform01() >= p) continue;
        const int x = truth.values[i];
        switch (policy.kind) {
            case PolicySpec::Kind::Uniform:
                out[i] = 1 + rng.uniform_int(d);  // Z may equal x
                break;
            case PolicySpec::Kind::AsymNeighbor:
                if (rng.uniform01() < 0.85) {
                    out[i] = std::min(x + 1, d);
                } else {
                    int z = 1 + rng.uniform_int(d - 1);
                    if (z >= x) ++z;
                    out[i] = z;
                }
                break;
            case PolicySpec::Kind::RowSim2nd:
                out[i] = second[x - 1];
                break;
            case PolicySpec::Kind::Merge01:
                out[i] = x <= 2 ? 1 : x;
                break;
            case PolicySpec::Kind::GroupUpDown:
                out[i] = rng.uniform01() < 0.5 ? std::min(x + 1, d) : std::max(x - 1, 1);
                break;
            case PolicySpec::Kind::Mixed:
                for (int j = 0; j < d; ++j) pi_row[j] = pi(x - 1, j);
                out[i] = 1 + draw_from_distribution(pi_row, rng);
                break;
        }
    }
    return Labels(std::move(out), d);
}

GroundTruth make_ground_truth(const TrialConfig& cfg) {
    GroundTruth gt;
    gt.truth = random_labels(cfg.d, cfg.n, derive_seed(cfg.master_seed, streams::truth));
    if (cfg.obs.kind == ObsModel::Kind::Categorical) {
        gt.experiment = random_experiment(cfg.d, cfg.obs.alphabet,
                                          derive_seed(cfg.master_seed, streams::experiment));
        gt.obs = sample_observations(gt.truth, *gt.experiment,
                                     derive_seed(cfg.master_seed, streams::observations));
    } else {
        const double spacing = cfg.obs.spacing > 0.0 ? cfg.obs.spacing : 4.0 * cfg.obs.sigma;
        gt.means = separated_means(cfg.d, cfg.obs.width, spacing);
        gt.obs = gaussian_observations(gt.truth, gt.means, cfg.obs.sigma,
                                       derive_seed(cfg.master_seed, streams::observations));
    }
    return gt;
}

uint64_t cell_seed(uint64_t master, int p_index, int trial) {
    const uint64_t stream = (static_cast<uint64_t>(p_index + 1) << 32) |
                            static_cast<uint64_t>(static_cast<uint32_t>(trial + 1));
    return derive_seed(master, stream);
}

uint64_t cell_score_seed(uint64_t master, int p_index, int trial) {
    return derive_seed(cell_seed(master, p_index, trial), streams::score_stage);
}

Labels corrupted_report(const TrialConfig& cfg, const GroundTruth& gt, int p_index, int trial) {
    const uint64_t seed = derive_seed(cell_seed(cfg.master_seed, p_index, trial),
                                      streams::corrupt_stage);
    const ExperimentMatrix* experiment = gt.experiment ? &*gt.experiment : nullptr;
    return corrupt(gt.truth, cfg.p_levels[p_index], cfg.policy, experiment, seed);
}

TrialResult run_trials(const TrialConfig& cfg) {
    if (cfg.n < 1 || cfg.trials < 1) throw ConfigError("run_trials: n and trials must be >= 1");
    if (cfg.p_levels.empty()) throw ConfigError("run_trials: p levels must be nonempty");
    for (double p : cfg.p_levels)
        if (p < 0.0 || p > 1.0) throw ConfigError("run_trials: p levels must be in [0,1]");
    if (cfg.estimator == ScoreReport::Estimator::PartialKnowledge)
        throw ConfigError("run_trials: estimator must be plugin or stratified");

    const GroundTruth gt = make_ground_truth(cfg);
    const int levels = static_cast<int>(cfg.p_levels.size());
    const int total = levels * cfg.trials;

    TrialResult result;
    result.p_levels = cfg.p_levels;
    result.cells.assign(levels, std::vector<TrialCell>(cfg.trials));

    auto run_cell = [&](int flat) {
        const int p_index = flat / cfg.trials;
        const int trial = flat % cfg.trials;
        const Labels report = corrupted_report(cfg, gt, p_index, trial);
        TrialCell cell;
        if (cfg.estimator == ScoreReport::Estimator::PlugIn) {
            cell.score = plugin_score(report, gt.obs, cfg.kernel).value;
        } else {
            cell.score = stratified_score(report, gt.obs, cfg.kernel,
                                          cell_score_seed(cfg.master_seed, p_index, trial))
                             .value;
        }
        cell.hamming = static_cast<double>(hamming_distance(gt.truth, report));
        double sq = 0.0;
        for (int i = 0; i < cfg.n; ++i) {
            const double diff = gt.truth.values[i] - report.values[i];
            sq += diff * diff;
        }
        cell.l2 = std::sqrt(sq);
        result.cells[p_index][trial] = cell;
    };

    const int workers = std::max(1, cfg.workers);
    if (workers == 1) {
        for (int flat = 0; flat < total; ++flat) run_cell(flat);
    } else {
        // Cells are independent and land in preallocated slots, so the merge
        // order is fixed by index regardless of scheduling.
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(workers));
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (;;) {
                    const int flat = next.fetch_add(1);
                    if (flat >= total) return;
                    run_cell(flat);
                }
            });
        for (auto& t : pool) t.join();
    }

    result.aggregates.reserve(levels);
    for (int p = 0; p < levels; ++p) result.aggregates.push_back(aggregate_cells(result.cells[p]));
    return result;
}

bool ranking_matches_desc_asc(std::span<const double> scores, std::span<const double> reference) {
    if (scores.size() != reference.size())
        throw DimensionError("ranking comparison needs equal-length sequences");
    if (scores.size() < 2) throw DimensionError("ranking comparison needs at least two levels");
    const size_t n = scores.size();
    std::vector<size_t> by_score(n), by_ref(n);
    std::iota(by_score.begin(), by_score.end(), 0);
    std::iota(by_ref.begin(), by_ref.end(), 0);
    std::sort(by_score.begin(), by_score.end(),
              [&](size_t a, size_t b) { return scores[a] > scores[b]; });
    std::sort(by_ref.begin(), by_ref.end(),
              [&](size_t a, size_t b) { return reference[a] < reference[b]; });
    for (size_t i = 0; i + 1 < n; ++i) {
        if (scores[by_score[i]] <= scores[by_score[i + 1]]) return false;  // tie or non-strict
        if (reference[by_ref[i]] >= reference[by_ref[i + 1]]) return false;
    }
    return by_score == by_ref;
}

} // namespace gramdet
