#include "gramdet/compare.hpp"

#include <cmath>
#include <numeric>

#include "gramdet/errors.hpp"

namespace gramdet {

namespace {

double se_of(const std::vector<double>& v, double mean) {
    if (v.size() < 2) return 0.0;
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(v.size() - 1)) /
           std::sqrt(static_cast<double>(v.size()));
}

bool same_strict_order(const std::vector<double>& a, const std::vector<double>& b) {
    const size_t n = a.size();
    std::vector<size_t> ia(n), ib(n);
    std::iota(ia.begin(), ia.end(), 0);
    std::iota(ib.begin(), ib.end(), 0);
    std::sort(ia.begin(), ia.end(), [&](size_t x, size_t y) { return a[x] > a[y]; });
    std::sort(ib.begin(), ib.end(), [&](size_t x, size_t y) { return b[x] > b[y]; });
    for (size_t i = 0; i + 1 < n; ++i)
        if (a[ia[i]] <= a[ia[i + 1]] || b[ib[i]] <= b[ib[i + 1]]) return false;
    return ia == ib;
}

} // namespace

std::string BaselineSpec::name(int d) const {
    const int kk = k > 0 ? k : d - 1;
    switch (kind) {
        case BaselineKind::TopkVolume: return "topk-volume(" + std::to_string(kk) + ")";
        case BaselineKind::KyFan: return "kyfan(" + std::to_string(kk) + ")";
        default: return baseline_name(kind);
    }
}

ComparisonResult compare_scores(const TrialConfig& cfg, const std::vector<BaselineSpec>& kinds) {
    if (kinds.empty()) throw ConfigError("compare_scores: at least one score kind required");
    if (cfg.obs.kind != ObsModel::Kind::Categorical)
        throw ConfigError("compare_scores: baselines need categorical observations");

    const GroundTruth gt = make_ground_truth(cfg);
    const int levels = static_cast<int>(cfg.p_levels.size());
    const int n_kinds = 1 + static_cast<int>(kinds.size());

    ComparisonResult out;
    out.p_levels = cfg.p_levels;
    out.kind_names.push_back("gram");
    for (const auto& spec : kinds) out.kind_names.push_back(spec.name(cfg.d));
    out.cells.assign(n_kinds, std::vector<ComparisonCell>(levels));

    std::vector<std::vector<std::vector<double>>> raw(
        n_kinds, std::vector<std::vector<double>>(levels));

    for (int p = 0; p < levels; ++p) {
        for (int t = 0; t < cfg.trials; ++t) {
            const Labels report = corrupted_report(cfg, gt, p, t);
            // gram reference mirrors run_trials, estimator and seeds included
            if (cfg.estimator == ScoreReport::Estimator::Stratified) {
                raw[0][p].push_back(stratified_score(report, gt.obs, cfg.kernel,
                                                     cell_score_seed(cfg.master_seed, p, t))
                                        .value);
            } else {
                raw[0][p].push_back(plugin_score(report, gt.obs, cfg.kernel).value);
            }
            const JointDistribution joint = empirical_joint(gt.obs, report);
            for (size_t s = 0; s < kinds.size(); ++s) {
                const int kk = kinds[s].k > 0 ? kinds[s].k : cfg.d - 1;
                raw[1 + s][p].push_back(baseline_score(joint, kinds[s].kind, kk));
            }
        }
    }

    for (int kind = 0; kind < n_kinds; ++kind)
        for (int p = 0; p < levels; ++p) {
            const auto& vals = raw[kind][p];
            ComparisonCell cell;
            cell.trials = static_cast<int>(vals.size());
            cell.mean = std::accumulate(vals.begin(), vals.end(), 0.0) / vals.size();
            cell.se = se_of(vals, cell.mean);
            out.cells[kind][p] = cell;
        }

    for (int a = 0; a < n_kinds; ++a)
        for (int b = a + 1; b < n_kinds; ++b) {
            std::vector<double> ma(levels), mb(levels);
            for (int p = 0; p < levels; ++p) {
                ma[p] = out.cells[a][p].mean;
                mb[p] = out.cells[b][p].mean;
            }
            out.rank_consistency.push_back(
                {out.kind_names[a], out.kind_names[b], same_strict_order(ma, mb)});
        }
    return out;
}

} // namespace gramdet
