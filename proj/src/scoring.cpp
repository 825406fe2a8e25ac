#include "gramdet/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gramdet/errors.hpp"
#include "gramdet/rng.hpp"

namespace gramdet {

namespace {

std::vector<int64_t> label_occurrences(const Labels& report) {
    std::vector<int64_t> occ(report.d, 0);
    for (int v : report.values) occ[v - 1]++;
    return occ;
}

void require_aligned(const Labels& report, const ObservationSet& obs) {
    if (report.n() != obs.size())
        throw DimensionError("report and observations have different lengths");
}

void require_pseudo_posterior_domain(const Labels& report, const ObservationSet& obs) {
    if (obs.is_categorical())
        throw KernelDomainError("pseudo-posterior kernel requires embedding observations");
    if (obs.width() != report.d)
        throw KernelDomainError("pseudo-posterior observations must have width d");
    for (int n = 0; n < obs.size(); ++n) {
        double sum = 0.0;
        for (double v : obs.vec(n)) {
            if (v < -1e-12) throw KernelDomainError("pseudo-posterior observation has negative mass");
            sum += v;
        }
        if (std::abs(sum - 1.0) > 1e-9)
            throw KernelDomainError("pseudo-posterior observation does not sum to one");
    }
}

} // namespace

ExperimentMatrix::ExperimentMatrix(Mat m) : p(std::move(m)) {
    if (p.rows() < 1 || p.cols() < 1) throw DimensionError("experiment matrix must be nonempty");
    if (!matches(p, {StructuralPredicate::Kind::ColumnStochastic, 1e-12}))
        throw DimensionError("experiment matrix must be column-stochastic");
}

JointDistribution::JointDistribution(Mat m) : j(std::move(m)) {
    double total = 0.0;
    for (double v : j.entries()) {
        if (v < -1e-12) throw DimensionError("joint distribution has a negative entry");
        total += v;
    }
    if (std::abs(total - 1.0) > 1e-12) throw DimensionError("joint distribution must sum to one");
}

const char* estimator_name(ScoreReport::Estimator e) {
    switch (e) {
        case ScoreReport::Estimator::PartialKnowledge: return "partial-knowledge";
        case ScoreReport::Estimator::PlugIn: return "plugin";
        case ScoreReport::Estimator::Stratified: return "stratified";
    }
    return "?";
}

double gram_score(const Mat& experiment, const Mat& q_joint, const KernelSpec& kernel,
                  const Mat* kmat) {
    if (!q_joint.square()) throw DimensionError("gram_score: misreport matrix must be square");
    if (experiment.cols() != q_joint.rows())
        throw DimensionError("gram_score: experiment columns do not match label count");
    const Mat g = label_gram(experiment, kernel, kmat);
    return det(q_joint.transposed() * g * q_joint);
}

double gram_score(const Mat& experiment, const MisreportCounts& q, const KernelSpec& kernel,
                  const Mat* kmat) {
    return gram_score(experiment, q.frequencies(), kernel, kmat);
}

Mat plugin_gram(const Labels& report, const ObservationSet& obs, const KernelSpec& kernel) {
    require_aligned(report, obs);
    const int d = report.d;
    const int n = report.n();
    const double inv_n2 = 1.0 / (static_cast<double>(n) * static_cast<double>(n));
    Mat g(d, d);

    switch (kernel.kind) {
        case KernelSpec::Kind::Delta: {
            if (!obs.is_categorical())
                throw KernelDomainError("delta kernel requires categorical observations");
            // Per-label observation count vectors; G_bar = V V^T / N^2.
            const int k = obs.alphabet();
            std::vector<double> v(static_cast<size_t>(d) * k, 0.0);
            for (int i = 0; i < n; ++i)
                v[static_cast<size_t>(report.values[i] - 1) * k + (obs.id(i) - 1)] += 1.0;
            for (int a = 0; a < d; ++a)
                for (int b = a; b < d; ++b) {
                    double dot = 0.0;
                    for (int y = 0; y < k; ++y)
                        dot += v[static_cast<size_t>(a) * k + y] * v[static_cast<size_t>(b) * k + y];
                    g(a, b) = g(b, a) = dot * inv_n2;
                }
            return g;
        }
        case KernelSpec::Kind::Linear:
        case KernelSpec::Kind::PseudoPosterior: {
            if (obs.is_categorical())
                throw KernelDomainError("feature kernels require embedding observations");
            if (kernel.kind == KernelSpec::Kind::PseudoPosterior)
                require_pseudo_posterior_domain(report, obs);
            const int m = obs.width();
            std::vector<double> sums(static_cast<size_t>(d) * m, 0.0);
            for (int i = 0; i < n; ++i) {
                const auto y = obs.vec(i);
                double* row = sums.data() + static_cast<size_t>(report.values[i] - 1) * m;
                for (int c = 0; c < m; ++c) row[c] += y[c];
            }
            for (int a = 0; a < d; ++a)
                for (int b = a; b < d; ++b) {
                    double dot = 0.0;
                    for (int c = 0; c < m; ++c)
                        dot += sums[static_cast<size_t>(a) * m + c] *
                               sums[static_cast<size_t>(b) * m + c];
                    g(a, b) = g(b, a) = dot * inv_n2;
                }
            return g;
        }
        case KernelSpec::Kind::Rbf: {
            if (obs.is_categorical())
                throw KernelDomainError("rbf kernel requires embedding observations");
            const KernelSpec spec = resolved_kernel(kernel, obs);
            const double inv_sigma2 = 1.0 / (spec.sigma * spec.sigma);
            const int m = obs.width();
            std::vector<std::vector<int>> by_label(d);
            for (int i = 0; i < n; ++i) by_label[report.values[i] - 1].push_back(i);
            for (int a = 0; a < d; ++a)
                for (int b = a; b < d; ++b) {
                    double total = 0.0;
                    for (int ia : by_label[a]) {
                        const double* ya = obs.vec(ia).data();
                        for (int ib : by_label[b]) {
                            const double* yb = obs.vec(ib).data();
                            double sq = 0.0;
                            for (int c = 0; c < m; ++c) {
                                const double diff = ya[c] - yb[c];
                                sq += diff * diff;
                            }
                            total += std::exp(-sq * inv_sigma2);
                        }
                    }
                    g(a, b) = g(b, a) = total * inv_n2;
                }
            return g;
        }
    }
    throw ConfigError("unknown kernel kind");
}

ScoreReport plugin_score(const Labels& report, const ObservationSet& obs,
                         const KernelSpec& kernel) {
    require_aligned(report, obs);
    ScoreReport out;
    out.estimator = ScoreReport::Estimator::PlugIn;
    out.kernel = obs.is_categorical() ? kernel : resolved_kernel(kernel, obs);
    out.n = report.n();
    const auto occ = label_occurrences(report);
    out.diagnostics.min_report_label_occurrence = *std::min_element(occ.begin(), occ.end());
    if (out.diagnostics.min_report_label_occurrence == 0) {
        // A missing label makes a zero row/column; the determinant is zero.
        out.diagnostics.degenerate = true;
        out.value = 0.0;
        return out;
    }
    out.value = det(plugin_gram(report, obs, out.kernel));
    return out;
}

ScoreReport stratified_score(const Labels& report, const ObservationSet& obs,
                             const KernelSpec& kernel, uint64_t seed) {
    require_aligned(report, obs);
    ScoreReport out;
    out.estimator = ScoreReport::Estimator::Stratified;
    out.kernel = obs.is_categorical() ? kernel : resolved_kernel(kernel, obs);
    out.seed = seed;
    out.n = report.n();
    if (out.kernel.kind == KernelSpec::Kind::PseudoPosterior)
        require_pseudo_posterior_domain(report, obs);

    const int d = report.d;
    const auto occ = label_occurrences(report);
    out.diagnostics.min_report_label_occurrence = *std::min_element(occ.begin(), occ.end());
    if (out.diagnostics.min_report_label_occurrence < 2) {
        out.diagnostics.degenerate = true;
        out.value = 0.0;
        return out;
    }

    std::vector<std::vector<int>> by_label(d);
    for (int i = 0; i < report.n(); ++i) by_label[report.values[i] - 1].push_back(i);

    Rng rng(seed);
    std::vector<int> col(d), row(d);
    for (int i = 0; i < d; ++i) {
        const auto& idx = by_label[i];
        const int c = rng.uniform_int(static_cast<int>(idx.size()));
        col[i] = idx[c];
        int r = rng.uniform_int(static_cast<int>(idx.size()) - 1);
        if (r >= c) ++r;  // Row is drawn from the remainder after Col
        row[i] = idx[r];
    }
    const std::vector<int> sigma = rng.permutation(d);
    const int sign = permutation_sign(sigma);

    const double n_real = static_cast<double>(report.n());
    double product = 1.0;
    for (int i = 0; i < d; ++i) {
        const int j = sigma[i];
        const double q_i = static_cast<double>(occ[i]) / n_real;
        const double q_j = static_cast<double>(occ[j]) / n_real;
        product *= kernel_eval(out.kernel, obs.at(row[i]), obs.at(col[j])) * q_i * q_j;
    }
    double d_factorial = 1.0;
    for (int i = 2; i <= d; ++i) d_factorial *= i;
    out.value = d_factorial * sign * product;
    return out;
}

WhitenResult whiten(const JointDistribution& joint) {
    const Mat& j = joint.j;
    const auto mu_y = j.row_sums();
    const auto mu_x = j.col_sums();
    WhitenResult out;
    for (int r = 0; r < j.rows(); ++r)
        if (mu_y[r] > 0.0) out.kept_rows.push_back(r);
    for (int c = 0; c < j.cols(); ++c)
        if (mu_x[c] > 0.0) out.kept_cols.push_back(c);

    out.m = Mat(static_cast<int>(out.kept_rows.size()), static_cast<int>(out.kept_cols.size()));
    for (size_t a = 0; a < out.kept_rows.size(); ++a) {
        const int r = out.kept_rows[a];
        for (size_t b = 0; b < out.kept_cols.size(); ++b) {
            const int c = out.kept_cols[b];
            out.m(static_cast<int>(a), static_cast<int>(b)) =
                (j(r, c) - mu_y[r] * mu_x[c]) / std::sqrt(mu_y[r] * mu_x[c]);
        }
    }
    return out;
}

const char* baseline_name(BaselineKind kind) {
    switch (kind) {
        case BaselineKind::TopkVolume: return "topk-volume";
        case BaselineKind::MaxCorrelation: return "max-correlation";
        case BaselineKind::KyFan: return "kyfan";
        case BaselineKind::Chi2Mi: return "chi2-mi";
        case BaselineKind::KlMi: return "kl-mi";
    }
    return "?";
}

double baseline_score(const JointDistribution& joint, BaselineKind kind, int k) {
    if (kind == BaselineKind::KlMi) {
        const Mat& j = joint.j;
        const auto mu_y = j.row_sums();
        const auto mu_x = j.col_sums();
        double total = 0.0;
        for (int r = 0; r < j.rows(); ++r)
            for (int c = 0; c < j.cols(); ++c) {
                const double v = j(r, c);
                if (v > 0.0) total += v * std::log(v / (mu_y[r] * mu_x[c]));
            }
        return total;
    }

    const WhitenResult w = whiten(joint);
    if (kind == BaselineKind::Chi2Mi) {
        const double f = w.m.frobenius_norm();
        return f * f;
    }
    const auto sv = singular_values(w.m);
    if (sv.empty()) return 0.0;
    switch (kind) {
        case BaselineKind::MaxCorrelation:
            return sv.front();
        case BaselineKind::TopkVolume: {
            if (k < 1 || k > static_cast<int>(sv.size()))
                throw ConfigError("topk-volume: k out of range");
            double prod = 1.0;
            for (int i = 0; i < k; ++i) prod *= sv[i];
            return prod;
        }
        case BaselineKind::KyFan: {
            if (k < 1 || k > static_cast<int>(sv.size()))
                throw ConfigError("kyfan: k out of range");
            return std::accumulate(sv.begin(), sv.begin() + k, 0.0);
        }
        default:
            break;
    }
    throw ConfigError("unknown baseline kind");
}

JointDistribution empirical_joint(const ObservationSet& obs, const Labels& report) {
    require_aligned(report, obs);
    if (!obs.is_categorical())
        throw KernelDomainError("empirical joint requires categorical observations");
    std::vector<int64_t> counts(static_cast<size_t>(obs.alphabet()) * report.d, 0);
    for (int i = 0; i < report.n(); ++i)
        counts[static_cast<size_t>(obs.id(i) - 1) * report.d + (report.values[i] - 1)]++;
    Mat j(obs.alphabet(), report.d);
    const double inv = 1.0 / static_cast<double>(report.n());
    for (int r = 0; r < j.rows(); ++r)
        for (int c = 0; c < j.cols(); ++c)
            j(r, c) = static_cast<double>(counts[static_cast<size_t>(r) * report.d + c]) * inv;
    return JointDistribution(j);
}

} // namespace gramdet
