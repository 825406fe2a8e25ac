#include "gramdet/dataset.hpp"

#include <cmath>
#include <string>

#include "gramdet/errors.hpp"

namespace gramdet {

namespace {

constexpr double kPredicateTol = 1e-9;
constexpr double kSingularTol = 1e-12;

void require_same_shape(const Labels& a, const Labels& b, const char* op) {
    if (a.n() != b.n())
        throw DimensionError(std::string(op) + ": label sequences have different lengths");
    if (a.d != b.d)
        throw DimensionError(std::string(op) + ": label sequences have different alphabets");
}

void validate_dist_table(const Mat& t) {
    if (!t.square()) throw DimensionError("dist table must be square");
    for (int i = 0; i < t.rows(); ++i) {
        if (t(i, i) != 0.0) throw ConfigError("dist table diagonal must be zero");
        for (int j = 0; j < t.cols(); ++j) {
            if (t(i, j) != t(j, i)) throw ConfigError("dist table must be symmetric");
            if (i != j && t(i, j) <= 0.0) throw ConfigError("dist table off-diagonal must be positive");
        }
    }
}

} // namespace

Labels::Labels(std::vector<int> vals, int label_count) : values(std::move(vals)), d(label_count) {
    if (d < 1) throw DimensionError("label alphabet must have d >= 1");
    if (values.empty()) throw DimensionError("label sequence must be nonempty");
    for (int v : values)
        if (v < 1 || v > d) throw DimensionError("label id out of range 1..d");
}

int64_t MisreportCounts::trace_counts() const {
    int64_t t = 0;
    for (int i = 0; i < d; ++i) t += at(i, i);
    return t;
}

Mat MisreportCounts::frequencies() const {
    Mat q(d, d);
    const double inv = 1.0 / static_cast<double>(n_total);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) q(i, j) = static_cast<double>(at(i, j)) * inv;
    return q;
}

namespace {
void validate_alpha(double alpha) {
    if (alpha <= 0.0 || alpha > 1.0) throw ConfigError("ordering margin alpha must be in (0, 1]");
}
} // namespace

OrderingSpec OrderingSpec::hamming(double alpha) {
    validate_alpha(alpha);
    return {Kind::Hamming, alpha, std::nullopt};
}

OrderingSpec OrderingSpec::dist(Mat table, double alpha) {
    validate_alpha(alpha);
    validate_dist_table(table);
    return {Kind::Dist, alpha, std::move(table)};
}

MisreportCounts misreport_matrix(const Labels& truth, const Labels& report) {
    require_same_shape(truth, report, "misreport_matrix");
    MisreportCounts q;
    q.d = truth.d;
    q.n_total = truth.n();
    q.counts.assign(static_cast<size_t>(q.d) * q.d, 0);
    for (int n = 0; n < truth.n(); ++n) q.at(truth.values[n] - 1, report.values[n] - 1)++;
    return q;
}

FrequencyDecomposition decompose(const MisreportCounts& q) {
    if (q.n_total < 1) throw DimensionError("decompose: empty counts");
    const int d = q.d;
    FrequencyDecomposition out;
    out.q_x.assign(d, 0.0);
    out.q_xhat.assign(d, 0.0);
    std::vector<int64_t> row(d, 0), col(d, 0);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            row[i] += q.at(i, j);
            col[j] += q.at(i, j);
        }
    for (int i = 0; i < d; ++i) {
        out.q_x[i] = static_cast<double>(row[i]) / static_cast<double>(q.n_total);
        out.q_xhat[i] = static_cast<double>(col[i]) / static_cast<double>(q.n_total);
    }

    // Q_{xhat|x}(i,j) = counts(j,i) / row(j); Q_{x|xhat}(i,j) = counts(i,j) / col(j).
    out.q_xhat_given_x = Mat(d, d);
    out.q_x_given_xhat = Mat(d, d);
    const double uniform = 1.0 / static_cast<double>(d);
    for (int j = 0; j < d; ++j) {
        for (int i = 0; i < d; ++i) {
            out.q_xhat_given_x(i, j) =
                row[j] > 0 ? static_cast<double>(q.at(j, i)) / static_cast<double>(row[j]) : uniform;
            out.q_x_given_xhat(i, j) =
                col[j] > 0 ? static_cast<double>(q.at(i, j)) / static_cast<double>(col[j]) : uniform;
        }
    }
    return out;
}

bool class_member(const MisreportCounts& q, const MatrixClass& c) {
    const Mat joint = q.frequencies();
    using K = MatrixClass::Kind;
    switch (c.kind) {
        case K::NonPerm: {
            const Mat cond = decompose(q).q_xhat_given_x;
            return !matches(cond, {StructuralPredicate::Kind::Identity, kPredicateTol}) &&
                   !matches(cond, {StructuralPredicate::Kind::Permutation, kPredicateTol});
        }
        case K::Reg:
            return std::abs(det(joint)) > kSingularTol &&
                   matches(joint, {StructuralPredicate::Kind::RowDiagonallyMaximal, kPredicateTol});
        case K::Dom:
            return matches(joint, {StructuralPredicate::Kind::RowDiagonallyDominant, kPredicateTol});
        case K::Balanced:
        case K::BalancedDelta: {
            if (!class_member(q, MatrixClass::dom())) return false;
            const auto q_x = decompose(q).q_x;
            const double L = static_cast<double>(c.balance);
            for (int i = 0; i < q.d; ++i)
                for (int j = 0; j < q.d; ++j)
                    if (q_x[i] > L * q_x[j] + 1e-12) return false;
            if (c.kind == K::Balanced) return true;
            const double hamming_fraction =
                1.0 - static_cast<double>(q.trace_counts()) / static_cast<double>(q.n_total);
            return hamming_fraction <= c.delta + 1e-12;
        }
    }
    return false;
}

int64_t hamming_distance(const Labels& a, const Labels& b) {
    require_same_shape(a, b, "hamming_distance");
    int64_t h = 0;
    for (int n = 0; n < a.n(); ++n) h += a.values[n] != b.values[n];
    return h;
}

double dist_sum(const Labels& a, const Labels& b, const Mat& table) {
    require_same_shape(a, b, "dist_sum");
    validate_dist_table(table);
    if (table.rows() < a.d) throw DimensionError("dist table smaller than label alphabet");
    double s = 0.0;
    for (int n = 0; n < a.n(); ++n) s += table(a.values[n] - 1, b.values[n] - 1);
    return s;
}

OrderingOutcome ordering_holds(const Labels& truth, const Labels& a, const Labels& b,
                               const OrderingSpec& spec) {
    require_same_shape(truth, a, "ordering_holds");
    require_same_shape(truth, b, "ordering_holds");
    using K = OrderingSpec::Kind;
    switch (spec.kind) {
        case K::Exact:
            return {a.values == truth.values && b.values != truth.values, std::nullopt};
        case K::Hamming:
            return {static_cast<double>(hamming_distance(a, truth)) <
                        spec.alpha * static_cast<double>(hamming_distance(b, truth)),
                    std::nullopt};
        case K::Dist: {
            if (!spec.dist_table) throw ConfigError("dist ordering requires a dist table");
            return {dist_sum(a, truth, *spec.dist_table) <
                        spec.alpha * dist_sum(b, truth, *spec.dist_table),
                    std::nullopt};
        }
        case K::Blackwell: {
            const MisreportCounts qa = misreport_matrix(truth, a);
            const MisreportCounts qb = misreport_matrix(truth, b);
            if (!class_member(qa, MatrixClass::reg()) || !class_member(qb, MatrixClass::reg()))
                return {false, std::nullopt};
            const Mat cond_a = decompose(qa).q_xhat_given_x;
            const Mat cond_b = decompose(qb).q_xhat_given_x;
            BlackwellWitness w;
            w.t = cond_b * inverse(cond_a);
            w.is_witness =
                matches(w.t, {StructuralPredicate::Kind::ColumnStochastic, kPredicateTol}) &&
                !matches(w.t, {StructuralPredicate::Kind::Identity, kPredicateTol}) &&
                (w.t * cond_a).max_abs_diff(cond_b) <= kPredicateTol;
            return {w.is_witness, w};
        }
    }
    return {false, std::nullopt};
}

} // namespace gramdet
