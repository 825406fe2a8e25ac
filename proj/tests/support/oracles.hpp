#pragma once

// Test-only oracles, independent of the library paths they check: permutation
// expansion for determinants, adjugate for inverses, and a direct enumeration
// of the stratified estimator's sampling space.

#include <algorithm>
#include <cmath>
#include <vector>

#include "gramdet/dataset.hpp"
#include "gramdet/kernels.hpp"
#include "gramdet/mat.hpp"

namespace oracles {

/// Determinant by cofactor expansion (first row). Exponential; d <= 6.
inline double cofactor_det(const gramdet::Mat& m) {
    const int n = m.rows();
    if (n == 1) return m(0, 0);
    double total = 0.0;
    double sign = 1.0;
    for (int j = 0; j < n; ++j) {
        gramdet::Mat minor(n - 1, n - 1);
        for (int r = 1; r < n; ++r) {
            int cc = 0;
            for (int c = 0; c < n; ++c) {
                if (c == j) continue;
                minor(r - 1, cc++) = m(r, c);
            }
        }
        total += sign * m(0, j) * cofactor_det(minor);
        sign = -sign;
    }
    return total;
}

/// Inverse via adjugate / determinant.
inline gramdet::Mat adjugate_inverse(const gramdet::Mat& m) {
    const int n = m.rows();
    const double d = cofactor_det(m);
    gramdet::Mat inv(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            gramdet::Mat minor(n - 1, n - 1);
            int rr = 0;
            for (int r = 0; r < n; ++r) {
                if (r == i) continue;
                int cc = 0;
                for (int c = 0; c < n; ++c) {
                    if (c == j) continue;
                    minor(rr, cc++) = m(r, c);
                }
                ++rr;
            }
            const double cof = ((i + j) % 2 == 0 ? 1.0 : -1.0) *
                               (n == 1 ? 1.0 : cofactor_det(minor));
            inv(j, i) = cof / d;  // transpose of the cofactor matrix
        }
    return inv;
}

/// det((PQ)^T (PQ)) by explicit products and cofactor expansion.
inline double brute_gram_score(const gramdet::Mat& p, const gramdet::Mat& q) {
    const gramdet::Mat pq = p * q;
    return cofactor_det(pq.transposed() * pq);
}

/// Exact expectation of the stratified-matching estimator over every
/// (Col, Row, sigma) choice, with kernel values replaced by their expectation
/// <P_{x_i}, P_{x_j}> under the experiment (the observation average).
inline double stratified_enumeration_mean(const gramdet::Labels& truth,
                                          const gramdet::Labels& report,
                                          const gramdet::Mat& experiment) {
    const int d = report.d;
    std::vector<std::vector<int>> by_label(d);
    for (int i = 0; i < report.n(); ++i) by_label[report.values[i] - 1].push_back(i);
    for (const auto& idx : by_label)
        if (idx.size() < 2) return 0.0;

    std::vector<double> q(d, 0.0);
    for (int v : report.values) q[v - 1] += 1.0 / report.n();

    gramdet::Mat g = experiment.transposed() * experiment;  // expected delta kernel

    double d_factorial = 1.0;
    for (int i = 2; i <= d; ++i) d_factorial *= i;

    // Recursive enumeration over Col choices, then Row choices, then sigma.
    std::vector<int> col(d), row(d);
    std::vector<int> sigma(d);
    double total = 0.0;
    long combos = 0;

    std::vector<int> perm(d);
    for (int i = 0; i < d; ++i) perm[i] = i;

    auto score_one = [&]() {
        std::sort(perm.begin(), perm.end());
        do {
            int sign = 1;
            {
                std::vector<bool> seen(d, false);
                for (int i = 0; i < d; ++i) {
                    if (seen[i]) continue;
                    int len = 0;
                    for (int j = i; !seen[j]; j = perm[j]) {
                        seen[j] = true;
                        ++len;
                    }
                    if (len % 2 == 0) sign = -sign;
                }
            }
            double prod = 1.0;
            for (int i = 0; i < d; ++i) {
                const int j = perm[i];
                const int xr = truth.values[row[i]] - 1;
                const int xc = truth.values[col[j]] - 1;
                prod *= g(xr, xc) * q[i] * q[j];
            }
            total += d_factorial * sign * prod;
            ++combos;
        } while (std::next_permutation(perm.begin(), perm.end()));
    };

    auto enumerate_rows = [&](auto&& self, int label) -> void {
        if (label == d) {
            score_one();
            return;
        }
        for (int idx : by_label[label]) {
            if (idx == col[label]) continue;
            row[label] = idx;
            self(self, label + 1);
        }
    };
    auto enumerate_cols = [&](auto&& self, int label) -> void {
        if (label == d) {
            enumerate_rows(enumerate_rows, 0);
            return;
        }
        for (int idx : by_label[label]) {
            col[label] = idx;
            self(self, label + 1);
        }
    };
    enumerate_cols(enumerate_cols, 0);
    return total / static_cast<double>(combos);
}

/// Spearman rank correlation with midranks for ties.
inline double spearman(const std::vector<double>& a, const std::vector<double>& b) {
    const size_t n = a.size();
    auto ranks = [](const std::vector<double>& v) {
        const size_t n = v.size();
        std::vector<size_t> idx(n);
        for (size_t i = 0; i < n; ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](size_t x, size_t y) { return v[x] < v[y]; });
        std::vector<double> r(n);
        size_t i = 0;
        while (i < n) {
            size_t j = i;
            while (j + 1 < n && v[idx[j + 1]] == v[idx[i]]) ++j;
            const double mid = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
            for (size_t k = i; k <= j; ++k) r[idx[k]] = mid;
            i = j + 1;
        }
        return r;
    };
    const auto ra = ranks(a);
    const auto rb = ranks(b);
    double ma = 0.0, mb = 0.0;
    for (size_t i = 0; i < n; ++i) {
        ma += ra[i];
        mb += rb[i];
    }
    ma /= n;
    mb /= n;
    double num = 0.0, da = 0.0, db = 0.0;
    for (size_t i = 0; i < n; ++i) {
        num += (ra[i] - ma) * (rb[i] - mb);
        da += (ra[i] - ma) * (ra[i] - ma);
        db += (rb[i] - mb) * (rb[i] - mb);
    }
    return num / std::sqrt(da * db);
}

} // namespace oracles
