#include "gramdet/mat.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "gramdet/errors.hpp"

namespace gramdet {

namespace {

void require_square(const Mat& m, const char* op) {
    if (!m.square())
        throw DimensionError(std::string(op) + ": matrix must be square, got " +
                             std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
}

void require_finite(const std::vector<double>& entries) {
    for (double v : entries)
        if (!std::isfinite(v)) throw Error("matrix entries must be finite");
}

} // namespace

Mat::Mat(int rows, int cols)
    : rows_(rows), cols_(cols), entries_(static_cast<size_t>(rows) * cols, 0.0) {
    if (rows < 0 || cols < 0) throw DimensionError("negative matrix dimension");
}

Mat::Mat(int rows, int cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (rows < 0 || cols < 0) throw DimensionError("negative matrix dimension");
    if (entries_.size() != static_cast<size_t>(rows) * cols)
        throw DimensionError("entry count does not match rows*cols");
    require_finite(entries_);
}

Mat::Mat(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = static_cast<int>(rows.size());
    cols_ = rows_ == 0 ? 0 : static_cast<int>(rows.begin()->size());
    entries_.reserve(static_cast<size_t>(rows_) * cols_);
    for (const auto& r : rows) {
        if (static_cast<int>(r.size()) != cols_) throw DimensionError("ragged initializer");
        entries_.insert(entries_.end(), r.begin(), r.end());
    }
    require_finite(entries_);
}

Mat Mat::identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Mat Mat::diag(const std::vector<double>& values) {
    Mat m(static_cast<int>(values.size()), static_cast<int>(values.size()));
    for (int i = 0; i < m.rows(); ++i) m(i, i) = values[i];
    return m;
}

Mat Mat::transposed() const {
    Mat t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

Mat Mat::operator*(const Mat& rhs) const {
    if (cols_ != rhs.rows_) throw DimensionError("matrix product shape mismatch");
    Mat out(rows_, rhs.cols_);
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) {
            const double v = (*this)(i, k);
            if (v == 0.0) continue;
            for (int j = 0; j < rhs.cols_; ++j) out(i, j) += v * rhs(k, j);
        }
    return out;
}

Mat Mat::operator+(const Mat& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw DimensionError("matrix sum shape mismatch");
    Mat out = *this;
    for (size_t i = 0; i < entries_.size(); ++i) out.entries_[i] += rhs.entries_[i];
    return out;
}

Mat Mat::operator-(const Mat& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw DimensionError("matrix diff shape mismatch");
    Mat out = *this;
    for (size_t i = 0; i < entries_.size(); ++i) out.entries_[i] -= rhs.entries_[i];
    return out;
}

Mat Mat::scaled(double s) const {
    Mat out = *this;
    for (double& v : out.entries_) v *= s;
    return out;
}

double Mat::max_abs() const {
    double m = 0.0;
    for (double v : entries_) m = std::max(m, std::abs(v));
    return m;
}

double Mat::frobenius_norm() const {
    double s = 0.0;
    for (double v : entries_) s += v * v;
    return std::sqrt(s);
}

double Mat::max_abs_diff(const Mat& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw DimensionError("matrix diff shape mismatch");
    double m = 0.0;
    for (size_t i = 0; i < entries_.size(); ++i)
        m = std::max(m, std::abs(entries_[i] - rhs.entries_[i]));
    return m;
}

std::vector<double> Mat::row_sums() const {
    std::vector<double> s(rows_, 0.0);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) s[i] += (*this)(i, j);
    return s;
}

std::vector<double> Mat::col_sums() const {
    std::vector<double> s(cols_, 0.0);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) s[j] += (*this)(i, j);
    return s;
}

double det(const Mat& m) {
    require_square(m, "det");
    const int n = m.rows();
    if (n == 0) return 1.0;

    Mat a = m;
    // pivot columns below this floor count as exact zeros
    const double zero_floor = 1e-14 * m.max_abs();
    double result = 1.0;
    for (int k = 0; k < n; ++k) {
        int piv = k;
        double best = std::abs(a(k, k));
        for (int i = k + 1; i < n; ++i) {
            const double v = std::abs(a(i, k));
            if (v > best) {
                best = v;
                piv = i;
            }
        }
        if (best <= zero_floor) return 0.0;
        if (piv != k) {
            for (int j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
            result = -result;
        }
        result *= a(k, k);
        for (int i = k + 1; i < n; ++i) {
            const double f = a(i, k) / a(k, k);
            if (f == 0.0) continue;
            for (int j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
        }
    }
    return result;
}

Mat inverse(const Mat& m) {
    require_square(m, "inverse");
    const int n = m.rows();
    Mat a = m;
    Mat inv = Mat::identity(n);
    const double floor = 1e-12 * m.max_abs();

    for (int k = 0; k < n; ++k) {
        int piv = k;
        double best = std::abs(a(k, k));
        for (int i = k + 1; i < n; ++i) {
            const double v = std::abs(a(i, k));
            if (v > best) {
                best = v;
                piv = i;
            }
        }
        if (best <= floor) throw SingularMatrixError("matrix singular to tolerance in inverse");
        if (piv != k) {
            for (int j = 0; j < n; ++j) {
                std::swap(a(k, j), a(piv, j));
                std::swap(inv(k, j), inv(piv, j));
            }
        }
        const double d = a(k, k);
        for (int j = 0; j < n; ++j) {
            a(k, j) /= d;
            inv(k, j) /= d;
        }
        for (int i = 0; i < n; ++i) {
            if (i == k) continue;
            const double f = a(i, k);
            if (f == 0.0) continue;
            for (int j = 0; j < n; ++j) {
                a(i, j) -= f * a(k, j);
                inv(i, j) -= f * inv(k, j);
            }
        }
    }
    return inv;
}

double spectral_norm(const Mat& m) {
    if (m.rows() == 0 || m.cols() == 0) return 0.0;
    const int n = m.cols();
    const Mat b = m.transposed() * m;
    if (b.max_abs() == 0.0) return 0.0;

    // All-ones start; deterministic basis-vector restarts cover the rare case
    // where the start lands exactly in the null space.
    std::vector<double> v(n, 1.0 / std::sqrt(static_cast<double>(n)));
    int restart = 0;
    double lambda = 0.0;
    for (int iter = 0; iter < 500; ++iter) {
        std::vector<double> w(n, 0.0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) w[i] += b(i, j) * v[j];
        double norm = 0.0;
        for (double x : w) norm += x * x;
        norm = std::sqrt(norm);
        if (norm == 0.0) {
            if (restart >= n) return 0.0;
            std::fill(v.begin(), v.end(), 0.0);
            v[restart++] = 1.0;
            continue;
        }
        for (int i = 0; i < n; ++i) w[i] /= norm;
        // Rayleigh quotient of the normalized iterate.
        double next = 0.0;
        for (int i = 0; i < n; ++i) {
            double bw = 0.0;
            for (int j = 0; j < n; ++j) bw += b(i, j) * w[j];
            next += w[i] * bw;
        }
        v = w;
        if (iter > 0 && std::abs(next - lambda) <= 1e-8 * std::max(std::abs(next), 1e-300)) {
            lambda = next;
            break;
        }
        lambda = next;
    }
    return std::sqrt(std::max(lambda, 0.0));
}

std::vector<double> singular_values(const Mat& m) {
    if (m.rows() == 0 || m.cols() == 0) return {};
    Mat a = m.rows() >= m.cols() ? m : m.transposed();
    const int rows = a.rows();
    const int n = a.cols();

    const double tol = 1e-14;
    for (int sweep = 0; sweep < 60; ++sweep) {
        bool rotated = false;
        for (int i = 0; i < n - 1; ++i) {
            for (int j = i + 1; j < n; ++j) {
                double alpha = 0.0, beta = 0.0, gamma = 0.0;
                for (int r = 0; r < rows; ++r) {
                    alpha += a(r, i) * a(r, i);
                    beta += a(r, j) * a(r, j);
                    gamma += a(r, i) * a(r, j);
                }
                if (gamma == 0.0 || std::abs(gamma) <= tol * std::sqrt(alpha * beta)) continue;
                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (int r = 0; r < rows; ++r) {
                    const double ai = a(r, i), aj = a(r, j);
                    a(r, i) = c * ai - s * aj;
                    a(r, j) = s * ai + c * aj;
                }
                rotated = true;
            }
        }
        if (!rotated) break;
    }

    std::vector<double> sv(n, 0.0);
    for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int r = 0; r < rows; ++r) s += a(r, j) * a(r, j);
        sv[j] = std::sqrt(s);
    }
    std::sort(sv.begin(), sv.end(), std::greater<>());
    return sv;
}

bool matches(const Mat& m, const StructuralPredicate& p) {
    const double tol = p.tolerance;
    using K = StructuralPredicate::Kind;
    if (p.kind != K::ColumnStochastic) require_square(m, "matches");

    switch (p.kind) {
        case K::ColumnStochastic: {
            for (double v : m.entries())
                if (v < -tol) return false;
            for (double s : m.col_sums())
                if (std::abs(s - 1.0) > tol) return false;
            return true;
        }
        case K::RowDiagonallyMaximal: {
            for (int i = 0; i < m.rows(); ++i)
                for (int j = 0; j < m.cols(); ++j)
                    if (m(i, j) > m(i, i) + tol) return false;
            return true;
        }
        case K::RowDiagonallyDominant: {
            for (int i = 0; i < m.rows(); ++i) {
                double off = 0.0;
                for (int j = 0; j < m.cols(); ++j)
                    if (j != i) off += std::abs(m(i, j));
                if (off > std::abs(m(i, i)) + tol) return false;
            }
            return true;
        }
        case K::Permutation: {
            for (int i = 0; i < m.rows(); ++i) {
                int ones = 0;
                for (int j = 0; j < m.cols(); ++j) {
                    if (std::abs(m(i, j) - 1.0) <= tol)
                        ++ones;
                    else if (std::abs(m(i, j)) > tol)
                        return false;
                }
                if (ones != 1) return false;
            }
            for (int j = 0; j < m.cols(); ++j) {
                int ones = 0;
                for (int i = 0; i < m.rows(); ++i)
                    if (std::abs(m(i, j) - 1.0) <= tol) ++ones;
                if (ones != 1) return false;
            }
            return true;
        }
        case K::Identity: {
            for (int i = 0; i < m.rows(); ++i)
                for (int j = 0; j < m.cols(); ++j) {
                    const double want = i == j ? 1.0 : 0.0;
                    if (std::abs(m(i, j) - want) > tol) return false;
                }
            return true;
        }
    }
    return false;
}

} // namespace gramdet
