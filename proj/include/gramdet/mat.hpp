#pragma once

#include <initializer_list>
#include <vector>

namespace gramdet {

/// Dense row-major real matrix. Sized for the small label-space matrices this
/// library works with (d up to a few hundred); no sparse or blocked paths.
class Mat {
public:
    Mat() = default;
    Mat(int rows, int cols);  // zero-filled
    Mat(int rows, int cols, std::vector<double> entries);
    Mat(std::initializer_list<std::initializer_list<double>> rows);

    static Mat identity(int n);
    static Mat diag(const std::vector<double>& values);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    double& operator()(int i, int j) { return entries_[static_cast<size_t>(i) * cols_ + j]; }
    double operator()(int i, int j) const { return entries_[static_cast<size_t>(i) * cols_ + j]; }
    const std::vector<double>& entries() const { return entries_; }

    Mat transposed() const;
    Mat operator*(const Mat& rhs) const;
    Mat operator+(const Mat& rhs) const;
    Mat operator-(const Mat& rhs) const;
    Mat scaled(double s) const;

    double max_abs() const;
    double frobenius_norm() const;
    /// Largest absolute entry of (*this - rhs).
    double max_abs_diff(const Mat& rhs) const;

    std::vector<double> row_sums() const;
    std::vector<double> col_sums() const;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> entries_;
};

struct StructuralPredicate {
    enum class Kind {
        ColumnStochastic,
        RowDiagonallyMaximal,
        RowDiagonallyDominant,
        Permutation,
        Identity,
    };
    Kind kind;
    double tolerance = 1e-9;
};

/// Determinant by LU with partial pivoting. Returns exactly 0 when some pivot
/// column is numerically zero (below 1e-14 times the largest input entry).
double det(const Mat& m);

/// Inverse by Gauss-Jordan with partial pivoting. Throws SingularMatrixError
/// when a pivot falls below 1e-12 times the largest input entry.
Mat inverse(const Mat& m);

/// Largest singular value via power iteration on m^T m (deterministic all-ones
/// start, at most 500 iterations, 1e-8 relative stopping rule).
double spectral_norm(const Mat& m);

/// All min(rows, cols) singular values, descending, via one-sided Jacobi.
std::vector<double> singular_values(const Mat& m);

bool matches(const Mat& m, const StructuralPredicate& p);

} // namespace gramdet
