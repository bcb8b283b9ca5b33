#pragma once

#include <cstddef>
#include <vector>

namespace fieldsim {

/// Row-major dense matrix, just enough for the regression engine.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Matrix transposed() const;
  static Matrix multiply(const Matrix& a, const Matrix& b);
  std::vector<double> multiply_vec(const std::vector<double>& v) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Householder QR with column pivoting of an n x p matrix, n >= p.
/// Rank is decided against rank_tolerance * |R(0,0)| on the pivoted diagonal.
class PivotedQr {
 public:
  PivotedQr(const Matrix& x, double rank_tolerance = 1e-10);

  std::size_t rank() const { return rank_; }
  bool full_rank() const { return rank_ == cols_; }
  /// |R(0,0)| / |R(rank-1, rank-1)| on the pivoted diagonal.
  double condition_estimate() const { return condition_; }
  /// Original column indices pivoted past the numerical rank.
  std::vector<std::size_t> deficient_columns() const;

  /// Least-squares coefficients in the original column order. Full rank only.
  std::vector<double> solve(const std::vector<double>& y) const;
  /// (X'X)^-1 in the original column order. Full rank only.
  Matrix xtx_inverse() const;

 private:
  Matrix qr_;                      // Householder vectors below, R on and above the diagonal
  std::vector<double> tau_;        // Householder scalars
  std::vector<std::size_t> pivot_; // R column j came from X column pivot_[j]
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t rank_ = 0;
  double condition_ = 0.0;

  std::vector<double> apply_qt(const std::vector<double>& y) const;
};

/// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
/// Eigenvalues ascending; vectors.column(i) pairs with values[i].
struct SymmetricEigen {
  std::vector<double> values;
  Matrix vectors;
};

SymmetricEigen jacobi_eigen(const Matrix& a);

/// Moore-Penrose pseudoinverse of a symmetric PSD matrix, zeroing
/// eigenvalues below tolerance * max eigenvalue.
Matrix symmetric_pinv(const Matrix& a, double tolerance, std::size_t* rank_out = nullptr,
                      double* condition_out = nullptr);

}  // namespace fieldsim
