#include "fieldsim/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "fieldsim/errors.hpp"

namespace fieldsim {

Matrix Matrix::transposed() const {
  Matrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
  return out;
}

Matrix Matrix::multiply(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("Matrix::multiply: shape mismatch");
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

std::vector<double> Matrix::multiply_vec(const std::vector<double>& v) const {
  if (v.size() != cols_) throw std::invalid_argument("Matrix::multiply_vec: shape mismatch");
  std::vector<double> out(rows_, 0.0);
  for (std::size_t r = 0; r < rows_; ++r) {
    double acc = 0.0;
    for (std::size_t c = 0; c < cols_; ++c) acc += (*this)(r, c) * v[c];
    out[r] = acc;
  }
  return out;
}

PivotedQr::PivotedQr(const Matrix& x, double rank_tolerance)
    : qr_(x), rows_(x.rows()), cols_(x.cols()) {
  if (rows_ < cols_) throw std::invalid_argument("PivotedQr: need rows >= cols");
  tau_.assign(cols_, 0.0);
  pivot_.resize(cols_);
  std::iota(pivot_.begin(), pivot_.end(), std::size_t{0});

  std::vector<double> col_norms(cols_, 0.0);
  for (std::size_t j = 0; j < cols_; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) s += qr_(i, j) * qr_(i, j);
    col_norms[j] = s;
  }

  for (std::size_t k = 0; k < cols_; ++k) {
    // Recompute trailing norms exactly; p is small, so this is cheap and
    // avoids the classic downdating instability.
    std::size_t best = k;
    double best_norm = -1.0;
    for (std::size_t j = k; j < cols_; ++j) {
      double s = 0.0;
      for (std::size_t i = k; i < rows_; ++i) s += qr_(i, j) * qr_(i, j);
      col_norms[j] = s;
      if (s > best_norm) {
        best_norm = s;
        best = j;
      }
    }
    if (best != k) {
      for (std::size_t i = 0; i < rows_; ++i) std::swap(qr_(i, k), qr_(i, best));
      std::swap(col_norms[k], col_norms[best]);
      std::swap(pivot_[k], pivot_[best]);
    }

    // Householder reflector annihilating column k below the diagonal.
    double norm = std::sqrt(best_norm);
    if (norm == 0.0) {
      tau_[k] = 0.0;
      continue;
    }
    double alpha = qr_(k, k);
    double beta = (alpha >= 0.0) ? -norm : norm;
    tau_[k] = (beta - alpha) / beta;
    const double scale = alpha - beta;
    for (std::size_t i = k + 1; i < rows_; ++i) qr_(i, k) /= scale;
    qr_(k, k) = beta;

    for (std::size_t j = k + 1; j < cols_; ++j) {
      double dot = qr_(k, j);
      for (std::size_t i = k + 1; i < rows_; ++i) dot += qr_(i, k) * qr_(i, j);
      dot *= tau_[k];
      qr_(k, j) -= dot;
      for (std::size_t i = k + 1; i < rows_; ++i) qr_(i, j) -= qr_(i, k) * dot;
    }
  }

  const double r00 = std::fabs(qr_(0, 0));
  rank_ = 0;
  for (std::size_t k = 0; k < cols_; ++k) {
    if (std::fabs(qr_(k, k)) > rank_tolerance * r00)
      ++rank_;
    else
      break;
  }
  if (rank_ > 0)
    condition_ = r00 / std::fabs(qr_(rank_ - 1, rank_ - 1));
  else
    condition_ = std::numeric_limits<double>::infinity();
}

std::vector<std::size_t> PivotedQr::deficient_columns() const {
  return {pivot_.begin() + static_cast<std::ptrdiff_t>(rank_), pivot_.end()};
}

std::vector<double> PivotedQr::apply_qt(const std::vector<double>& y) const {
  std::vector<double> w(y);
  for (std::size_t k = 0; k < cols_; ++k) {
    if (tau_[k] == 0.0) continue;
    double dot = w[k];
    for (std::size_t i = k + 1; i < rows_; ++i) dot += qr_(i, k) * w[i];
    dot *= tau_[k];
    w[k] -= dot;
    for (std::size_t i = k + 1; i < rows_; ++i) w[i] -= qr_(i, k) * dot;
  }
  return w;
}

std::vector<double> PivotedQr::solve(const std::vector<double>& y) const {
  if (!full_rank()) throw PreconditionError("PivotedQr::solve: matrix is rank deficient");
  if (y.size() != rows_) throw std::invalid_argument("PivotedQr::solve: shape mismatch");
  std::vector<double> w = apply_qt(y);

  std::vector<double> z(cols_, 0.0);
  for (std::size_t kk = cols_; kk-- > 0;) {
    double acc = w[kk];
    for (std::size_t j = kk + 1; j < cols_; ++j) acc -= qr_(kk, j) * z[j];
    z[kk] = acc / qr_(kk, kk);
  }

  std::vector<double> beta(cols_, 0.0);
  for (std::size_t j = 0; j < cols_; ++j) beta[pivot_[j]] = z[j];
  return beta;
}

Matrix PivotedQr::xtx_inverse() const {
  if (!full_rank()) throw PreconditionError("PivotedQr::xtx_inverse: matrix is rank deficient");
  // R^{-1} by back substitution against identity columns.
  Matrix rinv(cols_, cols_);
  for (std::size_t col = 0; col < cols_; ++col) {
    for (std::size_t kk = cols_; kk-- > 0;) {
      double acc = (kk == col) ? 1.0 : 0.0;
      for (std::size_t j = kk + 1; j < cols_; ++j) acc -= qr_(kk, j) * rinv(j, col);
      rinv(kk, col) = acc / qr_(kk, kk);
    }
  }
  // (X'X)^-1 = P R^-1 R^-T P'
  Matrix out(cols_, cols_);
  for (std::size_t i = 0; i < cols_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) {
      double acc = 0.0;
      for (std::size_t k = std::max(i, j); k < cols_; ++k) acc += rinv(i, k) * rinv(j, k);
      out(pivot_[i], pivot_[j]) = acc;
    }
  return out;
}

SymmetricEigen jacobi_eigen(const Matrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("jacobi_eigen: matrix not square");
  const std::size_t n = a.rows();
  Matrix m(a);
  Matrix v(n, n);
  for (std::size_t i = 0; i < n; ++i) v(i, i) = 1.0;

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += m(p, q) * m(p, q);
    if (off < 1e-300) break;

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = m(p, q);
        if (std::fabs(apq) < 1e-300) continue;
        const double theta = (m(q, q) - m(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0)
                             ? 1.0 / (theta + std::sqrt(1.0 + theta * theta))
                             : 1.0 / (theta - std::sqrt(1.0 + theta * theta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        for (std::size_t k = 0; k < n; ++k) {
          const double mkp = m(k, p);
          const double mkq = m(k, q);
          m(k, p) = c * mkp - s * mkq;
          m(k, q) = s * mkp + c * mkq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double mpk = m(p, k);
          const double mqk = m(q, k);
          m(p, k) = c * mpk - s * mqk;
          m(q, k) = s * mpk + c * mqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return m(i, i) < m(j, j); });

  SymmetricEigen out;
  out.values.resize(n);
  out.vectors = Matrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = m(order[j], order[j]);
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = v(i, order[j]);
  }
  return out;
}

Matrix symmetric_pinv(const Matrix& a, double tolerance, std::size_t* rank_out,
                      double* condition_out) {
  const SymmetricEigen eig = jacobi_eigen(a);
  const std::size_t n = a.rows();
  double max_ev = 0.0;
  for (double ev : eig.values) max_ev = std::max(max_ev, std::fabs(ev));
  const double cut = tolerance * max_ev;

  std::size_t rank = 0;
  double min_kept = max_ev;
  Matrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double ev = eig.values[k];
    if (std::fabs(ev) <= cut) continue;
    ++rank;
    min_kept = std::min(min_kept, std::fabs(ev));
    const double inv = 1.0 / ev;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        out(i, j) += inv * eig.vectors(i, k) * eig.vectors(j, k);
  }
  if (rank_out) *rank_out = rank;
  if (condition_out)
    *condition_out = (rank > 0) ? max_ev / min_kept : std::numeric_limits<double>::infinity();
  return out;
}

}  // namespace fieldsim
