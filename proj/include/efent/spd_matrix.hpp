#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "efent/errors.hpp"

namespace efent {

/// Dense symmetric matrix stored row-major. Construction symmetrizes the
/// input as (A + A^T)/2 so that round-tripped or hand-entered data with tiny
/// asymmetries cannot break the symmetry invariant downstream.
class SymMatrix {
 public:
  SymMatrix() = default;

  explicit SymMatrix(std::size_t dim) : dim_(dim), a_(dim * dim, 0.0) {}

  SymMatrix(std::size_t dim, std::span<const double> row_major)
      : dim_(dim), a_(dim * dim, 0.0) {
    if (row_major.size() != dim * dim) {
      throw DimensionMismatch("matrix data has " + std::to_string(row_major.size()) +
                              " entries, expected " + std::to_string(dim * dim));
    }
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t j = 0; j < dim; ++j) {
        a_[i * dim + j] = 0.5 * (row_major[i * dim + j] + row_major[j * dim + i]);
      }
    }
  }

  static SymMatrix identity(std::size_t dim) {
    SymMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m.a_[i * dim + i] = 1.0;
    return m;
  }

  std::size_t dim() const { return dim_; }

  double operator()(std::size_t i, std::size_t j) const { return a_[i * dim_ + j]; }

  /// Writes both (i, j) and (j, i).
  void set(std::size_t i, std::size_t j, double v) {
    a_[i * dim_ + j] = v;
    a_[j * dim_ + i] = v;
  }

  std::span<const double> data() const { return a_; }

  /// Largest absolute entry; 0 for the empty matrix.
  double max_abs() const {
    double m = 0.0;
    for (double v : a_) m = std::max(m, std::abs(v));
    return m;
  }

 private:
  std::size_t dim_ = 0;
  std::vector<double> a_;
};

inline SymMatrix operator*(double c, const SymMatrix& m) {
  SymMatrix r(m.dim());
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = i; j < m.dim(); ++j) r.set(i, j, c * m(i, j));
  return r;
}

inline SymMatrix operator+(const SymMatrix& a, const SymMatrix& b) {
  if (a.dim() != b.dim()) {
    throw DimensionMismatch("cannot add " + std::to_string(a.dim()) + "x" +
                            std::to_string(a.dim()) + " and " + std::to_string(b.dim()) +
                            "x" + std::to_string(b.dim()) + " matrices");
  }
  SymMatrix r(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = i; j < a.dim(); ++j) r.set(i, j, a(i, j) + b(i, j));
  return r;
}

/// Symmetric positive definite matrix with its lower Cholesky factor computed
/// once at construction. All queries (determinant, solves, quadratic forms,
/// inverse) run off the cached factor. Construction throws NotPositiveDefinite
/// when any pivot falls at or below 1e-13 times the largest diagonal entry.
class SpdMatrix {
 public:
  explicit SpdMatrix(const SymMatrix& a) : a_(a) { factor(); }

  SpdMatrix(std::size_t dim, std::span<const double> row_major)
      : a_(dim, row_major) {
    factor();
  }

  static SpdMatrix identity(std::size_t dim) { return SpdMatrix(SymMatrix::identity(dim)); }

  std::size_t dim() const { return a_.dim(); }

  double operator()(std::size_t i, std::size_t j) const { return a_(i, j); }

  const SymMatrix& entries() const { return a_; }

  /// Lower Cholesky factor entry L(i, j); zero above the diagonal.
  double chol(std::size_t i, std::size_t j) const {
    return j <= i ? l_[i * dim() + j] : 0.0;
  }

  /// log det A = 2 * sum_i log L(i, i).
  double log_det() const {
    double s = 0.0;
    for (std::size_t i = 0; i < dim(); ++i) s += std::log(l_[i * dim() + i]);
    return 2.0 * s;
  }

  /// Solves A x = b via the two triangular systems.
  std::vector<double> solve(std::span<const double> b) const {
    check_vec(b);
    std::vector<double> y = forward(b);
    const std::size_t n = dim();
    // Backward: L^T x = y.
    for (std::size_t ii = n; ii-- > 0;) {
      double s = y[ii];
      for (std::size_t j = ii + 1; j < n; ++j) s -= l_[j * n + ii] * y[j];
      y[ii] = s / l_[ii * n + ii];
    }
    return y;
  }

  /// x^T A^{-1} x, computed as || L^{-1} x ||^2 (hence >= 0 by construction).
  double quad_form(std::span<const double> x) const {
    check_vec(x);
    std::vector<double> y = forward(x);
    double s = 0.0;
    for (double v : y) s += v * v;
    return s;
  }

  /// A x.
  std::vector<double> mat_vec(std::span<const double> x) const {
    check_vec(x);
    const std::size_t n = dim();
    std::vector<double> r(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += a_(i, j) * x[j];
      r[i] = s;
    }
    return r;
  }

  /// Dense inverse, one triangular solve per unit vector.
  SymMatrix inverse() const {
    const std::size_t n = dim();
    SymMatrix inv(n);
    std::vector<double> e(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      e[j] = 1.0;
      std::vector<double> col = solve(e);
      e[j] = 0.0;
      for (std::size_t i = j; i < n; ++i) inv.set(i, j, col[i]);
    }
    return inv;
  }

 private:
  void factor() {
    const std::size_t n = dim();
    if (n == 0) throw DimensionMismatch("matrix dimension must be positive");
    double max_diag = 0.0;
    for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, std::abs(a_(i, i)));
    const double tol = 1e-13 * max_diag;
    l_.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j <= i; ++j) {
        double s = a_(i, j);
        for (std::size_t k = 0; k < j; ++k) s -= l_[i * n + k] * l_[j * n + k];
        if (i == j) {
          if (!(s > tol)) {
            throw NotPositiveDefinite("cholesky pivot " + std::to_string(s) +
                                      " at index " + std::to_string(i) +
                                      " (tolerance " + std::to_string(tol) + ")");
          }
          l_[i * n + i] = std::sqrt(s);
        } else {
          l_[i * n + j] = s / l_[j * n + j];
        }
      }
    }
  }

  /// Forward solve L y = b.
  std::vector<double> forward(std::span<const double> b) const {
    const std::size_t n = dim();
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      double s = b[i];
      for (std::size_t j = 0; j < i; ++j) s -= l_[i * n + j] * y[j];
      y[i] = s / l_[i * n + i];
    }
    return y;
  }

  void check_vec(std::span<const double> v) const {
    if (v.size() != dim()) {
      throw DimensionMismatch("vector length " + std::to_string(v.size()) +
                              " does not match matrix dimension " + std::to_string(dim()));
    }
  }

  SymMatrix a_;
  std::vector<double> l_;  // lower factor, row-major; upper part zero
};

}  // namespace efent
