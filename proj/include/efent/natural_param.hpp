#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "efent/errors.hpp"
#include "efent/spd_matrix.hpp"

namespace efent {

enum class Family { gaussian, exponential, poisson };

inline const char* family_name(Family f) {
  switch (f) {
    case Family::gaussian: return "gaussian";
    case Family::exponential: return "exponential";
    case Family::poisson: return "poisson";
  }
  return "?";
}

inline Family family_from_name(const std::string& name) {
  if (name == "gaussian") return Family::gaussian;
  if (name == "exponential") return Family::exponential;
  if (name == "poisson") return Family::poisson;
  throw SpecError("unknown family '" + name + "'");
}

/// Static facts about one family at a given sample-space dimension.
struct FamilySpec {
  Family id;
  std::size_t dim;        // sample-space dimension
  std::size_t order;      // number of natural parameters
  bool has_carrier;       // carrier term k(x) not identically zero
  bool natural_cone;      // natural space closed under positive scaling
};

inline FamilySpec family_spec(Family f, std::size_t dim) {
  switch (f) {
    case Family::gaussian:
      if (dim == 0) throw DimensionMismatch("gaussian dimension must be positive");
      // d mean coordinates plus d(d+1)/2 free covariance coordinates.
      return {f, dim, dim + dim * (dim + 1) / 2, false, true};
    case Family::exponential:
      if (dim != 1) throw DimensionMismatch("exponential family is univariate");
      return {f, 1, 1, false, true};
    case Family::poisson:
      if (dim != 1) throw DimensionMismatch("poisson family is univariate");
      return {f, 1, 1, true, true};
  }
  throw FamilyMismatch("unknown family tag");
}

namespace detail {

inline void check_finite(std::span<const double> v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) throw OutOfDomain(std::string(what) + " has a non-finite entry");
  }
}

}  // namespace detail

/// Natural parameter of an exponential family. For the gaussian family the
/// coordinates are (v, M) with v = Sigma^{-1} mu and M = -(1/2) Sigma^{-1};
/// domain membership means -2M is positive definite, and the certified
/// Cholesky factor of P = -2M is cached for reuse by downstream formulas.
/// For the exponential distribution the single coordinate is theta = -rate
/// (domain theta < 0); for poisson it is theta = log rate (all reals).
class NaturalParam {
 public:
  NaturalParam(Family family, std::vector<double> vec,
               std::optional<SymMatrix> mat = std::nullopt)
      : family_(family), vec_(std::move(vec)), mat_(std::move(mat)) {
    validate();
  }

  static NaturalParam gaussian(std::vector<double> v, SymMatrix m) {
    return NaturalParam(Family::gaussian, std::move(v), std::move(m));
  }

  static NaturalParam exponential(double theta) {
    return NaturalParam(Family::exponential, {theta});
  }

  static NaturalParam poisson(double theta) {
    return NaturalParam(Family::poisson, {theta});
  }

  Family family() const { return family_; }
  const std::vector<double>& vec() const { return vec_; }
  bool has_mat() const { return mat_.has_value(); }
  const SymMatrix& mat() const { return *mat_; }

  std::size_t sample_dim() const {
    return family_ == Family::gaussian ? vec_.size() : 1;
  }

  FamilySpec spec() const { return family_spec(family_, sample_dim()); }

  /// Gaussian only: P = -2M = Sigma^{-1} with its Cholesky factor.
  const SpdMatrix& precision() const { return *precision_; }

 private:
  void validate() {
    detail::check_finite(vec_, "natural parameter");
    switch (family_) {
      case Family::gaussian: {
        if (!mat_) throw DimensionMismatch("gaussian natural parameter needs a matrix part");
        if (mat_->dim() != vec_.size()) {
          throw DimensionMismatch("gaussian natural parameter has vector length " +
                                  std::to_string(vec_.size()) + " but matrix dimension " +
                                  std::to_string(mat_->dim()));
        }
        detail::check_finite(mat_->data(), "natural parameter matrix");
        try {
          precision_.emplace(-2.0 * *mat_);
        } catch (const NotPositiveDefinite&) {
          throw OutOfDomain("gaussian natural parameter outside the domain: -2M is not positive definite");
        }
        break;
      }
      case Family::exponential:
        if (mat_ || vec_.size() != 1) {
          throw DimensionMismatch("exponential natural parameter is a single scalar");
        }
        if (!(vec_[0] < 0.0)) {
          throw OutOfDomain("exponential natural parameter must be negative, got " +
                            std::to_string(vec_[0]));
        }
        break;
      case Family::poisson:
        if (mat_ || vec_.size() != 1) {
          throw DimensionMismatch("poisson natural parameter is a single scalar");
        }
        break;
    }
  }

  Family family_;
  std::vector<double> vec_;
  std::optional<SymMatrix> mat_;
  std::optional<SpdMatrix> precision_;
};

/// Expectation (moment) parameter eta = grad F(theta). Gaussian coordinates
/// are (mu, Sigma + mu mu^T); membership requires mat - vec vec^T positive
/// definite. Exponential: eta = mean = 1/rate > 0. Poisson: eta = rate > 0.
class ExpectationParam {
 public:
  ExpectationParam(Family family, std::vector<double> vec,
                   std::optional<SymMatrix> mat = std::nullopt)
      : family_(family), vec_(std::move(vec)), mat_(std::move(mat)) {
    validate();
  }

  Family family() const { return family_; }
  const std::vector<double>& vec() const { return vec_; }
  bool has_mat() const { return mat_.has_value(); }
  const SymMatrix& mat() const { return *mat_; }

  std::size_t sample_dim() const {
    return family_ == Family::gaussian ? vec_.size() : 1;
  }

 private:
  void validate() {
    detail::check_finite(vec_, "expectation parameter");
    switch (family_) {
      case Family::gaussian: {
        if (!mat_ || mat_->dim() != vec_.size()) {
          throw DimensionMismatch("gaussian expectation parameter needs a matrix part matching the vector length");
        }
        detail::check_finite(mat_->data(), "expectation parameter matrix");
        const std::size_t d = vec_.size();
        SymMatrix cov(d);
        for (std::size_t i = 0; i < d; ++i)
          for (std::size_t j = i; j < d; ++j)
            cov.set(i, j, (*mat_)(i, j) - vec_[i] * vec_[j]);
        try {
          SpdMatrix pd_check(cov);
          (void)pd_check;
        } catch (const NotPositiveDefinite&) {
          throw OutOfDomain("gaussian expectation parameter outside the domain: second moment minus mean outer product is not positive definite");
        }
        break;
      }
      case Family::exponential:
      case Family::poisson:
        if (mat_ || vec_.size() != 1) {
          throw DimensionMismatch("scalar family expectation parameter is a single scalar");
        }
        if (!(vec_[0] > 0.0)) {
          throw OutOfDomain("expectation parameter must be positive, got " +
                            std::to_string(vec_[0]));
        }
        break;
    }
  }

  Family family_;
  std::vector<double> vec_;
  std::optional<SymMatrix> mat_;
};

namespace detail {

inline void check_same_shape(Family fa, Family fb, std::size_t da, std::size_t db) {
  if (fa != fb) {
    throw FamilyMismatch(std::string("cannot combine ") + family_name(fa) + " and " +
                         family_name(fb) + " parameters");
  }
  if (da != db) {
    throw DimensionMismatch("parameters have dimensions " + std::to_string(da) +
                            " and " + std::to_string(db));
  }
}

}  // namespace detail

/// Inner product pairing natural and expectation coordinates:
/// <theta, eta> = v . v' + sum_{ij} M_ij M'_ij (full elementwise matrix sum).
inline double inner_product(const NaturalParam& theta, const ExpectationParam& eta) {
  detail::check_same_shape(theta.family(), eta.family(), theta.sample_dim(), eta.sample_dim());
  double s = 0.0;
  for (std::size_t i = 0; i < theta.vec().size(); ++i) s += theta.vec()[i] * eta.vec()[i];
  if (theta.has_mat()) {
    std::span<const double> a = theta.mat().data();
    std::span<const double> b = eta.mat().data();
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  }
  return s;
}

/// a * theta for a > 0. Every supported family has a natural space closed
/// under positive scaling, so the result is always inside the domain.
inline NaturalParam scale_natural(const NaturalParam& theta, double a) {
  if (!(a > 0.0)) throw InvalidOrder("scale factor must be positive, got " + std::to_string(a));
  std::vector<double> v(theta.vec());
  for (double& x : v) x *= a;
  if (theta.has_mat()) return NaturalParam(theta.family(), std::move(v), a * theta.mat());
  return NaturalParam(theta.family(), std::move(v));
}

/// a * theta + (1 - a) * theta'. For a in [0, 1] convexity of the natural
/// space keeps the mixture inside; outside that range the result may leave
/// the domain, in which case OutOfDomain propagates from construction.
inline NaturalParam mix_natural(const NaturalParam& ta, const NaturalParam& tb, double a) {
  detail::check_same_shape(ta.family(), tb.family(), ta.sample_dim(), tb.sample_dim());
  if (!std::isfinite(a)) throw InvalidOrder("mixture weight must be finite");
  std::vector<double> v(ta.vec().size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a * ta.vec()[i] + (1.0 - a) * tb.vec()[i];
  if (ta.has_mat()) {
    SymMatrix m = a * ta.mat() + (1.0 - a) * tb.mat();
    return NaturalParam(ta.family(), std::move(v), std::move(m));
  }
  return NaturalParam(ta.family(), std::move(v));
}

}  // namespace efent
