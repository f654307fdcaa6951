#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "efent/errors.hpp"
#include "efent/families.hpp"
#include "efent/natural_param.hpp"
#include "efent/spd_matrix.hpp"

namespace efent {

/// Log-normalizer F(theta) of the family's canonical density
/// p(x | theta) = exp(<theta, t(x)> - F(theta) + k(x)).
/// Gaussian (with P = -2M = Sigma^{-1}):
///   F = (d/2) log 2pi - (1/2) log det P + (1/2) v^T P^{-1} v.
inline double log_normalizer(const NaturalParam& theta) {
  switch (theta.family()) {
    case Family::gaussian: {
      const SpdMatrix& p = theta.precision();
      return 0.5 * (static_cast<double>(p.dim()) * kLogTwoPi - p.log_det() +
                    p.quad_form(theta.vec()));
    }
    case Family::exponential:
      return exponential_log_normalizer(theta.vec()[0]);
    case Family::poisson:
      return poisson_log_normalizer(theta.vec()[0]);
  }
  throw FamilyMismatch("unknown family tag");
}

/// Moment parameter eta = grad F(theta) = E[t(X)]. Gaussian coordinates are
/// (mu, Sigma + mu mu^T) with mu = P^{-1} v, Sigma = P^{-1}.
inline ExpectationParam grad_log_normalizer(const NaturalParam& theta) {
  switch (theta.family()) {
    case Family::gaussian: {
      const SpdMatrix& p = theta.precision();
      const std::size_t d = p.dim();
      std::vector<double> mu = p.solve(theta.vec());
      SymMatrix second = p.inverse();
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i; j < d; ++j)
          second.set(i, j, second(i, j) + mu[i] * mu[j]);
      return ExpectationParam(Family::gaussian, std::move(mu), std::move(second));
    }
    case Family::exponential:
      // d/dtheta (-log(-theta)) = -1/theta = 1/rate.
      return ExpectationParam(Family::exponential, {-1.0 / theta.vec()[0]});
    case Family::poisson:
      return ExpectationParam(Family::poisson, {std::exp(theta.vec()[0])});
  }
  throw FamilyMismatch("unknown family tag");
}

/// Sufficient statistic t(x), shaped like an expectation parameter:
/// gaussian (x, x x^T); exponential and poisson (x).
struct SuffStat {
  std::vector<double> vec;
  std::optional<SymMatrix> mat;
};

inline SuffStat sufficient_stat(const FamilySpec& fam, std::span<const double> x) {
  switch (fam.id) {
    case Family::gaussian: {
      if (x.size() != fam.dim) {
        throw DimensionMismatch("sample has dimension " + std::to_string(x.size()) +
                                ", expected " + std::to_string(fam.dim));
      }
      detail::check_finite(x, "sample");
      SymMatrix outer(fam.dim);
      for (std::size_t i = 0; i < fam.dim; ++i)
        for (std::size_t j = i; j < fam.dim; ++j) outer.set(i, j, x[i] * x[j]);
      return {std::vector<double>(x.begin(), x.end()), std::move(outer)};
    }
    case Family::exponential: {
      if (x.size() != 1) throw DimensionMismatch("exponential sample is a scalar");
      if (!(x[0] >= 0.0) || !std::isfinite(x[0])) {
        throw InvalidSample("exponential sample must be >= 0, got " + std::to_string(x[0]));
      }
      return {{x[0]}, std::nullopt};
    }
    case Family::poisson: {
      if (x.size() != 1) throw DimensionMismatch("poisson sample is a scalar");
      if (!std::isfinite(x[0])) throw InvalidSample("poisson sample must be finite");
      poisson_carrier(x[0]);  // validates nonnegative integer
      return {{x[0]}, std::nullopt};
    }
  }
  throw FamilyMismatch("unknown family tag");
}

/// Evaluates log p(x | theta) with the theta-dependent pieces precomputed,
/// so repeated evaluation (Monte Carlo loops) costs O(d^2) per point.
class LogDensityEval {
 public:
  explicit LogDensityEval(const NaturalParam& theta)
      : theta_(theta), log_norm_(log_normalizer(theta)) {}

  const NaturalParam& theta() const { return theta_; }
  double log_norm() const { return log_norm_; }

  /// No sample validation; callers on the hot path guarantee x is in the
  /// sample space. Use log_density() for validated evaluation.
  double operator()(std::span<const double> x) const {
    const std::vector<double>& v = theta_.vec();
    switch (theta_.family()) {
      case Family::gaussian: {
        const SymMatrix& m = theta_.mat();
        const std::size_t d = v.size();
        double s = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
          s += v[i] * x[i];
          double row = 0.0;
          for (std::size_t j = 0; j < d; ++j) row += m(i, j) * x[j];
          s += x[i] * row;
        }
        return s - log_norm_;
      }
      case Family::exponential:
        return v[0] * x[0] - log_norm_;
      case Family::poisson:
        return v[0] * x[0] - log_norm_ - std::lgamma(x[0] + 1.0);
    }
    return 0.0;
  }

  double operator()(double x) const { return (*this)(std::span<const double>(&x, 1)); }

 private:
  NaturalParam theta_;
  double log_norm_;
};

/// Validated log-density: checks x against the sample space first.
inline double log_density(const NaturalParam& theta, std::span<const double> x) {
  sufficient_stat(theta.spec(), x);  // validation only
  return LogDensityEval(theta)(x);
}

inline double log_density(const NaturalParam& theta, double x) {
  return log_density(theta, std::span<const double>(&x, 1));
}

}  // namespace efent
