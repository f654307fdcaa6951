#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "efent/errors.hpp"
#include "efent/natural_param.hpp"
#include "efent/spd_matrix.hpp"

namespace efent {

inline constexpr double kLogTwoPi = 1.8378770664093454836;  // log(2 pi)

/// Multivariate normal in source coordinates (mean, covariance).
struct GaussianSource {
  std::vector<double> mu;
  SpdMatrix sigma;

  GaussianSource(std::vector<double> mean, SpdMatrix covariance)
      : mu(std::move(mean)), sigma(std::move(covariance)) {
    if (mu.size() != sigma.dim()) {
      throw DimensionMismatch("mean has length " + std::to_string(mu.size()) +
                              " but covariance dimension is " + std::to_string(sigma.dim()));
    }
    detail::check_finite(mu, "mean");
  }

  std::size_t dim() const { return mu.size(); }
};

/// Exponential distribution with density rate * exp(-rate * x) on x >= 0.
struct ExponentialSource {
  double rate;

  explicit ExponentialSource(double r) : rate(r) {
    if (!(r > 0.0) || !std::isfinite(r)) {
      throw OutOfDomain("exponential rate must be positive and finite, got " + std::to_string(r));
    }
  }
};

/// Poisson distribution with mass rate^x e^{-rate} / x! on x in {0, 1, ...}.
struct PoissonSource {
  double rate;

  explicit PoissonSource(double r) : rate(r) {
    if (!(r > 0.0) || !std::isfinite(r)) {
      throw OutOfDomain("poisson rate must be positive and finite, got " + std::to_string(r));
    }
  }
};

/// Gaussian natural coordinates: v = Sigma^{-1} mu, M = -(1/2) Sigma^{-1}.
inline NaturalParam to_natural(const GaussianSource& src) {
  std::vector<double> v = src.sigma.solve(src.mu);
  SymMatrix m = -0.5 * src.sigma.inverse();
  return NaturalParam::gaussian(std::move(v), std::move(m));
}

/// theta = -rate.
inline NaturalParam to_natural(const ExponentialSource& src) {
  return NaturalParam::exponential(-src.rate);
}

/// theta = log rate.
inline NaturalParam to_natural(const PoissonSource& src) {
  return NaturalParam::poisson(std::log(src.rate));
}

inline GaussianSource gaussian_from_natural(const NaturalParam& theta) {
  if (theta.family() != Family::gaussian) {
    throw FamilyMismatch(std::string("expected a gaussian parameter, got ") +
                         family_name(theta.family()));
  }
  const SpdMatrix& p = theta.precision();  // Sigma^{-1}
  std::vector<double> mu = p.solve(theta.vec());
  return GaussianSource(std::move(mu), SpdMatrix(p.inverse()));
}

inline ExponentialSource exponential_from_natural(const NaturalParam& theta) {
  if (theta.family() != Family::exponential) {
    throw FamilyMismatch(std::string("expected an exponential parameter, got ") +
                         family_name(theta.family()));
  }
  return ExponentialSource(-theta.vec()[0]);
}

inline PoissonSource poisson_from_natural(const NaturalParam& theta) {
  if (theta.family() != Family::poisson) {
    throw FamilyMismatch(std::string("expected a poisson parameter, got ") +
                         family_name(theta.family()));
  }
  return PoissonSource(std::exp(theta.vec()[0]));
}

/// Gaussian log-normalizer evaluated straight from source coordinates:
/// F = (1/2) (d log 2pi + log det Sigma + mu^T Sigma^{-1} mu).
/// Kept as an independent route from the natural-coordinate evaluation so the
/// two can be cross-checked against each other.
inline double gaussian_log_normalizer_source(const GaussianSource& src) {
  return 0.5 * (static_cast<double>(src.dim()) * kLogTwoPi + src.sigma.log_det() +
                src.sigma.quad_form(src.mu));
}

/// F(theta) = -log(-theta) for theta < 0.
inline double exponential_log_normalizer(double theta) {
  if (!(theta < 0.0)) {
    throw OutOfDomain("exponential natural parameter must be negative, got " +
                      std::to_string(theta));
  }
  return -std::log(-theta);
}

/// F(theta) = exp(theta).
inline double poisson_log_normalizer(double theta) { return std::exp(theta); }

/// Carrier term k(x) = -log x! for a nonnegative integer count.
inline double poisson_carrier(double x) {
  if (!(x >= 0.0) || std::floor(x) != x) {
    throw InvalidSample("poisson sample must be a nonnegative integer, got " +
                        std::to_string(x));
  }
  return -std::lgamma(x + 1.0);
}

}  // namespace efent
