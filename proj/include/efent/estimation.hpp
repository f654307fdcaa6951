#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "efent/errors.hpp"
#include "efent/expfam.hpp"
#include "efent/families.hpp"
#include "efent/measures.hpp"
#include "efent/natural_param.hpp"
#include "efent/rng.hpp"
#include "efent/spd_matrix.hpp"

namespace efent {

/// Flat row-major sample matrix with its family tag. Every row is validated
/// against the family's sample space on construction.
class SampleSet {
 public:
  SampleSet(Family family, std::size_t dim, std::vector<double> data)
      : family_(family), dim_(dim), data_(std::move(data)) {
    family_spec(family, dim);  // validates the (family, dim) combination
    if (dim_ == 0 || data_.size() % dim_ != 0) {
      throw DimensionMismatch("sample data length " + std::to_string(data_.size()) +
                              " is not a multiple of the dimension " + std::to_string(dim_));
    }
    validate();
  }

  Family family() const { return family_; }
  std::size_t dim() const { return dim_; }
  std::size_t size() const { return data_.size() / dim_; }
  const std::vector<double>& data() const { return data_; }

  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(data_.data() + i * dim_, dim_);
  }

 private:
  void validate() const {
    for (std::size_t i = 0; i < data_.size(); ++i) {
      const double x = data_[i];
      if (!std::isfinite(x)) {
        throw InvalidSample("sample entry " + std::to_string(i) + " is not finite");
      }
      if (family_ == Family::exponential && !(x >= 0.0)) {
        throw InvalidSample("exponential sample must be >= 0, got " + std::to_string(x));
      }
      if (family_ == Family::poisson && (!(x >= 0.0) || std::floor(x) != x)) {
        throw InvalidSample("poisson sample must be a nonnegative integer, got " +
                            std::to_string(x));
      }
    }
  }

  Family family_;
  std::size_t dim_;
  std::vector<double> data_;
};

/// Draws points from a fixed distribution; the theta-dependent setup
/// (covariance Cholesky factor, rates) is done once at construction.
class FamilySampler {
 public:
  explicit FamilySampler(const NaturalParam& theta)
      : family_(theta.family()), dim_(theta.sample_dim()) {
    switch (family_) {
      case Family::gaussian: {
        GaussianSource src = gaussian_from_natural(theta);
        mu_ = src.mu;
        chol_.assign(dim_ * dim_, 0.0);
        for (std::size_t i = 0; i < dim_; ++i)
          for (std::size_t j = 0; j <= i; ++j) chol_[i * dim_ + j] = src.sigma.chol(i, j);
        scratch_.resize(dim_);
        break;
      }
      case Family::exponential:
        rate_ = -theta.vec()[0];
        break;
      case Family::poisson:
        rate_ = std::exp(theta.vec()[0]);
        break;
    }
  }

  std::size_t dim() const { return dim_; }

  void draw(SplitMix64& gen, std::span<double> out) const {
    switch (family_) {
      case Family::gaussian: {
        for (std::size_t j = 0; j < dim_; ++j) scratch_[j] = gen.next_normal();
        for (std::size_t i = 0; i < dim_; ++i) {
          double s = mu_[i];
          for (std::size_t j = 0; j <= i; ++j) s += chol_[i * dim_ + j] * scratch_[j];
          out[i] = s;
        }
        break;
      }
      case Family::exponential:
        out[0] = gen.next_exponential(rate_);
        break;
      case Family::poisson:
        out[0] = gen.next_poisson(rate_);
        break;
    }
  }

 private:
  Family family_;
  std::size_t dim_;
  std::vector<double> mu_;
  std::vector<double> chol_;  // lower factor of Sigma, row-major
  double rate_ = 0.0;
  mutable std::vector<double> scratch_;
};

/// n independent draws from p(. | theta). Points are produced in chunks of
/// kChunkPoints, one substream per chunk, so a given (theta, seed) yields the
/// same leading points for every n (and byte-identical output for equal n).
inline SampleSet sample(const NaturalParam& theta, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw InvalidSample("sample count must be positive");
  const FamilySampler sampler(theta);
  const std::size_t d = sampler.dim();
  std::vector<double> data(n * d);
  for (std::size_t start = 0; start < n; start += kChunkPoints) {
    SplitMix64 gen = substream(seed, start / kChunkPoints);
    const std::size_t stop = std::min(n, start + kChunkPoints);
    for (std::size_t i = start; i < stop; ++i) {
      sampler.draw(gen, std::span<double>(data.data() + i * d, d));
    }
  }
  return SampleSet(theta.family(), d, std::move(data));
}

/// Maximum-likelihood fit: the MLE in an exponential family matches moments,
/// grad F(theta-hat) = (1/n) sum t(x_i), solved per family in closed form.
/// Gaussian: mean x-bar, biased covariance (1/n) sum (x - x-bar)(x - x-bar)^T.
inline NaturalParam mle_fit(const SampleSet& samples) {
  const std::size_t n = samples.size();
  if (n == 0) throw DegenerateSample("cannot fit an empty sample");
  switch (samples.family()) {
    case Family::gaussian: {
      const std::size_t d = samples.dim();
      if (n <= d) {
        throw DegenerateSample("need more than " + std::to_string(d) +
                               " points to fit a " + std::to_string(d) +
                               "-dimensional gaussian, got " + std::to_string(n));
      }
      std::vector<double> mean(d, 0.0);
      std::vector<double> second(d * d, 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        std::span<const double> x = samples.row(i);
        for (std::size_t a = 0; a < d; ++a) {
          mean[a] += x[a];
          for (std::size_t b = a; b < d; ++b) second[a * d + b] += x[a] * x[b];
        }
      }
      SymMatrix cov(d);
      for (std::size_t a = 0; a < d; ++a) {
        mean[a] /= static_cast<double>(n);
      }
      for (std::size_t a = 0; a < d; ++a) {
        for (std::size_t b = a; b < d; ++b) {
          cov.set(a, b, second[a * d + b] / static_cast<double>(n) - mean[a] * mean[b]);
        }
      }
      try {
        return to_natural(GaussianSource(mean, SpdMatrix(cov)));
      } catch (const NotPositiveDefinite&) {
        throw DegenerateSample("sample covariance is not positive definite");
      }
    }
    case Family::exponential: {
      double mean = 0.0;
      for (std::size_t i = 0; i < n; ++i) mean += samples.row(i)[0];
      mean /= static_cast<double>(n);
      if (!(mean > 0.0)) {
        throw DegenerateSample("sample mean is zero; the exponential rate diverges");
      }
      return NaturalParam::exponential(-1.0 / mean);
    }
    case Family::poisson: {
      double mean = 0.0;
      for (std::size_t i = 0; i < n; ++i) mean += samples.row(i)[0];
      mean /= static_cast<double>(n);
      if (!(mean > 0.0)) {
        throw DegenerateSample("all counts are zero; log(rate) diverges");
      }
      return NaturalParam::poisson(std::log(mean));
    }
  }
  throw FamilyMismatch("unknown family tag");
}

/// A Monte Carlo estimate: sample mean, its standard error (sample standard
/// deviation / sqrt(n)), and the (n, seed) that produced it.
struct McEstimate {
  double mean;
  double std_error;
  std::uint64_t n;
  std::uint64_t seed;
};

namespace detail {

/// Chunked, seeded Welford accumulation of per_point(gen) over n points.
template <class PerPoint>
McEstimate mc_accumulate(std::uint64_t n, std::uint64_t seed, PerPoint&& per_point) {
  if (n == 0) throw InvalidSample("sample count must be positive");
  double mean = 0.0;
  double m2 = 0.0;
  std::uint64_t count = 0;
  for (std::uint64_t start = 0; start < n; start += kChunkPoints) {
    SplitMix64 gen = substream(seed, start / kChunkPoints);
    const std::uint64_t stop = std::min(n, start + kChunkPoints);
    for (std::uint64_t i = start; i < stop; ++i) {
      const double w = per_point(gen);
      ++count;
      const double delta = w - mean;
      mean += delta / static_cast<double>(count);
      m2 += delta * (w - mean);
    }
  }
  const double se =
      count > 1 ? std::sqrt(m2 / (static_cast<double>(count - 1) * static_cast<double>(count)))
                : 0.0;
  return {mean, se, n, seed};
}

}  // namespace detail

/// Monte Carlo estimate of integral p^alpha = E_p[p^{alpha-1}(X)], one
/// exponentiation per point with the weight kept in the log domain until
/// then. The alpha = 1 case is the exact constant 1.
inline McEstimate mc_malpha(const NaturalParam& theta, double alpha, std::uint64_t n,
                            std::uint64_t seed) {
  if (!std::isfinite(alpha) || !(alpha > 0.0)) {
    throw InvalidOrder("order alpha must be positive, got " + std::to_string(alpha));
  }
  if (alpha == 1.0) return {1.0, 0.0, n, seed};
  const FamilySampler sampler(theta);
  const LogDensityEval logp(theta);
  std::vector<double> x(sampler.dim());
  return detail::mc_accumulate(n, seed, [&](SplitMix64& gen) {
    sampler.draw(gen, x);
    return std::exp((alpha - 1.0) * logp(x));
  });
}

/// Monte Carlo estimate of E[exp((alpha-1) k(X))] under the alpha-scaled
/// parameter: the correction factor that multiplies exp(F(alpha theta) -
/// alpha F(theta)) to give integral p^alpha for carrier families. Requires a
/// family with a nonzero carrier (CarrierIsZero otherwise: the factor is 1).
inline McEstimate mc_carrier_expectation(const NaturalParam& theta, double alpha,
                                         std::uint64_t n, std::uint64_t seed) {
  if (!theta.spec().has_carrier) {
    throw CarrierIsZero(std::string(family_name(theta.family())) +
                        " has zero carrier; the correction factor is identically 1");
  }
  if (!std::isfinite(alpha) || !(alpha > 0.0)) {
    throw InvalidOrder("order alpha must be positive, got " + std::to_string(alpha));
  }
  const NaturalParam scaled = scale_natural(theta, alpha);
  const FamilySampler sampler(scaled);
  std::vector<double> x(1);
  return detail::mc_accumulate(n, seed, [&](SplitMix64& gen) {
    sampler.draw(gen, x);
    return std::exp(-(alpha - 1.0) * std::lgamma(x[0] + 1.0));
  });
}

namespace detail {

/// Streaming log-sum-exp over a series of log-terms u(0), u(1), ... that
/// increases up to a known peak index and decays at least geometrically
/// afterwards. `log_term(x)` evaluates log u(x); `log_ratio(x)` bounds
/// log(u(x+1)/u(x)) from above for x past the peak. Truncation stops once
/// the geometric tail bound drops below 1e-14 of the accumulated sum.
template <class LogTerm, class LogRatio>
double log_series_sum(LogTerm&& log_term, LogRatio&& log_ratio, double peak) {
  double max_log = -std::numeric_limits<double>::infinity();
  double acc = 0.0;  // sum of exp(log u(x) - max_log)
  for (double x = 0.0;; x += 1.0) {
    const double l = log_term(x);
    if (l <= max_log) {
      acc += std::exp(l - max_log);
    } else {
      acc = acc * std::exp(max_log - l) + 1.0;
      max_log = l;
    }
    if (x > peak) {
      const double lr = log_ratio(x);
      if (lr < 0.0) {
        const double tail = std::exp(l + lr - max_log) / (-std::expm1(lr));
        if (tail <= 1e-14 * acc) break;
      }
    }
    if (x > 5e7) {
      throw OutOfDomain("series truncation did not converge within 5e7 terms");
    }
  }
  return max_log + std::log(acc);
}

inline double poisson_theta(const NaturalParam& theta) {
  if (theta.family() != Family::poisson) {
    throw FamilyMismatch(std::string("expected a poisson parameter, got ") +
                         family_name(theta.family()));
  }
  return theta.vec()[0];
}

}  // namespace detail

/// log E[exp((alpha-1) k(X))] under the alpha-scaled Poisson parameter, by
/// exact summation: terms exp(alpha theta x - exp(alpha theta)
/// - alpha lgamma(x+1)), truncated when the geometric tail bound is
/// negligible. Exact counterpart of mc_carrier_expectation.
inline double poisson_log_carrier_expectation(const NaturalParam& theta, double alpha) {
  const double th = detail::poisson_theta(theta);
  if (!std::isfinite(alpha) || !(alpha > 0.0)) {
    throw InvalidOrder("order alpha must be positive, got " + std::to_string(alpha));
  }
  const double lambda_alpha = std::exp(alpha * th);  // normalizer of the scaled parameter
  const double lambda = std::exp(th);                // peak of the summand is near lambda
  return detail::log_series_sum(
      [&](double x) { return alpha * th * x - lambda_alpha - alpha * std::lgamma(x + 1.0); },
      [&](double x) { return alpha * (th - std::log(x + 1.0)); }, lambda);
}

inline double poisson_carrier_expectation(const NaturalParam& theta, double alpha) {
  return std::exp(poisson_log_carrier_expectation(theta, alpha));
}

/// log integral p^alpha for the Poisson family by direct summation of
/// p(x)^alpha — an independent route to cross-check the factorization
/// log M_alpha = F(alpha theta) - alpha F(theta) + log E[exp((alpha-1) k)].
inline double poisson_log_malpha(const NaturalParam& theta, double alpha) {
  const double th = detail::poisson_theta(theta);
  if (!std::isfinite(alpha) || !(alpha > 0.0)) {
    throw InvalidOrder("order alpha must be positive, got " + std::to_string(alpha));
  }
  const double lambda = std::exp(th);
  return detail::log_series_sum(
      [&](double x) { return alpha * (th * x - lambda - std::lgamma(x + 1.0)); },
      [&](double x) { return alpha * (th - std::log(x + 1.0)); }, lambda);
}

/// log integral p^alpha q^(1-alpha) for two Poisson parameters by direct
/// summation; the lgamma weights recombine to a single 1/x!, so the summand
/// is again Poisson-shaped with rate exp(alpha theta_p + (1-alpha) theta_q).
inline double poisson_log_c_alpha(const NaturalParam& tp, const NaturalParam& tq,
                                  double alpha) {
  const double thp = detail::poisson_theta(tp);
  const double thq = detail::poisson_theta(tq);
  if (!std::isfinite(alpha)) throw InvalidOrder("skew parameter must be finite");
  const double mix = alpha * thp + (1.0 - alpha) * thq;
  const double norm = alpha * std::exp(thp) + (1.0 - alpha) * std::exp(thq);
  return detail::log_series_sum(
      [&](double x) { return mix * x - norm - std::lgamma(x + 1.0); },
      [&](double x) { return mix - std::log(x + 1.0); }, std::exp(mix));
}

/// E[k(X)] = -E[lgamma(X+1)] for a Poisson parameter, by exact summation.
inline double poisson_expected_carrier(const NaturalParam& theta) {
  const double th = detail::poisson_theta(theta);
  const double lambda = std::exp(th);
  double acc = 0.0;
  for (double x = 2.0;; x += 1.0) {  // terms at x = 0, 1 vanish
    const double t = std::exp(th * x - lambda - std::lgamma(x + 1.0)) * std::lgamma(x + 1.0);
    acc += t;
    if (x > lambda) {
      // Ratio of consecutive terms is under 2 lambda / (x+1) (the lgamma
      // growth factor is below 2 for x >= 2); bound the tail geometrically.
      const double r = 2.0 * lambda / (x + 1.0);
      if (r < 1.0 && t * r / (1.0 - r) <= 1e-16 * std::max(1.0, acc)) break;
    }
    if (x > 5e7) throw OutOfDomain("series truncation did not converge within 5e7 terms");
  }
  return -acc;
}

namespace detail {

/// Delta-method transform of an estimate of m = integral p^alpha (or the
/// cross integral) into the requested entropy/divergence scale. `to_entropy`
/// picks between the entropy transform (1-b) and divergence transform (b-1)
/// sign conventions.
inline McEstimate transform_integral_estimate(const McEstimate& est, const OrderPair& order,
                                              bool to_entropy) {
  const double a = order.alpha();
  const double m = est.mean;
  double value = 0.0;
  double deriv = 0.0;  // |d value / d m|
  switch (order.regime()) {
    case Regime::renyi_limit:
      value = to_entropy ? std::log(m) / (1.0 - a) : std::log(m) / (a - 1.0);
      deriv = 1.0 / (std::abs(1.0 - a) * m);
      break;
    case Regime::tsallis_limit:
      value = to_entropy ? (m - 1.0) / (1.0 - a) : (m - 1.0) / (a - 1.0);
      deriv = 1.0 / std::abs(1.0 - a);
      break;
    case Regime::generic: {
      const double b = order.beta();
      const double s = (1.0 - b) / (1.0 - a);
      const double denom = to_entropy ? 1.0 - b : b - 1.0;
      value = std::expm1(s * std::log(m)) / denom;
      deriv = std::pow(m, s - 1.0) / std::abs(1.0 - a);
      break;
    }
    case Regime::shannon_limit:
      throw InvalidOrder("shannon regime estimates are averaged directly");
  }
  return {value, est.std_error * deriv, est.n, est.seed};
}

}  // namespace detail

/// Monte Carlo estimate of the two-parameter entropy. The Shannon regime
/// averages -log p directly; the others estimate integral p^alpha and map
/// it through the regime transform, propagating the standard error by the
/// delta method. Works for carrier families too: the weight p^{alpha-1}(x)
/// includes the carrier term.
inline McEstimate mc_sm_entropy(const NaturalParam& theta, const OrderPair& order,
                                std::uint64_t n, std::uint64_t seed) {
  const FamilySampler sampler(theta);
  const LogDensityEval logp(theta);
  std::vector<double> x(sampler.dim());
  if (order.regime() == Regime::shannon_limit) {
    return detail::mc_accumulate(n, seed, [&](SplitMix64& gen) {
      sampler.draw(gen, x);
      return -logp(x);
    });
  }
  const double a = order.alpha();
  McEstimate raw = detail::mc_accumulate(n, seed, [&](SplitMix64& gen) {
    sampler.draw(gen, x);
    return std::exp((a - 1.0) * logp(x));
  });
  return detail::transform_integral_estimate(raw, order, /*to_entropy=*/true);
}

/// Monte Carlo estimate of the two-parameter divergence, sampling from the
/// first argument. Shannon regime: average of log p - log q (the carrier
/// cancels pointwise). Other regimes: estimate the cross integral
/// E_p[(q/p)^{1-alpha}] and map it through the regime transform.
inline McEstimate mc_sm_divergence(const NaturalParam& tp, const NaturalParam& tq,
                                   const OrderPair& order, std::uint64_t n,
                                   std::uint64_t seed) {
  detail::check_same_shape(tp.family(), tq.family(), tp.sample_dim(), tq.sample_dim());
  const FamilySampler sampler(tp);
  const LogDensityEval logp(tp);
  const LogDensityEval logq(tq);
  std::vector<double> x(sampler.dim());
  if (order.regime() == Regime::shannon_limit) {
    return detail::mc_accumulate(n, seed, [&](SplitMix64& gen) {
      sampler.draw(gen, x);
      return logp(x) - logq(x);
    });
  }
  const double a = order.alpha();
  McEstimate raw = detail::mc_accumulate(n, seed, [&](SplitMix64& gen) {
    sampler.draw(gen, x);
    return std::exp((a - 1.0) * (logp(x) - logq(x)));
  });
  return detail::transform_integral_estimate(raw, order, /*to_entropy=*/false);
}

/// Monte Carlo estimate of the cross integral C_alpha = integral p^a q^(1-a),
/// sampling from the first argument.
inline McEstimate mc_c_alpha(const NaturalParam& tp, const NaturalParam& tq, double alpha,
                             std::uint64_t n, std::uint64_t seed) {
  detail::check_same_shape(tp.family(), tq.family(), tp.sample_dim(), tq.sample_dim());
  if (!std::isfinite(alpha)) throw InvalidOrder("skew parameter must be finite");
  const FamilySampler sampler(tp);
  const LogDensityEval logp(tp);
  const LogDensityEval logq(tq);
  std::vector<double> x(sampler.dim());
  return detail::mc_accumulate(n, seed, [&](SplitMix64& gen) {
    sampler.draw(gen, x);
    return std::exp((alpha - 1.0) * (logp(x) - logq(x)));
  });
}

/// Closed-form two-parameter entropy extended to carrier families: for the
/// Poisson family log integral p^alpha picks up the exact-series carrier
/// correction, and the Shannon entropy subtracts E[k(X)]. Zero-carrier
/// families fall through to the pure log-normalizer form.
inline EntropyValue sm_entropy_with_carrier(const NaturalParam& theta, const OrderPair& order) {
  if (!theta.spec().has_carrier) return sm_entropy(theta, order);
  if (order.regime() == Regime::shannon_limit) {
    return {shannon_entropy_zero_carrier(theta) - poisson_expected_carrier(theta), order};
  }
  const double lm = log_malpha_factor(theta, order.alpha()) +
                    poisson_log_carrier_expectation(theta, order.alpha());
  return {detail::entropy_from_log_malpha(lm, order), order};
}

}  // namespace efent
