#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "efent/errors.hpp"
#include "efent/expfam.hpp"
#include "efent/families.hpp"
#include "efent/natural_param.hpp"
#include "efent/spd_matrix.hpp"

namespace efent {

/// Which formula a given (alpha, beta) order pair selects. The generic
/// two-parameter entropy degenerates on three lines of the order plane:
/// beta = 1 (Renyi), beta = alpha (Tsallis), alpha = 1 (Shannon / KL).
enum class Regime { generic, renyi_limit, tsallis_limit, shannon_limit };

inline const char* regime_name(Regime r) {
  switch (r) {
    case Regime::generic: return "generic";
    case Regime::renyi_limit: return "renyi-limit";
    case Regime::tsallis_limit: return "tsallis-limit";
    case Regime::shannon_limit: return "shannon-limit";
  }
  return "?";
}

/// Order pair (alpha, beta) with snapping: values within 1e-12 of a
/// degenerate line are moved onto it, so grid arithmetic like 0.2 + 49 * h
/// landing at 1 +/- 1e-16 selects the exact limit formula instead of
/// dividing by a vanishing 1 - alpha. Snapped alpha = 1 always selects the
/// Shannon regime: on that line the alpha-dependence of the measure
/// degenerates and the closed form is the Shannon entropy / KL divergence.
class OrderPair {
 public:
  OrderPair(double alpha, double beta) : alpha_(alpha), beta_(beta) {
    if (!std::isfinite(alpha_) || !std::isfinite(beta_)) {
      throw InvalidOrder("order parameters must be finite");
    }
    if (std::abs(alpha_ - 1.0) <= kSnapTol) alpha_ = 1.0;
    if (std::abs(beta_ - 1.0) <= kSnapTol) beta_ = 1.0;
    if (std::abs(beta_ - alpha_) <= kSnapTol) beta_ = alpha_;
    if (!(alpha_ > 0.0)) {
      throw InvalidOrder("order alpha must be positive, got " + std::to_string(alpha));
    }
    if (alpha_ == 1.0) {
      regime_ = Regime::shannon_limit;
    } else if (beta_ == 1.0) {
      regime_ = Regime::renyi_limit;
    } else if (beta_ == alpha_) {
      regime_ = Regime::tsallis_limit;
    } else {
      regime_ = Regime::generic;
    }
  }

  static OrderPair renyi(double alpha) { return OrderPair(alpha, 1.0); }
  static OrderPair tsallis(double alpha) { return OrderPair(alpha, alpha); }
  static OrderPair shannon() { return OrderPair(1.0, 1.0); }

  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  Regime regime() const { return regime_; }

  static constexpr double kSnapTol = 1e-12;

 private:
  double alpha_;
  double beta_;
  Regime regime_;
};

struct EntropyValue {
  double value;
  OrderPair order;  // snapped orders; order.regime() is the formula used
};

struct DivergenceValue {
  double value;
  double jensen;  // the Jensen gap J_{F,alpha}; 0 in the Shannon regime
  OrderPair order;
};

/// log integral p^alpha = F(alpha theta) - alpha F(theta) for families with
/// zero carrier; with a carrier the same factor enters multiplied by the
/// expectation of exp((alpha - 1) k(x)) under the alpha-scaled parameter.
inline double log_malpha_factor(const NaturalParam& theta, double alpha) {
  if (!std::isfinite(alpha) || !(alpha > 0.0)) {
    throw InvalidOrder("order alpha must be positive, got " + std::to_string(alpha));
  }
  if (alpha == 1.0) return 0.0;
  return log_normalizer(scale_natural(theta, alpha)) - alpha * log_normalizer(theta);
}

/// Shannon entropy -E[log p] = F(theta) - <theta, grad F(theta)> for zero
/// carrier; families with a carrier additionally subtract E[k(X)].
inline double shannon_entropy_zero_carrier(const NaturalParam& theta) {
  return log_normalizer(theta) - inner_product(theta, grad_log_normalizer(theta));
}

namespace detail {

/// Applies the regime-resolved entropy transform to L = log integral p^alpha.
inline double entropy_from_log_malpha(double log_malpha, const OrderPair& order) {
  switch (order.regime()) {
    case Regime::renyi_limit:
      return log_malpha / (1.0 - order.alpha());
    case Regime::tsallis_limit:
      return std::expm1(log_malpha) / (1.0 - order.alpha());
    case Regime::generic: {
      const double s = (1.0 - order.beta()) / (1.0 - order.alpha());
      return std::expm1(s * log_malpha) / (1.0 - order.beta());
    }
    case Regime::shannon_limit:
      break;
  }
  throw InvalidOrder("shannon regime has no log-integral transform");
}

}  // namespace detail

/// Two-parameter (Sharma-Mittal) entropy
///   H_{a,b}(p) = (1/(1-b)) ((integral p^a)^((1-b)/(1-a)) - 1)
/// in closed form, with the Renyi (b -> 1), Tsallis (b -> a) and Shannon
/// (a, b -> 1) limits dispatched by the order regime. Only valid when the
/// carrier is identically zero; otherwise the closed form above misses the
/// carrier expectation factor and CarrierNotZero is thrown (the estimation
/// layer provides the series/Monte-Carlo corrected path).
inline EntropyValue sm_entropy(const NaturalParam& theta, const OrderPair& order) {
  if (theta.spec().has_carrier) {
    throw CarrierNotZero(std::string(family_name(theta.family())) +
                         " has a nonzero carrier term; the pure log-normalizer entropy "
                         "formula does not apply (use the check subcommand / the "
                         "series-corrected estimation path)");
  }
  if (order.regime() == Regime::shannon_limit) {
    return {shannon_entropy_zero_carrier(theta), order};
  }
  const double lm = log_malpha_factor(theta, order.alpha());
  return {detail::entropy_from_log_malpha(lm, order), order};
}

/// Specialized Gaussian route working in source coordinates:
///   log integral p^a = (1-a) (d/2 log 2pi + 1/2 log det Sigma) - (d/2) log a,
/// independent of the mean. Kept separate from the generic natural-parameter
/// pipeline so the two can be cross-checked.
inline EntropyValue sm_entropy_gaussian(const GaussianSource& src, const OrderPair& order) {
  const double d = static_cast<double>(src.dim());
  const double half_log_norm = 0.5 * (d * kLogTwoPi + src.sigma.log_det());
  if (order.regime() == Regime::shannon_limit) {
    return {half_log_norm + 0.5 * d, order};
  }
  const double a = order.alpha();
  const double lm = (1.0 - a) * half_log_norm - 0.5 * d * std::log(a);
  return {detail::entropy_from_log_malpha(lm, order), order};
}

/// Skew Jensen gap J_{F,a}(t1 : t2) = a F(t1) + (1-a) F(t2) - F(a t1 + (1-a) t2).
/// Nonnegative for a in [0, 1] by convexity of F; outside that range the
/// mixture may leave the natural space, raising OutOfDomain.
inline double jensen_divergence(const NaturalParam& ta, const NaturalParam& tb, double alpha) {
  if (!std::isfinite(alpha)) throw InvalidOrder("skew parameter must be finite");
  const NaturalParam mixed = mix_natural(ta, tb, alpha);
  return alpha * log_normalizer(ta) + (1.0 - alpha) * log_normalizer(tb) -
         log_normalizer(mixed);
}

/// exp(-J) = integral p^a q^(1-a): the skew Bhattacharyya coefficient.
/// Carrier terms cancel between the two densities, so this holds for every
/// supported family, carrier or not.
inline double c_alpha(const NaturalParam& ta, const NaturalParam& tb, double alpha) {
  return std::exp(-jensen_divergence(ta, tb, alpha));
}

/// alpha-blended Gaussian: Sigma-bar = (a Sigma_p^{-1} + (1-a) Sigma_q^{-1})^{-1}
/// and mu-bar = Sigma-bar (a Sigma_p^{-1} mu_p + (1-a) Sigma_q^{-1} mu_q).
struct GaussianBlend {
  SpdMatrix precision;  // a Sigma_p^{-1} + (1-a) Sigma_q^{-1}
  std::vector<double> mu_bar;

  SpdMatrix sigma_bar() const { return SpdMatrix(precision.inverse()); }
};

inline GaussianBlend gaussian_blend(const GaussianSource& p, const GaussianSource& q,
                                    double alpha) {
  if (p.dim() != q.dim()) {
    throw DimensionMismatch("gaussians have dimensions " + std::to_string(p.dim()) +
                            " and " + std::to_string(q.dim()));
  }
  SymMatrix prec = alpha * p.sigma.inverse() + (1.0 - alpha) * q.sigma.inverse();
  std::vector<double> v(p.dim());
  std::vector<double> vp = p.sigma.solve(p.mu);
  std::vector<double> vq = q.sigma.solve(q.mu);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = alpha * vp[i] + (1.0 - alpha) * vq[i];
  try {
    SpdMatrix prec_spd(prec);
    std::vector<double> mu_bar = prec_spd.solve(v);
    return {std::move(prec_spd), std::move(mu_bar)};
  } catch (const NotPositiveDefinite&) {
    throw OutOfDomain("alpha-blended gaussian precision is not positive definite at alpha = " +
                      std::to_string(alpha));
  }
}

namespace detail {

/// The two Jensen-gap ingredients for a Gaussian pair:
///   log_term = log |a Sigma_q + (1-a) Sigma_p|
///              - (1-a) log|Sigma_p| - a log|Sigma_q|
///   quad     = (mu_p - mu_q)^T (a Sigma_q + (1-a) Sigma_p)^{-1} (mu_p - mu_q)
/// and J = (log_term + a (1-a) quad) / 2. Note the covariance weights in the
/// blend are swapped relative to the density powers: the a-weighted density
/// contributes (1-a) of its covariance. The blend is positive definite
/// exactly when the natural mixture a theta_p + (1-a) theta_q is in the
/// domain (the blend equals Sigma_p P-bar Sigma_q, which has the inertia of
/// P-bar), so this route and the natural-coordinate route agree on validity.
struct GaussianJensenParts {
  double log_term;
  double quad;

  double jensen(double alpha) const {
    return 0.5 * (log_term + alpha * (1.0 - alpha) * quad);
  }
};

inline GaussianJensenParts gaussian_jensen_parts(const GaussianSource& p,
                                                 const GaussianSource& q, double alpha) {
  if (p.dim() != q.dim()) {
    throw DimensionMismatch("gaussians have dimensions " + std::to_string(p.dim()) +
                            " and " + std::to_string(q.dim()));
  }
  SymMatrix blend = alpha * q.sigma.entries() + (1.0 - alpha) * p.sigma.entries();
  try {
    SpdMatrix blend_spd(blend);
    std::vector<double> dmu(p.dim());
    for (std::size_t i = 0; i < dmu.size(); ++i) dmu[i] = p.mu[i] - q.mu[i];
    const double log_term = blend_spd.log_det() - (1.0 - alpha) * p.sigma.log_det() -
                            alpha * q.sigma.log_det();
    return {log_term, blend_spd.quad_form(dmu)};
  } catch (const NotPositiveDefinite&) {
    throw OutOfDomain("the alpha-mixture of the gaussian pair leaves the natural domain at alpha = " +
                      std::to_string(alpha));
  }
}

}  // namespace detail

/// Jensen gap for two Gaussians straight from source coordinates.
inline double jensen_divergence_gaussian(const GaussianSource& p, const GaussianSource& q,
                                         double alpha) {
  if (!std::isfinite(alpha)) throw InvalidOrder("skew parameter must be finite");
  return detail::gaussian_jensen_parts(p, q, alpha).jensen(alpha);
}

/// KL(p : q) as the Bregman divergence of the log-normalizer evaluated at the
/// swapped natural parameters: F(t_q) - F(t_p) - <t_q - t_p, grad F(t_p)>.
inline double kl_divergence(const NaturalParam& tp, const NaturalParam& tq) {
  detail::check_same_shape(tp.family(), tq.family(), tp.sample_dim(), tq.sample_dim());
  const ExpectationParam eta = grad_log_normalizer(tp);
  double cross = 0.0;
  for (std::size_t i = 0; i < tp.vec().size(); ++i) {
    cross += (tq.vec()[i] - tp.vec()[i]) * eta.vec()[i];
  }
  if (tp.has_mat()) {
    std::span<const double> mp = tp.mat().data();
    std::span<const double> mq = tq.mat().data();
    std::span<const double> me = eta.mat().data();
    for (std::size_t i = 0; i < mp.size(); ++i) cross += (mq[i] - mp[i]) * me[i];
  }
  return log_normalizer(tq) - log_normalizer(tp) - cross;
}

/// Gaussian KL closed form:
/// (1/2) (log(|Sigma_q|/|Sigma_p|) + tr(Sigma_q^{-1} Sigma_p)
///        + (mu_q - mu_p)^T Sigma_q^{-1} (mu_q - mu_p) - d).
inline double kl_divergence_gaussian(const GaussianSource& p, const GaussianSource& q) {
  if (p.dim() != q.dim()) {
    throw DimensionMismatch("gaussians have dimensions " + std::to_string(p.dim()) +
                            " and " + std::to_string(q.dim()));
  }
  const std::size_t d = p.dim();
  double trace = 0.0;
  std::vector<double> col(d);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t i = 0; i < d; ++i) col[i] = p.sigma(i, j);
    trace += q.sigma.solve(col)[j];
  }
  std::vector<double> dmu(d);
  for (std::size_t i = 0; i < d; ++i) dmu[i] = q.mu[i] - p.mu[i];
  return 0.5 * (q.sigma.log_det() - p.sigma.log_det() + trace + q.sigma.quad_form(dmu) -
                static_cast<double>(d));
}

namespace detail {

/// Applies the regime-resolved divergence transform to the Jensen gap J.
inline double divergence_from_jensen(double jensen, const OrderPair& order) {
  switch (order.regime()) {
    case Regime::renyi_limit:
      return jensen / (1.0 - order.alpha());
    case Regime::tsallis_limit:
      return std::expm1(-jensen) / (order.alpha() - 1.0);
    case Regime::generic: {
      const double s = (1.0 - order.beta()) / (1.0 - order.alpha());
      return std::expm1(-s * jensen) / (order.beta() - 1.0);
    }
    case Regime::shannon_limit:
      break;
  }
  throw InvalidOrder("shannon regime divergence is the KL divergence");
}

}  // namespace detail

/// Two-parameter divergence
///   D_{a,b}(p : q) = (1/(b-1)) ((integral p^a q^(1-a))^((1-b)/(1-a)) - 1),
/// computed through the Jensen gap as (exp(-J (1-b)/(1-a)) - 1)/(b - 1) so
/// that near-degenerate orders stay accurate. The Shannon regime returns the
/// KL divergence. Valid for every supported family: the carrier cancels in
/// the cross integral.
inline DivergenceValue sm_divergence(const NaturalParam& tp, const NaturalParam& tq,
                                     const OrderPair& order) {
  detail::check_same_shape(tp.family(), tq.family(), tp.sample_dim(), tq.sample_dim());
  if (order.regime() == Regime::shannon_limit) {
    return {kl_divergence(tp, tq), 0.0, order};
  }
  const double j = jensen_divergence(tp, tq, order.alpha());
  return {detail::divergence_from_jensen(j, order), j, order};
}

/// Specialized Gaussian divergence from source coordinates, via the explicit
/// log-determinant / quadratic decomposition of the Jensen gap.
inline DivergenceValue sm_divergence_gaussian(const GaussianSource& p, const GaussianSource& q,
                                              const OrderPair& order) {
  if (order.regime() == Regime::shannon_limit) {
    return {kl_divergence_gaussian(p, q), 0.0, order};
  }
  const double a = order.alpha();
  const detail::GaussianJensenParts parts = detail::gaussian_jensen_parts(p, q, a);
  const double j = parts.jensen(a);
  if (order.regime() == Regime::renyi_limit) {
    // J/(1-a) with the two ingredients divided out separately.
    return {parts.log_term / (2.0 * (1.0 - a)) + 0.5 * a * parts.quad, j, order};
  }
  if (order.regime() == Regime::tsallis_limit) {
    return {std::expm1(-j) / (a - 1.0), j, order};
  }
  const double b = order.beta();
  const double exponent =
      -(1.0 - b) / (2.0 * (1.0 - a)) * parts.log_term - 0.5 * a * (1.0 - b) * parts.quad;
  return {std::expm1(exponent) / (b - 1.0), j, order};
}

/// Bhattacharyya coefficient rho = integral sqrt(p q) = exp(-J at a = 1/2)
/// and the squared Hellinger distance 1 - rho.
struct BhattacharyyaResult {
  double coefficient;
  double hellinger_sq;
};

inline BhattacharyyaResult bhattacharyya_hellinger(const NaturalParam& tp,
                                                   const NaturalParam& tq) {
  const double rho = c_alpha(tp, tq, 0.5);
  return {rho, 1.0 - rho};
}

}  // namespace efent
