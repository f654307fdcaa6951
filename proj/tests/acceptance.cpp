// Acceptance gate: ten end-to-end checks over the closed forms, the Monte
// Carlo oracles, the estimation layer, and the CLI. Prints one PASS/FAIL line
// per criterion and exits nonzero if any of them fail.

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "efent/efent.hpp"
#include "oracles.hpp"

namespace {

using efent::Family;
using efent::GaussianSource;
using efent::McEstimate;
using efent::NaturalParam;
using efent::OrderPair;
using efent::SpdMatrix;
using efent::SymMatrix;

constexpr double kPi = std::numbers::pi;

std::string fmt(double v) { return efent::format_double(v); }

NaturalParam std_normal() {
  return efent::to_natural(GaussianSource({0.0}, SpdMatrix::identity(1)));
}

GaussianSource gaussian1d(double mu, double var) {
  return GaussianSource({mu}, SpdMatrix(1, std::vector<double>{var}));
}

struct Gate {
  int failures = 0;

  void run(int index, const std::string& name, const std::function<std::string()>& body) {
    std::string problem;
    try {
      problem = body();
    } catch (const std::exception& e) {
      problem = std::string("unexpected exception: ") + e.what();
    }
    if (problem.empty()) {
      std::cout << "[PASS] " << index << ". " << name << "\n";
    } else {
      ++failures;
      std::cout << "[FAIL] " << index << ". " << name << " -- " << problem << "\n";
    }
  }
};

// --------------------------------------------------------------------------
// small helpers shared by the criteria

std::string scratch_dir() {
  static const std::string dir = [] {
    char tmpl[] = "/tmp/efent_acceptance_XXXXXX";
    const char* p = mkdtemp(tmpl);
    return std::string(p == nullptr ? "/tmp" : p);
  }();
  return dir;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(EFENT_CLI_PATH) + " " + args + " >" + scratch_dir() +
                          "/cli.out 2>" + scratch_dir() + "/cli.err";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t pos = 0;
  while (pos <= line.size()) {
    const std::size_t comma = std::min(line.find(',', pos), line.size());
    fields.push_back(line.substr(pos, comma - pos));
    pos = comma + 1;
  }
  return fields;
}

// --------------------------------------------------------------------------

std::string criterion_shannon_point() {
  const NaturalParam theta = std_normal();
  const double closed = efent::sm_entropy(theta, OrderPair::shannon()).value;
  const double expected = 0.5 * (1.0 + std::log(2.0 * kPi));
  if (std::abs(closed - expected) > 1e-9) {
    return "closed form " + fmt(closed) + " vs " + fmt(expected);
  }
  const McEstimate mc = efent::mc_sm_entropy(theta, OrderPair::shannon(), 1000000, 9101);
  if (std::abs(mc.mean - closed) > 3.0 * mc.std_error) {
    return "MC " + fmt(mc.mean) + " +- " + fmt(mc.std_error) + " vs closed " + fmt(closed);
  }
  return "";
}

std::string criterion_renyi_point() {
  const NaturalParam theta = std_normal();
  const double closed = efent::sm_entropy(theta, OrderPair::renyi(2.0)).value;
  const double expected = std::log(2.0 * std::sqrt(kPi));
  if (std::abs(closed - expected) > 1e-9) {
    return "closed form " + fmt(closed) + " vs " + fmt(expected);
  }
  const McEstimate m2 = efent::mc_malpha(theta, 2.0, 1000000, 9102);
  const double m2_expected = 1.0 / (2.0 * std::sqrt(kPi));
  if (std::abs(m2.mean - m2_expected) > 3.0 * m2.std_error) {
    return "MC quadratic integral " + fmt(m2.mean) + " vs " + fmt(m2_expected);
  }
  // Entropy recovered from the estimated integral, standard error propagated
  // through -log m.
  const double via_mc = -std::log(m2.mean);
  const double se_log = m2.std_error / m2.mean;
  if (std::abs(via_mc - closed) > 3.0 * se_log) {
    return "-log(MC) " + fmt(via_mc) + " vs closed " + fmt(closed);
  }
  return "";
}

std::string criterion_wide_gaussian_grid() {
  const GaussianSource wide(std::vector<double>(4, 0.0),
                            SpdMatrix(4.0 * SymMatrix::identity(4)));
  const double closed = efent::sm_entropy_gaussian(wide, OrderPair(2.0, 2.0)).value;
  const double two_pi_sq = (2.0 * kPi) * (2.0 * kPi);
  const double expected = 1.0 - 0.25 / (16.0 * two_pi_sq);
  if (std::abs(closed - expected) > 1e-9) {
    return "closed form " + fmt(closed) + " vs " + fmt(expected);
  }

  // Full 50x50 order sweep through the CLI: every cell must evaluate.
  const std::string csv = scratch_dir() + "/wide_grid.csv";
  const int code = run_cli(
      "sweep --quantity entropy --family gaussian --mu 0,0,0,0 "
      "--sigma 4,0,0,0,0,4,0,0,0,0,4,0,0,0,0,4 "
      "--alpha-min 0.2 --alpha-max 3 --alpha-steps 50 "
      "--beta-min -1 --beta-max 3 --beta-steps 50 --output " + csv);
  if (code != 0) return "sweep exited with " + std::to_string(code);

  std::ifstream in(csv);
  std::string line;
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) rows.push_back(split_fields(line));
  if (rows.size() != 2501) return "expected 2501 csv lines, got " + std::to_string(rows.size());
  if (rows[0].size() != 4 || rows[0][0] != "alpha") return "bad csv header";
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].size() != 4) return "row " + std::to_string(i) + " malformed";
    if (rows[i][2].empty()) {
      return "empty value cell at alpha=" + rows[i][0] + " beta=" + rows[i][1];
    }
  }

  // Monte Carlo cross-check at three grid cells, orders re-parsed from the
  // file so the exact grid doubles are used.
  const NaturalParam theta = efent::to_natural(wide);
  const std::size_t picks[3] = {1 + 14 * 50 + 0, 1 + 25 * 50 + 25, 1 + 49 * 50 + 49};
  for (int k = 0; k < 3; ++k) {
    const std::vector<std::string>& row = rows[picks[k]];
    const OrderPair order(std::stod(row[0]), std::stod(row[1]));
    const double cell = std::stod(row[2]);
    const McEstimate mc =
        efent::mc_sm_entropy(theta, order, 300000, 9131 + static_cast<std::uint64_t>(k));
    if (std::abs(mc.mean - cell) > 3.5 * mc.std_error) {
      return "grid cell (" + row[0] + ", " + row[1] + ") = " + row[2] + " vs MC " +
             fmt(mc.mean) + " +- " + fmt(mc.std_error);
    }
  }
  return "";
}

std::string criterion_kl_limit() {
  const NaturalParam p = efent::to_natural(gaussian1d(4.0, 2.0));
  const NaturalParam q = efent::to_natural(gaussian1d(0.0, 4.0));
  const double expected = 0.5 * (std::log(2.0) + 0.5 + 4.0 - 1.0);

  const double bregman = efent::sm_divergence(p, q, OrderPair::shannon()).value;
  if (std::abs(bregman - expected) > 1e-10) {
    return "KL path " + fmt(bregman) + " vs " + fmt(expected);
  }
  const double near_one =
      efent::sm_divergence(p, q, OrderPair(1.0 - 1e-8, 1.0 - 1e-8)).value;
  if (std::abs(near_one - expected) > 1e-6) {
    return "near-unit orders " + fmt(near_one) + " vs " + fmt(expected);
  }
  return "";
}

std::string criterion_identity_and_positivity() {
  oracle::TestRng rng(9105);
  const OrderPair orders[3] = {OrderPair(0.5, 0.5), OrderPair(0.5, 2.0), OrderPair(0.9, 1.0)};
  for (Family fam : {Family::gaussian, Family::exponential, Family::poisson}) {
    const std::size_t d = fam == Family::gaussian ? 2 : 1;
    for (int i = 0; i < 50; ++i) {
      const NaturalParam theta = oracle::random_param(rng, fam, d);
      for (const OrderPair& order : orders) {
        const double self = efent::sm_divergence(theta, theta, order).value;
        if (std::abs(self) > 1e-12) {
          return std::string(efent::family_name(fam)) + " self-divergence " + fmt(self) +
                 " at alpha=" + fmt(order.alpha()) + " beta=" + fmt(order.beta());
        }
      }
    }
  }
  for (int i = 0; i < 50; ++i) {
    const Family fam =
        std::array{Family::gaussian, Family::exponential, Family::poisson}[i % 3];
    const std::size_t d = fam == Family::gaussian ? 2 : 1;
    const NaturalParam p = oracle::random_param(rng, fam, d);
    const NaturalParam q = oracle::random_param(rng, fam, d);
    const OrderPair order(rng.uniform(0.05, 0.95), rng.uniform(-1.0, 3.0));
    const double div = efent::sm_divergence(p, q, order).value;
    if (!(div > 0.0)) {
      return std::string(efent::family_name(fam)) + " divergence " + fmt(div) +
             " not positive at alpha=" + fmt(order.alpha()) + " beta=" + fmt(order.beta());
    }
  }
  return "";
}

std::string criterion_limit_continuity() {
  oracle::TestRng rng(9106);
  for (int i = 0; i < 20; ++i) {
    const std::size_t d = 1 + (i % 2);
    const GaussianSource src = oracle::random_gaussian(rng, d, 1.5);
    const GaussianSource other = oracle::random_gaussian(rng, d, 1.5);
    const NaturalParam theta = efent::to_natural(src);

    for (double alpha : {0.5, 2.0}) {
      const double renyi = efent::sm_entropy(theta, OrderPair::renyi(alpha)).value;
      const double tsallis = efent::sm_entropy(theta, OrderPair::tsallis(alpha)).value;
      for (double eps : {1e-8, -1e-8}) {
        const double near_renyi = efent::sm_entropy(theta, OrderPair(alpha, 1.0 + eps)).value;
        if (std::abs(near_renyi - renyi) > 1e-6) {
          return "renyi limit gap " + fmt(near_renyi - renyi) + " at alpha=" + fmt(alpha);
        }
        const double near_tsallis =
            efent::sm_entropy(theta, OrderPair(alpha, alpha + eps)).value;
        if (std::abs(near_tsallis - tsallis) > 1e-6) {
          return "tsallis limit gap " + fmt(near_tsallis - tsallis) + " at alpha=" + fmt(alpha);
        }
      }
    }

    const NaturalParam tq = efent::to_natural(other);
    const double kl = efent::sm_divergence(theta, tq, OrderPair::shannon()).value;
    for (double eps : {1e-8, -1e-8}) {
      const double near_kl =
          efent::sm_divergence(theta, tq, OrderPair(1.0 + eps, 1.0 + eps)).value;
      if (std::abs(near_kl - kl) > 1e-6) {
        return "KL limit gap " + fmt(near_kl - kl) + " on draw " + std::to_string(i);
      }
    }
  }
  return "";
}

std::string criterion_mc_oracle_suite() {
  // Orders are kept away from the heavy-tail region (the p^(alpha-1) weight
  // has finite variance for alpha > 1/2 in the continuous families).
  const double malpha_orders[3] = {0.8, 2.0, 3.0};
  const OrderPair entropy_orders[3] = {OrderPair(0.8, 0.5), OrderPair(2.0, 1.0),
                                       OrderPair(3.0, 3.0)};
  const double calpha_orders[3] = {0.5, 0.6, 0.75};
  const OrderPair div_orders[3] = {OrderPair(0.5, 0.5), OrderPair(0.75, 2.0),
                                   OrderPair(0.6, 1.0)};
  const std::uint64_t n = 1000000;

  int family_index = 0;
  for (Family fam : {Family::gaussian, Family::exponential, Family::poisson}) {
    const std::size_t d = fam == Family::gaussian ? 2 : 1;
    oracle::TestRng rng(9107 + static_cast<std::uint64_t>(family_index));
    int outliers[4] = {0, 0, 0, 0};  // malpha, calpha, entropy, divergence
    for (int i = 0; i < 20; ++i) {
      const NaturalParam tp = oracle::random_param(rng, fam, d);
      const NaturalParam tq = oracle::random_param(rng, fam, d);
      const std::uint64_t seed = 9200 + static_cast<std::uint64_t>(family_index) * 1000 +
                                 static_cast<std::uint64_t>(i) * 10;

      const double am = malpha_orders[i % 3];
      const double closed_m = fam == Family::poisson
                                  ? std::exp(efent::poisson_log_malpha(tp, am))
                                  : std::exp(efent::log_malpha_factor(tp, am));
      const McEstimate mc_m = efent::mc_malpha(tp, am, n, seed);
      if (std::abs(mc_m.mean - closed_m) > 3.0 * mc_m.std_error) ++outliers[0];

      const double ac = calpha_orders[i % 3];
      const double closed_c = efent::c_alpha(tp, tq, ac);
      const McEstimate mc_c = efent::mc_c_alpha(tp, tq, ac, n, seed + 1);
      if (std::abs(mc_c.mean - closed_c) > 3.0 * mc_c.std_error) ++outliers[1];
      if (fam == Family::poisson) {
        const double series = std::exp(efent::poisson_log_c_alpha(tp, tq, ac));
        if (std::abs(series - closed_c) > 1e-10 * closed_c) {
          return "poisson cross integral series " + fmt(series) + " vs closed " +
                 fmt(closed_c);
        }
      }

      const OrderPair he = entropy_orders[i % 3];
      const double closed_h = efent::sm_entropy_with_carrier(tp, he).value;
      const McEstimate mc_h = efent::mc_sm_entropy(tp, he, n, seed + 2);
      if (std::abs(mc_h.mean - closed_h) > 3.0 * mc_h.std_error) ++outliers[2];

      const OrderPair de = div_orders[i % 3];
      const double closed_d = efent::sm_divergence(tp, tq, de).value;
      const McEstimate mc_d = efent::mc_sm_divergence(tp, tq, de, n, seed + 3);
      if (std::abs(mc_d.mean - closed_d) > 3.0 * mc_d.std_error) ++outliers[3];
    }
    const char* quantity[4] = {"integral p^alpha", "cross integral", "entropy", "divergence"};
    for (int qi = 0; qi < 4; ++qi) {
      if (outliers[qi] > 2) {
        return std::string(efent::family_name(fam)) + " " + quantity[qi] + ": " +
               std::to_string(outliers[qi]) + "/20 beyond 3 standard errors";
      }
    }
    ++family_index;
  }
  return "";
}

std::string criterion_dual_path() {
  oracle::TestRng rng(9108);
  const OrderPair entropy_orders[5] = {OrderPair(0.5, 0.5), OrderPair(2.0, 1.0),
                                       OrderPair(2.0, 2.0), OrderPair(3.0, 0.5),
                                       OrderPair(1.0, 1.0)};
  const double jensen_alphas[3] = {0.25, 0.5, 0.9};
  const OrderPair div_orders[4] = {OrderPair(0.5, 0.5), OrderPair(0.9, 1.0),
                                   OrderPair(0.5, 2.0), OrderPair(1.0, 1.0)};
  const std::size_t dims[3] = {1, 2, 4};
  for (int k = 0; k < 50; ++k) {
    const std::size_t d = dims[k % 3];
    const GaussianSource p = oracle::random_gaussian(rng, d, 2.0);
    const GaussianSource q = oracle::random_gaussian(rng, d, 2.0);
    const NaturalParam tp = efent::to_natural(p);
    const NaturalParam tq = efent::to_natural(q);

    const OrderPair& he = entropy_orders[k % 5];
    const double h_nat = efent::sm_entropy(tp, he).value;
    const double h_src = efent::sm_entropy_gaussian(p, he).value;
    if (std::abs(h_nat - h_src) > 1e-9 * std::max(1.0, std::abs(h_nat))) {
      return "entropy paths differ: " + fmt(h_nat) + " vs " + fmt(h_src) + " (d=" +
             std::to_string(d) + ")";
    }

    const double aj = jensen_alphas[k % 3];
    const double j_nat = efent::jensen_divergence(tp, tq, aj);
    const double j_src = efent::jensen_divergence_gaussian(p, q, aj);
    if (std::abs(j_nat - j_src) > 1e-9 * std::max(1.0, std::abs(j_nat))) {
      return "jensen paths differ: " + fmt(j_nat) + " vs " + fmt(j_src) + " (d=" +
             std::to_string(d) + ")";
    }

    const OrderPair& de = div_orders[k % 4];
    const double d_nat = efent::sm_divergence(tp, tq, de).value;
    const double d_src = efent::sm_divergence_gaussian(p, q, de).value;
    if (std::abs(d_nat - d_src) > 1e-9 * std::max(1.0, std::abs(d_nat))) {
      return "divergence paths differ: " + fmt(d_nat) + " vs " + fmt(d_src) + " (d=" +
             std::to_string(d) + ")";
    }
  }
  return "";
}

std::string criterion_mle_recovery() {
  const std::uint64_t n = 100000;
  const double root_n = std::sqrt(static_cast<double>(n));

  SymMatrix cov(2);
  cov.set(0, 0, 2.0);
  cov.set(0, 1, -0.8);
  cov.set(1, 1, 1.2);
  const GaussianSource g_truth({1.0, -0.5}, SpdMatrix(cov));
  const NaturalParam truths[3] = {efent::to_natural(g_truth),
                                  efent::to_natural(efent::ExponentialSource(2.0)),
                                  efent::to_natural(efent::PoissonSource(3.0))};

  for (int f = 0; f < 3; ++f) {
    const NaturalParam& truth = truths[f];
    const efent::FamilySpec spec = truth.spec();
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      const efent::SampleSet s =
          efent::sample(truth, n, 9300 + static_cast<std::uint64_t>(f) * 10 + seed);
      const NaturalParam fit = efent::mle_fit(s);

      // Moment-matching contract: grad F at the fit equals the empirical
      // mean sufficient statistic.
      const efent::ExpectationParam eta = efent::grad_log_normalizer(fit);
      std::vector<double> mean_vec(spec.dim, 0.0);
      SymMatrix mean_mat(spec.dim);
      for (std::size_t i = 0; i < s.size(); ++i) {
        const efent::SuffStat t = efent::sufficient_stat(spec, s.row(i));
        for (std::size_t a = 0; a < spec.dim; ++a) mean_vec[a] += t.vec[a];
        if (t.mat) {
          for (std::size_t a = 0; a < spec.dim; ++a)
            for (std::size_t b = a; b < spec.dim; ++b)
              mean_mat.set(a, b, mean_mat(a, b) + (*t.mat)(a, b));
        }
      }
      for (std::size_t a = 0; a < spec.dim; ++a) {
        mean_vec[a] /= static_cast<double>(s.size());
        if (std::abs(eta.vec()[a] - mean_vec[a]) > 1e-10 * std::max(1.0, std::abs(mean_vec[a]))) {
          return std::string(efent::family_name(spec.id)) + " moment mismatch " +
                 fmt(eta.vec()[a]) + " vs " + fmt(mean_vec[a]);
        }
      }
      if (spec.id == Family::gaussian) {
        for (std::size_t a = 0; a < spec.dim; ++a) {
          for (std::size_t b = a; b < spec.dim; ++b) {
            const double emp = mean_mat(a, b) / static_cast<double>(s.size());
            if (std::abs(eta.mat()(a, b) - emp) > 1e-10 * std::max(1.0, std::abs(emp))) {
              return "gaussian second-moment mismatch " + fmt(eta.mat()(a, b)) + " vs " +
                     fmt(emp);
            }
          }
        }
      }

      // Recovery: source parameters within 5 standard errors of the truth.
      if (spec.id == Family::gaussian) {
        const GaussianSource got = efent::gaussian_from_natural(fit);
        for (std::size_t i = 0; i < 2; ++i) {
          if (std::abs(got.mu[i] - g_truth.mu[i]) >
              5.0 * std::sqrt(g_truth.sigma(i, i)) / root_n) {
            return "gaussian mean off: " + fmt(got.mu[i]) + " vs " + fmt(g_truth.mu[i]);
          }
          for (std::size_t j = i; j < 2; ++j) {
            const double var_ij = g_truth.sigma(i, i) * g_truth.sigma(j, j) +
                                  g_truth.sigma(i, j) * g_truth.sigma(i, j);
            if (std::abs(got.sigma(i, j) - g_truth.sigma(i, j)) >
                5.0 * std::sqrt(var_ij) / root_n) {
              return "gaussian covariance off at (" + std::to_string(i) + "," +
                     std::to_string(j) + ")";
            }
          }
        }
      } else if (spec.id == Family::exponential) {
        const double rate = efent::exponential_from_natural(fit).rate;
        if (std::abs(rate - 2.0) > 5.0 * 2.0 / root_n) {
          return "exponential rate off: " + fmt(rate);
        }
      } else {
        const double rate = efent::poisson_from_natural(fit).rate;
        if (std::abs(rate - 3.0) > 5.0 * std::sqrt(3.0) / root_n) {
          return "poisson rate off: " + fmt(rate);
        }
      }
    }
  }
  return "";
}

std::string criterion_gradient_check() {
  oracle::TestRng rng(9110);
  const double h = 1e-5;
  for (int i = 0; i < 20; ++i) {
    const Family fam =
        std::array{Family::gaussian, Family::exponential, Family::poisson}[i % 3];
    const std::size_t d = fam == Family::gaussian ? 1 + (i / 3) % 3 : 1;
    const NaturalParam theta = oracle::random_param(rng, fam, d);
    const efent::ExpectationParam eta = efent::grad_log_normalizer(theta);

    for (std::size_t a = 0; a < d; ++a) {
      const auto f_vec = [&](double x) {
        std::vector<double> v = theta.vec();
        v[a] = x;
        NaturalParam moved = theta.has_mat()
                                 ? NaturalParam::gaussian(std::move(v), theta.mat())
                                 : NaturalParam(theta.family(), std::move(v));
        return efent::log_normalizer(moved);
      };
      const double fd = oracle::central_fd(f_vec, theta.vec()[a], h);
      const double analytic = eta.vec()[a];
      if (std::abs(fd - analytic) > 1e-5 * std::max(std::abs(analytic), 0.01)) {
        return std::string(efent::family_name(fam)) + " grad[" + std::to_string(a) +
               "] fd " + fmt(fd) + " vs " + fmt(analytic);
      }
    }
    if (theta.has_mat()) {
      for (std::size_t a = 0; a < d; ++a) {
        for (std::size_t b = a; b < d; ++b) {
          const auto f_mat = [&](double x) {
            SymMatrix m = theta.mat();
            m.set(a, b, x);
            return efent::log_normalizer(
                NaturalParam::gaussian(theta.vec(), std::move(m)));
          };
          const double fd = oracle::central_fd(f_mat, theta.mat()(a, b), h);
          // set() writes both triangle entries, so off-diagonal moves count
          // twice in the inner product.
          const double analytic = (a == b ? 1.0 : 2.0) * eta.mat()(a, b);
          if (std::abs(fd - analytic) > 1e-5 * std::max(std::abs(analytic), 0.01)) {
            return "gaussian grad m(" + std::to_string(a) + "," + std::to_string(b) +
                   ") fd " + fmt(fd) + " vs " + fmt(analytic);
          }
        }
      }
    }
  }
  return "";
}

}  // namespace

int main() {
  Gate gate;
  gate.run(1, "shannon entropy of the standard normal (closed form + monte carlo)",
           criterion_shannon_point);
  gate.run(2, "renyi-2 entropy of the standard normal (closed form + monte carlo)",
           criterion_renyi_point);
  gate.run(3, "wide 4d gaussian entropy point, 50x50 order sweep, grid spot checks",
           criterion_wide_gaussian_grid);
  gate.run(4, "gaussian KL limit: near-unit orders and the Bregman path", criterion_kl_limit);
  gate.run(5, "self-divergence vanishes; distinct pairs are positive",
           criterion_identity_and_positivity);
  gate.run(6, "limit continuity into renyi, tsallis and KL", criterion_limit_continuity);
  gate.run(7, "monte carlo oracle suite across families", criterion_mc_oracle_suite);
  gate.run(8, "gaussian natural-coordinate vs source-coordinate paths", criterion_dual_path);
  gate.run(9, "maximum-likelihood moment matching and recovery", criterion_mle_recovery);
  gate.run(10, "log-normalizer gradient vs central finite differences",
           criterion_gradient_check);
  return gate.failures == 0 ? 0 : 1;
}
