// efent: closed-form entropies and divergences of exponential families.
//
// Subcommands: entropy, divergence, fit, sample, sweep, check.
// Exit codes: 0 success; 2 bad input (usage, spec files, sample files);
// 3 domain errors (parameters or orders outside the valid set); 4 degenerate
// sample in fitting; 5 a consistency check failed. All errors are reported on
// stderr as a single line "error[CODE]: message".

#include <charconv>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <system_error>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "efent/efent.hpp"

namespace {

using nlohmann::json;

double parse_number(const std::string& text, const std::string& what) {
  double v = 0.0;
  const char* begin = text.data();
  const char* end = text.data() + text.size();
  while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
  while (end > begin && (*(end - 1) == ' ' || *(end - 1) == '\t')) --end;
  const std::from_chars_result res = std::from_chars(begin, end, v);
  if (res.ec != std::errc() || res.ptr != end || begin == end) {
    throw efent::SpecError("cannot parse number '" + text + "' in " + what);
  }
  return v;
}

std::vector<double> parse_vector(const std::string& text, const std::string& what) {
  std::vector<double> v;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    v.push_back(parse_number(text.substr(pos, comma - pos), what));
    pos = comma + 1;
  }
  return v;
}

efent::SymMatrix parse_matrix(const std::string& text, const std::string& what) {
  if (text.find(';') == std::string::npos) {
    // Flat row-major form, e.g. --sigma 4,0,0,4; the dimension is implied by
    // the entry count, which must be a perfect square.
    const std::vector<double> flat = parse_vector(text, what);
    std::size_t d = 0;
    while (d * d < flat.size()) ++d;
    if (d * d != flat.size()) {
      throw efent::SpecError(what + " needs d*d row-major entries, got " +
                             std::to_string(flat.size()));
    }
    return efent::SymMatrix(d, flat);
  }
  std::vector<std::vector<double>> rows;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t semi = std::min(text.find(';', pos), text.size());
    rows.push_back(parse_vector(text.substr(pos, semi - pos), what));
    pos = semi + 1;
  }
  const std::size_t d = rows.size();
  std::vector<double> flat;
  flat.reserve(d * d);
  for (const auto& row : rows) {
    if (row.size() != d) {
      throw efent::SpecError(what + " must be square: got " + std::to_string(d) +
                             " rows but a row with " + std::to_string(row.size()) +
                             " entries");
    }
    flat.insert(flat.end(), row.begin(), row.end());
  }
  return efent::SymMatrix(d, flat);
}

/// One distribution's worth of command-line options: either a spec file or
/// inline source parameters together with the shared --family flag.
struct DistArgs {
  std::string spec_path;
  std::string mu;
  std::string sigma;
  std::optional<double> rate;

  bool has_inline() const { return !mu.empty() || !sigma.empty() || rate.has_value(); }
};

void add_dist_options(CLI::App* cmd, DistArgs& args, const std::string& suffix,
                      const std::string& who) {
  const std::string sfx = suffix.empty() ? "" : "-" + suffix;
  cmd->add_option("--spec" + sfx, args.spec_path,
                  "JSON distribution spec file for " + who);
  cmd->add_option("--mu" + sfx, args.mu, "gaussian mean for " + who + " (comma-separated)");
  cmd->add_option("--sigma" + sfx, args.sigma,
                  "gaussian covariance for " + who +
                      " (d*d row-major entries, comma-separated; ';' between rows also accepted)");
  cmd->add_option("--rate" + sfx, args.rate, "rate for " + who + " (exponential / poisson)");
}

efent::NaturalParam resolve_dist(const DistArgs& args, const std::string& family,
                                 const std::string& who) {
  if (!args.spec_path.empty()) {
    if (args.has_inline()) {
      throw efent::SpecError("give " + who + " either as a spec file or inline, not both");
    }
    return efent::load_distribution(args.spec_path);
  }
  if (family.empty()) {
    throw efent::SpecError("--family is required when " + who + " is given inline");
  }
  const efent::Family fam = efent::family_from_name(family);
  switch (fam) {
    case efent::Family::gaussian: {
      if (args.mu.empty() || args.sigma.empty()) {
        throw efent::SpecError("gaussian " + who + " needs --mu and --sigma");
      }
      try {
        return efent::to_natural(efent::GaussianSource(
            parse_vector(args.mu, "--mu"),
            efent::SpdMatrix(parse_matrix(args.sigma, "--sigma"))));
      } catch (const efent::NotPositiveDefinite& e) {
        throw efent::OutOfDomain(std::string("covariance is not positive definite: ") +
                                 e.what());
      }
    }
    case efent::Family::exponential:
      if (!args.rate) throw efent::SpecError("exponential " + who + " needs --rate");
      return efent::to_natural(efent::ExponentialSource(*args.rate));
    case efent::Family::poisson:
      if (!args.rate) throw efent::SpecError("poisson " + who + " needs --rate");
      return efent::to_natural(efent::PoissonSource(*args.rate));
  }
  throw efent::SpecError("unknown family");
}

/// Maps --kind plus optional --alpha/--beta onto an order pair, rejecting
/// inconsistent combinations (e.g. --kind renyi --beta 2).
efent::OrderPair resolve_order(const std::string& kind, std::optional<double> alpha,
                               std::optional<double> beta, bool divergence) {
  const std::string shannon_kind = divergence ? "kl" : "shannon";
  const double snap = efent::OrderPair::kSnapTol;
  if (kind == "sm") {
    if (!alpha || !beta) throw efent::SpecError("--kind sm needs both --alpha and --beta");
    return efent::OrderPair(*alpha, *beta);
  }
  if (kind == "renyi" || kind == "tsallis") {
    if (!alpha) throw efent::SpecError("--kind " + kind + " needs --alpha");
    const double implied = kind == "renyi" ? 1.0 : *alpha;
    if (beta && std::abs(*beta - implied) > snap) {
      throw efent::SpecError("--kind " + kind + " implies beta = " +
                             efent::format_double(implied) + ", got " +
                             efent::format_double(*beta));
    }
    return efent::OrderPair(*alpha, implied);
  }
  if (kind == shannon_kind) {
    if ((alpha && std::abs(*alpha - 1.0) > snap) || (beta && std::abs(*beta - 1.0) > snap)) {
      throw efent::SpecError("--kind " + shannon_kind + " implies alpha = beta = 1");
    }
    return efent::OrderPair::shannon();
  }
  throw efent::SpecError("unknown kind '" + kind + "'");
}

void print_json(const json& j) { std::cout << j.dump(2) << "\n"; }

json order_fields(const efent::OrderPair& order) {
  json j;
  j["alpha"] = order.alpha();
  j["beta"] = order.beta();
  j["regime"] = efent::regime_name(order.regime());
  return j;
}

// ---------------------------------------------------------------------------

struct EntropyCmd {
  DistArgs dist;
  std::string family;
  std::string kind = "sm";
  std::optional<double> alpha;
  std::optional<double> beta;

  int run() const {
    const efent::NaturalParam theta = resolve_dist(dist, family, "the distribution");
    const efent::OrderPair order = resolve_order(kind, alpha, beta, false);
    const efent::EntropyValue h = efent::sm_entropy(theta, order);
    json out = order_fields(h.order);
    out["quantity"] = "entropy";
    out["kind"] = kind;
    out["family"] = efent::family_name(theta.family());
    out["value"] = h.value;
    out["nats"] = true;
    print_json(out);
    return 0;
  }
};

struct DivergenceCmd {
  DistArgs p, q;
  std::string family;
  std::string kind = "sm";
  std::optional<double> alpha;
  std::optional<double> beta;

  int run() const {
    const efent::NaturalParam tp = resolve_dist(p, family, "p");
    const efent::NaturalParam tq = resolve_dist(q, family, "q");
    const efent::OrderPair order = resolve_order(kind, alpha, beta, true);
    const efent::DivergenceValue d = efent::sm_divergence(tp, tq, order);
    json out = order_fields(d.order);
    out["quantity"] = "divergence";
    out["kind"] = kind;
    out["family"] = efent::family_name(tp.family());
    out["value"] = d.value;
    out["jensen"] = d.jensen;
    out["nats"] = true;
    print_json(out);
    return 0;
  }
};

struct FitCmd {
  std::string family;
  std::string samples_path;
  bool skip_header = false;

  int run() const {
    const efent::Family fam = efent::family_from_name(family);
    const efent::SampleSet samples = efent::load_samples_csv(samples_path, fam, skip_header);
    const efent::NaturalParam theta = efent::mle_fit(samples);
    json out;
    out["family"] = efent::family_name(fam);
    out["n"] = samples.size();
    out["source"] = efent::distribution_to_source_json(theta);
    out["natural"] = efent::distribution_to_natural_json(theta);
    print_json(out);
    return 0;
  }
};

struct SampleCmd {
  DistArgs dist;
  std::string family;
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
  std::string output;

  int run() const {
    const efent::NaturalParam theta = resolve_dist(dist, family, "the distribution");
    const efent::SampleSet samples = efent::sample(theta, n, seed);
    if (output.empty()) {
      efent::write_samples_csv(std::cout, samples);
    } else {
      std::ofstream out(output);
      if (!out) throw efent::SpecError("cannot open output file '" + output + "'");
      efent::write_samples_csv(out, samples);
    }
    return 0;
  }
};

struct SweepCmd {
  DistArgs p, q;
  std::string family;
  std::string quantity = "entropy";
  double alpha_min = 0.0, alpha_max = 0.0;
  double beta_min = 0.0, beta_max = 0.0;
  std::size_t alpha_steps = 0, beta_steps = 0;
  std::string output;

  static double grid_point(double lo, double hi, std::size_t steps, std::size_t i) {
    return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps - 1);
  }

  int run() const {
    if (alpha_steps < 2 || beta_steps < 2) {
      throw efent::SpecError("grid needs at least 2 steps per axis");
    }
    if (!(alpha_min < alpha_max) || !(beta_min < beta_max)) {
      throw efent::SpecError("grid needs min < max on both axes");
    }
    if (alpha_min <= 0.0) {
      throw efent::SpecError("alpha grid must be strictly positive");
    }
    const bool divergence = quantity == "divergence";
    const efent::NaturalParam tp = resolve_dist(p, family, divergence ? "p" : "the distribution");
    std::optional<efent::NaturalParam> tq;
    if (divergence) tq = resolve_dist(q, family, "q");

    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!output.empty()) {
      file.open(output);
      if (!file) throw efent::SpecError("cannot open output file '" + output + "'");
      out = &file;
    }
    *out << "alpha,beta,value,regime\n";
    for (std::size_t i = 0; i < alpha_steps; ++i) {
      const double a = grid_point(alpha_min, alpha_max, alpha_steps, i);
      for (std::size_t j = 0; j < beta_steps; ++j) {
        const double b = grid_point(beta_min, beta_max, beta_steps, j);
        const efent::OrderPair order(a, b);
        std::string value;
        try {
          value = efent::format_double(
              divergence ? efent::sm_divergence(tp, *tq, order).value
                         : efent::sm_entropy(tp, order).value);
        } catch (const efent::OutOfDomain&) {
          // cell outside the valid order set: value stays empty
        } catch (const efent::CarrierNotZero&) {
          // no closed form for this family's entropy: value stays empty
        }
        *out << efent::format_double(a) << ',' << efent::format_double(b) << ',' << value
             << ',' << efent::regime_name(order.regime()) << '\n';
      }
    }
    return 0;
  }
};

struct CheckCmd {
  DistArgs p, q;
  std::string family;
  std::string quantity = "entropy";
  double alpha = 1.0;
  double beta = 1.0;
  std::uint64_t samples = 1000000;
  std::uint64_t seed = 0;

  int run() const {
    const bool divergence = quantity == "divergence";
    const efent::OrderPair order(alpha, beta);
    const efent::NaturalParam tp = resolve_dist(p, family, divergence ? "p" : "the distribution");

    double closed = 0.0;
    efent::McEstimate mc{0.0, 0.0, 0, 0};
    if (divergence) {
      const efent::NaturalParam tq = resolve_dist(q, family, "q");
      closed = efent::sm_divergence(tp, tq, order).value;
      mc = efent::mc_sm_divergence(tp, tq, order, samples, seed);
    } else {
      closed = efent::sm_entropy_with_carrier(tp, order).value;
      mc = efent::mc_sm_entropy(tp, order, samples, seed);
    }

    // Zero spread (e.g. identical distributions): fall back to an absolute
    // comparison, since z would be 0/0.
    bool pass = false;
    double z = 0.0;
    if (mc.std_error == 0.0) {
      pass = std::abs(mc.mean - closed) <= 1e-12;
    } else {
      z = (mc.mean - closed) / mc.std_error;
      pass = std::abs(z) <= 3.0;
    }

    json out = order_fields(order);
    out["quantity"] = quantity;
    out["family"] = efent::family_name(tp.family());
    out["closed_form"] = closed;
    out["mc_mean"] = mc.mean;
    out["mc_std_error"] = mc.std_error;
    out["z"] = z;
    out["n"] = samples;
    out["seed"] = seed;
    out["pass"] = pass;
    print_json(out);
    if (!pass) {
      std::cerr << "error[check-failed]: closed form " << efent::format_double(closed)
                << " vs Monte Carlo " << efent::format_double(mc.mean) << " (z = "
                << efent::format_double(z) << ")\n";
      return 5;
    }
    return 0;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Closed-form Sharma-Mittal, Renyi, Tsallis and Shannon entropies and "
               "divergences of exponential families (gaussian, exponential, poisson), "
               "with seeded Monte Carlo verification and maximum-likelihood fitting."};
  app.require_subcommand(1);

  EntropyCmd entropy;
  CLI::App* entropy_cmd = app.add_subcommand("entropy", "Closed-form entropy of one distribution");
  entropy_cmd->add_option("--family", entropy.family, "family of an inline distribution");
  add_dist_options(entropy_cmd, entropy.dist, "", "the distribution");
  entropy_cmd->add_option("--kind", entropy.kind, "sm | renyi | tsallis | shannon")
      ->check(CLI::IsMember({"sm", "renyi", "tsallis", "shannon"}));
  entropy_cmd->add_option("--alpha", entropy.alpha, "order alpha > 0");
  entropy_cmd->add_option("--beta", entropy.beta, "order beta");

  DivergenceCmd divergence;
  CLI::App* divergence_cmd =
      app.add_subcommand("divergence", "Closed-form divergence between two distributions");
  divergence_cmd->add_option("--family", divergence.family, "family of inline distributions");
  add_dist_options(divergence_cmd, divergence.p, "p", "p");
  add_dist_options(divergence_cmd, divergence.q, "q", "q");
  divergence_cmd->add_option("--kind", divergence.kind, "sm | renyi | tsallis | kl")
      ->check(CLI::IsMember({"sm", "renyi", "tsallis", "kl"}));
  divergence_cmd->add_option("--alpha", divergence.alpha, "order alpha > 0");
  divergence_cmd->add_option("--beta", divergence.beta, "order beta");

  FitCmd fit;
  CLI::App* fit_cmd = app.add_subcommand("fit", "Maximum-likelihood fit from a CSV sample");
  fit_cmd->add_option("--family", fit.family, "gaussian | exponential | poisson")->required();
  fit_cmd->add_option("--samples", fit.samples_path, "CSV sample file, one point per row")
      ->required();
  fit_cmd->add_flag("--header", fit.skip_header, "skip one header line in the CSV");

  SampleCmd sample;
  CLI::App* sample_cmd = app.add_subcommand("sample", "Draw a seeded sample as CSV");
  sample_cmd->add_option("--family", sample.family, "family of an inline distribution");
  add_dist_options(sample_cmd, sample.dist, "", "the distribution");
  sample_cmd->add_option("--n", sample.n, "number of points")->required();
  sample_cmd->add_option("--seed", sample.seed, "RNG seed (default 0)");
  sample_cmd->add_option("--output", sample.output, "output file (default stdout)");

  SweepCmd sweep;
  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "Evaluate a quantity over an (alpha, beta) grid as CSV");
  sweep_cmd->add_option("--quantity", sweep.quantity, "entropy | divergence")
      ->check(CLI::IsMember({"entropy", "divergence"}));
  sweep_cmd->add_option("--family", sweep.family, "family of inline distributions");
  add_dist_options(sweep_cmd, sweep.p, "", "the distribution (entropy) / p (divergence)");
  add_dist_options(sweep_cmd, sweep.q, "q", "q (divergence)");
  sweep_cmd->add_option("--alpha-min", sweep.alpha_min, "grid start for alpha")->required();
  sweep_cmd->add_option("--alpha-max", sweep.alpha_max, "grid end for alpha")->required();
  sweep_cmd->add_option("--alpha-steps", sweep.alpha_steps, "grid points for alpha")
      ->required()
      ->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--beta-min", sweep.beta_min, "grid start for beta")->required();
  sweep_cmd->add_option("--beta-max", sweep.beta_max, "grid end for beta")->required();
  sweep_cmd->add_option("--beta-steps", sweep.beta_steps, "grid points for beta")
      ->required()
      ->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--output", sweep.output, "output file (default stdout)");

  CheckCmd check;
  CLI::App* check_cmd = app.add_subcommand(
      "check", "Verify a closed form against its seeded Monte Carlo estimate");
  check_cmd->add_option("--quantity", check.quantity, "entropy | divergence")
      ->check(CLI::IsMember({"entropy", "divergence"}));
  check_cmd->add_option("--family", check.family, "family of inline distributions");
  add_dist_options(check_cmd, check.p, "", "the distribution (entropy) / p (divergence)");
  add_dist_options(check_cmd, check.q, "q", "q (divergence)");
  check_cmd->add_option("--alpha", check.alpha, "order alpha > 0")->required();
  check_cmd->add_option("--beta", check.beta, "order beta")->required();
  check_cmd->add_option("--samples", check.samples, "Monte Carlo sample count (default 1000000)");
  check_cmd->add_option("--seed", check.seed, "RNG seed (default 0)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error[usage]: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*entropy_cmd) return entropy.run();
    if (*divergence_cmd) return divergence.run();
    if (*fit_cmd) return fit.run();
    if (*sample_cmd) return sample.run();
    if (*sweep_cmd) return sweep.run();
    if (*check_cmd) return check.run();
  } catch (const efent::SpecError& e) {
    std::cerr << "error[" << e.code() << "]: " << e.what() << "\n";
    return 2;
  } catch (const efent::InvalidSample& e) {
    std::cerr << "error[" << e.code() << "]: " << e.what() << "\n";
    return 2;
  } catch (const efent::DegenerateSample& e) {
    std::cerr << "error[" << e.code() << "]: " << e.what() << "\n";
    return 4;
  } catch (const efent::Error& e) {
    std::cerr << "error[" << e.code() << "]: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
