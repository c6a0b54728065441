#include "fpa/cli.hpp"

#include "fpa/ccfpa_blackbox.hpp"
#include "fpa/io.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <cstdlib>
#include <memory>
#include <optional>

namespace fpa::cli {

namespace {

using io::json;
using io::SchemaError;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ValidationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::optional<unsigned> env_precision() {
  const char* raw = std::getenv("FPA_PRECISION_BITS");
  if (raw == nullptr || *raw == '\0') return std::nullopt;
  char* end = nullptr;
  const unsigned long bits = std::strtoul(raw, &end, 10);
  if (*end != '\0' || bits < 16 || bits > 1000000) throw UsageError("FPA_PRECISION_BITS must be an integer >= 16");
  return static_cast<unsigned>(bits);
}

Rational rational_arg(const std::string& text, const std::string& flag) {
  try {
    return parse_rational(text);
  } catch (const std::invalid_argument&) {
    throw UsageError(flag + ": expected a rational such as 1/3, got '" + text + "'");
  }
}

std::string long_decimal(long double x) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.21Lg", x);
  return buffer;
}

PiecewisePolyCdf load_valid_cdf(const std::string& arg, bool exact_monotonicity = false) {
  PiecewisePolyCdf dist = io::cdf_from_json(io::load_json_arg(arg, "cdf"));
  const auto report = validate(dist, exact_monotonicity ? MonotonicityCheck::Exact : MonotonicityCheck::Grid);
  if (!report.ok()) {
    throw ValidationFailure("cdf is invalid: " + io::validation_to_json(report).dump());
  }
  return dist;
}

double lipschitz_arg(const std::string& text, const PiecewisePolyCdf& dist) {
  if (text.empty()) return lipschitz_bound(dist).convert_to<double>();
  const Rational L = rational_arg(text, "--L");
  if (!(L > 0)) throw UsageError("--L must be positive");
  return L.convert_to<double>();
}

void require(bool present, const std::string& message) {
  if (!present) throw UsageError(message);
}

struct SolveArgs {
  std::string model;
  std::string cdf;
  int n = 0;
  std::string eps;
  int samples = 0;
  std::string at;
  std::string bids;
  std::string delta;
  std::string L;
  bool certify = false;
  bool no_extend = false;
  bool strict = false;
  bool exact = false;
  bool no_adaptive = false;
};

template <class T>
void blackbox_rows(const SolveArgs& a, const PiecewisePolyCdf& dist, double L, std::ostream& out,
                   std::ostream& err) {
  const Rational eps = rational_arg(a.eps, "--eps");
  if (!(eps > 0)) throw UsageError("--eps must be positive");
  const auto oracle = make_oracle<T>(dist, L);
  const auto plan = blackbox::precompute(oracle, a.n, from_rational<T>(eps), {a.strict});
  if (plan.clamped) err << "warning: eps > 1 clamped to 1\n";

  std::vector<Rational> xs;
  if (!a.at.empty()) {
    xs.push_back(rational_arg(a.at, "--at"));
  } else {
    const int count = a.samples > 0 ? a.samples : 11;
    for (int i = 0; i < count; ++i) xs.emplace_back(i, count > 1 ? count - 1 : 1);
  }
  out << "x,bid,L,U,queries\n";
  for (const auto& x : xs) {
    if (x < 0 || x > 1) throw UsageError("--at must lie in [0,1]");
    const auto e = blackbox::bid(plan, oracle, from_rational<T>(x));
    if constexpr (std::is_same_v<T, Rational>) {
      out << to_string(x) << ',' << to_string(e.bid) << ',' << to_string(e.lower) << ',' << to_string(e.upper);
    } else {
      out << to_string(x) << ',' << long_decimal(e.bid) << ',' << long_decimal(e.lower) << ','
          << long_decimal(e.upper);
    }
    out << ',' << oracle.query_count() << '\n';
  }
}

int solve_command(const SolveArgs& a, std::ostream& out, std::ostream& err) {
  require(a.n >= 2, "--n must be an integer >= 2");
  const PiecewisePolyCdf dist = load_valid_cdf(a.cdf);
  const double L = lipschitz_arg(a.L, dist);

  if (a.model == "ccfpa-blackbox") {
    require(!a.eps.empty(), "--eps is required for model ccfpa-blackbox");
    if (a.exact) {
      blackbox_rows<Rational>(a, dist, L, out, err);
    } else {
      blackbox_rows<long double>(a, dist, L, out, err);
    }
    return 0;
  }

  if (a.model == "ccfpa-explicit") {
    const auto rbf = explicit_model::canonical_bid_function(dist, a.n);
    const bool extend = !a.no_extend;
    if (!a.at.empty()) {
      const Rational x = rational_arg(a.at, "--at");
      try {
        out << to_string(explicit_model::eval_canonical(rbf, x, extend)) << '\n';
      } catch (const DomainError& e) {
        throw UsageError(std::string("--at: ") + e.what());
      }
      return 0;
    }
    if (a.samples > 0) {
      out << "x,bid\n";
      for (int i = 0; i < a.samples; ++i) {
        const Rational x(i, a.samples > 1 ? a.samples - 1 : 1);
        if (!extend && x < rbf.support_infimum) continue;
        out << to_string(x) << ',' << to_string(explicit_model::eval_canonical(rbf, x, extend)) << '\n';
      }
      return 0;
    }
    out << io::bid_function_to_json(rbf).dump(2) << '\n';
    return 0;
  }

  if (a.model == "cdfpa") {
    require(!a.bids.empty(), "--bids is required for model cdfpa");
    require(!a.eps.empty(), "--eps is required for model cdfpa");
    std::optional<cdfpa::BidGrid> grid;
    try {
      grid.emplace(io::rational_list(io::load_json_arg(a.bids, "bids"), "bids"));
    } catch (const DomainError& e) {
      throw UsageError(std::string("--bids: ") + e.what());
    }
    const Rational eps = rational_arg(a.eps, "--eps");
    if (!(eps > 0 && eps < 1)) throw UsageError("--eps must lie in (0,1) for model cdfpa");

    cdfpa::SolveParams params;
    if (!a.delta.empty()) {
      const Rational d = rational_arg(a.delta, "--delta");
      if (!(d > 0)) throw UsageError("--delta must be positive");
      params.delta = d;
    }
    if (auto bits = env_precision()) params.precision_bits = *bits;
    params.adaptive = !a.no_adaptive;

    const auto oracle = make_oracle<Real>(dist, L);
    const auto result = cdfpa::solve(oracle, a.n, *grid, eps, params);
    json doc = io::strategy_to_json(*grid, result.strategy, a.n, result.precision_bits);
    doc["delta"] = to_string(result.delta);
    if (a.certify) {
      doc["certificate"] = io::certificate_to_json(result.certificate, result.precision_bits);
      doc["certificate"]["pinned"] = result.pinned;
    }
    out << doc.dump(2) << '\n';
    if (a.certify && !(result.certificate.pass && result.pinned)) {
      err << "certificate failed\n";
      return 1;
    }
    return 0;
  }
  throw UsageError("--model must be one of ccfpa-blackbox, ccfpa-explicit, cdfpa");
}

struct VerifyArgs {
  std::string strategy;
  std::string cdf;
  int n = 0;
  std::string bids;
  std::string mode;
  std::uint64_t trials = 100000;
  std::uint64_t seed = 1;
  std::string eps;
  std::string L;
  std::size_t deviations = 0;
  std::size_t values = 0;
  bool with_samples = false;
};

int verify_command(const VerifyArgs& a, std::ostream& out) {
  require(a.n >= 2, "--n must be an integer >= 2");
  const PiecewisePolyCdf dist = load_valid_cdf(a.cdf);
  const double L = lipschitz_arg(a.L, dist);
  const json doc = io::load_json_arg(a.strategy, "strategy");
  if (!doc.is_object() || !doc.contains("model") || !doc["model"].is_string()) {
    throw SchemaError("model", "strategy needs a string field 'model'");
  }
  const std::string model = doc["model"].get<std::string>();

  std::optional<cdfpa::BidGrid> grid;
  std::optional<cdfpa::JumpPointStrategy> jumps;
  verify::BidFunction bid_fn;
  std::shared_ptr<CdfOracle<long double>> bid_oracle;

  if (model == "cdfpa") {
    const json bids = a.bids.empty() ? (doc.contains("bids") ? doc["bids"] : json()) : io::load_json_arg(a.bids, "bids");
    if (bids.is_null()) throw UsageError("--bids is required when the strategy has no bids");
    try {
      grid.emplace(io::rational_list(bids, "bids"));
    } catch (const DomainError& e) {
      throw UsageError(std::string("bids: ") + e.what());
    }
    jumps = io::strategy_from_json(doc);
    if (jumps->s.size() != grid->m() + 1) throw SchemaError("s", "expected m+1 jump points");
    bid_fn = verify::jump_point_bid_function(*grid, *jumps);
  } else if (model == "ccfpa-explicit") {
    auto rbf = std::make_shared<explicit_model::RationalBidFunction>(
        doc.contains("pieces") ? io::bid_function_from_json(doc) : explicit_model::canonical_bid_function(dist, a.n));
    bid_fn = [rbf](long double x) { return explicit_model::eval_canonical_fast(*rbf, x); };
  } else if (model == "ccfpa-blackbox") {
    if (!doc.contains("eps")) throw SchemaError("eps", "missing");
    const Rational eps = io::rational_field(doc["eps"], "eps");
    if (!(eps > 0)) throw SchemaError("eps", "must be positive");
    bid_oracle = std::make_shared<CdfOracle<long double>>(make_oracle<long double>(dist, L));
    auto plan = std::make_shared<blackbox::BlackBoxPlan<long double>>(
        blackbox::precompute(*bid_oracle, a.n, eps.convert_to<long double>()));
    bid_fn = [plan, bid_oracle](long double x) {
      return blackbox::bid(*plan, *bid_oracle, std::clamp(x, 0.0L, 1.0L)).bid;
    };
  } else {
    throw SchemaError("model", "unknown strategy model '" + model + "'");
  }

  verify::RegretReport report;
  if (a.mode == "exact") {
    if (!grid) throw UsageError("--mode exact needs a cdfpa strategy");
    const auto oracle = make_oracle<Real>(dist, L);
    report = verify::epsilon_bne_check_cdfpa(oracle, a.n, *grid, *jumps, a.values ? a.values : 256);
  } else if (a.mode == "grid") {
    if (grid) throw UsageError("--mode grid needs a continuous-bid strategy; use exact for cdfpa");
    const auto oracle = make_oracle<long double>(dist, L);
    report = verify::epsilon_bne_check_ccfpa(oracle, a.n, bid_fn, a.deviations ? a.deviations : 1024,
                                             a.values ? a.values : 256);
  } else if (a.mode == "mc") {
    require(a.trials > 0, "--trials must be positive");
    std::vector<long double> deviations;
    if (grid) {
      for (const auto& b : grid->bids()) deviations.push_back(b.convert_to<long double>());
    } else {
      const std::size_t count = a.deviations ? a.deviations : 64;
      for (std::size_t k = 0; k <= count; ++k) {
        deviations.push_back(static_cast<long double>(k) / static_cast<long double>(count));
      }
    }
    const auto oracle = make_oracle<long double>(dist, L);
    report = verify::monte_carlo_regret(oracle, a.n, bid_fn, deviations, a.trials, a.seed, a.values ? a.values : 21);
  } else {
    throw UsageError("--mode must be one of exact, grid, mc");
  }

  json result = io::regret_to_json(report, a.with_samples);
  bool ok = true;
  if (!a.eps.empty()) {
    const Rational eps = rational_arg(a.eps, "--eps");
    ok = report.max_regret <= eps.convert_to<double>();
    result["eps"] = to_string(eps);
    result["within_eps"] = ok;
  }
  out << result.dump(2) << '\n';
  return ok ? 0 : 1;
}

int query_stats_command(const std::string& cdf, int n, const std::string& eps_text, std::uint64_t calls,
                        bool strict, const std::string& L_text, std::ostream& out) {
  require(n >= 2, "--n must be an integer >= 2");
  const PiecewisePolyCdf dist = load_valid_cdf(cdf);
  const Rational eps = rational_arg(eps_text, "--eps");
  if (!(eps > 0)) throw UsageError("--eps must be positive");
  const auto oracle = make_oracle<long double>(dist, lipschitz_arg(L_text, dist));
  const auto plan = blackbox::precompute(oracle, n, eps.convert_to<long double>(), {strict});
  const std::uint64_t count = calls > 0 ? calls : plan.K;
  std::uint64_t bid_queries = 0;
  for (std::uint64_t i = 0; i < count; ++i) {
    const long double x = count > 1 ? static_cast<long double>(i) / static_cast<long double>(count - 1) : 1.0L;
    bid_queries += blackbox::bid(plan, oracle, x).queries_used;
  }
  const std::uint64_t budget = blackbox::query_budget(eps);
  const std::uint64_t total = oracle.query_count();
  json doc = {{"K", plan.K},
              {"eps_hat", "1/" + std::to_string(plan.K)},
              {"precompute_queries", plan.precompute_queries},
              {"bid_calls", count},
              {"bid_queries", bid_queries},
              {"total_queries", total},
              {"single_call_queries", plan.precompute_queries + 1},
              {"per_call_budget", budget},
              {"amortized_per_call", to_string(Rational(static_cast<long>(total), static_cast<long>(count)))},
              {"within_budget", plan.precompute_queries + 1 <= budget}};
  out << doc.dump(2) << '\n';
  return plan.precompute_queries + 1 <= budget ? 0 : 1;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Symmetric equilibria of first-price auctions", "fpa"};
  app.require_subcommand(1);

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "Compute an equilibrium strategy");
  solve_cmd->add_option("--model", solve.model, "ccfpa-blackbox | ccfpa-explicit | cdfpa")->required();
  solve_cmd->add_option("--cdf", solve.cdf, "cdf JSON or path")->required();
  solve_cmd->add_option("--n", solve.n, "number of bidders")->required();
  solve_cmd->add_option("--eps", solve.eps, "approximation parameter (rational)");
  solve_cmd->add_option("--samples", solve.samples, "number of equispaced values for CSV output");
  solve_cmd->add_option("--at", solve.at, "single value (rational)");
  solve_cmd->add_option("--bids", solve.bids, "bid grid as JSON array of rationals");
  solve_cmd->add_option("--delta", solve.delta, "starting search precision (rational)");
  solve_cmd->add_option("--L", solve.L, "Lipschitz constant of the cdf (default: derived from the cdf)");
  solve_cmd->add_flag("--certify", solve.certify, "emit and enforce the equilibrium certificate");
  solve_cmd->add_flag("--no-extend", solve.no_extend, "reject values below the support infimum");
  solve_cmd->add_flag("--strict-counting", solve.strict, "also query F(0) during precompute");
  solve_cmd->add_flag("--exact", solve.exact, "exact rational arithmetic for ccfpa-blackbox");
  solve_cmd->add_flag("--no-adaptive", solve.no_adaptive, "do not shrink delta after a failed certificate");

  VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand("verify", "Measure the regret of a strategy");
  verify_cmd->add_option("--strategy", verify.strategy, "strategy JSON or path")->required();
  verify_cmd->add_option("--cdf", verify.cdf, "cdf JSON or path")->required();
  verify_cmd->add_option("--n", verify.n, "number of bidders")->required();
  verify_cmd->add_option("--bids", verify.bids, "bid grid (defaults to the strategy's)");
  verify_cmd->add_option("--mode", verify.mode, "exact | grid | mc")->required();
  verify_cmd->add_option("--trials", verify.trials, "Monte Carlo trials");
  verify_cmd->add_option("--seed", verify.seed, "Monte Carlo seed");
  verify_cmd->add_option("--eps", verify.eps, "fail (exit 1) when the regret exceeds this");
  verify_cmd->add_option("--L", verify.L, "Lipschitz constant of the cdf");
  verify_cmd->add_option("--deviations", verify.deviations, "deviation grid size");
  verify_cmd->add_option("--values", verify.values, "value grid size");
  verify_cmd->add_flag("--with-samples", verify.with_samples, "include per-value regrets");

  std::string eval_cdf_arg, eval_at;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate the cdf exactly");
  eval_cmd->add_option("--cdf", eval_cdf_arg, "cdf JSON or path")->required();
  eval_cmd->add_option("--at", eval_at, "value (rational)")->required();

  std::string qs_cdf, qs_eps, qs_L;
  int qs_n = 0;
  std::uint64_t qs_calls = 0;
  bool qs_strict = false;
  auto* qs_cmd = app.add_subcommand("query-stats", "Count oracle queries of the black-box bidder");
  qs_cmd->add_option("--cdf", qs_cdf, "cdf JSON or path")->required();
  qs_cmd->add_option("--n", qs_n, "number of bidders")->required();
  qs_cmd->add_option("--eps", qs_eps, "approximation parameter")->required();
  qs_cmd->add_option("--calls", qs_calls, "bid evaluations (default K)");
  qs_cmd->add_option("--L", qs_L, "Lipschitz constant of the cdf");
  qs_cmd->add_flag("--strict-counting", qs_strict, "also query F(0) during precompute");

  std::string vc_cdf;
  bool vc_exact = false;
  auto* vc_cmd = app.add_subcommand("validate-cdf", "Check the cdf invariants");
  vc_cmd->add_option("--cdf", vc_cdf, "cdf JSON or path")->required();
  vc_cmd->add_flag("--exact", vc_exact, "exact monotonicity check");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    std::optional<PrecisionScope> scope;
    if (auto bits = env_precision()) scope.emplace(*bits);

    if (*solve_cmd) return solve_command(solve, out, err);
    if (*verify_cmd) return verify_command(verify, out);
    if (*eval_cmd) {
      const PiecewisePolyCdf dist = load_valid_cdf(eval_cdf_arg);
      const Rational x = rational_arg(eval_at, "--at");
      try {
        out << to_string(eval_cdf(dist, x)) << '\n';
      } catch (const DomainError& e) {
        throw UsageError(std::string("--at: ") + e.what());
      }
      return 0;
    }
    if (*qs_cmd) return query_stats_command(qs_cdf, qs_n, qs_eps, qs_calls, qs_strict, qs_L, out);
    if (*vc_cmd) {
      const PiecewisePolyCdf dist = io::cdf_from_json(io::load_json_arg(vc_cdf, "cdf"));
      const auto report = validate(dist, vc_exact ? MonotonicityCheck::Exact : MonotonicityCheck::Grid);
      out << io::validation_to_json(report).dump(2) << '\n';
      return report.ok() ? 0 : 1;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const SchemaError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const ValidationFailure& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const PrecisionError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace fpa::cli
