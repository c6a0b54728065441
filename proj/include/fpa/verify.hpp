#pragma once

// Regret measurement for symmetric strategy profiles, independent of the
// solvers: win probabilities are recomputed from first principles (binomial
// tie counts) rather than through the solvers' Delta kernel.

#include "fpa/cdfpa.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace fpa::verify {

struct RegretSample {
  double value = 0;
  double regret = 0;
  double best_deviation = 0;
  bool in_support = true;
};

struct RegretReport {
  std::string method;  ///< "exact", "grid" or "monte-carlo"
  double max_regret = 0;
  double argmax_value = 0;
  double argmax_deviation = 0;
  /// Largest regret at values outside supp F (not counted in max_regret).
  double out_of_support_max = 0;
  /// Sup over a continuum approximated on a grid of this spacing (grid mode).
  double resolution = 0;
  std::vector<RegretSample> samples;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  double standard_error = 0;  ///< of the argmax estimate (monte-carlo)
};

/// Value -> bid map evaluated in long double.
using BidFunction = std::function<long double(long double)>;

/// Win probability of a bid when each of the n-1 opponents independently
/// bids strictly less with probability p_less and ties with probability p_tie,
/// ties broken uniformly.
long double win_probability(int n, long double p_less, long double p_tie);
Real win_probability(int n, const Real& p_less, const Real& p_tie);

/// Discrete bids: the regret of a jump-point strategy at value v is linear in
/// v on each interval (s_{l-1}, s_l], so its sup is attained at interval
/// endpoints; those are evaluated together with value_grid_size uniform
/// points, the bids and midpoints. Throws DomainError for malformed s.
RegretReport epsilon_bne_check_cdfpa(const CdfOracle<Real>& F, int n, const cdfpa::BidGrid& grid,
                                     const cdfpa::JumpPointStrategy& s, std::size_t value_grid_size = 256);

/// Continuous bids: deviation b against opponents using bid_fn wins with the
/// tie-aware probability built from z-(b) = sup{v : bid_fn(v) < b} and
/// z+(b) = sup{v : bid_fn(v) <= b} (60-step bisections). Throws DomainError
/// when sampled bid_fn values decrease.
RegretReport epsilon_bne_check_ccfpa(const CdfOracle<long double>& F, int n, const BidFunction& bid_fn,
                                     std::size_t deviation_grid_size = 1024, std::size_t value_grid_size = 256);

/// Bid function of a jump-point strategy: v in (s_{j-1}, s_j] -> b_j, and
/// v <= s_0 -> b_1.
BidFunction jump_point_bid_function(const cdfpa::BidGrid& grid, const cdfpa::JumpPointStrategy& s);

struct UtilityEstimate {
  double mean = 0;
  double standard_error = 0;
  double win_rate = 0;
};

/// Pre-drawn opponent play for common random numbers: per trial the highest
/// opponent bid and how many opponents placed it.
class OpponentSample {
 public:
  /// Opponent values are drawn by 50-step inverse-cdf bisection on uniform
  /// deviates from a seeded std::mt19937_64. Throws DomainError for
  /// trials == 0.
  OpponentSample(const CdfOracle<long double>& F, int n, const BidFunction& strategy, std::uint64_t trials,
                 std::uint64_t seed);

  /// Interim utility of bidding b with value v, ties split uniformly.
  UtilityEstimate utility(long double v, long double b) const;
  /// Mean and standard error of u(b_dev; v) - u(b_own; v) on the same draws.
  UtilityEstimate difference(long double v, long double b_dev, long double b_own) const;

  std::uint64_t trials() const { return top_.size(); }

 private:
  long double payoff(long double v, long double b, std::size_t t) const;

  std::vector<long double> top_;
  std::vector<std::uint32_t> ties_;
};

/// Inverse cdf by bisection: smallest-ish x with F(x) >= u.
long double sample_value(const CdfOracle<long double>& F, long double u, int steps = 50);

UtilityEstimate monte_carlo_utility(const CdfOracle<long double>& F, int n, const BidFunction& strategy,
                                    long double v, long double b, std::uint64_t trials, std::uint64_t seed);

/// Regret estimate over a grid of values and deviations. The reported
/// max_regret is the largest estimate; standard_error belongs to it, so the
/// 3 sigma band is max_regret +- 3 standard_error.
RegretReport monte_carlo_regret(const CdfOracle<long double>& F, int n, const BidFunction& strategy,
                                const std::vector<long double>& deviations, std::uint64_t trials,
                                std::uint64_t seed, std::size_t value_grid_size = 21);

struct ShapeWitness {
  double x = 0;
  double y = 0;  ///< second point (monotonicity) or the bid (overbid)
  double bid_x = 0;
  double bid_y = 0;
};

struct ShapeReport {
  bool pass = true;
  std::vector<ShapeWitness> overbids;
  std::vector<ShapeWitness> decreases;
};

/// Samples `samples` sorted points of [0,1] and checks bid(v) <= v and
/// monotonicity.
ShapeReport monotone_no_overbid_check(const BidFunction& strategy, std::size_t samples = 10000);

}  // namespace fpa::verify
