#pragma once

// Approximate equilibrium bidding for continuous bids from cdf queries only.
//
// The value space is cut into K = ceil(1/eps) cells of width 1/K. One query
// per interior grid point fills a table of F^{n-1}(a_j); afterwards each bid
// costs exactly one more query (at the bidder's value). The bid is the upper
// Riemann sum of g_x(t) = 1 - F^{n-1}(t)/F^{n-1}(x) over [0, x], which lies
// within 1/K of the canonical equilibrium bid.

#include "fpa/dist.hpp"

#include <cstdint>
#include <vector>

namespace fpa::blackbox {

struct PrecomputeOptions {
  /// Also query F(0) instead of taking F(0) = 0 for granted.
  bool strict_counting = false;
};

template <class T>
struct BlackBoxPlan {
  T epsilon;
  std::uint64_t K = 0;
  T eps_hat;
  int n = 2;
  bool clamped = false;  ///< epsilon > 1 was clamped to 1
  std::vector<T> grid;         ///< a_j = j / K, j = 0..K
  std::vector<T> power_table;  ///< F^{n-1}(a_j)
  std::vector<T> prefix;       ///< prefix[k] = sum_{j<k} power_table[j]
  std::uint64_t precompute_queries = 0;
};

template <class T>
struct BidEvaluation {
  T x;
  T bid;
  T lower;
  T upper;
  std::uint64_t queries_used = 0;
};

/// Builds the grid and the F^{n-1} table. Issues K-1 queries (K with strict
/// counting). Throws DomainError for eps <= 0 or n < 2.
template <class T>
BlackBoxPlan<T> precompute(const CdfOracle<T>& oracle, int n, const T& epsilon,
                           PrecomputeOptions options = {});

/// Bid at value x; issues exactly one query. Throws DomainError for x outside
/// [0,1].
template <class T>
BidEvaluation<T> bid(const BlackBoxPlan<T>& plan, const CdfOracle<T>& oracle, const T& x);

/// Lower and upper Riemann sums (L(x), U(x)); U(x) is the bid.
template <class T>
std::pair<T, T> riemann_bounds(const BlackBoxPlan<T>& plan, const CdfOracle<T>& oracle, const T& x);

/// Worst-case queries for a single bid including the precompute: 1/eps + 1.
std::uint64_t query_budget(const Rational& epsilon);

extern template BlackBoxPlan<long double> precompute(const CdfOracle<long double>&, int, const long double&,
                                                     PrecomputeOptions);
extern template BlackBoxPlan<Rational> precompute(const CdfOracle<Rational>&, int, const Rational&,
                                                  PrecomputeOptions);
extern template BidEvaluation<long double> bid(const BlackBoxPlan<long double>&,
                                               const CdfOracle<long double>&, const long double&);
extern template BidEvaluation<Rational> bid(const BlackBoxPlan<Rational>&, const CdfOracle<Rational>&,
                                            const Rational&);
extern template std::pair<long double, long double> riemann_bounds(const BlackBoxPlan<long double>&,
                                                                   const CdfOracle<long double>&,
                                                                   const long double&);
extern template std::pair<Rational, Rational> riemann_bounds(const BlackBoxPlan<Rational>&,
                                                             const CdfOracle<Rational>&, const Rational&);

}  // namespace fpa::blackbox
