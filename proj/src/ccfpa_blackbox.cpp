#include "fpa/ccfpa_blackbox.hpp"

#include <cmath>

namespace fpa::blackbox {

namespace {

template <class T>
T power(const T& base, int exponent) {
  T result(1);
  for (int i = 0; i < exponent; ++i) result *= base;
  return result;
}

std::uint64_t cell_count(const Rational& epsilon) {
  return fpa::ceil(Rational(1) / epsilon).convert_to<std::uint64_t>();
}

std::uint64_t cell_count(long double epsilon) {
  auto K = static_cast<std::uint64_t>(std::ceil(1.0L / epsilon));
  // Correct for rounding in 1/eps: K is the least integer with K * eps >= 1.
  while (K > 1 && static_cast<long double>(K - 1) * epsilon >= 1.0L) --K;
  while (static_cast<long double>(K) * epsilon < 1.0L) ++K;
  return K;
}

std::uint64_t cell_index(const Rational& x, std::uint64_t K) {
  return fpa::floor(x * K).convert_to<std::uint64_t>();
}

std::uint64_t cell_index(long double x, std::uint64_t K) {
  const long double KK = static_cast<long double>(K);
  auto k = static_cast<std::uint64_t>(std::floor(x * KK));
  if (k > K) k = K;
  while (k > 0 && static_cast<long double>(k) / KK > x) --k;
  while (k < K && static_cast<long double>(k + 1) / KK <= x) ++k;
  return k;
}

template <class T>
void check_value(const T& x) {
  if (!(x >= 0 && x <= 1)) throw DomainError("bid requested for value outside [0,1]");
}

}  // namespace

template <class T>
BlackBoxPlan<T> precompute(const CdfOracle<T>& oracle, int n, const T& epsilon, PrecomputeOptions options) {
  if (n < 2) throw DomainError("an auction needs n >= 2 bidders");
  if (!(epsilon > 0)) throw DomainError("epsilon must be positive");

  BlackBoxPlan<T> plan;
  plan.n = n;
  plan.epsilon = epsilon;
  if (epsilon > 1) {
    plan.epsilon = T(1);
    plan.clamped = true;
  }
  plan.K = cell_count(plan.epsilon);
  const T K(static_cast<long>(plan.K));
  plan.eps_hat = T(1) / K;

  const auto before = oracle.query_count();
  plan.grid.resize(plan.K + 1);
  plan.power_table.resize(plan.K + 1);
  for (std::uint64_t j = 0; j <= plan.K; ++j) plan.grid[j] = T(static_cast<long>(j)) / K;

  plan.power_table[0] = options.strict_counting ? power(oracle(plan.grid[0]), n - 1) : T(0);
  for (std::uint64_t j = 1; j < plan.K; ++j) plan.power_table[j] = power(oracle(plan.grid[j]), n - 1);
  plan.power_table[plan.K] = T(1);
  plan.precompute_queries = oracle.query_count() - before;

  plan.prefix.assign(plan.K + 2, T(0));
  for (std::uint64_t j = 0; j <= plan.K; ++j) plan.prefix[j + 1] = plan.prefix[j] + plan.power_table[j];
  return plan;
}

template <class T>
BidEvaluation<T> bid(const BlackBoxPlan<T>& plan, const CdfOracle<T>& oracle, const T& x) {
  check_value(x);
  BidEvaluation<T> out;
  out.x = x;
  const auto before = oracle.query_count();
  const T Fx = oracle(x);
  out.queries_used = oracle.query_count() - before;

  if (!(Fx > 0)) {
    // x is at or below the support infimum: g_x == 1 and the bid is x.
    out.bid = out.lower = out.upper = x;
    return out;
  }
  const T P = power(Fx, plan.n - 1);
  const std::uint64_t k = cell_index(x, plan.K);
  const T& a_k = plan.grid[k];

  const T area = plan.eps_hat * plan.prefix[k] + (x - a_k) * plan.power_table[k];
  out.upper = x - area / P;
  out.bid = out.upper;
  // Lower sum: g_x at right endpoints a_1..a_k, and g_x(x) = 0 on the last cell.
  const T right_sum = plan.prefix[k + 1] - plan.prefix[1];
  out.lower = plan.eps_hat * (T(static_cast<long>(k)) - right_sum / P);
  return out;
}

template <class T>
std::pair<T, T> riemann_bounds(const BlackBoxPlan<T>& plan, const CdfOracle<T>& oracle, const T& x) {
  const auto eval = bid(plan, oracle, x);
  return {eval.lower, eval.upper};
}

std::uint64_t query_budget(const Rational& epsilon) {
  if (!(epsilon > 0)) throw DomainError("epsilon must be positive");
  return cell_count(epsilon > 1 ? Rational(1) : epsilon) + 1;
}

template BlackBoxPlan<long double> precompute(const CdfOracle<long double>&, int, const long double&,
                                              PrecomputeOptions);
template BlackBoxPlan<Rational> precompute(const CdfOracle<Rational>&, int, const Rational&, PrecomputeOptions);
template BidEvaluation<long double> bid(const BlackBoxPlan<long double>&, const CdfOracle<long double>&,
                                        const long double&);
template BidEvaluation<Rational> bid(const BlackBoxPlan<Rational>&, const CdfOracle<Rational>&, const Rational&);
template std::pair<long double, long double> riemann_bounds(const BlackBoxPlan<long double>&,
                                                            const CdfOracle<long double>&, const long double&);
template std::pair<Rational, Rational> riemann_bounds(const BlackBoxPlan<Rational>&, const CdfOracle<Rational>&,
                                                      const Rational&);

}  // namespace fpa::blackbox
