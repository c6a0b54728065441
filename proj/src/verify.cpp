#include "fpa/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace fpa::verify {

namespace {

template <class T>
T binomial_win(int n, const T& p_less, const T& p_tie) {
  // sum_k C(n-1,k) p_tie^k p_less^{n-1-k} / (k+1)
  const int r = n - 1;
  std::vector<T> less_pow(static_cast<std::size_t>(r + 1));
  less_pow[0] = 1;
  for (int i = 1; i <= r; ++i) less_pow[static_cast<std::size_t>(i)] = less_pow[static_cast<std::size_t>(i - 1)] * p_less;
  T sum = 0;
  T tie_pow = 1;
  T binom = 1;
  for (int k = 0; k <= r; ++k) {
    sum += binom * tie_pow * less_pow[static_cast<std::size_t>(r - k)] / T(k + 1);
    tie_pow *= p_tie;
    binom = binom * T(r - k) / T(k + 1);
  }
  return sum;
}

constexpr long double kSupportProbe = 0x1p-30L;

bool locally_increasing(const CdfOracle<long double>& F, long double v) {
  const long double lo = std::max(0.0L, v - kSupportProbe);
  const long double hi = std::min(1.0L, v + kSupportProbe);
  return F(hi) > F(lo);
}

bool locally_increasing(const CdfOracle<Real>& F, const Real& v) {
  const Real probe = ldexp(Real(1), -30);
  Real lo = v - probe;
  Real hi = v + probe;
  if (lo < 0) lo = 0;
  if (hi > 1) hi = 1;
  return F(hi) > F(lo);
}

unsigned precision_bits_of(const Real& x) { return static_cast<unsigned>(mpfr_get_prec(x.backend().data())); }

// sup{v in [0,1] : pred(bid(v))} for a monotone bid function, by bisection.
template <class Pred>
long double threshold(const BidFunction& bid, Pred holds) {
  if (holds(bid(1.0L))) return 1.0L;
  if (!holds(bid(0.0L))) return 0.0L;
  long double lo = 0.0L;
  long double hi = 1.0L;
  for (int step = 0; step < 60; ++step) {
    const long double mid = (lo + hi) / 2;
    if (holds(bid(mid))) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return (lo + hi) / 2;
}

long double win_against(const CdfOracle<long double>& F, int n, const BidFunction& bid_fn, long double b) {
  const long double z_less = threshold(bid_fn, [b](long double x) { return x < b; });
  const long double z_most = threshold(bid_fn, [b](long double x) { return x <= b; });
  const long double p_less = F(z_less);
  const long double p_tie = std::max(0.0L, F(z_most) - p_less);
  return win_probability(n, p_less, p_tie);
}

}  // namespace

long double win_probability(int n, long double p_less, long double p_tie) {
  return binomial_win<long double>(n, p_less, p_tie);
}

Real win_probability(int n, const Real& p_less, const Real& p_tie) { return binomial_win<Real>(n, p_less, p_tie); }

RegretReport epsilon_bne_check_cdfpa(const CdfOracle<Real>& F, int n, const cdfpa::BidGrid& grid,
                                     const cdfpa::JumpPointStrategy& s, std::size_t value_grid_size) {
  const std::size_t m = grid.m();
  if (s.s.size() != m + 1) throw DomainError("strategy needs m+1 jump points");
  if (s.s[m] != 1) throw DomainError("last jump point must be 1");
  if (s.s[0] < 0) throw DomainError("jump points must be nonnegative");
  for (std::size_t i = 1; i <= m; ++i) {
    if (s.s[i] < s.s[i - 1]) throw DomainError("jump points must be nondecreasing");
  }

  unsigned bits = 64;
  for (const auto& x : s.s) bits = std::max(bits, precision_bits_of(x));
  PrecisionScope scope(bits);

  std::vector<Real> bids;
  for (std::size_t j = 1; j <= m; ++j) bids.push_back(from_rational<Real>(grid.bid(j)));
  std::vector<Real> Fs;
  for (const auto& x : s.s) Fs.push_back(F(x));

  // Probability of winning with b_j when every opponent plays s.
  std::vector<Real> win(m);
  win[0] = win_probability(n, Real(0), Fs[1]);
  for (std::size_t j = 2; j <= m; ++j) {
    Real tie = Fs[j] - Fs[j - 1];
    if (tie < 0) tie = 0;
    win[j - 1] = win_probability(n, Fs[j - 1], tie);
  }

  auto own_index = [&](const Real& v) -> std::size_t {
    if (v <= s.s[0]) return 1;
    for (std::size_t j = 1; j <= m; ++j) {
      if (v <= s.s[j]) return j;
    }
    return m;
  };

  RegretReport report;
  report.method = "exact";
  bool any = false;
  auto evaluate = [&](const Real& v, std::size_t own) {
    const Real own_utility = (v - bids[own - 1]) * win[own - 1];
    Real best = own_utility;
    std::size_t best_j = own;
    for (std::size_t j = 1; j <= m; ++j) {
      const Real u = (v - bids[j - 1]) * win[j - 1];
      if (u > best) {
        best = u;
        best_j = j;
      }
    }
    RegretSample sample;
    sample.value = v.convert_to<double>();
    sample.regret = Real(best - own_utility).convert_to<double>();
    sample.best_deviation = bids[best_j - 1].convert_to<double>();
    sample.in_support = locally_increasing(F, v);
    if (sample.in_support) {
      if (!any || sample.regret > report.max_regret) {
        report.max_regret = sample.regret;
        report.argmax_value = sample.value;
        report.argmax_deviation = sample.best_deviation;
        any = true;
      }
    } else {
      report.out_of_support_max = std::max(report.out_of_support_max, sample.regret);
    }
    report.samples.push_back(sample);
  };

  // Interval endpoints with the bid used inside the interval; the left end is
  // the limit from the right.
  evaluate(Real(0), 1);
  evaluate(s.s[1], 1);
  for (std::size_t l = 2; l <= m; ++l) {
    if (s.s[l - 1] < s.s[l]) {
      evaluate(s.s[l - 1], l);
      evaluate(s.s[l], l);
      evaluate(Real((s.s[l - 1] + s.s[l]) / 2), l);
    }
  }
  for (const auto& b : bids) evaluate(b, own_index(b));
  for (std::size_t i = 0; i <= value_grid_size; ++i) {
    const Real v = value_grid_size == 0 ? Real(1) : Real(Real(static_cast<long>(i)) / static_cast<long>(value_grid_size));
    evaluate(v, own_index(v));
  }
  return report;
}

RegretReport epsilon_bne_check_ccfpa(const CdfOracle<long double>& F, int n, const BidFunction& bid_fn,
                                     std::size_t deviation_grid_size, std::size_t value_grid_size) {
  if (n < 2) throw DomainError("an auction needs n >= 2 bidders");
  if (deviation_grid_size == 0 || value_grid_size == 0) throw DomainError("grids must be nonempty");

  // Sampled monotonicity.
  const std::size_t probe = std::max<std::size_t>(1024, value_grid_size);
  long double previous = bid_fn(0.0L);
  for (std::size_t i = 1; i <= probe; ++i) {
    const long double x = static_cast<long double>(i) / static_cast<long double>(probe);
    const long double b = bid_fn(x);
    if (b < previous) throw DomainError("bid function decreases near " + std::to_string(static_cast<double>(x)));
    previous = b;
  }

  const auto N = static_cast<long double>(deviation_grid_size);
  std::vector<long double> deviations(deviation_grid_size + 1);
  std::vector<long double> dev_win(deviation_grid_size + 1);
  for (std::size_t k = 0; k <= deviation_grid_size; ++k) {
    deviations[k] = static_cast<long double>(k) / N;
    dev_win[k] = win_against(F, n, bid_fn, deviations[k]);
  }

  RegretReport report;
  report.method = "grid";
  report.resolution = 1.0 / static_cast<double>(deviation_grid_size);
  bool any = false;
  for (std::size_t i = 0; i <= value_grid_size; ++i) {
    const long double v = static_cast<long double>(i) / static_cast<long double>(value_grid_size);
    const long double own_bid = bid_fn(v);
    const long double own = (v - own_bid) * win_against(F, n, bid_fn, own_bid);
    long double best = own;
    long double best_bid = own_bid;
    for (std::size_t k = 0; k <= deviation_grid_size && deviations[k] <= v; ++k) {
      const long double u = (v - deviations[k]) * dev_win[k];
      if (u > best) {
        best = u;
        best_bid = deviations[k];
      }
    }
    RegretSample sample;
    sample.value = static_cast<double>(v);
    sample.regret = static_cast<double>(best - own);
    sample.best_deviation = static_cast<double>(best_bid);
    sample.in_support = locally_increasing(F, v);
    if (sample.in_support) {
      if (!any || sample.regret > report.max_regret) {
        report.max_regret = std::max(0.0, sample.regret);
        report.argmax_value = sample.value;
        report.argmax_deviation = sample.best_deviation;
        any = true;
      }
    } else {
      report.out_of_support_max = std::max(report.out_of_support_max, sample.regret);
    }
    report.samples.push_back(sample);
  }
  return report;
}

BidFunction jump_point_bid_function(const cdfpa::BidGrid& grid, const cdfpa::JumpPointStrategy& s) {
  if (s.s.size() != grid.m() + 1) throw DomainError("strategy needs m+1 jump points");
  std::vector<long double> jumps;
  for (const auto& x : s.s) jumps.push_back(x.convert_to<long double>());
  std::vector<long double> bids;
  for (const auto& b : grid.bids()) bids.push_back(b.convert_to<long double>());
  return [jumps = std::move(jumps), bids = std::move(bids)](long double v) {
    if (v <= jumps[0]) return bids[0];
    const auto it = std::lower_bound(jumps.begin() + 1, jumps.end(), v);
    if (it == jumps.end()) return bids.back();
    return bids[static_cast<std::size_t>(it - jumps.begin()) - 1];
  };
}

long double sample_value(const CdfOracle<long double>& F, long double u, int steps) {
  long double lo = 0.0L;
  long double hi = 1.0L;
  for (int i = 0; i < steps; ++i) {
    const long double mid = (lo + hi) / 2;
    if (F(mid) < u) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return (lo + hi) / 2;
}

OpponentSample::OpponentSample(const CdfOracle<long double>& F, int n, const BidFunction& strategy,
                               std::uint64_t trials, std::uint64_t seed) {
  if (trials == 0) throw DomainError("trials must be positive");
  if (n < 2) throw DomainError("an auction needs n >= 2 bidders");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  top_.resize(trials);
  ties_.resize(trials);
  for (std::uint64_t t = 0; t < trials; ++t) {
    long double top = -1.0L;
    std::uint32_t count = 0;
    for (int k = 1; k < n; ++k) {
      const long double b = strategy(sample_value(F, uniform(rng)));
      if (b > top) {
        top = b;
        count = 1;
      } else if (b == top) {
        ++count;
      }
    }
    top_[t] = top;
    ties_[t] = count;
  }
}

long double OpponentSample::payoff(long double v, long double b, std::size_t t) const {
  if (b > top_[t]) return v - b;
  if (b == top_[t]) return (v - b) / static_cast<long double>(ties_[t] + 1);
  return 0.0L;
}

UtilityEstimate OpponentSample::utility(long double v, long double b) const {
  long double sum = 0, sum_sq = 0, wins = 0;
  for (std::size_t t = 0; t < top_.size(); ++t) {
    const long double x = payoff(v, b, t);
    sum += x;
    sum_sq += x * x;
    if (b > top_[t]) {
      wins += 1;
    } else if (b == top_[t]) {
      wins += 1.0L / static_cast<long double>(ties_[t] + 1);
    }
  }
  const auto T = static_cast<long double>(top_.size());
  const long double mean = sum / T;
  const long double var = top_.size() > 1 ? std::max(0.0L, (sum_sq - T * mean * mean) / (T - 1)) : 0.0L;
  return {static_cast<double>(mean), static_cast<double>(std::sqrt(var / T)), static_cast<double>(wins / T)};
}

UtilityEstimate OpponentSample::difference(long double v, long double b_dev, long double b_own) const {
  long double sum = 0, sum_sq = 0;
  for (std::size_t t = 0; t < top_.size(); ++t) {
    const long double x = payoff(v, b_dev, t) - payoff(v, b_own, t);
    sum += x;
    sum_sq += x * x;
  }
  const auto T = static_cast<long double>(top_.size());
  const long double mean = sum / T;
  const long double var = top_.size() > 1 ? std::max(0.0L, (sum_sq - T * mean * mean) / (T - 1)) : 0.0L;
  return {static_cast<double>(mean), static_cast<double>(std::sqrt(var / T)), 0.0};
}

UtilityEstimate monte_carlo_utility(const CdfOracle<long double>& F, int n, const BidFunction& strategy,
                                    long double v, long double b, std::uint64_t trials, std::uint64_t seed) {
  return OpponentSample(F, n, strategy, trials, seed).utility(v, b);
}

RegretReport monte_carlo_regret(const CdfOracle<long double>& F, int n, const BidFunction& strategy,
                                const std::vector<long double>& deviations, std::uint64_t trials,
                                std::uint64_t seed, std::size_t value_grid_size) {
  const OpponentSample play(F, n, strategy, trials, seed);
  RegretReport report;
  report.method = "monte-carlo";
  report.trials = trials;
  report.seed = seed;
  const std::size_t V = std::max<std::size_t>(2, value_grid_size);
  bool any = false;
  for (std::size_t i = 0; i < V; ++i) {
    const long double v = static_cast<long double>(i) / static_cast<long double>(V - 1);
    const long double own = strategy(v);
    UtilityEstimate best{0.0, 0.0, 0.0};
    long double best_bid = own;
    for (const long double b : deviations) {
      const auto d = play.difference(v, b, own);
      if (d.mean > best.mean) {
        best = d;
        best_bid = b;
      }
    }
    RegretSample sample;
    sample.value = static_cast<double>(v);
    sample.regret = best.mean;
    sample.best_deviation = static_cast<double>(best_bid);
    sample.in_support = locally_increasing(F, v);
    if (sample.in_support && (!any || sample.regret > report.max_regret)) {
      report.max_regret = sample.regret;
      report.argmax_value = sample.value;
      report.argmax_deviation = sample.best_deviation;
      report.standard_error = best.standard_error;
      any = true;
    } else if (!sample.in_support) {
      report.out_of_support_max = std::max(report.out_of_support_max, sample.regret);
    }
    report.samples.push_back(sample);
  }
  return report;
}

ShapeReport monotone_no_overbid_check(const BidFunction& strategy, std::size_t samples) {
  ShapeReport report;
  const std::size_t count = std::max<std::size_t>(2, samples);
  long double prev_x = 0.0L;
  long double prev_b = strategy(0.0L);
  if (prev_b > 0.0L) report.overbids.push_back({0.0, static_cast<double>(prev_b), static_cast<double>(prev_b), 0.0});
  for (std::size_t i = 1; i < count; ++i) {
    const long double x = static_cast<long double>(i) / static_cast<long double>(count - 1);
    const long double b = strategy(x);
    if (b > x) report.overbids.push_back({static_cast<double>(x), static_cast<double>(b), static_cast<double>(b), 0.0});
    if (b < prev_b) {
      report.decreases.push_back(
          {static_cast<double>(prev_x), static_cast<double>(x), static_cast<double>(prev_b), static_cast<double>(b)});
    }
    prev_x = x;
    prev_b = b;
  }
  report.pass = report.overbids.empty() && report.decreases.empty();
  return report;
}

}  // namespace fpa::verify
