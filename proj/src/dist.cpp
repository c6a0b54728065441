#include "fpa/dist.hpp"

#include <algorithm>
#include <sstream>

namespace fpa {

PiecewisePolyCdf::PiecewisePolyCdf(std::vector<Rational> breakpoints,
                                   std::vector<std::vector<Rational>> coeffs)
    : breakpoints_(std::move(breakpoints)), coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw DomainError("piecewise cdf needs at least one piece");
  if (breakpoints_.size() != coeffs_.size() + 1) {
    throw DomainError("piecewise cdf with " + std::to_string(coeffs_.size()) + " pieces needs " +
                      std::to_string(coeffs_.size() + 1) + " breakpoints, got " +
                      std::to_string(breakpoints_.size()));
  }
  std::size_t width = 1;
  for (const auto& row : coeffs_) width = std::max(width, row.size());
  for (auto& row : coeffs_) row.resize(width, Rational(0));

  fast_breakpoints_.reserve(breakpoints_.size());
  for (const auto& v : breakpoints_) fast_breakpoints_.push_back(v.convert_to<long double>());
  fast_coeffs_.reserve(coeffs_.size());
  for (const auto& row : coeffs_) {
    std::vector<long double> fast;
    fast.reserve(row.size());
    for (const auto& a : row) fast.push_back(a.convert_to<long double>());
    fast_coeffs_.push_back(std::move(fast));
  }
}

std::size_t PiecewisePolyCdf::locate(const Rational& x) const {
  for (std::size_t j = 0; j + 1 < pieces(); ++j) {
    if (x <= breakpoints_[j + 1]) return j;
  }
  return pieces() - 1;
}

template <>
Rational PiecewisePolyCdf::evaluate<Rational>(const Rational& x) const {
  return poly::evaluate(coeffs_[locate(x)], x);
}

template <>
long double PiecewisePolyCdf::evaluate<long double>(const long double& x) const {
  std::size_t j = 0;
  while (j + 1 < pieces() && x > fast_breakpoints_[j + 1]) ++j;
  return poly::evaluate(fast_coeffs_[j], x);
}

template <>
double PiecewisePolyCdf::evaluate<double>(const double& x) const {
  return static_cast<double>(evaluate<long double>(static_cast<long double>(x)));
}

template <>
Real PiecewisePolyCdf::evaluate<Real>(const Real& x) const {
  std::size_t j = 0;
  while (j + 1 < pieces() && x > Real(breakpoints_[j + 1])) ++j;
  const auto& row = coeffs_[j];
  Real acc(0);
  for (auto it = row.rbegin(); it != row.rend(); ++it) acc = acc * x + Real(*it);
  return acc;
}

Rational eval_cdf(const PiecewisePolyCdf& dist, const Rational& x) {
  if (x < 0 || x > 1) throw DomainError("cdf argument " + to_string(x) + " outside [0,1]");
  return dist.evaluate(x);
}

const char* to_string(Violation::Kind kind) {
  switch (kind) {
    case Violation::Kind::Breakpoints: return "breakpoints";
    case Violation::Kind::LeftEndpoint: return "left-endpoint";
    case Violation::Kind::RightEndpoint: return "right-endpoint";
    case Violation::Kind::Continuity: return "continuity";
    case Violation::Kind::Monotonicity: return "monotonicity";
    case Violation::Kind::Range: return "range";
  }
  return "unknown";
}

namespace {

using poly::Coeffs;

// Sign variations of a Sturm chain at x.
int sign_variations(const std::vector<Coeffs<Rational>>& chain, const Rational& x) {
  int variations = 0;
  int last = 0;
  for (const auto& p : chain) {
    const Rational value = poly::evaluate(p, x);
    const int sign = value > 0 ? 1 : (value < 0 ? -1 : 0);
    if (sign == 0) continue;
    if (last != 0 && sign != last) ++variations;
    last = sign;
  }
  return variations;
}

std::vector<Coeffs<Rational>> sturm_chain(const Coeffs<Rational>& p) {
  std::vector<Coeffs<Rational>> chain{p, poly::derivative(p)};
  poly::trim(chain.back());
  while (!chain.back().empty()) {
    Coeffs<Rational> r = poly::remainder(chain[chain.size() - 2], chain.back());
    for (auto& c : r) c = -c;
    if (r.empty()) break;
    chain.push_back(std::move(r));
  }
  return chain;
}

// A point strictly inside (lo, hi) where p does not vanish.
Rational split_point(const Coeffs<Rational>& p, const Rational& lo, const Rational& hi) {
  for (long k = 1;; ++k) {
    Rational m = lo + (hi - lo) * Rational(k, k + 1);
    if (poly::evaluate(p, m) != 0) return m;
  }
}

// Isolates the roots of the square-free polynomial s in (lo, hi); s must not
// vanish at lo or hi. Appends the endpoints of isolating intervals, each of
// which lies strictly inside (a, b).
void isolate(const Coeffs<Rational>& s, const std::vector<Coeffs<Rational>>& chain,
             const Rational& lo, const Rational& hi, const Rational& a, const Rational& b,
             std::vector<Rational>& samples) {
  const int roots = sign_variations(chain, lo) - sign_variations(chain, hi);
  if (roots == 0) return;
  if (roots == 1 && lo != a && hi != b) {
    samples.push_back(lo);
    samples.push_back(hi);
    return;
  }
  const Rational mid = split_point(s, lo, hi);
  isolate(s, chain, lo, mid, a, b, samples);
  isolate(s, chain, mid, hi, a, b, samples);
}

// True when p >= 0 everywhere on [a, b].
bool nonnegative_on(Coeffs<Rational> p, const Rational& a, const Rational& b) {
  poly::trim(p);
  if (p.empty()) return true;
  if (p.size() == 1) return p[0] > 0;
  // Square-free part shares the roots of p; p keeps one sign between them.
  Coeffs<Rational> s = poly::divmod(p, poly::gcd(p, poly::derivative(p))).first;
  // Divide out roots sitting on the endpoints so the Sturm counts are clean.
  for (const Rational& end : {a, b}) {
    if (poly::evaluate(s, end) == 0) s = poly::divmod(s, Coeffs<Rational>{-end, Rational(1)}).first;
  }
  std::vector<Rational> samples;
  if (s.size() > 1) {
    const auto chain = sturm_chain(s);
    isolate(s, chain, a, b, a, b, samples);
  }
  if (samples.empty()) samples.push_back(split_point(p, a, b));
  return std::all_of(samples.begin(), samples.end(),
                     [&](const Rational& x) { return poly::evaluate(p, x) >= 0; });
}

}  // namespace

ValidationReport validate(const PiecewisePolyCdf& dist, MonotonicityCheck mode) {
  ValidationReport report;
  auto add = [&](Violation::Kind kind, std::size_t index, const Rational& point, std::string detail) {
    report.violations.push_back(Violation{kind, index, point, std::move(detail)});
  };
  const auto& v = dist.breakpoints();
  const std::size_t k = dist.pieces();

  if (v.front() != 0) add(Violation::Kind::Breakpoints, 0, v.front(), "first breakpoint must be 0");
  if (v.back() != 1) add(Violation::Kind::Breakpoints, k, v.back(), "last breakpoint must be 1");
  bool ordered = true;
  for (std::size_t j = 0; j + 1 < v.size(); ++j) {
    if (!(v[j] < v[j + 1])) {
      ordered = false;
      add(Violation::Kind::Breakpoints, j + 1, v[j + 1], "breakpoints must be strictly increasing");
    }
  }

  const Rational left = poly::evaluate(dist.piece(0), v.front());
  if (left != 0) add(Violation::Kind::LeftEndpoint, 1, v.front(), "F_1(0) = " + to_string(left));
  const Rational right = poly::evaluate(dist.piece(k - 1), v.back());
  if (right != 1) add(Violation::Kind::RightEndpoint, k, v.back(), "F_k(1) = " + to_string(right));

  for (std::size_t j = 0; j + 1 < k; ++j) {
    const Rational lhs = poly::evaluate(dist.piece(j), v[j + 1]);
    const Rational rhs = poly::evaluate(dist.piece(j + 1), v[j + 1]);
    if (lhs != rhs) {
      add(Violation::Kind::Continuity, j + 1, v[j + 1],
          "F_" + std::to_string(j + 1) + " = " + to_string(lhs) + " but F_" + std::to_string(j + 2) +
              " = " + to_string(rhs));
    }
  }
  if (!ordered) return report;

  const long steps = 64 * static_cast<long>(dist.degree() + 1);
  for (std::size_t j = 0; j < k; ++j) {
    const auto& p = dist.piece(j);
    const Rational& lo = v[j];
    const Rational& hi = v[j + 1];
    bool monotone_reported = false;
    bool range_reported = false;
    Rational previous = poly::evaluate(p, lo);
    for (long t = 0; t <= steps; ++t) {
      const Rational x = lo + (hi - lo) * Rational(t, steps);
      const Rational y = poly::evaluate(p, x);
      if (!range_reported && (y < 0 || y > 1)) {
        range_reported = true;
        add(Violation::Kind::Range, j + 1, x, "F(x) = " + to_string(y) + " outside [0,1]");
      }
      if (mode == MonotonicityCheck::Grid && !monotone_reported && y < previous) {
        monotone_reported = true;
        add(Violation::Kind::Monotonicity, j + 1, x, "F decreases to " + to_string(y));
      }
      previous = y;
    }
    if (mode == MonotonicityCheck::Exact && !nonnegative_on(poly::derivative(p), lo, hi)) {
      add(Violation::Kind::Monotonicity, j + 1, lo, "derivative takes negative values on the piece");
    }
  }
  return report;
}

Rational support_infimum(const PiecewisePolyCdf& dist) {
  // A nondecreasing polynomial piece that vanishes at an interior point
  // vanishes on a whole interval, hence identically; so F > 0 right after
  // the first piece that is not the zero polynomial begins.
  for (std::size_t j = 0; j < dist.pieces(); ++j) {
    if (!poly::is_zero(dist.piece(j))) return dist.breakpoints()[j];
  }
  return dist.breakpoints().back();
}

PiecewisePolyCdf strongly_increasing_transform(const PiecewisePolyCdf& dist, const Rational& delta) {
  if (!(delta > 0 && delta < 1)) throw DomainError("transform requires 0 < delta < 1, got " + to_string(delta));
  const Rational keep = 1 - delta;
  std::vector<std::vector<Rational>> coeffs;
  coeffs.reserve(dist.pieces());
  for (std::size_t j = 0; j < dist.pieces(); ++j) {
    std::vector<Rational> row = dist.piece(j);
    if (row.size() < 2) row.resize(2, Rational(0));
    for (auto& a : row) a *= keep;
    row[1] += delta;
    coeffs.push_back(std::move(row));
  }
  return PiecewisePolyCdf(dist.breakpoints(), std::move(coeffs));
}

Rational lipschitz_bound(const PiecewisePolyCdf& dist) {
  Rational bound = 0;
  for (std::size_t j = 0; j < dist.pieces(); ++j) {
    const auto& v = dist.breakpoints();
    const Rational reach = std::max(Rational(abs(v[j])), Rational(abs(v[j + 1])));
    const auto deriv = poly::derivative(dist.piece(j));
    Rational piece_bound = 0;
    Rational power = 1;
    for (const auto& c : deriv) {
      piece_bound += Rational(abs(c)) * power;
      power *= reach;
    }
    bound = std::max(bound, piece_bound);
  }
  return bound > 0 ? bound : Rational(1);
}

PiecewisePolyCdf uniform_cdf() { return PiecewisePolyCdf({0, 1}, {{0, 1}}); }

PiecewisePolyCdf power_cdf(unsigned exponent) {
  if (exponent == 0) throw DomainError("power cdf exponent must be at least 1");
  std::vector<Rational> row(exponent + 1, Rational(0));
  row.back() = 1;
  return PiecewisePolyCdf({0, 1}, {row});
}

PiecewisePolyCdf make_adversarial_cdf(const AdversarialCdfParams& p) {
  if (!(p.v1 >= Rational(2, 3) && p.v1 < 1)) throw DomainError("adversarial cdf needs v1 in [2/3, 1)");
  if (!(p.gap > 0) || p.v1 + p.gap > 1) throw DomainError("adversarial cdf needs gap > 0 and v1 + gap <= 1");
  if (!(p.kink > 0 && p.kink < p.gap)) throw DomainError("adversarial cdf needs 0 < kink < gap");

  const Rational v2 = p.v1 + p.gap;
  const Rational knee = v2 - p.kink;
  const Rational flat_slope = p.kink / (p.gap - p.kink);
  const Rational steep_slope = (p.gap - p.kink) / p.kink;
  // Line through (x0, y0) with the given slope.
  auto line = [](const Rational& x0, const Rational& y0, const Rational& slope) {
    return std::vector<Rational>{y0 - slope * x0, slope};
  };

  std::vector<Rational> breaks{0, p.v1, knee, v2};
  std::vector<std::vector<Rational>> coeffs{
      {0, 1},
      line(p.v1, p.v1, flat_slope),
      line(knee, p.v1 + p.kink, steep_slope),
  };
  if (v2 < 1) {
    breaks.push_back(1);
    coeffs.push_back({0, 1});
  }
  return PiecewisePolyCdf(std::move(breaks), std::move(coeffs));
}

}  // namespace fpa
