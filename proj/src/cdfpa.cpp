#include "fpa/cdfpa.hpp"

#include <algorithm>

namespace fpa::cdfpa {

namespace {

Rational rational_power(const Rational& base, long exponent) {
  Rational out = 1;
  for (long i = 0; i < exponent; ++i) out *= base;
  return out;
}

unsigned precision_bits_of(const Real& x) { return static_cast<unsigned>(mpfr_get_prec(x.backend().data())); }

}  // namespace

BidGrid::BidGrid(std::vector<Rational> bids) : bids_(std::move(bids)) {
  if (bids_.empty()) throw DomainError("bid grid is empty");
  if (bids_.front() != 0) throw DomainError("lowest bid must be 0");
  if (bids_.back() >= 1) throw DomainError("highest bid must be below 1");
  for (std::size_t i = 1; i < bids_.size(); ++i) {
    if (!(bids_[i] > bids_[i - 1])) throw DomainError("bids must be strictly increasing");
  }
  alpha_ = Rational(1) - bids_.back();
  for (std::size_t i = 1; i < bids_.size(); ++i) alpha_ = std::min(alpha_, Rational(bids_[i] - bids_[i - 1]));
}

BidGrid BidGrid::equidistant(std::size_t m) {
  if (m == 0) throw DomainError("bid grid needs at least one bid");
  std::vector<Rational> bids;
  for (std::size_t i = 0; i < m; ++i) bids.emplace_back(static_cast<long>(i), static_cast<long>(m));
  return BidGrid(std::move(bids));
}

const Rational& BidGrid::bid(std::size_t i) const {
  if (i == 0 || i > bids_.size() + 1) throw DomainError("bid index out of range");
  return i == bids_.size() + 1 ? one_ : bids_[i - 1];
}

Real phi(const Real& a, const Real& b, int n) {
  // Horner in b/a would divide by zero; accumulate powers directly.
  Real sum = 0;
  Real bpow = 1;
  std::vector<Real> apow(static_cast<std::size_t>(n));
  apow[0] = 1;
  for (int i = 1; i < n; ++i) apow[static_cast<std::size_t>(i)] = apow[static_cast<std::size_t>(i - 1)] * a;
  for (int i = 0; i < n; ++i) {
    sum += apow[static_cast<std::size_t>(n - 1 - i)] * bpow;
    bpow *= b;
  }
  return Real(sum / n);
}

Real delta_win_prob(const CdfOracle<Real>& F, int n, const Real& x, const Real& y) {
  if (x > y) throw DomainError("Delta(x, y) needs x <= y");
  return phi(F(x), F(y), n);
}

Real utility(const CdfOracle<Real>& F, int n, const JumpPointStrategy& s, const BidGrid& grid, std::size_t j,
             const Real& v) {
  if (j == 0 || j > grid.m() || j >= s.s.size()) throw DomainError("bid index out of range");
  const Real b = from_rational<Real>(grid.bid(j));
  return Real((v - b) * delta_win_prob(F, n, s.s[j - 1], s.s[j]));
}

std::uint64_t bisection_budget(int n, double L, const Real& delta) {
  if (!(delta > 0)) throw DomainError("delta must be positive");
  const Real ratio = Real(n) * Real(L) / delta;
  if (ratio <= 1) return 1;
  const Real steps = ceil(log2(ratio));
  return std::max<std::uint64_t>(1, steps.convert_to<std::uint64_t>());
}

JumpPointStrategy compute_strategy(const CdfOracle<Real>& F, int n, const BidGrid& grid, const Real& U,
                                   const Real& delta) {
  if (n < 2) throw DomainError("an auction needs n >= 2 bidders");
  if (!(delta > 0)) throw DomainError("delta must be positive");
  const std::size_t m = grid.m();
  const std::uint64_t budget = bisection_budget(n, F.lipschitz(), delta);

  JumpPointStrategy out;
  out.s.assign(m + 1, Real(0));
  out.U.assign(m + 1, Real(0));
  out.s[m] = 1;
  out.U[m] = U;
  Real Fs = F(out.s[m]);

  for (std::size_t i = m; i >= 1; --i) {
    const Real b = from_rational<Real>(grid.bid(i));
    const Real& si = out.s[i];
    const Real& Ui = out.U[i];
    if (!(si > b)) throw ConsistencyError("jump point fell to its bid");
    const Real width = si - b;

    if (width * phi(Fs, Fs, n) <= Ui) {
      out.s[i - 1] = si;
      out.U[i - 1] = Ui;
      continue;
    }
    const Real Fb = F(b);
    if (width * phi(Fb, Fs, n) >= Ui) {
      out.s[i - 1] = b;
      out.U[i - 1] = 0;
      Fs = Fb;
      continue;
    }

    Real lo = b;
    Real hi = si;
    Real mid;
    Real Fm;
    bool found = false;
    for (std::uint64_t step = 0; step < budget; ++step) {
      mid = (lo + hi) / 2;
      Fm = F(mid);
      const Real value = width * phi(Fm, Fs, n);
      if (abs(value - Ui) <= delta) {
        found = true;
        break;
      }
      if (value < Ui) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    if (!found) {
      throw PrecisionError("jump point search exceeded " + std::to_string(budget) +
                           " steps; raise the precision (FPA_PRECISION_BITS) or delta");
    }
    out.U[i - 1] = (mid - b) * phi(Fm, Fs, n);
    out.s[i - 1] = mid;
    Fs = Fm;
  }
  return out;
}

Real ledger_tolerance() { return Real(ldexp(Real(1), -40)); }

Certificate check_conditions(const CdfOracle<Real>& F, int n, const BidGrid& grid, const JumpPointStrategy& s,
                             const Real& gamma) {
  const std::size_t m = grid.m();
  Certificate cert;
  cert.gamma = gamma;
  cert.implied_epsilon = 2 * gamma * Real(static_cast<long>(m));
  cert.max_residual = 0;
  if (s.s.size() != m + 1 || s.U.size() != m + 1) return cert;

  unsigned bits = precision_bits_of(gamma);
  for (const auto& x : s.s) bits = std::max(bits, precision_bits_of(x));
  for (const auto& x : s.U) bits = std::max(bits, precision_bits_of(x));
  PrecisionScope scope(bits);

  cert.well_formed = s.s[0] == 0 && s.s[m] == 1;
  for (std::size_t i = 1; i <= m; ++i) cert.well_formed = cert.well_formed && s.s[i - 1] <= s.s[i];

  const Real tol = ledger_tolerance();
  std::vector<Real> Fv;
  Fv.reserve(m + 1);
  for (const auto& x : s.s) Fv.push_back(F(x));

  bool pass = cert.well_formed;
  cert.residual_used.assign(m, Real(0));
  cert.residual_unused.assign(m, Real(0));
  cert.ledger_equal.assign(m, true);
  cert.above_bid.assign(m, true);
  for (std::size_t i = 1; i <= m; ++i) {
    const Real b = from_rational<Real>(grid.bid(i));
    const Real win = phi(Fv[i - 1], Fv[i], n);
    cert.above_bid[i - 1] = s.s[i - 1] >= b;
    pass = pass && cert.above_bid[i - 1];
    if (s.s[i - 1] < s.s[i]) {
      const Real top = abs((s.s[i] - b) * win - s.U[i]);
      const Real bottom = abs((s.s[i - 1] - b) * win - s.U[i - 1]);
      const Real r = top > bottom ? top : bottom;
      cert.residual_used[i - 1] = r;
      if (r > cert.max_residual) cert.max_residual = r;
      pass = pass && r <= gamma;
    } else {
      cert.ledger_equal[i - 1] = abs(s.U[i - 1] - s.U[i]) <= tol;
      const Real excess = (s.s[i] - b) * win - s.U[i];
      cert.residual_unused[i - 1] = excess;
      if (excess > cert.max_residual) cert.max_residual = excess;
      pass = pass && cert.ledger_equal[i - 1] && excess <= gamma;
    }
  }
  cert.pass = pass;
  return cert;
}

Rational theoretical_delta(int n, const BidGrid& grid, const Rational& eps, const Rational& L) {
  const Rational base = rational_power(eps, 5L * n) * rational_power(grid.alpha(), 3L * n) /
                        (Rational(100L * n * n * n) * rational_power(L, 4));
  return rational_power(base, static_cast<long>(grid.m()));
}

unsigned log2_inverse(const Rational& delta) {
  if (!(delta > 0 && delta <= 1)) throw DomainError("delta must lie in (0,1]");
  const Integer p = numerator(delta);
  const Integer q = denominator(delta);
  // Smallest k with 2^k p >= q.
  long k = static_cast<long>(msb(q)) - static_cast<long>(msb(p)) - 1;
  if (k < 0) k = 0;
  while ((p << static_cast<unsigned>(k)) < q) ++k;
  while (k > 0 && (p << static_cast<unsigned>(k - 1)) >= q) --k;
  return static_cast<unsigned>(k);
}

SolveResult solve(const CdfOracle<Real>& F, int n, const BidGrid& grid, const Rational& eps,
                  const SolveParams& params) {
  if (n < 2) throw DomainError("an auction needs n >= 2 bidders");
  if (!(eps > 0 && eps < 1)) throw DomainError("epsilon must lie in (0,1)");

  const std::size_t m = grid.m();
  const Rational L(F.lipschitz());
  const Rational transform = eps / (3 * n);
  const Rational eps_in = transform;
  const Rational L_in = transform + (1 - transform) * L;
  const Rational worst = theoretical_delta(n, grid, eps_in, L_in);
  const Rational cap = eps_in / (4 * static_cast<long>(m));
  const Rational pin = std::min(Rational(grid.alpha() / 2), Rational(eps_in / (4 * static_cast<long>(m) * n * L_in)));
  const Rational gamma = eps_in / (2 * static_cast<long>(m));

  Rational delta = params.delta ? *params.delta : worst;
  if (!(delta > 0)) throw DomainError("delta must be positive");
  delta = std::min(delta, cap);

  for (unsigned attempt = 1;; ++attempt) {
    const unsigned bits = std::max({64u, params.precision_bits, log2_inverse(delta) + 16});
    PrecisionScope scope(bits);
    const auto Fp = strongly_increasing_transform(F, from_rational<Real>(transform));
    const Real d = from_rational<Real>(delta);

    Real Ul = 0;
    Real Ur = 1;
    JumpPointStrategy right = compute_strategy(Fp, n, grid, Ur, d);
    if (right.s[0] == 0) throw ConsistencyError("utility level 1 did not lift the lowest jump point");
    std::uint64_t iterations = 0;
    while (Ur - Ul > d) {
      const Real U = (Ul + Ur) / 2;
      JumpPointStrategy s = compute_strategy(Fp, n, grid, U, d);
      if (s.s[0] == 0) {
        Ul = U;
      } else {
        Ur = U;
        right = std::move(s);
      }
      ++iterations;
    }

    SolveResult result;
    result.s0_right = right.s[0];
    right.s[0] = 0;
    result.pinned = result.s0_right <= from_rational<Real>(pin);
    result.certificate = check_conditions(Fp, n, grid, right, from_rational<Real>(gamma));
    result.strategy = std::move(right);
    result.transform_delta = transform;
    result.inner_epsilon = eps_in;
    result.inner_lipschitz = L_in;
    result.delta = delta;
    result.precision_bits = bits;
    result.attempts = attempt;
    result.outer_iterations = iterations;

    const bool accepted = result.pinned && result.certificate.pass;
    if (accepted || !params.adaptive || delta <= worst) return result;
    delta = std::max(Rational(delta * delta), worst);
  }
}

}  // namespace fpa::cdfpa
