#pragma once

// Symmetric equilibria with a finite bid grid 0 = b_1 < ... < b_m < 1.
//
// A monotone strategy is stored by its jump points 0 = s_0 <= ... <= s_m = 1:
// a bidder with value in (s_{j-1}, s_j] bids b_j. Bidding b_j against such a
// profile wins with probability Delta(s_{j-1}, s_j) (uniform tie-breaking),
// so u(b_j; v) = (v - b_j) Delta(s_{j-1}, s_j).
//
// compute_strategy builds the profile from the top bid downwards for a given
// utility level U; solve bisects on U until the lowest jump point is pinned
// at (almost) zero.

#include "fpa/dist.hpp"

#include <optional>
#include <vector>

namespace fpa::cdfpa {

class BidGrid {
 public:
  /// Throws DomainError unless bids are strictly increasing, b_1 = 0 and
  /// b_m < 1.
  explicit BidGrid(std::vector<Rational> bids);

  /// b_i = (i-1)/m for i = 1..m.
  static BidGrid equidistant(std::size_t m);

  std::size_t m() const { return bids_.size(); }
  /// 1-based; bid(m+1) is the sentinel 1.
  const Rational& bid(std::size_t i) const;
  const std::vector<Rational>& bids() const { return bids_; }
  /// min_i (b_{i+1} - b_i) with b_{m+1} = 1.
  const Rational& alpha() const { return alpha_; }

 private:
  std::vector<Rational> bids_;
  Rational alpha_;
  Rational one_{1};
};

struct JumpPointStrategy {
  std::vector<Real> s;  ///< s_0..s_m
  std::vector<Real> U;  ///< U_0..U_m
};

/// phi(a, b) = (1/n) sum_{i=0}^{n-1} a^{n-1-i} b^i.
Real phi(const Real& a, const Real& b, int n);

/// Delta(x, y) = phi(F(x), F(y)). Throws DomainError when x > y.
Real delta_win_prob(const CdfOracle<Real>& F, int n, const Real& x, const Real& y);

/// u(b_j; v) = (v - b_j) Delta(s_{j-1}, s_j), j 1-based.
Real utility(const CdfOracle<Real>& F, int n, const JumpPointStrategy& s, const BidGrid& grid, std::size_t j,
             const Real& v);

/// Binary-search step budget ceil(log2(n L / delta)) for branch (c).
std::uint64_t bisection_budget(int n, double L, const Real& delta);

/// One pass of the top-down construction at utility level U. The oracle's
/// Lipschitz constant sets the bisection budget. Throws DomainError for
/// delta <= 0 and PrecisionError when a bisection misses its tolerance.
JumpPointStrategy compute_strategy(const CdfOracle<Real>& F, int n, const BidGrid& grid, const Real& U,
                                   const Real& delta);

struct Certificate {
  Real gamma;
  bool pass = false;
  bool well_formed = false;  ///< s_0 = 0, s_m = 1, nondecreasing
  Real max_residual;         ///< largest |u - U| (or u - U for unused bids)
  std::vector<Real> residual_used;    ///< per i: max of the two gaps, or 0
  std::vector<Real> residual_unused;  ///< per i: u(b_i; s_i) - U_i, or 0
  std::vector<bool> ledger_equal;     ///< per i: U_{i-1} = U_i where required
  std::vector<bool> above_bid;        ///< per i: s_{i-1} >= b_i
  Real implied_epsilon;               ///< 2 gamma m
};

/// Tolerance for U_{i-1} = U_i on unused bids.
Real ledger_tolerance();

Certificate check_conditions(const CdfOracle<Real>& F, int n, const BidGrid& grid, const JumpPointStrategy& s,
                             const Real& gamma);

/// (eps^{5n} alpha^{3n} / (100 n^3 L^4))^m.
Rational theoretical_delta(int n, const BidGrid& grid, const Rational& eps, const Rational& L);

/// ceil(log2(1/delta)) for delta in (0,1].
unsigned log2_inverse(const Rational& delta);

struct SolveParams {
  /// Unset: the worst-case delta. Set: start from this delta and accept the
  /// result only if it is certified.
  std::optional<Rational> delta;
  /// 0 picks ceil(log2(1/delta)) + 16 (at least 64).
  unsigned precision_bits = 0;
  /// Square delta after a failed certification, down to the worst-case delta.
  bool adaptive = true;
};

struct SolveResult {
  JumpPointStrategy strategy;
  /// Certificate under the transformed cdf with gamma = eps_inner / 2m.
  Certificate certificate;
  Rational transform_delta;  ///< eps / 3n
  Rational inner_epsilon;    ///< eps / 3n
  Rational inner_lipschitz;  ///< transform_delta + (1 - transform_delta) L
  Rational delta;            ///< delta of the accepted run
  unsigned precision_bits = 0;
  unsigned attempts = 0;
  std::uint64_t outer_iterations = 0;
  Real s0_right;  ///< s_0 of the right bracket before it is reset to 0
  bool pinned = false;  ///< s0_right <= min(alpha/2, eps_inner / (4 m n L'))
};

/// Throws DomainError for eps outside (0,1) or n < 2, ConsistencyError when
/// U = 1 does not give s_0 > 0, PrecisionError when precision runs out.
SolveResult solve(const CdfOracle<Real>& F, int n, const BidGrid& grid, const Rational& eps,
                  const SolveParams& params = {});

}  // namespace fpa::cdfpa
