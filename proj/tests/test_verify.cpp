#include "doctest.h"

#include "fpa/cdfpa.hpp"
#include "fpa/verify.hpp"
#include "support/oracles.hpp"

#include <random>

using fpa::Rational;
using fpa::Real;
namespace cd = fpa::cdfpa;
namespace vf = fpa::verify;

namespace {

cd::JumpPointStrategy jumps(std::initializer_list<double> s) {
  cd::JumpPointStrategy out;
  for (double x : s) out.s.emplace_back(x);
  out.U.assign(out.s.size(), Real(0));
  return out;
}

}  // namespace

TEST_CASE("tie-aware win probability") {
  CHECK(vf::win_probability(2, 0.0L, 1.0L) == doctest::Approx(0.5));
  CHECK(vf::win_probability(3, 0.0L, 1.0L) == doctest::Approx(1.0 / 3));
  CHECK(vf::win_probability(4, 1.0L, 0.0L) == 1.0L);
  CHECK(vf::win_probability(4, 0.5L, 0.0L) == 0.125L);
  // Agrees with the closed-form ratio when ties come from an interval.
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  bool agree = true;
  for (int k = 0; k < 1000; ++k) {
    long double a = unit(rng), b = unit(rng);
    if (a > b) std::swap(a, b);
    const int n = 2 + static_cast<int>(rng() % 5);
    agree = agree && std::fabs(vf::win_probability(n, a, b - a) - oracle::ratio_win(n, a, b)) < 1e-15L;
  }
  CHECK(agree);
}

TEST_CASE("jump point bid function") {
  const cd::BidGrid grid = cd::BidGrid::equidistant(4);
  const auto bid = vf::jump_point_bid_function(grid, jumps({0, 1.0 / 3, 1, 1, 1}));
  CHECK(bid(0.2L) == 0);
  CHECK(bid(0.0L) == 0);
  CHECK(bid(0.5L) == 0.25L);
  CHECK(bid(1.0L) == 0.25L);
}

TEST_CASE("discrete regret") {
  fpa::PrecisionScope scope(128);
  const auto F = fpa::make_oracle<Real>(fpa::uniform_cdf());

  SUBCASE("single bid is always an equilibrium") {
    const auto r = vf::epsilon_bne_check_cdfpa(F, 3, cd::BidGrid({0}), jumps({0, 1}));
    CHECK(r.max_regret == 0);
    CHECK(r.method == "exact");
  }

  SUBCASE("equilibrium versus a perturbed strategy") {
    const auto grid = cd::BidGrid::equidistant(4);
    const auto good = vf::epsilon_bne_check_cdfpa(F, 2, grid, jumps({0, 1.0 / 3, 1, 1, 1}));
    CHECK(good.max_regret < 1e-12);
    // Pushing s_1 up by alpha/2 leaves values just above 1/3 stuck on bid 0.
    const auto bad = vf::epsilon_bne_check_cdfpa(F, 2, grid, jumps({0, 1.0 / 3 + 1.0 / 8, 1, 1, 1}));
    CHECK(bad.max_regret > 0.04);
    CHECK(bad.argmax_value > 1.0 / 3);
    CHECK(bad.argmax_value <= 11.0 / 24 + 1e-12);
    CHECK(bad.argmax_deviation == 0.25);
  }

  SUBCASE("agrees with the brute-force oracle") {
    const auto Fd = fpa::make_oracle<long double>(fpa::power_cdf(2));
    const auto Fq = fpa::make_oracle<Real>(fpa::power_cdf(2));
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int k = 0; k < 20; ++k) {
      const double s1 = 0.5 + 0.5 * unit(rng);
      const auto r = vf::epsilon_bne_check_cdfpa(Fq, 3, cd::BidGrid({0, Rational(1, 2)}), jumps({0, s1, 1}), 4096);
      const auto o = oracle::discrete_regret(Fd.evaluator(), 3, {0, 0.5L}, {0, s1, 1});
      CHECK(r.max_regret == doctest::Approx(static_cast<double>(o.regret)).epsilon(1e-9));
    }
  }

  SUBCASE("malformed strategies are rejected") {
    const auto grid = cd::BidGrid::equidistant(2);
    CHECK_THROWS_AS(vf::epsilon_bne_check_cdfpa(F, 2, grid, jumps({0, 1})), fpa::DomainError);
    CHECK_THROWS_AS(vf::epsilon_bne_check_cdfpa(F, 2, grid, jumps({0, 0.5, 0.9})), fpa::DomainError);
    CHECK_THROWS_AS(vf::epsilon_bne_check_cdfpa(F, 2, grid, jumps({0, 0.7, 0.5, 1})), fpa::DomainError);
  }
}

TEST_CASE("continuous regret") {
  const auto F = fpa::make_oracle<long double>(fpa::uniform_cdf());

  SUBCASE("canonical equilibrium") {
    for (int n = 2; n <= 4; ++n) {
      const long double k = static_cast<long double>(n - 1) / n;
      const auto r = vf::epsilon_bne_check_ccfpa(F, n, [k](long double v) { return k * v; });
      CHECK(r.max_regret <= 0x1p-20);
    }
  }

  SUBCASE("everyone bids zero") {
    const auto r = vf::epsilon_bne_check_ccfpa(F, 2, [](long double) { return 0.0L; }, 1024, 64);
    CHECK(r.max_regret == doctest::Approx(0.5 - 1.0 / 1024).epsilon(1e-12));
    CHECK(r.argmax_value == 1.0);
    CHECK(r.argmax_deviation == doctest::Approx(1.0 / 1024));
  }

  SUBCASE("decreasing bid functions are rejected") {
    CHECK_THROWS_AS(vf::epsilon_bne_check_ccfpa(F, 2, [](long double v) { return 1 - v; }), fpa::DomainError);
  }
}

TEST_CASE("monte carlo estimates") {
  const auto F = fpa::make_oracle<long double>(fpa::uniform_cdf());
  const auto half = [](long double v) { return v / 2; };

  const auto top = vf::monte_carlo_utility(F, 2, half, 1.0L, 0.5L, 100000, 1);
  CHECK(top.mean == doctest::Approx(0.5).epsilon(0.02));

  const auto quarter = vf::monte_carlo_utility(F, 2, half, 1.0L, 0.25L, 100000, 1);
  CHECK(std::fabs(quarter.mean - 0.375) <= 4 * quarter.standard_error);

  const auto pooled = vf::monte_carlo_utility(F, 3, [](long double) { return 0.0L; }, 1.0L, 0.0L, 1000, 4);
  CHECK(pooled.win_rate == doctest::Approx(1.0 / 3));

  // x^2 with three bidders: beta*(x) = 4x/5, so winning with b has probability (5b/4)^4.
  const auto G = fpa::make_oracle<long double>(fpa::power_cdf(2));
  const vf::OpponentSample play(G, 3, [](long double v) { return 0.8L * v; }, 100000, 7);
  for (const long double b : {0.2L, 0.4L, 0.6L}) {
    const long double v = 0.9L;
    const long double analytic = (v - b) * std::pow(1.25L * b, 4.0L);
    const auto est = play.utility(v, b);
    CHECK(std::fabs(est.mean - analytic) <= 4 * est.standard_error + 1e-12);
  }

  const auto again = vf::monte_carlo_utility(F, 2, half, 0.7L, 0.3L, 5000, 11);
  CHECK(again.mean == vf::monte_carlo_utility(F, 2, half, 0.7L, 0.3L, 5000, 11).mean);
  CHECK_THROWS_AS(vf::monte_carlo_utility(F, 2, half, 1.0L, 0.5L, 0, 1), fpa::DomainError);
}

TEST_CASE("monte carlo regret") {
  const auto F = fpa::make_oracle<long double>(fpa::uniform_cdf());
  std::vector<long double> deviations;
  for (int k = 0; k <= 64; ++k) deviations.push_back(k / 64.0L);

  const auto good = vf::monte_carlo_regret(F, 2, [](long double v) { return v / 2; }, deviations, 20000, 1);
  CHECK(good.max_regret <= 0.01);
  CHECK(good.method == "monte-carlo");
  CHECK(good.trials == 20000);

  const auto bad = vf::monte_carlo_regret(F, 2, [](long double) { return 0.0L; }, deviations, 20000, 1);
  CHECK(bad.max_regret == doctest::Approx(0.5 - 1.0 / 64).epsilon(0.02));
  CHECK(bad.argmax_value == 1.0);
}

TEST_CASE("shape check witnesses") {
  CHECK(vf::monotone_no_overbid_check([](long double v) { return v / 2; }).pass);
  const auto over = vf::monotone_no_overbid_check([](long double v) { return std::min(1.0L, v + 0.1L); }, 101);
  CHECK_FALSE(over.pass);
  CHECK_FALSE(over.overbids.empty());
  CHECK(over.overbids.front().x == 0.0);
  CHECK(over.decreases.empty());
  const auto down = vf::monotone_no_overbid_check([](long double v) { return v < 0.5L ? v : v / 4; }, 101);
  CHECK_FALSE(down.pass);
  REQUIRE(down.decreases.size() == 1);
  CHECK(down.decreases.front().x < 0.5);
  CHECK(down.decreases.front().y >= 0.5);
}

TEST_CASE("Lipschitz bounds of the win kernels") {
  fpa::PrecisionScope scope(96);
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto F = fpa::make_oracle<Real>(oracle::two_piece_cdf());
  const double L = F.lipschitz();
  bool phi_ok = true, delta_ok = true;
  for (int k = 0; k < 10000; ++k) {
    const int n = 2 + static_cast<int>(rng() % 4);
    Real a(unit(rng)), b(unit(rng)), c(unit(rng)), d(unit(rng));
    if (a > b) std::swap(a, b);
    if (c > d) std::swap(c, d);
    const Real dist = abs(a - c) + abs(b - d);
    phi_ok = phi_ok && abs(cd::phi(a, b, n) - cd::phi(c, d, n)) <= n * dist + Real(1e-25);
    delta_ok = delta_ok &&
               abs(cd::delta_win_prob(F, n, a, b) - cd::delta_win_prob(F, n, c, d)) <= n * L * dist + Real(1e-25);
  }
  CHECK(phi_ok);
  CHECK(delta_ok);
}
