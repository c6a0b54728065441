#include "doctest.h"

#include "fpa/ccfpa_explicit.hpp"
#include "support/oracles.hpp"

#include <random>

using fpa::Rational;
namespace ex = fpa::explicit_model;

namespace {

std::vector<Rational> R(std::initializer_list<Rational> xs) { return xs; }

std::vector<fpa::PiecewisePolyCdf> cdfs() {
  return {fpa::uniform_cdf(), fpa::power_cdf(2), fpa::power_cdf(3), oracle::two_piece_cdf(),
          oracle::shifted_uniform_cdf(), oracle::adversarial_fixture()};
}

std::vector<long double> breaks_of(const fpa::PiecewisePolyCdf& dist) {
  std::vector<long double> out;
  for (const auto& b : dist.breakpoints()) out.push_back(b.convert_to<long double>());
  return out;
}

}  // namespace

TEST_CASE("power coefficients") {
  CHECK(ex::power_coefficients(fpa::uniform_cdf(), 2).top[0] == R({0, 1}));
  CHECK(ex::power_coefficients(fpa::uniform_cdf(), 3).top[0] == R({0, 0, 1}));
  CHECK(ex::power_coefficients(fpa::power_cdf(2), 2).top[0] == R({0, 0, 1}));
  CHECK_THROWS_AS(ex::power_coefficients(fpa::uniform_cdf(), 1), fpa::DomainError);

  std::mt19937_64 rng(1);
  for (const auto& dist : cdfs()) {
    for (int n = 2; n <= 5; ++n) {
      const auto table = ex::power_coefficients(dist, n, true);
      CHECK(table.layers.size() == static_cast<std::size_t>(n - 1));
      Rational amax = 0;
      for (std::size_t j = 0; j < dist.pieces(); ++j) {
        for (const auto& a : dist.piece(j)) amax = std::max(amax, Rational(abs(a)));
      }
      const Rational bound = [&] {
        Rational b = 1;
        for (int i = 0; i < n; ++i) b *= Rational(static_cast<long>(dist.degree() + 1)) * amax;
        return b;
      }();
      for (std::size_t j = 0; j < dist.pieces(); ++j) {
        for (int k = 0; k < 3; ++k) {
          const Rational v = oracle::random_rational(rng, 1000);
          Rational Fv = fpa::poly::evaluate(dist.piece(j), v);
          Rational power = 1;
          for (int kappa = 1; kappa < n; ++kappa) {
            power *= Fv;
            CHECK(fpa::poly::evaluate(table.layers[static_cast<std::size_t>(kappa - 1)][j], v) == power);
          }
        }
        for (const auto& b : table.top[j]) CHECK(abs(b) <= bound);
      }
    }
  }
}

TEST_CASE("integral coefficients") {
  const auto u = fpa::uniform_cdf();
  CHECK(ex::integral_coefficients(ex::power_coefficients(u, 2), u).coeffs[0] == R({0, 0, Rational(1, 2)}));
  const auto sq = fpa::power_cdf(2);
  CHECK(ex::integral_coefficients(ex::power_coefficients(sq, 2), sq).coeffs[0] == R({0, 0, 0, Rational(1, 3)}));
  CHECK_THROWS_AS(ex::integral_coefficients(ex::power_coefficients(sq, 2), oracle::two_piece_cdf()),
                  fpa::ConsistencyError);

  for (const auto& dist : cdfs()) {
    for (int n = 2; n <= 4; ++n) {
      const auto pt = ex::power_coefficients(dist, n);
      const auto it = ex::integral_coefficients(pt, dist);
      CHECK(it.coeffs[0][0] == 0);
      // Derivative of each piece is F_j^{n-1}.
      for (std::size_t j = 0; j < dist.pieces(); ++j) {
        auto d = fpa::poly::derivative(it.coeffs[j]);
        auto b = pt.top[j];
        fpa::poly::trim(d);
        fpa::poly::trim(b);
        CHECK(d == b);
      }
      // Continuity at breakpoints, monotone on a grid.
      const auto& v = dist.breakpoints();
      for (std::size_t j = 1; j < dist.pieces(); ++j) {
        CHECK(fpa::poly::evaluate(it.coeffs[j - 1], v[j]) == fpa::poly::evaluate(it.coeffs[j], v[j]));
      }
      Rational prev = -1;
      bool monotone = true;
      for (int i = 0; i <= 200; ++i) {
        const Rational x(i, 200);
        const Rational y = fpa::poly::evaluate(it.coeffs[dist.locate(x)], x);
        monotone = monotone && y >= prev;
        prev = y;
      }
      CHECK(monotone);
    }
  }
}

TEST_CASE("canonical bid function by hand") {
  const auto rbf = ex::canonical_bid_function(fpa::uniform_cdf(), 2);
  CHECK(rbf.pieces[0].numerator == R({0, 0, Rational(1, 2)}));
  CHECK(rbf.pieces[0].denominator == R({0, 1}));
  CHECK(ex::eval_canonical(rbf, Rational(2, 3)) == Rational(1, 3));
  for (int n = 2; n <= 4; ++n) {
    const auto r = ex::canonical_bid_function(fpa::uniform_cdf(), n);
    for (int i = 1; i <= 10; ++i) {
      const Rational x(i, 10);
      CHECK(ex::eval_canonical(r, x) == Rational(n - 1, n) * x);
    }
  }
  const auto sq = ex::canonical_bid_function(fpa::power_cdf(2), 2);
  CHECK(ex::eval_canonical(sq, Rational(3, 4)) == Rational(1, 2));
}

TEST_CASE("support infimum and the identity extension") {
  const auto rbf = ex::canonical_bid_function(oracle::shifted_uniform_cdf(), 3);
  CHECK(rbf.support_infimum == Rational(1, 4));
  CHECK(rbf.pieces[0].identity);
  CHECK_FALSE(rbf.pieces[1].identity);
  CHECK(ex::eval_canonical(rbf, Rational(1, 8)) == Rational(1, 8));
  CHECK(ex::eval_canonical(rbf, Rational(1, 4)) == Rational(1, 4));
  CHECK(ex::eval_canonical(rbf, Rational(1, 4), false) == Rational(1, 4));
  CHECK_THROWS_AS(ex::eval_canonical(rbf, Rational(1, 8), false), fpa::DomainError);
  CHECK_THROWS_AS(ex::eval_canonical(rbf, Rational(5, 4)), fpa::DomainError);
  // On (1/4, 1]: F = (4x-1)/3, so beta*(x) = x - (x - 1/4)/n.
  CHECK(ex::eval_canonical(rbf, Rational(1)) == 1 - Rational(3, 4) / 3);

  const auto zero = ex::canonical_bid_function(fpa::uniform_cdf(), 2);
  CHECK(ex::eval_canonical(zero, Rational(0)) == 0);
}

TEST_CASE("agreement with numeric quadrature") {
  std::mt19937_64 rng(2);
  for (const auto& dist : cdfs()) {
    const auto F = fpa::make_oracle<long double>(dist);
    const auto& Fe = F.evaluator();
    for (int n = 2; n <= 4; ++n) {
      const auto rbf = ex::canonical_bid_function(dist, n);
      for (int i = 0; i < 20; ++i) {
        const Rational x = oracle::random_rational(rng);
        const long double exact = ex::eval_canonical(rbf, x).convert_to<long double>();
        const long double quad = oracle::canonical_bid(Fe, n, x.convert_to<long double>(), breaks_of(dist));
        CHECK(std::fabs(exact - quad) <= 0x1p-30L);
        CHECK(std::fabs(ex::eval_canonical_fast(rbf, x.convert_to<long double>()) - exact) <= 1e-12L);
      }
    }
  }
}

TEST_CASE("no overbidding and strict monotonicity on the support") {
  for (const auto& dist : cdfs()) {
    for (int n : {2, 3, 5}) {
      const auto rbf = ex::canonical_bid_function(dist, n);
      Rational prev = -1;
      bool ok = true, strict = true;
      for (int i = 0; i <= 1000; ++i) {
        const Rational x(i, 1000);
        const Rational b = ex::eval_canonical(rbf, x);
        ok = ok && b <= x && b >= 0;
        if (x > rbf.support_infimum) strict = strict && b > prev;
        prev = b;
      }
      CHECK(ok);
      CHECK(strict);
      for (std::size_t j = 0; j < rbf.pieces.size(); ++j) {
        if (rbf.pieces[j].identity) continue;
        const Rational x = (rbf.breakpoints[j] + rbf.breakpoints[j + 1]) / 2;
        if (x > rbf.support_infimum) CHECK(fpa::poly::evaluate(rbf.pieces[j].denominator, x) > 0);
      }
    }
  }
}
