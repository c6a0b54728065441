#include "fpa/ccfpa_explicit.hpp"

#include <algorithm>

namespace fpa::explicit_model {

PowerTable power_coefficients(const PiecewisePolyCdf& dist, int n, bool keep_all_layers) {
  if (n < 2) throw DomainError("an auction needs n >= 2 bidders");
  const std::size_t d = dist.degree();
  PowerTable table;
  table.n = n;
  table.degree = d;
  if (keep_all_layers) table.layers.resize(static_cast<std::size_t>(n - 1));

  for (std::size_t j = 0; j < dist.pieces(); ++j) {
    const auto& a = dist.piece(j);
    std::vector<Rational> b = a;  // kappa = 1
    if (keep_all_layers) table.layers[0].push_back(b);
    for (std::size_t kappa = 2; kappa <= static_cast<std::size_t>(n - 1); ++kappa) {
      // b_{kappa,l} = sum_{xi = max(0, l-(kappa-1)d)}^{min(l,d)} b_{kappa-1,l-xi} a_xi
      std::vector<Rational> next(kappa * d + 1, Rational(0));
      for (std::size_t l = 0; l <= kappa * d; ++l) {
        const std::size_t lo = l > (kappa - 1) * d ? l - (kappa - 1) * d : 0;
        const std::size_t hi = std::min(l, d);
        for (std::size_t xi = lo; xi <= hi; ++xi) next[l] += b[l - xi] * a[xi];
      }
      b = std::move(next);
      if (keep_all_layers) table.layers[kappa - 1].push_back(b);
    }
    table.top.push_back(std::move(b));
  }
  return table;
}

IntegralTable integral_coefficients(const PowerTable& table, const PiecewisePolyCdf& dist) {
  if (table.top.size() != dist.pieces() || table.degree != dist.degree()) {
    throw ConsistencyError("power table was built from a different distribution");
  }
  const std::size_t top_degree = static_cast<std::size_t>(table.n - 1) * table.degree;
  for (const auto& row : table.top) {
    if (row.size() != top_degree + 1) throw ConsistencyError("power table row has the wrong degree");
  }

  const auto& v = dist.breakpoints();
  IntegralTable out;
  out.coeffs.reserve(dist.pieces());
  for (std::size_t j = 0; j < dist.pieces(); ++j) {
    const auto& b = table.top[j];
    std::vector<Rational> c(top_degree + 2, Rational(0));
    for (std::size_t l = 1; l <= top_degree + 1; ++l) c[l] = b[l - 1] / Rational(static_cast<long>(l));
    if (j > 0) {
      // Match the previous piece's integral at v_{j-1}.
      const auto& prev = out.coeffs[j - 1];
      Rational constant = prev[0];
      Rational vp = 1;
      for (std::size_t l = 1; l <= top_degree + 1; ++l) {
        vp *= v[j];
        constant += (prev[l] - c[l]) * vp;
      }
      c[0] = constant;
    }
    out.coeffs.push_back(std::move(c));
  }
  return out;
}

RationalBidFunction canonical_bid_function(const PiecewisePolyCdf& dist, int n) {
  const PowerTable powers = power_coefficients(dist, n);
  const IntegralTable integral = integral_coefficients(powers, dist);

  RationalBidFunction rbf;
  rbf.n = n;
  rbf.breakpoints = dist.breakpoints();
  rbf.support_infimum = support_infimum(dist);
  for (std::size_t j = 0; j < dist.pieces(); ++j) {
    RationalBidPiece piece;
    if (poly::is_zero(dist.piece(j))) {
      piece.identity = true;
      rbf.pieces.push_back(std::move(piece));
      continue;
    }
    const auto& b = powers.top[j];
    const auto& c = integral.coeffs[j];
    // x * B(x) - C(x): constant term -c_0, then b_{l-1} - c_l.
    piece.numerator.resize(c.size());
    piece.numerator[0] = -c[0];
    for (std::size_t l = 1; l < c.size(); ++l) piece.numerator[l] = b[l - 1] - c[l];
    piece.denominator = b;
    rbf.pieces.push_back(std::move(piece));
  }
  return rbf;
}

namespace {

std::size_t locate(const RationalBidFunction& rbf, const Rational& x) {
  for (std::size_t j = 0; j + 1 < rbf.pieces.size(); ++j) {
    if (x <= rbf.breakpoints[j + 1]) return j;
  }
  return rbf.pieces.size() - 1;
}

}  // namespace

Rational eval_canonical(const RationalBidFunction& rbf, const Rational& x, bool extend) {
  if (x < 0 || x > 1) throw DomainError("value " + to_string(x) + " outside [0,1]");
  if (x <= rbf.support_infimum) {
    if (!extend && x < rbf.support_infimum) {
      throw DomainError("value " + to_string(x) + " lies below the support infimum " +
                        to_string(rbf.support_infimum));
    }
    return x;
  }
  const auto& piece = rbf.pieces[locate(rbf, x)];
  if (piece.identity) return x;
  const Rational den = poly::evaluate(piece.denominator, x);
  if (den == 0) return x;
  return poly::evaluate(piece.numerator, x) / den;
}

long double eval_canonical_fast(const RationalBidFunction& rbf, long double x) {
  const long double vmin = rbf.support_infimum.convert_to<long double>();
  if (x <= vmin) return x;
  std::size_t j = 0;
  while (j + 1 < rbf.pieces.size() && x > rbf.breakpoints[j + 1].convert_to<long double>()) ++j;
  const auto& piece = rbf.pieces[j];
  if (piece.identity) return x;
  long double num = 0, den = 0;
  for (auto it = piece.numerator.rbegin(); it != piece.numerator.rend(); ++it) {
    num = num * x + it->convert_to<long double>();
  }
  for (auto it = piece.denominator.rbegin(); it != piece.denominator.rend(); ++it) {
    den = den * x + it->convert_to<long double>();
  }
  return den > 0 ? num / den : x;
}

}  // namespace fpa::explicit_model
