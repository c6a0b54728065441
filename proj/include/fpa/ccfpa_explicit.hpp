#pragma once

// Exact canonical equilibrium for piecewise-polynomial cdfs.
//
//   beta*(x) = x - (integral_0^x F^{n-1}(t) dt) / F^{n-1}(x)
//
// On each piece both the integral and F^{n-1} are polynomials, so beta* is a
// piecewise rational function with exact rational coefficients.

#include "fpa/dist.hpp"

#include <optional>
#include <vector>

namespace fpa::explicit_model {

/// Coefficients b_{j,kappa,l} of F_j^kappa. `top[j]` holds kappa = n-1;
/// `layers[kappa-1][j]` holds every kappa when built with keep_all_layers.
struct PowerTable {
  int n = 2;
  std::size_t degree = 0;
  std::vector<std::vector<Rational>> top;
  std::vector<std::vector<std::vector<Rational>>> layers;
};

/// Coefficients c_{j,l} of the piecewise polynomial x -> integral_0^x F^{n-1}.
struct IntegralTable {
  std::vector<std::vector<Rational>> coeffs;
};

struct RationalBidPiece {
  /// Piece lies left of the support infimum: beta*(x) = x there.
  bool identity = false;
  std::vector<Rational> numerator;
  std::vector<Rational> denominator;
};

struct RationalBidFunction {
  int n = 2;
  std::vector<Rational> breakpoints;
  std::vector<RationalBidPiece> pieces;
  Rational support_infimum;
};

/// Throws DomainError for n < 2.
PowerTable power_coefficients(const PiecewisePolyCdf& dist, int n, bool keep_all_layers = false);

/// Throws ConsistencyError when the table was not built from `dist`.
IntegralTable integral_coefficients(const PowerTable& table, const PiecewisePolyCdf& dist);

RationalBidFunction canonical_bid_function(const PiecewisePolyCdf& dist, int n);

/// beta*(x) exactly. With extend (the default) values at or below the support
/// infimum bid their value; without it such x raise DomainError.
Rational eval_canonical(const RationalBidFunction& rbf, const Rational& x, bool extend = true);

/// Same function evaluated in floating point (no domain checks beyond [0,1]).
long double eval_canonical_fast(const RationalBidFunction& rbf, long double x);

}  // namespace fpa::explicit_model
