#pragma once

// Dense univariate polynomials stored as coefficient vectors, lowest degree
// first: p[l] is the coefficient of x^l.

#include <algorithm>
#include <cstddef>
#include <utility>
#include <vector>

namespace fpa::poly {

template <class T>
using Coeffs = std::vector<T>;

/// Horner evaluation. An empty coefficient vector is the zero polynomial.
template <class T, class X>
X evaluate(const Coeffs<T>& p, const X& x) {
  X acc(0);
  for (auto it = p.rbegin(); it != p.rend(); ++it) {
    acc = acc * x + X(*it);
  }
  return acc;
}

template <class T>
bool is_zero(const Coeffs<T>& p) {
  return std::all_of(p.begin(), p.end(), [](const T& c) { return c == 0; });
}

/// Index of the highest nonzero coefficient, or -1 for the zero polynomial.
template <class T>
long degree(const Coeffs<T>& p) {
  for (long l = static_cast<long>(p.size()) - 1; l >= 0; --l) {
    if (p[static_cast<std::size_t>(l)] != 0) return l;
  }
  return -1;
}

template <class T>
void trim(Coeffs<T>& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

/// Coefficient convolution. Result has size |p| + |q| - 1 (or 0).
template <class T>
Coeffs<T> multiply(const Coeffs<T>& p, const Coeffs<T>& q) {
  if (p.empty() || q.empty()) return {};
  Coeffs<T> r(p.size() + q.size() - 1, T(0));
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0) continue;
    for (std::size_t j = 0; j < q.size(); ++j) r[i + j] += p[i] * q[j];
  }
  return r;
}

template <class T>
Coeffs<T> derivative(const Coeffs<T>& p) {
  if (p.size() <= 1) return {};
  Coeffs<T> r(p.size() - 1);
  for (std::size_t l = 1; l < p.size(); ++l) r[l - 1] = p[l] * T(static_cast<long>(l));
  return r;
}

/// Antiderivative vanishing at 0.
template <class T>
Coeffs<T> antiderivative(const Coeffs<T>& p) {
  Coeffs<T> r(p.size() + 1, T(0));
  for (std::size_t l = 0; l < p.size(); ++l) r[l + 1] = p[l] / T(static_cast<long>(l + 1));
  return r;
}

/// Euclidean division p = quotient * q + remainder over an exact field.
/// q must be nonzero.
template <class T>
std::pair<Coeffs<T>, Coeffs<T>> divmod(Coeffs<T> p, Coeffs<T> q) {
  trim(p);
  trim(q);
  const std::size_t dq = q.size() - 1;
  Coeffs<T> quotient(p.size() >= q.size() ? p.size() - dq : 0, T(0));
  while (!p.empty() && p.size() >= q.size()) {
    const T factor = p.back() / q.back();
    const std::size_t shift = p.size() - 1 - dq;
    quotient[shift] = factor;
    for (std::size_t l = 0; l <= dq; ++l) p[shift + l] -= factor * q[l];
    p.pop_back();
    trim(p);
  }
  return {std::move(quotient), std::move(p)};
}

template <class T>
Coeffs<T> remainder(const Coeffs<T>& p, const Coeffs<T>& q) {
  return divmod(p, q).second;
}

/// Monic greatest common divisor.
template <class T>
Coeffs<T> gcd(Coeffs<T> p, Coeffs<T> q) {
  trim(p);
  trim(q);
  while (!q.empty()) {
    Coeffs<T> r = remainder(p, q);
    p = std::move(q);
    q = std::move(r);
  }
  if (!p.empty()) {
    const T lead = p.back();
    for (auto& c : p) c /= lead;
  }
  return p;
}

}  // namespace fpa::poly
