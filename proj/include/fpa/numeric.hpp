#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace fpa {

/// Exact rational number (GMP backed, always canonical).
using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;

/// Binary floating point with run-time selectable precision (MPFR backed).
/// Precision follows `Real::default_precision()` at construction time.
using Real = boost::multiprecision::mpfr_float;

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Raised when a numeric search could not meet its tolerance at the
/// configured precision.
struct PrecisionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConsistencyError : std::logic_error {
  using std::logic_error::logic_error;
};

/// Parses "p/q", an integer, or a finite decimal ("0.125", "-3.5e-2") into an
/// exact rational. Throws std::invalid_argument on malformed input.
Rational parse_rational(std::string_view text);

/// "p/q" or "p" when the denominator is 1.
std::string to_string(const Rational& q);

/// Decimal rendering with `digits` significant digits.
std::string to_string(const Real& x, int digits);

/// Largest integer <= q.
Integer floor(const Rational& q);

/// Smallest integer >= q.
Integer ceil(const Rational& q);

/// Sets the default MPFR precision for the lifetime of the object.
class PrecisionScope {
 public:
  explicit PrecisionScope(unsigned bits);
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  unsigned saved_;
};

/// Converts an exact rational to a scalar of type T (long double, Real, or
/// Rational itself).
template <class T>
T from_rational(const Rational& q) {
  if constexpr (std::is_same_v<T, Rational>) {
    return q;
  } else if constexpr (std::is_same_v<T, Real>) {
    return Real(q);
  } else {
    return q.template convert_to<T>();
  }
}

}  // namespace fpa
