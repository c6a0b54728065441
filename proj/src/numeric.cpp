#include "fpa/numeric.hpp"

#include <cctype>
#include <string>

namespace fpa {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

Integer parse_integer(std::string_view s) {
  std::string_view body = s;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) body.remove_prefix(1);
  if (!all_digits(body)) {
    throw std::invalid_argument("not an integer: '" + std::string(s) + "'");
  }
  // Integer("0125") would be read as octal.
  const bool negative = s.front() == '-';
  const auto first = body.find_first_not_of('0');
  std::string canon = first == std::string_view::npos ? "0" : std::string(body.substr(first));
  if (negative) canon.insert(0, 1, '-');
  return Integer(canon);
}

Rational pow10(long e) {
  Integer p = 1;
  for (long i = 0; i < (e < 0 ? -e : e); ++i) p *= 10;
  return e < 0 ? Rational(Integer(1), p) : Rational(p);
}

Rational parse_decimal(std::string_view s) {
  std::string_view mant = s;
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    exponent = static_cast<long>(parse_integer(s.substr(e + 1)).convert_to<long>());
    mant = s.substr(0, e);
  }
  bool negative = false;
  if (!mant.empty() && (mant.front() == '-' || mant.front() == '+')) {
    negative = mant.front() == '-';
    mant.remove_prefix(1);
  }
  auto dot = mant.find('.');
  std::string digits(mant.substr(0, dot));
  std::string frac = dot == std::string_view::npos ? "" : std::string(mant.substr(dot + 1));
  if (digits.empty() && frac.empty()) throw std::invalid_argument("empty number");
  if ((!digits.empty() && !all_digits(digits)) || (!frac.empty() && !all_digits(frac))) {
    throw std::invalid_argument("malformed decimal: '" + std::string(s) + "'");
  }
  const Integer whole = parse_integer(digits + frac);
  Rational value = Rational(whole) * pow10(exponent - static_cast<long>(frac.size()));
  return negative ? Rational(-value) : value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw std::invalid_argument("empty rational");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Integer num = parse_integer(text.substr(0, slash));
    Integer den = parse_integer(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    return Rational(num, den);
  }
  if (text.find_first_of(".eE") != std::string_view::npos) return parse_decimal(text);
  return Rational(parse_integer(text));
}

std::string to_string(const Rational& q) { return q.str(); }

std::string to_string(const Real& x, int digits) {
  return x.str(digits, std::ios_base::fmtflags(0));
}

Integer floor(const Rational& q) {
  Integer num = boost::multiprecision::numerator(q);
  Integer den = boost::multiprecision::denominator(q);
  Integer quot;
  mpz_fdiv_q(quot.backend().data(), num.backend().data(), den.backend().data());
  return quot;
}

Integer ceil(const Rational& q) {
  Integer num = boost::multiprecision::numerator(q);
  Integer den = boost::multiprecision::denominator(q);
  Integer quot;
  mpz_cdiv_q(quot.backend().data(), num.backend().data(), den.backend().data());
  return quot;
}

PrecisionScope::PrecisionScope(unsigned bits) : saved_(Real::default_precision()) {
  // MPFR precision is expressed in decimal digits by boost; convert.
  Real::default_precision(static_cast<unsigned>(bits * 0.30103) + 2);
}

PrecisionScope::~PrecisionScope() { Real::default_precision(saved_); }

}  // namespace fpa
