#pragma once

// Value distributions: explicit piecewise-polynomial cdfs over exact
// rationals, query-counting cdf oracles, and the transforms used by the
// solvers.

#include "fpa/numeric.hpp"
#include "fpa/polynomial.hpp"

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace fpa {

/// Cdf on [0,1] given by breakpoints 0 = v_0 < ... < v_k = 1 and, for each
/// piece j, a polynomial F_j(x) = sum_l a_{j,l} x^l valid on [v_{j-1}, v_j].
///
/// Construction only checks the shape (k >= 1, k+1 breakpoints, nonempty
/// rows); rows are zero-padded to a common degree. The cdf invariants are
/// checked by validate().
class PiecewisePolyCdf {
 public:
  PiecewisePolyCdf(std::vector<Rational> breakpoints, std::vector<std::vector<Rational>> coeffs);

  std::size_t pieces() const { return coeffs_.size(); }
  std::size_t degree() const { return coeffs_.front().size() - 1; }
  const std::vector<Rational>& breakpoints() const { return breakpoints_; }
  /// Coefficients of piece j (0-based), lowest degree first.
  const std::vector<Rational>& piece(std::size_t j) const { return coeffs_.at(j); }

  /// Index of the piece used to evaluate x: the first j with x <= v_{j+1}.
  std::size_t locate(const Rational& x) const;

  /// Evaluates F at x without domain checks. T may be Rational (exact),
  /// long double, or Real (current MPFR precision).
  template <class T>
  T evaluate(const T& x) const;

 private:
  std::vector<Rational> breakpoints_;
  std::vector<std::vector<Rational>> coeffs_;
  std::vector<long double> fast_breakpoints_;
  std::vector<std::vector<long double>> fast_coeffs_;
};

template <>
Rational PiecewisePolyCdf::evaluate<Rational>(const Rational& x) const;
template <>
long double PiecewisePolyCdf::evaluate<long double>(const long double& x) const;
template <>
double PiecewisePolyCdf::evaluate<double>(const double& x) const;
template <>
Real PiecewisePolyCdf::evaluate<Real>(const Real& x) const;

/// F(x) for x in [0,1]; throws DomainError otherwise.
Rational eval_cdf(const PiecewisePolyCdf& dist, const Rational& x);

struct Violation {
  enum class Kind { Breakpoints, LeftEndpoint, RightEndpoint, Continuity, Monotonicity, Range };
  Kind kind;
  /// 1-based piece index (for Continuity: the j with F_j(v_j) != F_{j+1}(v_j)).
  std::size_t index;
  Rational point;
  std::string detail;
};

const char* to_string(Violation::Kind kind);

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

enum class MonotonicityCheck {
  Grid,   ///< 64(d+1) rational grid points per piece
  Exact,  ///< sign of F_j' between its real roots (Sturm isolation)
};

/// Reports every violated cdf invariant. Never throws.
ValidationReport validate(const PiecewisePolyCdf& dist, MonotonicityCheck mode = MonotonicityCheck::Grid);

/// inf supp F: the largest x with F(x) = 0.
Rational support_infimum(const PiecewisePolyCdf& dist);

/// F'(x) = delta x + (1 - delta) F(x), applied to the coefficients.
PiecewisePolyCdf strongly_increasing_transform(const PiecewisePolyCdf& dist, const Rational& delta);

/// Upper bound on sup |F'| over [0,1].
Rational lipschitz_bound(const PiecewisePolyCdf& dist);

PiecewisePolyCdf uniform_cdf();
/// F(x) = x^exponent, exponent >= 1.
PiecewisePolyCdf power_cdf(unsigned exponent);

/// Parameters of the "flattened then steepened" cdf used against black-box
/// algorithms: identity outside (v1, v1 + gap), with a kink of width `kink`.
struct AdversarialCdfParams {
  Rational v1;
  Rational gap;
  Rational kink;
};

PiecewisePolyCdf make_adversarial_cdf(const AdversarialCdfParams& params);

/// A query-counted cdf evaluator with a caller-asserted Lipschitz constant.
/// Every call through operator() counts as one query. Counting is atomic, so
/// one oracle may be shared by concurrent readers.
template <class T>
class CdfOracle {
 public:
  using Evaluator = std::function<T(const T&)>;

  CdfOracle(Evaluator evaluator, double lipschitz)
      : evaluator_(std::move(evaluator)), lipschitz_(lipschitz) {
    if (!evaluator_) throw DomainError("cdf oracle needs an evaluator");
    if (!(lipschitz > 0)) throw DomainError("Lipschitz constant must be positive");
  }

  CdfOracle(CdfOracle&& other) noexcept
      : evaluator_(std::move(other.evaluator_)),
        lipschitz_(other.lipschitz_),
        count_(other.count_.load()) {}

  CdfOracle(const CdfOracle&) = delete;
  CdfOracle& operator=(const CdfOracle&) = delete;

  T operator()(const T& x) const {
    count_.fetch_add(1, std::memory_order_relaxed);
    return evaluator_(x);
  }

  std::uint64_t query_count() const { return count_.load(); }
  void reset_count() { count_.store(0); }
  double lipschitz() const { return lipschitz_; }

  /// Uncounted access, for building derived oracles.
  const Evaluator& evaluator() const { return evaluator_; }

 private:
  Evaluator evaluator_;
  double lipschitz_;
  mutable std::atomic<std::uint64_t> count_{0};
};

template <class T>
CdfOracle<T> wrap_oracle(typename CdfOracle<T>::Evaluator evaluator, double lipschitz) {
  return CdfOracle<T>(std::move(evaluator), lipschitz);
}

/// Oracle over an explicit cdf. When lipschitz <= 0, lipschitz_bound() is used.
template <class T>
CdfOracle<T> make_oracle(const PiecewisePolyCdf& dist, double lipschitz = 0.0) {
  auto shared = std::make_shared<const PiecewisePolyCdf>(dist);
  if (!(lipschitz > 0)) lipschitz = lipschitz_bound(dist).template convert_to<double>();
  return CdfOracle<T>([shared](const T& x) { return shared->evaluate(x); }, lipschitz);
}

/// Oracle for x -> delta x + (1 - delta) F(x). The result has its own query
/// counter; each of its queries evaluates F once.
template <class T>
CdfOracle<T> strongly_increasing_transform(const CdfOracle<T>& oracle, const T& delta) {
  if (!(delta > 0 && delta < 1)) throw DomainError("transform requires 0 < delta < 1");
  auto inner = oracle.evaluator();
  const T keep = T(1) - delta;
  const double lip = static_cast<double>(delta) + static_cast<double>(keep) * oracle.lipschitz();
  return CdfOracle<T>([inner, delta, keep](const T& x) { return T(delta * x + keep * inner(x)); },
                      lip);
}

}  // namespace fpa
