#pragma once

// JSON encodings shared by the CLI and the Python module. Exact rationals are
// strings ("p/q" or integers); reals are decimal strings next to a
// "precision_bits" field.

#include "fpa/ccfpa_explicit.hpp"
#include "fpa/cdfpa.hpp"
#include "fpa/verify.hpp"

#include "json.hpp"

#include <stdexcept>
#include <string>

namespace fpa::io {

using json = nlohmann::json;

/// Malformed input; `field` names the offending JSON member or flag.
struct SchemaError : std::runtime_error {
  SchemaError(std::string field_name, const std::string& message)
      : std::runtime_error(field_name + ": " + message), field(std::move(field_name)) {}
  std::string field;
};

/// Parses `text` as JSON when it looks like JSON, else reads it as a file.
json load_json_arg(const std::string& text, const std::string& field);

Rational rational_field(const json& value, const std::string& field);
std::vector<Rational> rational_list(const json& value, const std::string& field);

/// Kinds: piecewise_poly, uniform, power, adversarial. The cdf is not
/// validated here.
PiecewisePolyCdf cdf_from_json(const json& doc);
json cdf_to_json(const PiecewisePolyCdf& dist);

json validation_to_json(const ValidationReport& report);

json bid_function_to_json(const explicit_model::RationalBidFunction& rbf);
explicit_model::RationalBidFunction bid_function_from_json(const json& doc);

/// Decimal digits that represent `bits` of binary precision.
int digits_for_bits(unsigned bits);

json strategy_to_json(const cdfpa::BidGrid& grid, const cdfpa::JumpPointStrategy& s, int n, unsigned bits);
/// Reads "s" (and "U" when present) at the document's precision_bits.
cdfpa::JumpPointStrategy strategy_from_json(const json& doc);

json certificate_to_json(const cdfpa::Certificate& cert, unsigned bits);
json regret_to_json(const verify::RegretReport& report, bool with_samples);

/// %.17g rendering used for double-precision report fields.
std::string decimal(double x);

}  // namespace fpa::io
