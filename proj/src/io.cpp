#include "fpa/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace fpa::io {

namespace {

const json& member(const json& doc, const std::string& key, const std::string& prefix = "") {
  const std::string field = prefix.empty() ? key : prefix + "." + key;
  if (!doc.is_object()) throw SchemaError(prefix.empty() ? "(root)" : prefix, "expected a JSON object");
  const auto it = doc.find(key);
  if (it == doc.end()) throw SchemaError(field, "missing");
  return *it;
}

json rational_array(const std::vector<Rational>& values) {
  json out = json::array();
  for (const auto& q : values) out.push_back(to_string(q));
  return out;
}

}  // namespace

json load_json_arg(const std::string& text, const std::string& field) {
  const auto first = text.find_first_not_of(" \t\r\n");
  std::string body = text;
  if (first == std::string::npos || (text[first] != '{' && text[first] != '[')) {
    std::ifstream in(text);
    if (!in) throw SchemaError(field, "neither JSON nor a readable file: " + text);
    std::stringstream buffer;
    buffer << in.rdbuf();
    body = buffer.str();
  }
  try {
    return json::parse(body);
  } catch (const json::parse_error& e) {
    throw SchemaError(field, std::string("malformed JSON: ") + e.what());
  }
}

Rational rational_field(const json& value, const std::string& field) {
  try {
    if (value.is_string()) return parse_rational(value.get<std::string>());
    if (value.is_number_integer()) return Rational(value.get<long long>());
    if (value.is_number()) return parse_rational(value.dump());
  } catch (const std::invalid_argument& e) {
    throw SchemaError(field, e.what());
  }
  throw SchemaError(field, "expected a rational string such as \"1/3\"");
}

std::vector<Rational> rational_list(const json& value, const std::string& field) {
  if (!value.is_array()) throw SchemaError(field, "expected an array of rationals");
  std::vector<Rational> out;
  for (std::size_t i = 0; i < value.size(); ++i) {
    out.push_back(rational_field(value[i], field + "[" + std::to_string(i) + "]"));
  }
  return out;
}

PiecewisePolyCdf cdf_from_json(const json& doc) {
  const json& kind_value = member(doc, "kind");
  if (!kind_value.is_string()) throw SchemaError("kind", "expected a string");
  const std::string kind = kind_value.get<std::string>();
  try {
    if (kind == "uniform") return uniform_cdf();
    if (kind == "power") {
      const Rational e = rational_field(member(doc, "exponent"), "exponent");
      if (denominator(e) != 1 || e < 1) throw SchemaError("exponent", "expected an integer >= 1");
      return power_cdf(numerator(e).convert_to<unsigned>());
    }
    if (kind == "adversarial") {
      AdversarialCdfParams p{rational_field(member(doc, "v1"), "v1"), rational_field(member(doc, "gap"), "gap"),
                             rational_field(member(doc, "kink"), "kink")};
      return make_adversarial_cdf(p);
    }
    if (kind == "piecewise_poly") {
      auto breakpoints = rational_list(member(doc, "breakpoints"), "breakpoints");
      const json& rows = member(doc, "coeffs");
      if (!rows.is_array()) throw SchemaError("coeffs", "expected an array of coefficient rows");
      std::vector<std::vector<Rational>> coeffs;
      for (std::size_t j = 0; j < rows.size(); ++j) {
        coeffs.push_back(rational_list(rows[j], "coeffs[" + std::to_string(j) + "]"));
      }
      return PiecewisePolyCdf(std::move(breakpoints), std::move(coeffs));
    }
  } catch (const DomainError& e) {
    throw SchemaError(kind, e.what());
  }
  throw SchemaError("kind", "unknown cdf kind '" + kind + "'");
}

json cdf_to_json(const PiecewisePolyCdf& dist) {
  json rows = json::array();
  for (std::size_t j = 0; j < dist.pieces(); ++j) rows.push_back(rational_array(dist.piece(j)));
  return {{"kind", "piecewise_poly"}, {"breakpoints", rational_array(dist.breakpoints())}, {"coeffs", rows}};
}

json validation_to_json(const ValidationReport& report) {
  json list = json::array();
  for (const auto& v : report.violations) {
    list.push_back({{"kind", to_string(v.kind)},
                    {"index", v.index},
                    {"point", to_string(v.point)},
                    {"detail", v.detail}});
  }
  return {{"ok", report.ok()}, {"violations", list}};
}

json bid_function_to_json(const explicit_model::RationalBidFunction& rbf) {
  json pieces = json::array();
  for (const auto& p : rbf.pieces) {
    if (p.identity) {
      pieces.push_back({{"identity", true}});
    } else {
      pieces.push_back({{"identity", false},
                        {"numerator", rational_array(p.numerator)},
                        {"denominator", rational_array(p.denominator)}});
    }
  }
  return {{"model", "ccfpa-explicit"},
          {"n", rbf.n},
          {"support_infimum", to_string(rbf.support_infimum)},
          {"breakpoints", rational_array(rbf.breakpoints)},
          {"pieces", pieces}};
}

explicit_model::RationalBidFunction bid_function_from_json(const json& doc) {
  explicit_model::RationalBidFunction rbf;
  const json& n = member(doc, "n");
  if (!n.is_number_integer()) throw SchemaError("n", "expected an integer");
  rbf.n = n.get<int>();
  rbf.support_infimum = rational_field(member(doc, "support_infimum"), "support_infimum");
  rbf.breakpoints = rational_list(member(doc, "breakpoints"), "breakpoints");
  const json& pieces = member(doc, "pieces");
  if (!pieces.is_array() || pieces.size() + 1 != rbf.breakpoints.size()) {
    throw SchemaError("pieces", "expected one entry per interval");
  }
  for (std::size_t j = 0; j < pieces.size(); ++j) {
    const std::string prefix = "pieces[" + std::to_string(j) + "]";
    explicit_model::RationalBidPiece piece;
    piece.identity = pieces[j].value("identity", false);
    if (!piece.identity) {
      piece.numerator = rational_list(member(pieces[j], "numerator", prefix), prefix + ".numerator");
      piece.denominator = rational_list(member(pieces[j], "denominator", prefix), prefix + ".denominator");
    }
    rbf.pieces.push_back(std::move(piece));
  }
  return rbf;
}

int digits_for_bits(unsigned bits) { return static_cast<int>(std::ceil(bits * 0.30103)) + 2; }

json strategy_to_json(const cdfpa::BidGrid& grid, const cdfpa::JumpPointStrategy& s, int n, unsigned bits) {
  const int digits = digits_for_bits(bits);
  json sj = json::array();
  for (const auto& x : s.s) sj.push_back(to_string(x, digits));
  json uj = json::array();
  for (const auto& x : s.U) uj.push_back(to_string(x, digits));
  return {{"model", "cdfpa"},
          {"n", n},
          {"bids", rational_array(grid.bids())},
          {"precision_bits", bits},
          {"s", sj},
          {"U", uj}};
}

cdfpa::JumpPointStrategy strategy_from_json(const json& doc) {
  const unsigned bits = doc.value("precision_bits", 128u);
  PrecisionScope scope(std::max(bits, 64u));
  cdfpa::JumpPointStrategy s;
  auto read = [](const json& list, const std::string& field) {
    if (!list.is_array()) throw SchemaError(field, "expected an array of decimal strings");
    std::vector<Real> out;
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string f = field + "[" + std::to_string(i) + "]";
      if (list[i].is_string()) {
        try {
          out.emplace_back(list[i].get<std::string>());
        } catch (const std::exception&) {
          throw SchemaError(f, "not a decimal number");
        }
      } else if (list[i].is_number()) {
        out.emplace_back(list[i].get<double>());
      } else {
        throw SchemaError(f, "expected a decimal string");
      }
    }
    return out;
  };
  s.s = read(member(doc, "s"), "s");
  if (doc.contains("U")) s.U = read(doc["U"], "U");
  return s;
}

json certificate_to_json(const cdfpa::Certificate& cert, unsigned bits) {
  const int digits = std::min(digits_for_bits(bits), 40);
  return {{"gamma", to_string(cert.gamma, digits)},
          {"pass", cert.pass},
          {"well_formed", cert.well_formed},
          {"max_residual", to_string(cert.max_residual, digits)},
          {"implied_epsilon", to_string(cert.implied_epsilon, digits)},
          {"precision_bits", bits}};
}

std::string decimal(double x) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.17g", x);
  return buffer;
}

json regret_to_json(const verify::RegretReport& report, bool with_samples) {
  json out = {{"method", report.method},
              {"max_regret", decimal(report.max_regret)},
              {"argmax", {{"value", decimal(report.argmax_value)}, {"deviation", decimal(report.argmax_deviation)}}},
              {"out_of_support_max", decimal(report.out_of_support_max)},
              {"sample_count", report.samples.size()},
              {"precision", "binary64"}};
  if (report.method == "grid") out["resolution"] = decimal(report.resolution);
  if (report.method == "monte-carlo") {
    out["trials"] = report.trials;
    out["seed"] = report.seed;
    out["standard_error"] = decimal(report.standard_error);
    out["band"] = {decimal(report.max_regret - 3 * report.standard_error),
                   decimal(report.max_regret + 3 * report.standard_error)};
  }
  if (with_samples) {
    json samples = json::array();
    for (const auto& s : report.samples) {
      samples.push_back({{"value", decimal(s.value)},
                         {"regret", decimal(s.regret)},
                         {"deviation", decimal(s.best_deviation)},
                         {"in_support", s.in_support}});
    }
    out["samples"] = samples;
  }
  return out;
}

}  // namespace fpa::io
