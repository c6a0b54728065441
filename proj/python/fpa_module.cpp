#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fpa/ccfpa_blackbox.hpp"
#include "fpa/ccfpa_explicit.hpp"
#include "fpa/cdfpa.hpp"
#include "fpa/cli.hpp"
#include "fpa/io.hpp"

#include <optional>
#include <sstream>

namespace py = pybind11;

namespace {

fpa::PiecewisePolyCdf valid_cdf(const std::string& text) {
  auto dist = fpa::io::cdf_from_json(fpa::io::json::parse(text));
  const auto report = fpa::validate(dist);
  if (!report.ok()) throw fpa::DomainError("invalid cdf: " + fpa::io::validation_to_json(report).dump());
  return dist;
}

// Same arguments as the fpa executable, without the program name.
py::tuple run(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"fpa"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = 0;
  {
    py::gil_scoped_release release;
    code = fpa::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  }
  return py::make_tuple(code, out.str(), err.str());
}

std::string eval_cdf(const std::string& cdf, const std::string& x) {
  return fpa::to_string(fpa::eval_cdf(valid_cdf(cdf), fpa::parse_rational(x)));
}

std::string canonical_bid(const std::string& cdf, int n, const std::string& x, bool extend) {
  const auto rbf = fpa::explicit_model::canonical_bid_function(valid_cdf(cdf), n);
  return fpa::to_string(fpa::explicit_model::eval_canonical(rbf, fpa::parse_rational(x), extend));
}

py::dict blackbox_bids(const std::string& cdf, int n, double eps, const std::vector<double>& xs) {
  const auto F = fpa::make_oracle<long double>(valid_cdf(cdf));
  const auto plan = fpa::blackbox::precompute(F, n, static_cast<long double>(eps));
  std::vector<double> bids, lower, upper;
  for (double x : xs) {
    const auto e = fpa::blackbox::bid(plan, F, static_cast<long double>(x));
    bids.push_back(static_cast<double>(e.bid));
    lower.push_back(static_cast<double>(e.lower));
    upper.push_back(static_cast<double>(e.upper));
  }
  py::dict out;
  out["K"] = plan.K;
  out["bids"] = bids;
  out["lower"] = lower;
  out["upper"] = upper;
  out["queries"] = F.query_count();
  return out;
}

std::string solve_cdfpa(const std::string& cdf, int n, const std::vector<std::string>& bids, const std::string& eps,
                        std::optional<std::string> delta) {
  std::vector<fpa::Rational> grid_bids;
  for (const auto& b : bids) grid_bids.push_back(fpa::parse_rational(b));
  const fpa::cdfpa::BidGrid grid(grid_bids);
  fpa::cdfpa::SolveParams params;
  if (delta) params.delta = fpa::parse_rational(*delta);
  const auto F = fpa::make_oracle<fpa::Real>(valid_cdf(cdf));
  fpa::cdfpa::SolveResult result;
  {
    py::gil_scoped_release release;
    result = fpa::cdfpa::solve(F, n, grid, fpa::parse_rational(eps), params);
  }
  auto doc = fpa::io::strategy_to_json(grid, result.strategy, n, result.precision_bits);
  doc["delta"] = fpa::to_string(result.delta);
  doc["certificate"] = fpa::io::certificate_to_json(result.certificate, result.precision_bits);
  doc["certificate"]["pinned"] = result.pinned;
  return doc.dump();
}

}  // namespace

PYBIND11_MODULE(_fpa, m) {
  m.doc() = "Symmetric equilibria of first-price auctions";

  py::register_exception<fpa::PrecisionError>(m, "PrecisionError", PyExc_ArithmeticError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const fpa::io::SchemaError& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    } catch (const fpa::io::json::exception& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    }
  });

  m.def("run", &run, py::arg("args"), "Run the command line front-end; returns (exit code, stdout, stderr).");
  m.def("eval_cdf", &eval_cdf, py::arg("cdf"), py::arg("x"));
  m.def("canonical_bid", &canonical_bid, py::arg("cdf"), py::arg("n"), py::arg("x"), py::arg("extend") = true);
  m.def("blackbox_bids", &blackbox_bids, py::arg("cdf"), py::arg("n"), py::arg("eps"), py::arg("xs"));
  m.def("solve_cdfpa", &solve_cdfpa, py::arg("cdf"), py::arg("n"), py::arg("bids"), py::arg("eps"),
        py::arg("delta") = py::none());
}
