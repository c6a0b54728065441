#include "doctest.h"

#include "fpa/cli.hpp"

#include "json.hpp"

#include <sstream>
#include <string>
#include <vector>

using nlohmann::json;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run fpa_run(std::vector<std::string> args) {
  args.insert(args.begin(), "fpa");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = fpa::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(FPA_TEST_DATA) + "/" + name; }

const std::string kUniform = R"({"kind":"uniform"})";

}  // namespace

TEST_CASE("usage errors exit 2") {
  CHECK(fpa_run({}).code == 2);
  CHECK(fpa_run({"solve", "--model", "ccfpa-explicit", "--cdf", kUniform}).code == 2);
  CHECK(fpa_run({"solve", "--model", "cdfpa", "--cdf", kUniform, "--n", "2", "--eps", "1/8"}).code == 2);
  CHECK(fpa_run({"solve", "--model", "nope", "--cdf", kUniform, "--n", "2"}).code == 2);
  CHECK(fpa_run({"solve", "--model", "ccfpa-explicit", "--cdf", kUniform, "--n", "1", "--at", "1/2"}).code == 2);
  CHECK(fpa_run({"eval", "--cdf", kUniform, "--at", "3/2"}).code == 2);
  CHECK(fpa_run({"eval", "--cdf", kUniform, "--at", "half"}).code == 2);
  CHECK(fpa_run({"--help"}).code == 0);
}

TEST_CASE("schema errors name the field") {
  const auto r = fpa_run({"validate-cdf", "--cdf", R"({"kind":"piecewise_poly","breakpoints":["0","1"]})"});
  CHECK(r.code == 2);
  CHECK(r.err.find("coeffs") != std::string::npos);
  const auto k = fpa_run({"eval", "--cdf", R"({"kind":7})", "--at", "1/2"});
  CHECK(k.code == 2);
  CHECK(k.err.find("kind") != std::string::npos);
}

TEST_CASE("invalid cdfs exit 1") {
  const std::string bad =
      R"({"kind":"piecewise_poly","breakpoints":["0","1/2","1"],"coeffs":[["0","0","1"],["0","1/2"]]})";
  const auto r = fpa_run({"validate-cdf", "--cdf", bad});
  CHECK(r.code == 1);
  CHECK(json::parse(r.out)["ok"] == false);
  CHECK(fpa_run({"validate-cdf", "--cdf", data("two_piece.json"), "--exact"}).code == 0);
}

TEST_CASE("eval and explicit bids") {
  CHECK(fpa_run({"eval", "--cdf", data("two_piece.json"), "--at", "3/4"}).out == "5/8\n");
  CHECK(fpa_run({"solve", "--model", "ccfpa-explicit", "--cdf", kUniform, "--n", "2", "--at", "2/3"}).out == "1/3\n");
  const auto shifted = data("shifted_uniform.json");
  CHECK(fpa_run({"solve", "--model", "ccfpa-explicit", "--cdf", shifted, "--n", "3", "--at", "1/8"}).out == "1/8\n");
  CHECK(fpa_run({"solve", "--model", "ccfpa-explicit", "--cdf", shifted, "--n", "3", "--at", "1/8", "--no-extend"})
            .code == 2);
}

TEST_CASE("black-box CSV") {
  const auto r = fpa_run({"solve", "--model", "ccfpa-blackbox", "--cdf", kUniform, "--n", "2", "--eps", "1/4",
                          "--samples", "2", "--exact"});
  REQUIRE(r.code == 0);
  CHECK(r.out == "x,bid,L,U,queries\n0,0,0,0,4\n1,5/8,3/8,5/8,5\n");
}

TEST_CASE("query stats") {
  const auto r = fpa_run({"query-stats", "--cdf", kUniform, "--n", "2", "--eps", "1/8"});
  REQUIRE(r.code == 0);
  const auto doc = json::parse(r.out);
  CHECK(doc["K"] == 8);
  CHECK(doc["precompute_queries"] == 7);
  CHECK(doc["bid_queries"] == 8);
  CHECK(doc["within_budget"] == true);
}

TEST_CASE("solve then verify round trip") {
  const auto solved = fpa_run({"solve", "--model", "cdfpa", "--cdf", kUniform, "--n", "2", "--eps", "1/16",
                               "--bids", R"(["0","1/4","1/2","3/4"])", "--delta", "1/281474976710656", "--certify"});
  REQUIRE(solved.code == 0);
  const auto doc = json::parse(solved.out);
  CHECK(doc["model"] == "cdfpa");
  CHECK(doc["s"].size() == 5);
  CHECK(doc["certificate"]["pass"] == true);

  const auto exact = fpa_run({"verify", "--strategy", solved.out, "--cdf", kUniform, "--n", "2", "--mode", "exact",
                              "--eps", "1/16"});
  CHECK(exact.code == 0);
  CHECK(json::parse(exact.out)["within_eps"] == true);

  const auto mc = fpa_run({"verify", "--strategy", solved.out, "--cdf", kUniform, "--n", "2", "--mode", "mc",
                           "--trials", "20000", "--seed", "5"});
  CHECK(mc.code == 0);
  const auto mc_again = fpa_run({"verify", "--strategy", solved.out, "--cdf", kUniform, "--n", "2", "--mode", "mc",
                                 "--trials", "20000", "--seed", "5"});
  CHECK(mc.out == mc_again.out);

  // Solving twice gives the same bytes.
  CHECK(fpa_run({"solve", "--model", "cdfpa", "--cdf", kUniform, "--n", "2", "--eps", "1/16", "--bids",
                 R"(["0","1/4","1/2","3/4"])", "--delta", "1/281474976710656", "--certify"})
            .out == solved.out);

  CHECK(fpa_run({"verify", "--strategy", solved.out, "--cdf", kUniform, "--n", "2", "--mode", "grid"}).code == 2);
}

TEST_CASE("verify continuous strategies") {
  const auto ok = fpa_run({"verify", "--strategy", R"({"model":"ccfpa-explicit"})", "--cdf", kUniform, "--n", "3",
                           "--mode", "grid", "--eps", "1/1000"});
  CHECK(ok.code == 0);
  const auto bb = fpa_run({"verify", "--strategy", R"({"model":"ccfpa-blackbox","eps":"1/16"})", "--cdf", kUniform,
                           "--n", "2", "--mode", "grid", "--eps", "1/16"});
  CHECK(bb.code == 0);
  const auto loose = fpa_run({"verify", "--strategy", R"({"model":"ccfpa-blackbox","eps":"1/2"})", "--cdf", kUniform,
                              "--n", "2", "--mode", "grid", "--eps", "1/1000"});
  CHECK(loose.code == 1);
  CHECK(json::parse(loose.out)["within_eps"] == false);
  CHECK(fpa_run({"verify", "--strategy", R"({"model":"ccfpa-blackbox"})", "--cdf", kUniform, "--n", "2", "--mode",
                 "grid"})
            .code == 2);
}
