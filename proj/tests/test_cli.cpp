#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "rdl/cli.hpp"
#include "rdl/json_io.hpp"

using rdl::json_io::json;

namespace {

const std::string kData = std::string(RDL_SOURCE_DIR) + "/tests/data/";

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "rdl");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = rdl::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

json report(const Result& r) { return json::parse(r.out); }

}  // namespace

TEST_CASE("analyze: constrained family is linear", "[cli]") {
  const auto r = run({"analyze", "--request", kData + "request_consistent.json"});
  REQUIRE(r.code == rdl::cli::kConsistent);
  const json j = report(r);
  CHECK(j["schema"] == "rdl/1");
  CHECK(j["command"] == "analyze");
  CHECK(j["consistent"] == true);
  CHECK(j["superoperator"]["consistency_certified"] == true);
  CHECK(j["hull"].is_null());
  CHECK(r.err.find("U-consistency: consistent") != std::string::npos);
}

TEST_CASE("analyze: unconstrained family at wt = pi/2", "[cli]") {
  const auto r = run({"analyze", "--request", kData + "request_inconsistent.json", "--hull"});
  REQUIRE(r.code == rdl::cli::kInconsistent);
  const json j = report(r);
  CHECK(j["consistent"] == false);
  CHECK(j["consistency"]["witness"].is_object());
  CHECK(j["hull"]["consistent"] == false);
  CHECK(j["consistency"]["max_violation"].get<double>() > 1e-3);
}

TEST_CASE("analyze: inputs from flags", "[cli]") {
  const auto r = run({"analyze", "--family", kData + "unconstrained_family.json", "--model", "two-qubit",
                      "--omega", "1", "--t", "0"});
  CHECK(r.code == 0);
  // Global options may come after the subcommand.
  const auto s = run({"analyze", "--family", kData + "unconstrained_family.json", "--model", "two-qubit",
                      "--t", "1", "--tol-consistency", "10"});
  CHECK(s.code == 0);
  CHECK(report(s)["tolerances"]["consistency"] == 10.0);
  const auto u = run({"--tol-consistency", "10", "analyze", "--family", kData + "unconstrained_family.json",
                      "--model", "two-qubit", "--t", "1"});
  CHECK(u.out == s.out);
}

TEST_CASE("analyze: errors and exit codes", "[cli]") {
  SECTION("non-state member") {
    const auto r = run({"analyze", "--family", kData + "bad_state_family.json", "--model", "swap"});
    CHECK(r.code == rdl::cli::kInputError);
    CHECK(r.err.find("NotAStateError") != std::string::npos);
    CHECK(r.out.empty());
  }
  SECTION("malformed JSON points at the line") {
    const auto r = run({"analyze", "--family", kData + "malformed.json", "--model", "swap"});
    CHECK(r.code == rdl::cli::kInputError);
    CHECK(r.err.find("malformed.json:4:") != std::string::npos);
  }
  SECTION("missing file") {
    CHECK(run({"analyze", "--family", kData + "nope.json", "--model", "swap"}).code == rdl::cli::kInputError);
  }
  SECTION("no or two unitary sources") {
    CHECK(run({"analyze", "--family", kData + "unconstrained_family.json"}).code == rdl::cli::kInputError);
    CHECK(run({"analyze", "--request", kData + "request_consistent.json", "--model", "swap"}).code ==
          rdl::cli::kInputError);
  }
  SECTION("hull without a seed") {
    CHECK(run({"analyze", "--family", kData + "unconstrained_family.json", "--model", "swap", "--hull"}).code ==
          rdl::cli::kInputError);
  }
  SECTION("incomplete domain without an extension is a numerical failure") {
    const auto r = run({"analyze", "--request", kData + "request_swap.json", "--extension", "none",
                        "--tol-rank", "0.6"});
    CHECK(r.code == rdl::cli::kNumericalFailure);
  }
  SECTION("unknown flag") {
    CHECK(run({"analyze", "--bogus"}).code == rdl::cli::kInputError);
    CHECK(run({}).code == rdl::cli::kInputError);
  }
  SECTION("help") {
    const auto r = run({"--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("two-qubit") != std::string::npos);
  }
}

TEST_CASE("tolerance override from the environment", "[cli]") {
  ::setenv("RDL_TOL_OVERRIDE", "1e-5", 1);
  const auto r = run({"analyze", "--request", kData + "request_consistent.json"});
  ::setenv("RDL_TOL_OVERRIDE", "soon", 1);
  const auto bad = run({"analyze", "--request", kData + "request_consistent.json"});
  ::unsetenv("RDL_TOL_OVERRIDE");
  REQUIRE(r.code == 0);
  for (const auto& [k, v] : report(r)["tolerances"].items()) CHECK(v.get<double>() == 1e-5);
  CHECK(bad.code == rdl::cli::kInputError);
}

TEST_CASE("two-qubit command", "[cli]") {
  SECTION("fixed gamma case") {
    const auto r = run({"two-qubit", "--omega", "1", "--t", "0.7", "--a11", "0", "--a21", "0", "--b11", "0,0,0",
                        "--b21", "0,0,0", "--samples", "12", "--seed", "4"});
    REQUIRE(r.code == 0);
    const json j = report(r);
    CHECK(j["sampling"]["accepted"] == 12);
    CHECK(j["bloch_table"].size() == 12);
    CHECK(j["linearity"]["residuals_vanish"] == true);
  }
  SECTION("planted coefficients are recovered from a members file") {
    const auto r = run({"two-qubit", "--t", "0.7", "--members", kData + "members_planted.json"});
    REQUIRE(r.code == 0);
    const json fit = report(r)["linearity"]["coefficients"];
    const json plant = rdl::json_io::load_file(kData + "planted_coefficients.json");
    CHECK(std::abs(fit["a11"].get<double>() - plant["a11"].get<double>()) <= 1e-12);
    CHECK(std::abs(fit["a21"].get<double>() - plant["a21"].get<double>()) <= 1e-12);
    for (int i = 0; i < 3; ++i) {
      CHECK(std::abs(fit["b11"][i].get<double>() - plant["b11"][i].get<double>()) <= 1e-12);
      CHECK(std::abs(fit["b21"][i].get<double>() - plant["b21"][i].get<double>()) <= 1e-12);
    }
  }
  SECTION("a members file with a family object") {
    const auto r = run({"two-qubit", "--t", "0.7", "--members", kData + "constrained_family.json"});
    CHECK(r.code == 0);
    CHECK(report(r)["linearity"]["residuals_vanish"] == true);
  }
  SECTION("too few independent members") {
    const auto r = run({"two-qubit", "--t", "0.7", "--members", kData + "members_dependent.json"});
    CHECK(r.code == rdl::cli::kInputError);
    CHECK(r.err.find("SingularSystemError") != std::string::npos);
  }
  SECTION("empty or unseeded sampling") {
    CHECK(run({"two-qubit", "--t", "0.7", "--samples", "0", "--seed", "1"}).code == rdl::cli::kInputError);
    CHECK(run({"two-qubit", "--t", "0.7", "--samples", "5"}).code == rdl::cli::kInputError);
    CHECK(run({"two-qubit", "--samples", "5", "--seed", "1"}).code == rdl::cli::kInputError);
  }
}

TEST_CASE("swap-demo command", "[cli]") {
  SECTION("defaults") {
    const auto r = run({"swap-demo"});
    REQUIRE(r.code == 0);
    const json j = report(r);
    CHECK(j["verdicts"]["completely_positive"] == true);
    REQUIRE(j["pairs"].size() == 15);
    for (const auto& p : j["pairs"]) CHECK(p["after"].get<double>() <= 1e-12);
  }
  SECTION("single state") {
    const auto r = run({"swap-demo", "--states", kData + "states_single.json", "--omega-e", kData + "omega_e.json"});
    CHECK(r.code == 0);
    CHECK(report(r)["pairs"].empty());
  }
  SECTION("non-density environment") {
    CHECK(run({"swap-demo", "--omega-e", kData + "omega_e_bad.json"}).code == rdl::cli::kInputError);
  }
}

TEST_CASE("--out writes the report to a file", "[cli]") {
  const auto path = std::filesystem::temp_directory_path() / "rdl_cli_out_test.json";
  const auto r = run({"swap-demo", "--out", path.string()});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  const json j = json::parse(in);
  CHECK(j["command"] == "swap-demo");
  std::filesystem::remove(path);
}
