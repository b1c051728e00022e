#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "contnet/assignment.hpp"
#include "contnet/error.hpp"
#include "contnet/field_io.hpp"
#include "json.hpp"
#include "runner.hpp"
#include "scenario_file.hpp"
#include "support/oracles.hpp"

using namespace contnet;
namespace fs = std::filesystem;

#ifndef CONTNET_FIXTURES
#define CONTNET_FIXTURES "fixtures"
#endif

namespace {

const fs::path kFixtures = CONTNET_FIXTURES;

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("contnet_test_cli_" + name);
  fs::remove_all(p);
  return p;
}

struct Outcome {
  int code;
  std::string err;
};

Outcome run_mode(const std::string& mode, const fs::path& scenario, const fs::path& out,
                 std::optional<double> tol = {}, std::optional<int> max_iters = {}) {
  cli::RunOptions opt;
  opt.mode = mode;
  opt.scenario = scenario;
  opt.out = out;
  opt.tol = tol;
  opt.max_iters = max_iters;
  std::ostringstream err;
  const int code = cli::run(opt, err);
  return {code, err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

FlowField total_from_bundle(const fs::path& dir, int classes) {
  std::vector<FlowField> flows;
  for (int k = 0; k < classes; ++k)
    flows.push_back(read_flow(dir / ("flow_c" + std::to_string(k) + "_t1.csv"),
                              dir / ("flow_c" + std::to_string(k) + "_t2.csv")));
  return total_flow(flows);
}

}  // namespace

TEST_CASE("validate accepts a good scenario") {
  const Outcome o = run_mode("validate", kFixtures / "affine_corner.json", scratch("validate"));
  CHECK(o.code == cli::kExitOk);
}

TEST_CASE("unbalanced demand is a validation error citing the total rate") {
  const Outcome o = run_mode("validate", kFixtures / "unbalanced.json", scratch("unbalanced"));
  CHECK(o.code == cli::kExitValidation);
  CHECK(o.err.find("total rate") != std::string::npos);
  CHECK_THROWS_AS(cli::load_scenario(kFixtures / "unbalanced.json"), PreconditionError);
}

TEST_CASE("unknown keys are rejected with their JSON pointer") {
  const Outcome o = run_mode("validate", kFixtures / "unknown_key.json", scratch("unknown"));
  CHECK(o.code == cli::kExitValidation);
  CHECK(o.err.find("/cost/gamma") != std::string::npos);
  try {
    cli::load_scenario(kFixtures / "unknown_key.json");
    FAIL("no schema error");
  } catch (const cli::SchemaError& e) {
    CHECK(e.pointer() == "/cost/gamma");
  }
}

TEST_CASE("malformed input and missing sections") {
  const fs::path dir = scratch("malformed");
  fs::create_directories(dir);
  std::ofstream(dir / "bad.json") << "{\"grid\": {\"a\": 1, \"b\": 1, \"nx\": 4, ";
  CHECK(run_mode("validate", dir / "bad.json", dir / "out").code == cli::kExitValidation);
  std::ofstream(dir / "neg.json") << R"({"grid": {"a": 1, "b": 1, "nx": -4, "ny": 4}})";
  CHECK(run_mode("validate", dir / "neg.json", dir / "out").code == cli::kExitValidation);
  // a dafermos scenario has no demand for an assignment mode
  const Outcome o = run_mode("dense-sim", kFixtures / "dafermos_two_mode.json", dir / "out2");
  CHECK(o.code == cli::kExitValidation);
  CHECK(run_mode("teleport", kFixtures / "affine_corner.json", dir / "out3").code == cli::kExitValidation);
}

TEST_CASE("global and wardrop bundles coincide on the monomial fixture") {
  const fs::path g = scratch("mono_global"), w = scratch("mono_wardrop");
  REQUIRE(run_mode("global", kFixtures / "monomial_two_class.json", g).code == cli::kExitOk);
  REQUIRE(run_mode("wardrop", kFixtures / "monomial_two_class.json", w).code == cli::kExitOk);
  const cli::ScenarioFile sc = cli::load_scenario(kFixtures / "monomial_two_class.json");
  const int classes = static_cast<int>(sc.rho.size());
  CHECK(oracle::rel_l2(total_from_bundle(g, classes), total_from_bundle(w, classes)) <= 1e-3);
}

TEST_CASE("reloaded flows conserve the scenario demand") {
  const fs::path out = scratch("reload");
  REQUIRE(run_mode("wardrop", kFixtures / "affine_corner.json", out).code == cli::kExitOk);
  const cli::ScenarioFile sc = cli::load_scenario(kFixtures / "affine_corner.json");
  const FlowField f = read_flow(out / "flow_c0_t1.csv", out / "flow_c0_t2.csv");
  CHECK(oracle::conservation_rel(f, sc.rho[0]) <= 1e-8);
  const nlohmann::json rep = nlohmann::json::parse(slurp(out / "report.json"));
  CHECK(rep["assignment"]["converged"].get<bool>());
  CHECK(rep["inputs"][0]["sha1"].get<std::string>() == cli::git_blob_sha1(slurp(kFixtures / "affine_corner.json")));
}

TEST_CASE("non-convergence exits with the numerical code") {
  const Outcome o = run_mode("wardrop", kFixtures / "affine_corner.json", scratch("cap"), 1e-12, 3);
  CHECK(o.code == cli::kExitNumerical);
}

TEST_CASE("two runs write byte-identical bundles") {
  const fs::path a = scratch("det");
  const fs::path b = scratch("det_copy");
  REQUIRE(run_mode("global", kFixtures / "monomial_two_class.json", a).code == cli::kExitOk);
  fs::rename(a, b);
  REQUIRE(run_mode("global", kFixtures / "monomial_two_class.json", a).code == cli::kExitOk);
  int files = 0;
  for (const auto& e : fs::directory_iterator(a)) {
    ++files;
    CHECK(slurp(e.path()) == slurp(b / e.path().filename()));
  }
  CHECK(files > 0);
}

TEST_CASE("git blob hash") {
  CHECK(cli::git_blob_sha1("hello\n") == "ce013625030ba8dba906f756967f9e9ca394464a");
  CHECK(cli::git_blob_sha1("") == "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
}
