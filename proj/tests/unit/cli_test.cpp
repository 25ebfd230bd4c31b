#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hitchin/cli.hpp"
#include "hitchin/error.hpp"

using namespace hitchin;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const char* env = std::getenv("HITCHIN_TMP");
  fs::path p = (env ? fs::path(env) : fs::temp_directory_path()) / "hitchin-cli-test" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json fuchsian_config() {
  return json::parse(R"({
    "grid": {"kind": "radial-disc", "resolution": 64, "radius": 0.8},
    "spec": {"variant": "hitchin-component", "rank": 3, "data": ["zero"]}
  })");
}

bool has_tmp_files(const fs::path& dir) {
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.path().extension() == ".tmp") return true;
  }
  return false;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("config parsing errors name the key") {
    auto j = fuchsian_config();
    j["raduis"] = 1.0;
    try {
      run_config_from_json(j);
      FAIL("expected InvalidArgument");
    } catch (const InvalidArgument& e) {
      CHECK(std::string(e.what()).find("raduis") != std::string::npos);
    }
    j = fuchsian_config();
    j["grid"]["kind"] = "sphere";
    CHECK_THROWS_AS(run_config_from_json(j), InvalidArgument);
    j = fuchsian_config();
    j.erase("grid");
    CHECK_THROWS_AS(run_config_from_json(j), InvalidArgument);
    j = fuchsian_config();
    j["samples"] = "many";
    CHECK_THROWS_AS(run_config_from_json(j), InvalidArgument);
    j = fuchsian_config();
    j["max_principle"] = {{"control", "nope"}};
    CHECK_THROWS_AS(run_config_from_json(j), InvalidArgument);
    CHECK_THROWS_AS(run_config_from_json(json::array()), InvalidArgument);
  }

  TEST_CASE("config round trip") {
    auto j = fuchsian_config();
    j["t_list"] = {0.0, 1.0};
    j["seed"] = 42;
    j["max_principle"] = {{"ranks", {2, 3}}, {"instances", 7}, {"control", "column-dominance"}};
    const auto c = run_config_from_json(j);
    const auto again = run_config_from_json(to_json(c));
    CHECK(to_json(again) == to_json(c));
    CHECK(again.seed == 42);
    CHECK(again.max_principle.control == ConditionViolation::ColumnDominance);
    CHECK(again.t_list == std::vector<double>{0.0, 1.0});
  }

  TEST_CASE("theorem names") {
    for (auto t : all_theorems()) CHECK(theorem_from_string(to_string(t)) == t);
    CHECK_THROWS_AS(theorem_from_string("riemann"), InvalidArgument);
  }

  TEST_CASE("fibre partner multiplies the arrows") {
    const auto s = slnr(4, {HolomorphicDatum::monomial(1.0, 3), HolomorphicDatum::constant(1.0),
                            HolomorphicDatum::monomial(2.0, 1)});
    const auto p = fiber_partner(s);
    CHECK(p.variant == Variant::HitchinComponent);
    CHECK(p.rank == 4);
    // q_4 = gamma^2 mu nu = 2 z^4.
    CHECK(p.data[0] == HolomorphicDatum::monomial(2.0, 4));
  }

  TEST_CASE("solve writes its outputs atomically") {
    auto c = run_config_from_json(fuchsian_config());
    c.out = scratch("solve");
    std::ostringstream log;
    CHECK(cmd_solve(c, log) == kPass);
    CHECK(fs::exists(c.out / "report.json"));
    CHECK(fs::exists(c.out / "state.csv"));
    CHECK(fs::exists(c.out / "residual_history.csv"));
    CHECK_FALSE(has_tmp_files(c.out));
    const auto report = json::parse(slurp(c.out / "report.json"));
    CHECK(report.contains("converged"));
    const auto first = slurp(c.out / "report.json");
    CHECK(cmd_solve(c, log) == kPass);
    CHECK(slurp(c.out / "report.json") == first);
  }

  TEST_CASE("solve without a spec is a usage error") {
    auto j = fuchsian_config();
    j.erase("spec");
    auto c = run_config_from_json(j);
    c.out = scratch("nospec");
    std::ostringstream log;
    CHECK(cmd_solve(c, log) == kUsage);
  }

  TEST_CASE("unwritable output is an I/O error") {
    const auto dir = scratch("blocked");
    std::ofstream(dir / "file") << "x";
    auto c = run_config_from_json(fuchsian_config());
    c.out = dir / "file" / "sub";
    std::ostringstream log;
    CHECK(cmd_solve(c, log) == kIo);
  }

  TEST_CASE("verify symmetric-space curvature") {
    auto c = run_config_from_json(fuchsian_config());
    c.samples = 200;
    c.ranks = {2, 3, 4};
    c.out = scratch("symspace");
    std::ostringstream log;
    CHECK(cmd_verify(c, Theorem::SymSpaceCurvature, log) == kPass);
    const auto v = json::parse(slurp(c.out / "verdict-sym-space-curvature.json"));
    CHECK(v["pass"] == true);
    CHECK(v["status"] == "pass");
  }

  TEST_CASE("max-principle negative control") {
    auto c = run_config_from_json(json::parse(R"({"grid": {"kind": "torus", "resolution": 12}})"));
    c.max_principle.instances = 5;
    c.max_principle.control = ConditionViolation::Cooperative;
    const auto v = verify_theorem(c, Theorem::MaxPrinciple);
    CHECK(v.contains("status"));
  }

  TEST_CASE("sweep refuses an unstable t = 0 member") {
    auto j = fuchsian_config();
    j["spec"] = json::parse(R"({"variant": "general-cyclic", "rank": 2, "data": [1, 1], "degrees": [0, 0]})");
    j["t_list"] = {0.0, 1.0};
    CHECK_THROWS_AS(sweep_table(run_config_from_json(j)), InvalidArgument);
  }
}
