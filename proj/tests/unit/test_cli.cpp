#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "config.hpp"
#include "manifest.hpp"
#include "registry.hpp"
#include "runner.hpp"

using namespace idslab::app;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path config_dir() { return IDSLAB_CONFIG_DIR; }

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("idslab_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

json small_ids() {
  return json::parse(R"({
    "experiment": "ids",
    "model": {"d": 2, "sides": [6, 6], "spacing": 1.0, "bc": ["dirichlet", "neumann"], "b": 0.5},
    "ensemble": {"kind": "alloy", "profile": {"shape": "unit-cube"},
                 "coupling": {"kind": "two-point", "a": 1.0, "b": -1.0}},
    "run": {"energies": {"kind": "uniform", "min": -3, "max": 5, "points": 41},
            "realizations": 4, "master_seed": 5},
    "output": {"dir": "unused"}
  })");
}

std::string error_of(const json& j) {
  try {
    const auto c = config_from_json(j);
    validate_config(c);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("every shipped config loads, validates and round-trips") {
    std::size_t seen = 0;
    for (const auto& entry : fs::directory_iterator(config_dir())) {
      if (entry.path().extension() != ".toml") continue;
      ++seen;
      CAPTURE(entry.path().string());
      const auto c = load_config(entry.path());
      CHECK_NOTHROW(validate_config(c));
      const auto echo = config_to_json(c);
      CHECK(config_from_json(echo) == c);
      CHECK(config_to_json(config_from_json(echo)) == echo);
      CHECK(find_experiment(c.experiment) != nullptr);
    }
    CHECK(seen == 10);
  }

  TEST_CASE("JSON configs are accepted") {
    const fs::path dir = scratch("json_cfg");
    fs::create_directories(dir);
    std::ofstream(dir / "c.json") << small_ids().dump();
    CHECK(load_config(dir / "c.json") == config_from_json(small_ids()));
  }

  TEST_CASE("field-level validation messages") {
    auto j = small_ids();
    j["model"]["spacing"] = -1.0;
    CHECK(error_of(j).rfind("model.spacing", 0) == 0);
    j = small_ids();
    j["run"].erase("master_seed");
    CHECK(error_of(j).rfind("run.master_seed", 0) == 0);
    j = small_ids();
    j["model"]["colour"] = "blue";
    CHECK(error_of(j).find("colour") != std::string::npos);
    j = small_ids();
    j["experiment"] = "nope";
    CHECK(error_of(j).rfind("experiment", 0) == 0);
    j = small_ids();
    j["ensemble"]["coupling"]["kind"] = "cauchy";
    CHECK(error_of(j).rfind("ensemble.coupling", 0) == 0);
    j = small_ids();
    j["run"]["realizations"] = 0;
    CHECK(error_of(j).rfind("run.realizations", 0) == 0);
  }

  TEST_CASE("periodic box with incommensurate flux names the quantum") {
    auto j = small_ids();
    j["model"]["bc"] = "periodic";
    const auto msg = error_of(j);
    CHECK(msg.rfind("model", 0) == 0);
    CHECK(msg.find("multiple of") != std::string::npos);
  }

  TEST_CASE("theta override is a warning") {
    auto j = small_ids();
    j["model"]["theta"] = 2;
    const auto w = validate_config(config_from_json(j));
    REQUIRE(w.size() == 1);
    CHECK(w[0].rfind("model.theta", 0) == 0);
  }

  TEST_CASE("registry") {
    const auto reg = experiment_registry();
    CHECK(reg.size() == 10);
    REQUIRE(find_experiment("bc-gap") != nullptr);
    CHECK(find_experiment("bc-gap")->anchor == "Prop. 4.4");
    CHECK(find_experiment("weyl")->anchor == "Remark (vii)");
    CHECK(find_experiment("unknown") == nullptr);
  }

  TEST_CASE("output directory precedence") {
    const auto c = config_from_json(small_ids());
    ::unsetenv("IDSLAB_OUT");
    CHECK(resolve_output_dir(c, std::nullopt) == fs::path("unused"));
    ::setenv("IDSLAB_OUT", "/tmp/from_env", 1);
    CHECK(resolve_output_dir(c, std::nullopt) == fs::path("/tmp/from_env"));
    CHECK(resolve_output_dir(c, fs::path("/tmp/from_cli")) == fs::path("/tmp/from_cli"));
    ::unsetenv("IDSLAB_OUT");
  }

  TEST_CASE("runs are byte-reproducible and the manifest matches the files") {
    const auto c = config_from_json(small_ids());
    const fs::path a = scratch("rep_a"), b = scratch("rep_b");
    const auto ra = run_experiment(c, {a, 1u});
    const auto rb = run_experiment(c, {b, 2u});
    REQUIRE(ra.error.empty());
    CHECK(ra.exit_code == ExitCode::Pass);
    CHECK(ra.files == rb.files);
    for (const auto& f : ra.files)
      if (f.size() > 4 && f.substr(f.size() - 4) == ".csv") CHECK(slurp(a / f) == slurp(b / f));
    const auto manifest = json::parse(slurp(a / "manifest.json"));
    for (const auto& key : {"configEcho", "artifactVersion", "timestamp", "perFileChecksums", "diagnosticFlags"})
      CHECK(manifest.contains(key));
    for (const auto& [name, sum] : manifest["perFileChecksums"].items())
      CHECK(sum.get<std::string>() == sha256_file(a / name));
    CHECK(manifest["diagnosticFlags"]["ids"] == ra.status);
    // echo is enough to re-run; it records the effective worker count
    auto effective = c;
    effective.run.workers = 1;
    CHECK(config_from_json(manifest["configEcho"]) == effective);
    const auto summary = json::parse(slurp(a / "summary.json"));
    CHECK(summary["anchor"] == "Eq. (3.1)");
    CHECK(summary["columns"].size() == 6);
    CHECK(slurp(a / "results.csv").rfind("experiment,box,bc,E,mean,stderr\n", 0) == 0);
  }

  TEST_CASE("a failed run leaves error.json and no manifest") {
    auto j = small_ids();
    j["ensemble"] = json::parse(R"({"kind": "gaussian", "covariance": {"kind": "gaussian-bump", "c0": 1.0, "length": 40.0}})");
    const fs::path dir = scratch("err");
    const auto r = run_experiment(config_from_json(j), {dir, 1u});
    CHECK(r.exit_code == ExitCode::Error);
    CHECK_FALSE(r.error.empty());
    CHECK(fs::exists(dir / "error.json"));
    CHECK_FALSE(fs::exists(dir / "manifest.json"));
  }

  TEST_CASE("sha256 of a known string") {
    const fs::path dir = scratch("sha");
    fs::create_directories(dir);
    std::ofstream(dir / "abc", std::ios::binary) << "abc";
    CHECK(sha256_file(dir / "abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  }
}
