#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "config.hpp"
#include "registry.hpp"
#include "runner.hpp"

namespace app = idslab::app;

namespace {

int cmd_run(const std::string& path, const std::optional<std::string>& out, const std::optional<unsigned>& workers) {
  app::ExperimentConfig cfg;
  try {
    cfg = app::load_config(path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  app::RunOptions opts;
  if (out) opts.out_dir = *out;
  opts.workers = workers;
  app::RunOutcome res;
  try {
    res = app::run_experiment(cfg, opts);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  for (const auto& w : res.warnings) std::cerr << "warning: " << w << '\n';
  if (!res.error.empty()) {
    std::cerr << "error: " << res.error << " (partial results in " << res.dir.string() << ")\n";
    return static_cast<int>(res.exit_code);
  }
  for (const auto& [name, ch] : res.checks) std::cout << ch.status << "  " << name << ": " << ch.detail << '\n';
  std::cout << cfg.experiment << ": " << res.status << " -> " << res.dir.string() << '\n';
  return static_cast<int>(res.exit_code);
}

int cmd_validate(const std::string& path) {
  try {
    const auto cfg = app::load_config(path);
    const auto warnings = app::validate_config(cfg);
    for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
    std::cout << "OK\n" << app::config_to_json(cfg).dump(2) << '\n';
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

int cmd_list() {
  for (const auto& e : app::experiment_registry())
    std::printf("%-17s %-14s %s\n", std::string(e.name).c_str(), std::string(e.anchor).c_str(),
                std::string(e.description).c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"idslab: integrated density of states experiments for random magnetic Schroedinger operators"};
  cli.require_subcommand(1);

  std::string run_path;
  std::optional<std::string> out;
  std::optional<unsigned> workers;
  auto* run = cli.add_subcommand("run", "run the experiment described by a config file");
  run->add_option("config", run_path, "TOML or JSON config")->required();
  run->add_option("--out", out, "output directory (overrides IDSLAB_OUT and output.dir)");
  run->add_option("--workers", workers, "worker threads (0 = all cores)");

  std::string validate_path;
  auto* validate = cli.add_subcommand("validate", "check a config without running it");
  validate->add_option("config", validate_path, "TOML or JSON config")->required();

  auto* list = cli.add_subcommand("list-experiments", "print the experiment catalogue");

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = cli.exit(e);
    return code == 0 ? 0 : 1;
  }
  if (*run) return cmd_run(run_path, out, workers);
  if (*validate) return cmd_validate(validate_path);
  if (*list) return cmd_list();
  return 1;
}
