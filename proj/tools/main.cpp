#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "hitchin/cli.hpp"
#include "hitchin/error.hpp"

int main(int argc, char** argv) {
  using namespace hitchin;
  CLI::App app{"Cyclic Hitchin equation lab: solve, verify, sweep"};
  app.require_subcommand(1);

  std::string config_path, out_dir, theorem;
  std::optional<std::uint64_t> seed;
  std::optional<int> resolution;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON run configuration")->required();
    sub->add_option("--out", out_dir, "output directory (overrides config.out)");
    sub->add_option("--seed", seed, "random seed (overrides config.seed)");
    sub->add_option("--resolution", resolution, "grid resolution (overrides config.grid.resolution)");
  };
  auto* solve = app.add_subcommand("solve", "solve one configuration");
  auto* verify = app.add_subcommand("verify", "check one theorem");
  auto* sweep = app.add_subcommand("sweep", "continuation in t with Morse-energy table");
  common(solve);
  common(verify);
  common(sweep);
  std::vector<std::string> names;
  for (auto t : all_theorems()) names.push_back(to_string(t));
  verify->add_option("--theorem", theorem, "theorem to check")->required()->check(CLI::IsMember(names));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kPass : kUsage;
  }

  RunConfig cfg;
  try {
    cfg = load_run_config(config_path);
    if (!out_dir.empty()) cfg.out = out_dir;
    if (seed) cfg.seed = *seed;
    if (resolution) {
      cfg.grid.resolution = *resolution;
      cfg.grid.validate();
    }
  } catch (const InvalidArgument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kUsage;
  } catch (const IoError& e) {
    std::cerr << "i/o failure: " << e.what() << "\n";
    return kIo;
  }

  if (solve->parsed()) return cmd_solve(cfg, std::cout);
  if (verify->parsed()) return cmd_verify(cfg, theorem_from_string(theorem), std::cout);
  return cmd_sweep(cfg, std::cout);
}
