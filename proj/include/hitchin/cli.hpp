#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hitchin/io.hpp"

namespace hitchin {

enum ExitCode : int { kPass = 0, kUsage = 1, kNumerical = 2, kIo = 3, kVerdictFailed = 4 };

enum class Theorem {
  Monotonicity,
  NuBounds,
  Curvature,
  HitchinFiberComparison,
  Sp4Bounds,
  MaxPrinciple,
  SymSpaceCurvature
};

std::string to_string(Theorem t);
Theorem theorem_from_string(const std::string& name);
std::vector<Theorem> all_theorems();

struct MaxPrincipleParams {
  std::vector<int> ranks{2, 3, 4};
  int instances = 200;
  ConditionViolation control = ConditionViolation::None;
};

struct RunConfig {
  GridSpec grid;
  std::optional<CyclicSpec> spec;
  SolverConfig solver;
  std::vector<double> t_list;
  /// Comparison partner; derived from `spec` when absent.
  std::optional<CyclicSpec> partner;
  int samples = 10000;
  std::uint64_t seed = 0;
  std::vector<int> ranks{2, 3, 4, 5, 6};  // symmetric-space sampling
  int boundary_cells = 5;
  MaxPrincipleParams max_principle;
  std::filesystem::path out = "out";
};

RunConfig run_config_from_json(const json& j);
json to_json(const RunConfig& c);
RunConfig load_run_config(const std::filesystem::path& path);

/// Hitchin-component partner in the same fibre: q_n is the product of all arrows.
CyclicSpec fiber_partner(const CyclicSpec& spec);

/// Runs the checks of one theorem without touching the file system. The result holds
/// "pass" (bool), "status" ("pass" | "fail" | "inconclusive"), every margin, and solver data.
json verify_theorem(const RunConfig& config, Theorem theorem);

/// Continuation table and Morse-energy verdict, without file output. Throws InvalidArgument
/// when the t = 0 member is unstable.
json sweep_table(const RunConfig& config);

// Subcommands: write their outputs under config.out and return an ExitCode.
int cmd_solve(const RunConfig& config, std::ostream& log);
int cmd_verify(const RunConfig& config, Theorem theorem, std::ostream& log);
int cmd_sweep(const RunConfig& config, std::ostream& log);

}  // namespace hitchin
