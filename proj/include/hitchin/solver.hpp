#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hitchin/system.hpp"

namespace hitchin {

enum class LinearSolverKind { Auto, DirectBanded, IterativeKrylov };

struct SolverConfig {
  double tol_residual = 1e-10;
  int max_newton_iters = 50;
  double backtrack_factor = 0.5;
  double min_step = 1.0 / 1024.0;
  double sufficient_decrease = 1e-4;
  LinearSolverKind linear_solver = LinearSolverKind::Auto;
  double krylov_tol = 1e-9;
  int krylov_restart = 60;
  int krylov_max_iters = 3000;
  std::vector<double> continuation_steps;

  void validate() const;
};

enum class SolveStatus {
  Converged,
  MaxIterations,
  LineSearchStalled,
  SingularJacobian,
  NonFinite,
  LinearSolverFailed
};

std::string to_string(SolveStatus s);

struct SolveReport {
  LogMetricState state;  // best iterate
  int iterations = 0;
  std::vector<double> residual_history;  // infinity norms, starting with the initial state
  std::vector<double> step_sizes;        // accepted damping factors
  std::vector<int> linear_iterations;    // Krylov iterations per Newton step (0 for direct)
  bool converged = false;
  SolveStatus status = SolveStatus::MaxIterations;
  std::optional<int> failure_iteration;
  std::string message;
};

/// Damped Newton iteration on the log-metric unknowns with backtracking on the residual
/// infinity norm. Non-convergence is reported, not thrown.
SolveReport solve(const HitchinSystem& system, const LogMetricState& initial,
                  const SolverConfig& config);

struct ContinuationStep {
  double t;
  CyclicSpec spec;
  HitchinSystem system;
  SolveReport report;
};

struct ContinuationResult {
  std::vector<ContinuationStep> steps;
  bool completed = false;
  std::optional<double> failed_t;
};

/// Solves scale_last_arrow(spec, t) for each t in ascending order, warm-starting each solve
/// from the previous one. Disc grids use Fuchsian boundary data unless `boundary` is given.
ContinuationResult continuation_solve(const CyclicSpec& spec, std::shared_ptr<const Grid> grid,
                                      const std::vector<double>& t_list,
                                      const SolverConfig& config,
                                      std::optional<BoundaryCondition> boundary = std::nullopt);

/// Default boundary for a grid: Fuchsian on discs, periodic on the torus.
BoundaryCondition default_boundary(const Grid& grid);

}  // namespace hitchin
