#include "hitchin/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hitchin/error.hpp"
#include "hitchin/linalg.hpp"

namespace hitchin {

void SolverConfig::validate() const {
  if (!(tol_residual > 0.0)) throw InvalidArgument("tol_residual must be positive");
  if (max_newton_iters < 0) throw InvalidArgument("max_newton_iters must be nonnegative");
  if (!(backtrack_factor > 0.0 && backtrack_factor < 1.0)) {
    throw InvalidArgument("backtrack factor must lie in (0,1)");
  }
  if (!(min_step > 0.0 && min_step <= 1.0)) throw InvalidArgument("min_step must lie in (0,1]");
  if (!(krylov_tol > 0.0)) throw InvalidArgument("krylov_tol must be positive");
  if (krylov_restart < 1 || krylov_max_iters < 1) throw InvalidArgument("bad Krylov limits");
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged:
      return "converged";
    case SolveStatus::MaxIterations:
      return "max-iterations";
    case SolveStatus::LineSearchStalled:
      return "line-search-stalled";
    case SolveStatus::SingularJacobian:
      return "singular-jacobian";
    case SolveStatus::NonFinite:
      return "non-finite";
    case SolveStatus::LinearSolverFailed:
      return "linear-solver-failed";
  }
  return "?";
}

namespace {

double inf_norm(const Eigen::VectorXd& v) {
  if (!v.allFinite()) return std::numeric_limits<double>::infinity();
  return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

}  // namespace

SolveReport solve(const HitchinSystem& system, const LogMetricState& initial,
                  const SolverConfig& config) {
  config.validate();
  if (initial.grid.get() != system.grid_ptr().get() ||
      initial.unknowns.size() != static_cast<std::size_t>(system.unknown_count())) {
    throw InvalidArgument("initial state does not match the system");
  }
  LinearSolverKind kind = config.linear_solver;
  if (kind == LinearSolverKind::Auto) {
    kind = system.grid().kind() == GridKind::RadialDisc ? LinearSolverKind::DirectBanded
                                                        : LinearSolverKind::IterativeKrylov;
  }

  SolveReport rep;
  Eigen::VectorXd u = to_vector(initial);
  Eigen::VectorXd F = system.residual_vector(u);
  double norm = inf_norm(F);
  rep.residual_history.push_back(norm);

  Eigen::VectorXd best_u = u;
  double best_norm = norm;
  auto finish = [&](SolveStatus status, std::string msg) {
    rep.status = status;
    rep.converged = status == SolveStatus::Converged;
    if (!rep.converged) rep.failure_iteration = rep.iterations;
    rep.message = std::move(msg);
    rep.state = from_vector(system, best_u);
    rep.state.residual_norm = best_norm;
    return rep;
  };

  if (!std::isfinite(norm)) return finish(SolveStatus::NonFinite, "initial residual is not finite");

  while (true) {
    if (norm <= config.tol_residual) return finish(SolveStatus::Converged, "");
    if (rep.iterations >= config.max_newton_iters) {
      return finish(SolveStatus::MaxIterations, "iteration limit reached");
    }

    const SparseMatrixR J = system.jacobian_matrix(u);
    Eigen::VectorXd du;
    try {
      if (kind == LinearSolverKind::DirectBanded) {
        du = BandedLU(J).solve(-F);
        rep.linear_iterations.push_back(0);
      } else {
        FieldBlockPreconditioner pre(J, system.unknown_count());
        const auto kr = gmres(
            J, -F, [&pre](const Eigen::VectorXd& r) { return pre.apply(r); }, config.krylov_tol,
            config.krylov_restart, config.krylov_max_iters);
        rep.linear_iterations.push_back(kr.iterations);
        if (!kr.converged && !(kr.relative_residual < 0.5)) {
          return finish(SolveStatus::LinearSolverFailed,
                        "GMRES stalled at relative residual " + std::to_string(kr.relative_residual));
        }
        du = kr.x;
      }
    } catch (const NumericalError& e) {
      return finish(SolveStatus::SingularJacobian, e.what());
    }
    if (!du.allFinite()) return finish(SolveStatus::SingularJacobian, "non-finite Newton step");

    double lambda = 1.0;
    bool accepted = false;
    Eigen::VectorXd u_try, F_try;
    double n_try = 0.0;
    while (lambda >= config.min_step) {
      u_try = u + lambda * du;
      F_try = system.residual_vector(u_try);
      n_try = inf_norm(F_try);
      if (std::isfinite(n_try) && n_try <= (1.0 - config.sufficient_decrease * lambda) * norm) {
        accepted = true;
        break;
      }
      lambda *= config.backtrack_factor;
    }
    ++rep.iterations;
    if (!accepted) {
      if (!std::isfinite(n_try)) {
        return finish(SolveStatus::NonFinite, "residual blew up along the Newton direction");
      }
      return finish(SolveStatus::LineSearchStalled, "no sufficient decrease above the minimum step");
    }
    u = std::move(u_try);
    F = std::move(F_try);
    norm = n_try;
    rep.step_sizes.push_back(lambda);
    rep.residual_history.push_back(norm);
    if (norm < best_norm) {
      best_norm = norm;
      best_u = u;
    }
  }
}

BoundaryCondition default_boundary(const Grid& grid) {
  return grid.is_disc() ? BoundaryCondition::fuchsian() : BoundaryCondition::periodic();
}

ContinuationResult continuation_solve(const CyclicSpec& spec, std::shared_ptr<const Grid> grid,
                                      const std::vector<double>& t_list,
                                      const SolverConfig& config,
                                      std::optional<BoundaryCondition> boundary) {
  if (t_list.empty()) throw InvalidArgument("continuation needs at least one t value");
  for (std::size_t i = 0; i < t_list.size(); ++i) {
    if (!(t_list[i] >= 0.0)) throw InvalidArgument("t values must be nonnegative");
    if (i > 0 && !(t_list[i] > t_list[i - 1])) throw InvalidArgument("t values must ascend");
  }
  const BoundaryCondition bc = boundary ? *boundary : default_boundary(*grid);
  ContinuationResult out;
  std::optional<LogMetricState> warm;
  for (double t : t_list) {
    CyclicSpec s = scale_last_arrow(spec, t);
    HitchinSystem sys = make_system(s, grid, bc);
    const LogMetricState init = warm ? *warm : fuchsian_state(sys);
    SolveReport rep = solve(sys, init, config);
    const bool ok = rep.converged;
    warm = rep.state;
    out.steps.push_back({t, std::move(s), std::move(sys), std::move(rep)});
    if (!ok) {
      out.failed_t = t;
      return out;
    }
  }
  out.completed = true;
  return out;
}

}  // namespace hitchin
