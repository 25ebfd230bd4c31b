#pragma once

#include <array>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "hitchin/system.hpp"

namespace hitchin {

/// Discrete linear elliptic system
///   g^{-1} Delta_h u_i + <X, grad_h u_i> + sum_j c_ij u_j = f_i,   i = 0..n-1,
/// on the nodes of a grid. Drift uses first-order upwinding. On disc grids the boundary
/// nodes carry Dirichlet values; nodes in excluded[i] are poles of u_i, where u_i is
/// pinned to pole_value.
struct CooperativeSystem {
  std::shared_ptr<const Grid> grid;
  int n = 0;
  ScalarField metric;                   // g; all ones when empty
  std::vector<ScalarField> drift;       // X = (X_1, X_2), or empty; radial grids use X_1 = X_r
  std::vector<ScalarField> coupling;    // c_ij at index i * n + j
  std::vector<ScalarField> rhs;         // f_i
  std::vector<ScalarField> boundary;    // Dirichlet values on disc grids (zero when empty)
  std::vector<std::vector<unsigned char>> excluded;  // per-unknown pole sets, or empty
  double pole_value = 1e6;

  const ScalarField& c(int i, int j) const { return coupling[static_cast<std::size_t>(i * n + j)]; }
  ScalarField& c(int i, int j) { return coupling[static_cast<std::size_t>(i * n + j)]; }
  bool is_excluded(std::size_t node) const;

  /// Zero-initialized system of n unknowns on `grid`.
  static CooperativeSystem zeros(std::shared_ptr<const Grid> grid, int n);
  void validate() const;
};

/// A split {0..n-1} = alpha + beta with c_ij identically zero for i in alpha, j in beta.
struct Partition {
  std::vector<int> alpha;
  std::vector<int> beta;
};

struct ConditionReport {
  bool cooperative = true;
  double worst_offdiagonal = 0.0;  // most negative c_ij, i != j
  std::size_t cooperative_node = 0;
  int cooperative_i = -1, cooperative_j = -1;

  bool column_dominant = true;
  double worst_column_sum = 0.0;  // largest sum_i c_ij
  std::size_t column_node = 0;
  int column_j = -1;

  bool fully_coupled = true;
  std::optional<Partition> partition;

  bool all() const { return cooperative && column_dominant && fully_coupled; }
};

/// Coupling pattern as a dense row-major boolean matrix: pattern[i][j] means c_ij is not
/// identically zero.
using CouplingPattern = std::vector<std::vector<bool>>;

/// Grows, from each start index s, the set reached through nonzero couplings
/// alpha_{k+1} = {j : c_ij != 0 for some i in alpha_0 u ... u alpha_k}. A closure that stops
/// short of the full index set is returned as a separating partition.
std::optional<Partition> fully_coupled(const CouplingPattern& pattern);

CouplingPattern coupling_pattern(const CooperativeSystem& sys, double tol);

ConditionReport check_conditions(const CooperativeSystem& sys, double tol = 1e-12);

struct LinearSolveResult {
  std::vector<ScalarField> u;
  ConditionReport conditions;
  bool certified = false;  // (a)(b)(c) held, so u > 0 follows
};

/// Solves the coupled sparse system. With certify=true, throws InvalidArgument when the
/// conditions fail; with certify=false it solves anyway and reports certified=false.
/// Throws NumericalError when the assembled matrix is singular.
LinearSolveResult solve_linear_cooperative(const CooperativeSystem& sys, bool certify = true,
                                           double tol = 1e-12);

/// The assembled (node-major) operator and right-hand side, rows for poles and disc
/// boundary nodes being identity rows.
std::pair<SparseMatrixR, Eigen::VectorXd> assemble_cooperative(const CooperativeSystem& sys);

/// Residual of the discrete equations at non-pinned nodes (zero elsewhere).
std::vector<ScalarField> cooperative_residual(const CooperativeSystem& sys,
                                              const std::vector<ScalarField>& u);

/// u'_i = lambda_i u_i, c'_ij = c_ij lambda_i / lambda_j, f'_i = lambda_i f_i.
CooperativeSystem rescale(const CooperativeSystem& sys, const std::vector<double>& lambda);

/// (e^v - 1) / v, continuous at v = 0.
double exp_mean(double v);

struct DifferenceSystem {
  CooperativeSystem system;
  /// v_k = log(u_k^a / u_k^b) with u_k = h_k^{-1} h_{k+1} (u_n carrying |t|^2).
  std::vector<ScalarField> v;
  /// True when spec_b has t = 0 and the reduced (n-1)-system is used.
  bool reduced = false;
};

/// Linearized system satisfied by v_k between the solutions of two members of the same
/// t-family (a over b). Coefficients c_k = g0^{-1} |gamma_k|^2 u~_k (e^{v_k} - 1) / v_k.
/// Boundary values are the v_k of the two states.
DifferenceSystem difference_system(const HitchinSystem& sys_a, const LogMetricState& state_a,
                                   const HitchinSystem& sys_b, const LogMetricState& state_b);

enum class ConditionViolation { None, Cooperative, ColumnDominance, FullCoupling };

std::string to_string(ConditionViolation v);
ConditionViolation violation_from_string(const std::string& name);

/// Random instance with smooth coefficient fields. With violate=None it satisfies (a)(b)(c)
/// with f <= 0, f != 0 and nonnegative boundary data; otherwise exactly the named condition
/// is broken.
CooperativeSystem random_cooperative_system(std::shared_ptr<const Grid> grid, int n,
                                            std::mt19937_64& rng,
                                            ConditionViolation violate = ConditionViolation::None);

}  // namespace hitchin
