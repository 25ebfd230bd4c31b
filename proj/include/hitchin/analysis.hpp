#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "hitchin/solver.hpp"
#include "hitchin/system.hpp"

namespace hitchin {

struct MetricReport {
  /// Coefficient of dz (x) dzbar: g = 2n sum_k U_k.
  ScalarField g;
  /// integral of tr(phi phi^*) = sum_k U_k |dz ^ dzbar|, i.e. 2 sum_k U_k dx dy.
  double morse_energy = 0.0;
  /// U_k = |gamma_k|^2 h_k^{-1} h_{k+1}.
  std::vector<ScalarField> arrow_terms;
  /// Per arrow, nodes where the holomorphic coefficient vanishes.
  std::vector<std::vector<unsigned char>> arrow_zero;
};

MetricReport pullback_metric(const HitchinSystem& system, const LogMetricState& state);

struct Rational {
  long num = 0;
  long den = 1;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

/// (k-1)(n+1-k) / (k(n-k)), reduced.
Rational nu_reference(int n, int k);

struct NuReport {
  /// nu_1..nu_m (index 0 holds nu_1).
  std::vector<ScalarField> nu;
  std::vector<Rational> reference;
};

/// nu_1 = U_n / U_1 and nu_k = U_{k-1} / U_k for k = 2..m (HitchinComponent only).
NuReport nu_ratios(const HitchinSystem& system, const LogMetricState& state);

struct CurvatureReport {
  ScalarField K;
  /// Nodes where every arrow term vanishes; K is undefined there (stored as NaN).
  std::vector<unsigned char> branch_mask;
  double min_interior = 0.0;
  double max_interior = 0.0;
  /// Sp(4,R) only: f_1 = U_4 / U_1, f_2 = U_2 / U_1.
  std::vector<ScalarField> f;
};

/// K = -sum_k (U_k - U_{k+1})^2 / (2n (sum_k U_k)^2); the constant -1/2 for n = 2.
CurvatureReport extrinsic_curvature(const HitchinSystem& system, const LogMetricState& state);
/// K = -((f_1 - 1)^2 + (f_2 - 1)^2) / (4 (2 + f_1 + f_2)^2).
CurvatureReport sp4_curvature(const HitchinSystem& system, const LogMetricState& state);
double sp4_curvature_value(double f1, double f2);
double curvature_from_terms(const double* terms, int n);

enum class SymmetricSpace { SLnC, SLnR, Sp2mR };

std::string to_string(SymmetricSpace s);

/// Sectional curvature of span{Y, Z} in the noncompact symmetric space, computed from
/// B([Y,Z],[Y,Z]) / (B(Y,Y) B(Z,Z) - B(Y,Z)^2) with B(X,Y) = 2n Re tr(XY).
double symmetric_space_curvature(const Eigen::MatrixXcd& Y, const Eigen::MatrixXcd& Z,
                                 SymmetricSpace space);
/// A random element of p (Hermitian / real symmetric / Sp-symmetric, trace free).
Eigen::MatrixXcd random_p_element(SymmetricSpace space, int n, std::mt19937_64& rng);
/// The plane (E_ij + E_ji, E_ii - E_jj), or its Sp(2m,R) analogue with j = m + i.
std::pair<Eigen::MatrixXcd, Eigen::MatrixXcd> extremal_plane(SymmetricSpace space, int n, int i,
                                                             int j);

// ---------------------------------------------------------------------------
// Verdicts

/// Strict inequalities are certified only beyond threshold = max(10 tol, C h^2).
struct MarginPolicy {
  double solver_tol = 1e-10;
  double discretization_constant = 0.0;
  double spacing = 0.0;
  int boundary_cells = 5;

  double threshold() const;
};

/// Deviation of the discrete Fuchsian solve of rank n from the exact Fuchsian values,
/// measured over the verdict region and divided by h^2, for each verified quantity.
struct FuchsianCalibration {
  double log_metric = 0.0;       // max |l_h - l|
  double metric_relative = 0.0;  // max |g_h - g| / g
  double nu = 0.0;               // max |nu_k,h - nu~_k|
  double curvature = 0.0;        // max |K_h - K|
};

FuchsianCalibration calibrate_fuchsian(std::shared_ptr<const Grid> grid, int n,
                                       const SolverConfig& config);
MarginPolicy margin_policy(const Grid& grid, double solver_tol, double discretization_constant);

/// Nodes at least `cells` from the boundary that are not masked.
std::vector<unsigned char> verdict_region(const Grid& grid, int cells,
                                          const std::vector<unsigned char>& mask = {});

struct BoundCheck {
  std::string name;
  bool holds = false;
  /// Smallest signed margin over the checked nodes (positive when the bound holds).
  double min_margin = 0.0;
  std::size_t worst_node = 0;
  std::size_t nodes_checked = 0;
  double threshold = 0.0;
};

/// value < bound (strict: margin bound - value must exceed threshold). With relative=true
/// the margin is divided by max(|value|, |bound|).
BoundCheck check_upper(const std::string& name, const ScalarField& value, double bound,
                       const std::vector<unsigned char>& region, double threshold, bool strict,
                       bool relative = false);
/// value > bound.
BoundCheck check_lower(const std::string& name, const ScalarField& value, double bound,
                       const std::vector<unsigned char>& region, double threshold, bool strict,
                       bool relative = false);

enum class Quantity { PullbackMetric, ArrowTerms, MorseEnergy };

struct DominationReport {
  std::vector<BoundCheck> items;
  bool verdict = false;
  double threshold = 0.0;
  double solver_tol = 0.0;
};

/// Checks lower < upper strictly, using relative margins (upper - lower) / |upper|.
/// Arrow terms are compared away from nodes where both arrows vanish.
DominationReport compare_states(const MetricReport& lower, const MetricReport& upper,
                                Quantity quantity, const std::vector<unsigned char>& region,
                                const MarginPolicy& policy);

}  // namespace hitchin
