#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hitchin/geometry.hpp"

namespace hitchin {

enum class Variant { GeneralCyclic, HitchinComponent, SLnR_Even, SLnR_Odd, Sp4Gothen };

std::string to_string(Variant v);
Variant variant_from_string(const std::string& name);

/// Cyclic Higgs bundle data. Arrow k (0-based) maps L_k to L_{k+1} K, indices mod n.
///
/// data layout per variant:
///   GeneralCyclic     gamma_1..gamma_n
///   HitchinComponent  q_n                    arrows (1, ..., 1, q_n)
///   SLnR_Even (n=2m)  nu, gamma_1..gamma_{m-1}, mu
///                     arrows (gamma_1..gamma_{m-1}, mu, gamma_{m-1}..gamma_1, nu)
///   SLnR_Odd (n=2m+1) same data, arrows (gamma_1..gamma_{m-1}, mu, mu, gamma_{m-1}..gamma_1, nu)
///   Sp4Gothen         mu, nu                 arrows (1, mu, 1, nu)
/// `t` multiplies the last arrow.
struct CyclicSpec {
  int rank = 2;
  Variant variant = Variant::GeneralCyclic;
  std::vector<HolomorphicDatum> data;
  Complex t{1.0, 0.0};
  std::optional<std::vector<int>> degrees;

  void validate() const;
  /// The n holomorphic arrows with t applied to the last one.
  std::vector<HolomorphicDatum> arrows() const;
  int unknown_count() const;
  bool symmetric() const { return variant != Variant::GeneralCyclic; }
};

CyclicSpec hitchin_component(int n, HolomorphicDatum qn, Complex t = 1.0);
CyclicSpec general_cyclic(std::vector<HolomorphicDatum> gammas, Complex t = 1.0);
/// nu, gamma_1..gamma_{m-1}, mu for n = 2m or 2m+1.
CyclicSpec slnr(int n, std::vector<HolomorphicDatum> data, Complex t = 1.0);
CyclicSpec sp4_gothen(HolomorphicDatum mu, HolomorphicDatum nu, Complex t = 1.0);

/// Log-metric unknowns. GeneralCyclic: log h_1..log h_{n-1} (h_n = (h_1...h_{n-1})^{-1});
/// symmetric variants: log h_1..log h_m with h_{n+1-k} = h_k^{-1} (and h_{m+1} = 1 for odd n).
struct LogMetricState {
  std::shared_ptr<const Grid> grid;
  std::vector<ScalarField> unknowns;
  double residual_norm = std::numeric_limits<double>::quiet_NaN();

  std::size_t field_count() const { return unknowns.size(); }
  bool all_finite() const;
};

enum class BoundaryKind { Fuchsian, Custom, Periodic };

struct BoundaryCondition {
  BoundaryKind kind = BoundaryKind::Fuchsian;
  /// Custom only: one field per unknown; only boundary nodes are read.
  std::vector<ScalarField> values;

  static BoundaryCondition fuchsian() { return {}; }
  static BoundaryCondition periodic() { return {BoundaryKind::Periodic, {}}; }
  static BoundaryCondition custom(std::vector<ScalarField> values) {
    return {BoundaryKind::Custom, std::move(values)};
  }
};

using SparseMatrixR = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Discretized local cyclic Hitchin equation
///   Delta l_k + a_k e^{l_{k+1} - l_k} - a_{k-1} e^{l_k - l_{k-1}} = 0,   a_k = |arrow_k|^2,
/// restricted to the variant's independent unknowns. Flat vectors are node-major:
/// entry (node i, unknown j) lives at i * m + j.
class HitchinSystem {
 public:
  const CyclicSpec& spec() const { return spec_; }
  const Grid& grid() const { return *grid_; }
  const std::shared_ptr<const Grid>& grid_ptr() const { return grid_; }
  int rank() const { return spec_.rank; }
  int unknown_count() const { return static_cast<int>(eq_.size()); }
  std::size_t dof() const { return grid_->size() * eq_.size(); }

  const std::vector<ScalarField>& arrow_coefficients() const { return coeff_; }
  BoundaryKind boundary_kind() const { return bkind_; }
  /// Dirichlet values per unknown (empty on the torus).
  const std::vector<ScalarField>& boundary_values() const { return bvals_; }

  /// l_k = sum_j expansion(k, j) u_j.
  double expansion(int k, int j) const { return expand_(k, j); }
  const Eigen::MatrixXd& expansion_matrix() const { return expand_; }
  /// Index of the cyclic equation that unknown j carries.
  int equation_of(int j) const { return eq_[static_cast<std::size_t>(j)]; }

  Eigen::VectorXd residual_vector(const Eigen::VectorXd& u) const;
  SparseMatrixR jacobian_matrix(const Eigen::VectorXd& u) const;

  /// Full log metric l_0..l_{n-1} at one node of a flat unknown vector.
  void full_log_metric_at(const Eigen::VectorXd& u, std::size_t node, double* out) const;

  friend HitchinSystem make_system(const CyclicSpec&, std::shared_ptr<const Grid>,
                                   const BoundaryCondition&);
  friend HitchinSystem make_system(const CyclicSpec&, std::shared_ptr<const Grid>,
                                   const BoundaryCondition&, std::vector<ScalarField>);

 private:
  HitchinSystem() = default;
  void nonlinear_terms(const double* l, std::size_t node, double* arrow_terms) const;

  CyclicSpec spec_;
  std::shared_ptr<const Grid> grid_;
  std::vector<ScalarField> coeff_;
  std::vector<ScalarField> bvals_;
  BoundaryKind bkind_ = BoundaryKind::Fuchsian;
  Eigen::MatrixXd expand_;
  std::vector<int> eq_;
};

HitchinSystem make_system(const CyclicSpec& spec, std::shared_ptr<const Grid> grid,
                          const BoundaryCondition& boundary);
/// Torus-style system with arbitrary nonnegative coefficient fields a_0..a_{n-1}.
/// `spec` supplies the rank and variant; its data are ignored.
HitchinSystem make_system(const CyclicSpec& spec, std::shared_ptr<const Grid> grid,
                          const BoundaryCondition& boundary,
                          std::vector<ScalarField> arrow_coefficients);

std::vector<ScalarField> residual(const HitchinSystem& system, const LogMetricState& state);
SparseMatrixR jacobian(const HitchinSystem& system, const LogMetricState& state);

Eigen::VectorXd to_vector(const LogMetricState& state);
LogMetricState from_vector(const HitchinSystem& system, const Eigen::VectorXd& u);

/// l_0..l_{n-1}, reconstructed from the unknowns.
std::vector<ScalarField> full_log_metric(const HitchinSystem& system, const LogMetricState& state);
/// Arrow terms U_k = a_k e^{l_{k+1} - l_k} = |gamma_k|^2 h_k^{-1} h_{k+1}.
std::vector<ScalarField> arrow_terms(const HitchinSystem& system, const LogMetricState& state);

/// l_k of the rank-n Fuchsian solution h_k^{-1} h_{k+1} = k(n-k)/2 g0, sum l_k = 0.
std::vector<double> fuchsian_log_metric(int n, double g0);
/// The Fuchsian log metric restricted to the system's unknowns (zeros on the torus).
LogMetricState fuchsian_state(const HitchinSystem& system);
LogMetricState zero_state(const HitchinSystem& system);

/// Stability of the cyclic bundle with line-bundle degrees deg L_0..deg L_{n-1}.
/// With arrow j identically zero, stable iff sum_{i<k} deg L_{j-i} < 0 for k = 1..n-1;
/// with no zero arrow the bundle is automatically stable. Throws if degrees do not sum to 0.
bool stability_check(const std::vector<int>& degrees, Variant variant,
                     std::optional<int> zero_arrow);
/// Applies stability_check using spec.degrees and the identically-zero arrow of `spec`.
/// Returns nullopt when `spec` carries no degrees.
std::optional<bool> spec_stable(const CyclicSpec& spec);

/// Multiplies the last arrow by t.
CyclicSpec scale_last_arrow(const CyclicSpec& spec, Complex t);
/// GeneralCyclic spec whose arrows are t^{1/n} times the arrows of `spec`.
CyclicSpec gauge_image(const CyclicSpec& spec, Complex t);
/// Shifts (n+1-2k)/n log|t| (k = 1..n) carrying log metrics of scale_last_arrow(spec, t)
/// to those of gauge_image(spec, t).
std::vector<double> gauge_log_shift(int n, Complex t);
/// Unknowns of the gauge_image(spec, t) system (general cyclic form) obtained by shifting the
/// full log metric of `state`, a state of the scale_last_arrow(spec, t) system.
std::vector<ScalarField> gauge_transform(const HitchinSystem& system, const LogMetricState& state,
                                         Complex t);

}  // namespace hitchin
