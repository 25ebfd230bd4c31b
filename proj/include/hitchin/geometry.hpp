#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <limits>
#include <memory>
#include <span>
#include <vector>

namespace hitchin {

using Complex = std::complex<double>;

enum class GridKind { RadialDisc, Disc2D, Torus };

/// Parameters of a model geometry.
///
/// RadialDisc: `resolution` radial nodes on [0, radius], node 0 at the origin and the
///   last node on the boundary circle.
/// Disc2D: `resolution` x `resolution` lattice over [-radius, radius]^2, restricted to
///   the closed disc |z| <= radius.
/// Torus: `resolution` x `resolution_y` periodic lattice on [0, px) x [0, py).
struct GridSpec {
  GridKind kind = GridKind::RadialDisc;
  int resolution = 128;
  int resolution_y = 0;  // Torus only; 0 means "same as resolution"
  double radius = 0.8;
  std::array<double, 2> periods{1.0, 1.0};

  void validate() const;
};

struct StencilEntry {
  std::size_t column;
  double weight;
};

/// A discretized model geometry carrying the complex Laplacian d_z d_zbar = (1/4)(d_xx + d_yy).
///
/// Interior stencil rows have nonnegative off-diagonal weights and sum to zero; boundary
/// rows are empty (the owning system imposes Dirichlet data there).
class Grid {
 public:
  const GridSpec& spec() const { return spec_; }
  GridKind kind() const { return spec_.kind; }
  std::size_t size() const { return x_.size(); }

  double x(std::size_t i) const { return x_[i]; }
  double y(std::size_t i) const { return y_[i]; }
  Complex z(std::size_t i) const { return {x_[i], y_[i]}; }
  double abs_z(std::size_t i) const;

  /// Cell size; for the torus the geometric mean of the two spacings.
  double spacing() const { return spacing_; }
  double spacing_x() const { return hx_; }
  double spacing_y() const { return hy_; }

  bool is_boundary(std::size_t i) const { return boundary_[i] != 0; }
  bool is_disc() const { return spec_.kind != GridKind::Torus; }
  std::size_t boundary_count() const;

  /// Distance to the boundary measured in cells (infinite on the torus).
  double cells_from_boundary(std::size_t i) const { return depth_[i]; }

  /// Quadrature weight dx dy of the cell owned by node i.
  double area_weight(std::size_t i) const { return area_[i]; }

  /// Off-diagonal stencil entries of row i. The diagonal weight is minus their sum.
  std::span<const StencilEntry> stencil_row(std::size_t i) const {
    return {entries_.data() + row_ptr_[i], entries_.data() + row_ptr_[i + 1]};
  }
  double stencil_diagonal(std::size_t i) const { return diag_[i]; }

  /// Discrete Laplacian at node i, evaluated as sum_j w_ij (u_j - u_i). Zero on boundary rows.
  double laplacian_at(std::span<const double> u, std::size_t i) const;
  std::vector<double> laplacian(std::span<const double> u) const;

  /// Axis neighbours used by first-order upwind drift terms: (+x, -x, +y, -y) for lattices,
  /// (+r, -r, none, none) for the radial grid. Missing neighbours are npos.
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();
  std::array<std::size_t, 4> axis_neighbours(std::size_t i) const { return nbr_[i]; }

  /// Index of the node closest to z.
  std::size_t nearest_node(Complex z) const;

  friend std::shared_ptr<const Grid> build_grid(const GridSpec& spec);

 private:
  Grid() = default;
  void finish_stencil();

  GridSpec spec_;
  std::vector<double> x_, y_, area_, depth_, diag_;
  std::vector<unsigned char> boundary_;
  std::vector<std::size_t> row_ptr_;
  std::vector<StencilEntry> entries_;
  std::vector<std::array<std::size_t, 4>> nbr_;
  double spacing_ = 0, hx_ = 0, hy_ = 0;
};

std::shared_ptr<const Grid> build_grid(const GridSpec& spec);

/// Real values on the nodes of a grid.
class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(std::shared_ptr<const Grid> grid, double fill = 0.0);
  ScalarField(std::shared_ptr<const Grid> grid, std::vector<double> values);

  const Grid& grid() const { return *grid_; }
  const std::shared_ptr<const Grid>& grid_ptr() const { return grid_; }
  std::size_t size() const { return values_.size(); }

  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  bool all_finite() const;
  double max_abs() const;

 private:
  std::shared_ptr<const Grid> grid_;
  std::vector<double> values_;
};

/// Exact description of a holomorphic coefficient function on a disc chart.
class HolomorphicDatum {
 public:
  enum class Kind { Zero, Constant, Monomial, Polynomial };

  HolomorphicDatum() = default;  // Zero
  static HolomorphicDatum zero() { return {}; }
  static HolomorphicDatum constant(Complex c);
  static HolomorphicDatum monomial(Complex c, int degree);
  /// coefficients[k] multiplies z^k.
  static HolomorphicDatum polynomial(std::vector<Complex> coefficients);

  Kind kind() const { return kind_; }
  /// Polynomial coefficients c_0..c_d (for Monomial, only c_degree is nonzero).
  const std::vector<Complex>& coefficients() const { return coeffs_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }

  bool is_zero() const { return kind_ == Kind::Zero; }
  /// |gamma(z)|^2 depends on |z| only.
  bool is_radial() const { return kind_ != Kind::Polynomial; }

  Complex operator()(Complex z) const;
  double norm_squared(Complex z) const;

  HolomorphicDatum scaled(Complex s) const;
  /// Pointwise product of two data (used for matching Hitchin-fibre partners).
  HolomorphicDatum times(const HolomorphicDatum& other) const;

  bool operator==(const HolomorphicDatum&) const = default;

 private:
  static HolomorphicDatum normalized(std::vector<Complex> coefficients);

  Kind kind_ = Kind::Zero;
  std::vector<Complex> coeffs_;
};

/// g0(z) = 2 / (1 - |z|^2)^2, the solution of d_z d_zbar log g0 = g0 on the unit disc.
ScalarField hyperbolic_metric(std::shared_ptr<const Grid> grid);
double hyperbolic_metric_at(double abs_z);

/// |gamma|^2 at every node.
ScalarField eval_norm_squared(const HolomorphicDatum& datum, std::shared_ptr<const Grid> grid);

/// Nodes where |gamma|^2 <= tol * max |gamma|^2.
std::vector<std::size_t> zero_set(const HolomorphicDatum& datum, const Grid& grid, double tol);
/// Roots with multiplicity (companion-matrix eigenvalues). Throws for the zero datum.
std::vector<Complex> roots(const HolomorphicDatum& datum);

}  // namespace hitchin
