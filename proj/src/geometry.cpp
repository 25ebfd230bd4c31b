#include "hitchin/geometry.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <string>

#include "hitchin/error.hpp"

namespace hitchin {

void GridSpec::validate() const {
  if (resolution < 8) {
    throw InvalidArgument("grid resolution must be at least 8, got " + std::to_string(resolution));
  }
  switch (kind) {
    case GridKind::RadialDisc:
    case GridKind::Disc2D:
      if (!(radius > 0.0 && radius < 1.0)) {
        throw InvalidArgument("disc radius must lie in (0,1), got " + std::to_string(radius));
      }
      break;
    case GridKind::Torus:
      if (resolution_y != 0 && resolution_y < 8) {
        throw InvalidArgument("torus resolution_y must be at least 8");
      }
      if (!(periods[0] > 0.0 && periods[1] > 0.0)) {
        throw InvalidArgument("torus periods must be positive");
      }
      break;
  }
}

double Grid::abs_z(std::size_t i) const { return std::hypot(x_[i], y_[i]); }

std::size_t Grid::boundary_count() const {
  return static_cast<std::size_t>(std::count(boundary_.begin(), boundary_.end(), 1));
}

double Grid::laplacian_at(std::span<const double> u, std::size_t i) const {
  const double ui = u[i];
  double acc = 0.0;
  for (const auto& e : stencil_row(i)) acc += e.weight * (u[e.column] - ui);
  return acc;
}

std::vector<double> Grid::laplacian(std::span<const double> u) const {
  std::vector<double> out(size(), 0.0);
  for (std::size_t i = 0; i < size(); ++i) out[i] = laplacian_at(u, i);
  return out;
}

std::size_t Grid::nearest_node(Complex z) const {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < size(); ++i) {
    const double d = std::norm(this->z(i) - z);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

void Grid::finish_stencil() {
  diag_.assign(size(), 0.0);
  for (std::size_t i = 0; i < size(); ++i) {
    double s = 0.0;
    for (const auto& e : stencil_row(i)) s += e.weight;
    diag_[i] = -s;
  }
}

namespace {

void build_radial(Grid& g, const GridSpec& spec, std::vector<double>& x, std::vector<double>& y,
                  std::vector<double>& area, std::vector<double>& depth,
                  std::vector<unsigned char>& boundary, std::vector<std::size_t>& row_ptr,
                  std::vector<StencilEntry>& entries,
                  std::vector<std::array<std::size_t, 4>>& nbr, double h) {
  (void)g;
  const std::size_t n = static_cast<std::size_t>(spec.resolution);
  const double pi = std::acos(-1.0);
  const double inv = 1.0 / (4.0 * h * h);
  row_ptr.push_back(0);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = static_cast<double>(i) * h;
    x.push_back(r);
    y.push_back(0.0);
    depth.push_back(static_cast<double>(n - 1 - i));
    boundary.push_back(i == n - 1 ? 1 : 0);
    // Annulus [r - h/2, r + h/2] clipped to [0, R].
    const double lo = std::max(0.0, r - 0.5 * h);
    const double hi = std::min(spec.radius, r + 0.5 * h);
    area.push_back(pi * (hi * hi - lo * lo));
    nbr.push_back({i + 1 < n ? i + 1 : Grid::npos, i > 0 ? i - 1 : Grid::npos, Grid::npos,
                   Grid::npos});
    if (i == 0) {
      // u'(0) = 0: (1/4) * 4 (u_1 - u_0) / h^2.
      entries.push_back({1, 1.0 / (h * h)});
    } else if (i + 1 < n) {
      const double c = 1.0 / (2.0 * static_cast<double>(i));
      entries.push_back({i - 1, inv * (1.0 - c)});
      entries.push_back({i + 1, inv * (1.0 + c)});
    }
    row_ptr.push_back(entries.size());
  }
}

}  // namespace

std::shared_ptr<const Grid> build_grid(const GridSpec& spec) {
  spec.validate();
  std::shared_ptr<Grid> g(new Grid());
  g->spec_ = spec;

  switch (spec.kind) {
    case GridKind::RadialDisc: {
      const double h = spec.radius / static_cast<double>(spec.resolution - 1);
      g->spacing_ = g->hx_ = g->hy_ = h;
      build_radial(*g, spec, g->x_, g->y_, g->area_, g->depth_, g->boundary_, g->row_ptr_,
                   g->entries_, g->nbr_, h);
      break;
    }
    case GridKind::Disc2D: {
      const int n = spec.resolution;
      const double R = spec.radius;
      const double h = 2.0 * R / static_cast<double>(n - 1);
      g->spacing_ = g->hx_ = g->hy_ = h;
      const double slack = 1e-12 * R;
      auto coord = [&](int k) { return -R + static_cast<double>(k) * h; };
      auto active = [&](int ix, int iy) {
        if (ix < 0 || iy < 0 || ix >= n || iy >= n) return false;
        return std::hypot(coord(ix), coord(iy)) <= R + slack;
      };
      std::vector<std::size_t> index(static_cast<std::size_t>(n) * n, Grid::npos);
      for (int iy = 0; iy < n; ++iy) {
        for (int ix = 0; ix < n; ++ix) {
          if (!active(ix, iy)) continue;
          index[static_cast<std::size_t>(iy) * n + ix] = g->x_.size();
          g->x_.push_back(coord(ix));
          g->y_.push_back(coord(iy));
        }
      }
      const double w = 1.0 / (4.0 * h * h);
      g->row_ptr_.push_back(0);
      for (int iy = 0; iy < n; ++iy) {
        for (int ix = 0; ix < n; ++ix) {
          const std::size_t me = index[static_cast<std::size_t>(iy) * n + ix];
          if (me == Grid::npos) continue;
          const int dx[4] = {1, -1, 0, 0};
          const int dy[4] = {0, 0, 1, -1};
          std::array<std::size_t, 4> nb{};
          bool on_boundary = false;
          for (int k = 0; k < 4; ++k) {
            if (active(ix + dx[k], iy + dy[k])) {
              nb[k] = index[static_cast<std::size_t>(iy + dy[k]) * n + ix + dx[k]];
            } else {
              nb[k] = Grid::npos;
              on_boundary = true;
            }
          }
          g->nbr_.push_back(nb);
          g->boundary_.push_back(on_boundary ? 1 : 0);
          g->area_.push_back(h * h);
          g->depth_.push_back(on_boundary ? 0.0 : (R - std::hypot(coord(ix), coord(iy))) / h);
          if (!on_boundary) {
            for (int k = 0; k < 4; ++k) g->entries_.push_back({nb[k], w});
          }
          g->row_ptr_.push_back(g->entries_.size());
        }
      }
      break;
    }
    case GridKind::Torus: {
      const int nx = spec.resolution;
      const int ny = spec.resolution_y == 0 ? spec.resolution : spec.resolution_y;
      g->spec_.resolution_y = ny;
      const double hx = spec.periods[0] / nx;
      const double hy = spec.periods[1] / ny;
      g->hx_ = hx;
      g->hy_ = hy;
      g->spacing_ = std::sqrt(hx * hy);
      const double wx = 1.0 / (4.0 * hx * hx);
      const double wy = 1.0 / (4.0 * hy * hy);
      auto id = [&](int ix, int iy) {
        return static_cast<std::size_t>(((iy + ny) % ny) * nx + (ix + nx) % nx);
      };
      g->row_ptr_.push_back(0);
      for (int iy = 0; iy < ny; ++iy) {
        for (int ix = 0; ix < nx; ++ix) {
          g->x_.push_back(ix * hx);
          g->y_.push_back(iy * hy);
          g->boundary_.push_back(0);
          g->area_.push_back(hx * hy);
          g->depth_.push_back(std::numeric_limits<double>::infinity());
          const std::array<std::size_t, 4> nb{id(ix + 1, iy), id(ix - 1, iy), id(ix, iy + 1),
                                              id(ix, iy - 1)};
          g->nbr_.push_back(nb);
          g->entries_.push_back({nb[0], wx});
          g->entries_.push_back({nb[1], wx});
          g->entries_.push_back({nb[2], wy});
          g->entries_.push_back({nb[3], wy});
          g->row_ptr_.push_back(g->entries_.size());
        }
      }
      break;
    }
  }
  g->finish_stencil();
  return g;
}

ScalarField::ScalarField(std::shared_ptr<const Grid> grid, double fill)
    : grid_(std::move(grid)), values_(grid_->size(), fill) {}

ScalarField::ScalarField(std::shared_ptr<const Grid> grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_->size()) {
    throw InvalidArgument("field length does not match grid node count");
  }
}

bool ScalarField::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

double ScalarField::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

// ---------------------------------------------------------------------------

HolomorphicDatum HolomorphicDatum::normalized(std::vector<Complex> c) {
  while (!c.empty() && c.back() == Complex{}) c.pop_back();
  HolomorphicDatum d;
  if (c.empty()) return d;
  const auto nonzero = std::count_if(c.begin(), c.end(), [](Complex v) { return v != Complex{}; });
  d.coeffs_ = std::move(c);
  if (d.coeffs_.size() == 1) {
    d.kind_ = Kind::Constant;
  } else if (nonzero == 1) {
    d.kind_ = Kind::Monomial;
  } else {
    d.kind_ = Kind::Polynomial;
  }
  return d;
}

HolomorphicDatum HolomorphicDatum::constant(Complex c) { return normalized({c}); }

HolomorphicDatum HolomorphicDatum::monomial(Complex c, int degree) {
  if (degree < 0) throw InvalidArgument("monomial degree must be nonnegative");
  std::vector<Complex> coeffs(static_cast<std::size_t>(degree) + 1, Complex{});
  coeffs.back() = c;
  return normalized(std::move(coeffs));
}

HolomorphicDatum HolomorphicDatum::polynomial(std::vector<Complex> coefficients) {
  return normalized(std::move(coefficients));
}

Complex HolomorphicDatum::operator()(Complex z) const {
  Complex acc{};
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

double HolomorphicDatum::norm_squared(Complex z) const {
  switch (kind_) {
    case Kind::Zero:
      return 0.0;
    case Kind::Constant:
      return std::norm(coeffs_[0]);
    case Kind::Monomial: {
      // |c|^2 (|z|^2)^l by repeated multiplication; no pow() rounding.
      const double r2 = std::norm(z);
      double p = 1.0;
      for (int k = 0; k < degree(); ++k) p *= r2;
      return std::norm(coeffs_.back()) * p;
    }
    case Kind::Polynomial:
      return std::norm((*this)(z));
  }
  return 0.0;
}

HolomorphicDatum HolomorphicDatum::scaled(Complex s) const {
  std::vector<Complex> c = coeffs_;
  for (auto& v : c) v *= s;
  return normalized(std::move(c));
}

HolomorphicDatum HolomorphicDatum::times(const HolomorphicDatum& other) const {
  if (is_zero() || other.is_zero()) return {};
  std::vector<Complex> c(coeffs_.size() + other.coeffs_.size() - 1, Complex{});
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    for (std::size_t j = 0; j < other.coeffs_.size(); ++j) c[i + j] += coeffs_[i] * other.coeffs_[j];
  }
  return normalized(std::move(c));
}

// ---------------------------------------------------------------------------

double hyperbolic_metric_at(double abs_z) {
  const double d = 1.0 - abs_z * abs_z;
  return 2.0 / (d * d);
}

ScalarField hyperbolic_metric(std::shared_ptr<const Grid> grid) {
  if (!grid->is_disc()) {
    throw InvalidArgument("the hyperbolic metric is only defined on disc grids");
  }
  ScalarField out(grid);
  for (std::size_t i = 0; i < grid->size(); ++i) {
    out[i] = hyperbolic_metric_at(grid->abs_z(i));
  }
  return out;
}

ScalarField eval_norm_squared(const HolomorphicDatum& datum, std::shared_ptr<const Grid> grid) {
  ScalarField out(grid);
  for (std::size_t i = 0; i < grid->size(); ++i) out[i] = datum.norm_squared(grid->z(i));
  return out;
}

std::vector<std::size_t> zero_set(const HolomorphicDatum& datum, const Grid& grid, double tol) {
  if (!(tol > 0.0)) throw InvalidArgument("zero_set tolerance must be positive");
  std::vector<double> v(grid.size());
  double vmax = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    v[i] = datum.norm_squared(grid.z(i));
    vmax = std::max(vmax, v[i]);
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (v[i] <= tol * vmax) out.push_back(i);
  }
  return out;
}

std::vector<Complex> roots(const HolomorphicDatum& datum) {
  if (datum.is_zero()) throw InvalidArgument("the zero datum has no isolated roots");
  const auto& c = datum.coefficients();
  std::size_t lead = 0;
  while (c[lead] == Complex{}) ++lead;
  std::vector<Complex> out(lead, Complex{});
  const auto d = static_cast<Eigen::Index>(c.size() - 1 - lead);
  if (d == 0) return out;
  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(d, d);
  for (Eigen::Index i = 1; i < d; ++i) companion(i, i - 1) = 1.0;
  for (Eigen::Index i = 0; i < d; ++i) {
    companion(i, d - 1) = -c[lead + static_cast<std::size_t>(i)] / c.back();
  }
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(companion, false);
  for (Eigen::Index i = 0; i < d; ++i) out.push_back(es.eigenvalues()[i]);
  return out;
}

}  // namespace hitchin
