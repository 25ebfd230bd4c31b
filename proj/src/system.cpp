#include "hitchin/system.hpp"

#include <cmath>
#include <numeric>

#include "hitchin/error.hpp"

namespace hitchin {

std::string to_string(Variant v) {
  switch (v) {
    case Variant::GeneralCyclic:
      return "general-cyclic";
    case Variant::HitchinComponent:
      return "hitchin-component";
    case Variant::SLnR_Even:
      return "slnr-even";
    case Variant::SLnR_Odd:
      return "slnr-odd";
    case Variant::Sp4Gothen:
      return "sp4-gothen";
  }
  return "?";
}

Variant variant_from_string(const std::string& name) {
  for (Variant v : {Variant::GeneralCyclic, Variant::HitchinComponent, Variant::SLnR_Even,
                    Variant::SLnR_Odd, Variant::Sp4Gothen}) {
    if (to_string(v) == name) return v;
  }
  throw InvalidArgument("unknown variant '" + name + "'");
}

namespace {

std::size_t expected_arity(const CyclicSpec& s) {
  switch (s.variant) {
    case Variant::GeneralCyclic:
      return static_cast<std::size_t>(s.rank);
    case Variant::HitchinComponent:
      return 1;
    case Variant::SLnR_Even:
    case Variant::SLnR_Odd:
      return static_cast<std::size_t>(s.rank / 2 + 1);
    case Variant::Sp4Gothen:
      return 2;
  }
  return 0;
}

}  // namespace

void CyclicSpec::validate() const {
  if (rank < 2) throw InvalidArgument("rank must be at least 2");
  if (variant == Variant::SLnR_Even && rank % 2 != 0) {
    throw InvalidArgument("slnr-even needs even rank");
  }
  if (variant == Variant::SLnR_Odd && (rank % 2 != 1 || rank < 3)) {
    throw InvalidArgument("slnr-odd needs odd rank >= 3");
  }
  if (variant == Variant::Sp4Gothen && rank != 4) throw InvalidArgument("sp4-gothen needs rank 4");
  if (data.size() != expected_arity(*this)) {
    throw InvalidArgument(to_string(variant) + " with rank " + std::to_string(rank) + " expects " +
                          std::to_string(expected_arity(*this)) + " data entries, got " +
                          std::to_string(data.size()));
  }
  if (variant == Variant::Sp4Gothen && data[0].is_zero()) {
    throw InvalidArgument("sp4-gothen requires mu != 0");
  }
  if (variant == Variant::GeneralCyclic || variant == Variant::SLnR_Even ||
      variant == Variant::SLnR_Odd) {
    const auto a = arrows();
    for (int k = 0; k + 1 < rank; ++k) {
      if (a[static_cast<std::size_t>(k)].is_zero()) {
        throw InvalidArgument("arrow " + std::to_string(k + 1) + " must not vanish identically");
      }
    }
  }
}

std::vector<HolomorphicDatum> CyclicSpec::arrows() const {
  const auto one = HolomorphicDatum::constant(1.0);
  std::vector<HolomorphicDatum> a;
  switch (variant) {
    case Variant::GeneralCyclic:
      a = data;
      break;
    case Variant::HitchinComponent:
      a.assign(static_cast<std::size_t>(rank - 1), one);
      a.push_back(data.at(0));
      break;
    case Variant::SLnR_Even:
    case Variant::SLnR_Odd: {
      const int m = rank / 2;
      // data = (nu, gamma_1..gamma_{m-1}, mu)
      for (int k = 1; k < m; ++k) a.push_back(data.at(static_cast<std::size_t>(k)));
      a.push_back(data.at(static_cast<std::size_t>(m)));
      if (variant == Variant::SLnR_Odd) a.push_back(data.at(static_cast<std::size_t>(m)));
      for (int k = m - 1; k >= 1; --k) a.push_back(data.at(static_cast<std::size_t>(k)));
      a.push_back(data.at(0));
      break;
    }
    case Variant::Sp4Gothen:
      a = {one, data.at(0), one, data.at(1)};
      break;
  }
  if (!a.empty()) a.back() = a.back().scaled(t);
  return a;
}

int CyclicSpec::unknown_count() const { return symmetric() ? rank / 2 : rank - 1; }

CyclicSpec hitchin_component(int n, HolomorphicDatum qn, Complex t) {
  CyclicSpec s{n, Variant::HitchinComponent, {std::move(qn)}, t, std::nullopt};
  s.validate();
  return s;
}

CyclicSpec general_cyclic(std::vector<HolomorphicDatum> gammas, Complex t) {
  CyclicSpec s{static_cast<int>(gammas.size()), Variant::GeneralCyclic, std::move(gammas), t,
               std::nullopt};
  s.validate();
  return s;
}

CyclicSpec slnr(int n, std::vector<HolomorphicDatum> data, Complex t) {
  CyclicSpec s{n, n % 2 == 0 ? Variant::SLnR_Even : Variant::SLnR_Odd, std::move(data), t,
               std::nullopt};
  s.validate();
  return s;
}

CyclicSpec sp4_gothen(HolomorphicDatum mu, HolomorphicDatum nu, Complex t) {
  CyclicSpec s{4, Variant::Sp4Gothen, {std::move(mu), std::move(nu)}, t, std::nullopt};
  s.validate();
  return s;
}

bool LogMetricState::all_finite() const {
  for (const auto& f : unknowns) {
    if (!f.all_finite()) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

std::vector<double> fuchsian_log_metric(int n, double g0) {
  if (n < 2) throw InvalidArgument("rank must be at least 2");
  if (!(g0 > 0.0)) throw InvalidArgument("g0 must be positive");
  const double L = std::log(g0);
  // s_k = l_k - l_0; l = s - mean(s).
  std::vector<double> s(static_cast<std::size_t>(n), 0.0);
  for (int k = 1; k < n; ++k) {
    s[static_cast<std::size_t>(k)] =
        s[static_cast<std::size_t>(k - 1)] + std::log(0.5 * k * (n - k)) + L;
  }
  const double mean = std::accumulate(s.begin(), s.end(), 0.0) / n;
  std::vector<double> l(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) l[static_cast<std::size_t>(k)] = s[static_cast<std::size_t>(k)] - mean;
  // Enforce the exact antisymmetry l_{n-1-k} = -l_k.
  for (int k = 0; k < n / 2; ++k) {
    const double v = 0.5 * (l[static_cast<std::size_t>(k)] - l[static_cast<std::size_t>(n - 1 - k)]);
    l[static_cast<std::size_t>(k)] = v;
    l[static_cast<std::size_t>(n - 1 - k)] = -v;
  }
  if (n % 2 == 1) l[static_cast<std::size_t>(n / 2)] = 0.0;
  return l;
}

namespace {

void check_boundary(const Grid& grid, BoundaryKind kind) {
  if (kind == BoundaryKind::Periodic && grid.is_disc()) {
    throw InvalidArgument("periodic boundary requires a torus grid");
  }
  if (kind != BoundaryKind::Periodic && !grid.is_disc()) {
    throw InvalidArgument("torus grids only accept periodic boundary conditions");
  }
}

}  // namespace

HitchinSystem make_system(const CyclicSpec& spec, std::shared_ptr<const Grid> grid,
                          const BoundaryCondition& boundary,
                          std::vector<ScalarField> arrow_coefficients) {
  if (!grid) throw InvalidArgument("null grid");
  const int n = spec.rank;
  if (n < 2) throw InvalidArgument("rank must be at least 2");
  if (arrow_coefficients.size() != static_cast<std::size_t>(n)) {
    throw InvalidArgument("expected one coefficient field per arrow");
  }
  for (const auto& c : arrow_coefficients) {
    if (c.size() != grid->size()) throw InvalidArgument("coefficient field on a different grid");
    for (double v : c.values()) {
      if (!(v >= 0.0) || !std::isfinite(v)) {
        throw InvalidArgument("coefficient fields must be finite and nonnegative");
      }
    }
  }

  HitchinSystem sys;
  sys.spec_ = spec;
  sys.grid_ = grid;
  sys.coeff_ = std::move(arrow_coefficients);
  sys.bkind_ = boundary.kind;
  check_boundary(*grid, boundary.kind);

  const int m = spec.unknown_count();
  sys.expand_ = Eigen::MatrixXd::Zero(n, m);
  sys.eq_.resize(static_cast<std::size_t>(m));
  if (spec.symmetric()) {
    for (int j = 0; j < m; ++j) {
      sys.expand_(j, j) = 1.0;
      sys.expand_(n - 1 - j, j) = -1.0;
      sys.eq_[static_cast<std::size_t>(j)] = j;
    }
  } else {
    for (int j = 0; j < m; ++j) {
      sys.expand_(j, j) = 1.0;
      sys.expand_(n - 1, j) = -1.0;
      sys.eq_[static_cast<std::size_t>(j)] = j;
    }
  }

  switch (boundary.kind) {
    case BoundaryKind::Periodic:
      break;
    case BoundaryKind::Fuchsian: {
      sys.bvals_.assign(static_cast<std::size_t>(m), ScalarField(grid));
      for (std::size_t i = 0; i < grid->size(); ++i) {
        if (!grid->is_boundary(i)) continue;
        const auto l = fuchsian_log_metric(n, hyperbolic_metric_at(grid->abs_z(i)));
        for (int j = 0; j < m; ++j) sys.bvals_[static_cast<std::size_t>(j)][i] = l[static_cast<std::size_t>(j)];
      }
      break;
    }
    case BoundaryKind::Custom: {
      if (boundary.values.size() != static_cast<std::size_t>(m)) {
        throw InvalidArgument("custom boundary needs " + std::to_string(m) + " fields, got " +
                              std::to_string(boundary.values.size()));
      }
      for (const auto& f : boundary.values) {
        if (f.size() != grid->size()) throw InvalidArgument("boundary field on a different grid");
        for (std::size_t i = 0; i < grid->size(); ++i) {
          if (grid->is_boundary(i) && !std::isfinite(f[i])) {
            throw InvalidArgument("boundary data must be finite");
          }
        }
      }
      sys.bvals_ = boundary.values;
      break;
    }
  }
  return sys;
}

HitchinSystem make_system(const CyclicSpec& spec, std::shared_ptr<const Grid> grid,
                          const BoundaryCondition& boundary) {
  spec.validate();
  if (!grid) throw InvalidArgument("null grid");
  std::vector<ScalarField> coeff;
  for (const auto& a : spec.arrows()) coeff.push_back(eval_norm_squared(a, grid));
  return make_system(spec, grid, boundary, std::move(coeff));
}

void HitchinSystem::full_log_metric_at(const Eigen::VectorXd& u, std::size_t node,
                                       double* out) const {
  const int n = rank();
  const int m = unknown_count();
  const double* un = u.data() + node * static_cast<std::size_t>(m);
  if (spec_.symmetric()) {
    for (int k = 0; k < n; ++k) out[k] = 0.0;
    for (int j = 0; j < m; ++j) {
      out[j] = un[j];
      out[n - 1 - j] = -un[j];
    }
  } else {
    double s = 0.0;
    for (int j = 0; j < m; ++j) {
      out[j] = un[j];
      s += un[j];
    }
    out[n - 1] = -s;
  }
}

void HitchinSystem::nonlinear_terms(const double* l, std::size_t node, double* terms) const {
  const int n = rank();
  for (int k = 0; k < n; ++k) {
    const double a = coeff_[static_cast<std::size_t>(k)][node];
    terms[k] = a == 0.0 ? 0.0 : a * std::exp(l[(k + 1) % n] - l[k]);
  }
}

Eigen::VectorXd HitchinSystem::residual_vector(const Eigen::VectorXd& u) const {
  const std::size_t m = eq_.size();
  const int n = rank();
  if (static_cast<std::size_t>(u.size()) != dof()) throw InvalidArgument("state size mismatch");
  Eigen::VectorXd r(u.size());
  std::vector<double> l(static_cast<std::size_t>(n)), U(static_cast<std::size_t>(n));
  std::vector<double> field(grid_->size());
  // Laplacian per unknown.
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t i = 0; i < grid_->size(); ++i) field[i] = u[static_cast<Eigen::Index>(i * m + j)];
    for (std::size_t i = 0; i < grid_->size(); ++i) {
      r[static_cast<Eigen::Index>(i * m + j)] =
          grid_->is_boundary(i) ? field[i] - bvals_[j][i] : grid_->laplacian_at(field, i);
    }
  }
  for (std::size_t i = 0; i < grid_->size(); ++i) {
    if (grid_->is_boundary(i)) continue;
    full_log_metric_at(u, i, l.data());
    nonlinear_terms(l.data(), i, U.data());
    for (std::size_t j = 0; j < m; ++j) {
      const int k = eq_[j];
      r[static_cast<Eigen::Index>(i * m + j)] += U[static_cast<std::size_t>(k)] - U[static_cast<std::size_t>((k + n - 1) % n)];
    }
  }
  return r;
}

SparseMatrixR HitchinSystem::jacobian_matrix(const Eigen::VectorXd& u) const {
  const std::size_t m = eq_.size();
  const int n = rank();
  if (static_cast<std::size_t>(u.size()) != dof()) throw InvalidArgument("state size mismatch");
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(dof() * (6 + m));
  std::vector<double> l(static_cast<std::size_t>(n)), U(static_cast<std::size_t>(n));
  Eigen::MatrixXd dN(n, n);
  for (std::size_t i = 0; i < grid_->size(); ++i) {
    if (grid_->is_boundary(i)) {
      for (std::size_t j = 0; j < m; ++j) {
        trip.emplace_back(static_cast<int>(i * m + j), static_cast<int>(i * m + j), 1.0);
      }
      continue;
    }
    full_log_metric_at(u, i, l.data());
    nonlinear_terms(l.data(), i, U.data());
    dN.setZero();
    for (int k = 0; k < n; ++k) {
      const double A = U[static_cast<std::size_t>(k)];
      const double B = U[static_cast<std::size_t>((k + n - 1) % n)];
      dN(k, (k + 1) % n) += A;
      dN(k, k) += -A - B;
      dN(k, (k + n - 1) % n) += B;
    }
    const Eigen::MatrixXd local = dN * expand_;
    const auto row = grid_->stencil_row(i);
    for (std::size_t j = 0; j < m; ++j) {
      const int r = static_cast<int>(i * m + j);
      for (std::size_t jp = 0; jp < m; ++jp) {
        double v = local(eq_[j], static_cast<Eigen::Index>(jp));
        if (jp == j) v += grid_->stencil_diagonal(i);
        if (v != 0.0 || jp == j) trip.emplace_back(r, static_cast<int>(i * m + jp), v);
      }
      for (const auto& e : row) trip.emplace_back(r, static_cast<int>(e.column * m + j), e.weight);
    }
  }
  SparseMatrixR J(static_cast<Eigen::Index>(dof()), static_cast<Eigen::Index>(dof()));
  J.setFromTriplets(trip.begin(), trip.end());
  return J;
}

// ---------------------------------------------------------------------------

Eigen::VectorXd to_vector(const LogMetricState& state) {
  const std::size_t m = state.unknowns.size();
  const std::size_t N = state.grid->size();
  Eigen::VectorXd u(static_cast<Eigen::Index>(N * m));
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t i = 0; i < N; ++i) u[static_cast<Eigen::Index>(i * m + j)] = state.unknowns[j][i];
  }
  return u;
}

LogMetricState from_vector(const HitchinSystem& system, const Eigen::VectorXd& u) {
  const std::size_t m = static_cast<std::size_t>(system.unknown_count());
  const std::size_t N = system.grid().size();
  if (static_cast<std::size_t>(u.size()) != N * m) throw InvalidArgument("state size mismatch");
  LogMetricState s;
  s.grid = system.grid_ptr();
  for (std::size_t j = 0; j < m; ++j) {
    ScalarField f(s.grid);
    for (std::size_t i = 0; i < N; ++i) f[i] = u[static_cast<Eigen::Index>(i * m + j)];
    s.unknowns.push_back(std::move(f));
  }
  return s;
}

namespace {

void check_state(const HitchinSystem& system, const LogMetricState& state) {
  if (state.grid.get() != system.grid_ptr().get()) {
    throw InvalidArgument("state lives on a different grid than the system");
  }
  if (state.unknowns.size() != static_cast<std::size_t>(system.unknown_count())) {
    throw InvalidArgument("state has " + std::to_string(state.unknowns.size()) +
                          " fields, system expects " + std::to_string(system.unknown_count()));
  }
}

}  // namespace

std::vector<ScalarField> residual(const HitchinSystem& system, const LogMetricState& state) {
  check_state(system, state);
  const Eigen::VectorXd r = system.residual_vector(to_vector(state));
  if (!r.allFinite()) throw NumericalError("non-finite residual (solution blow-up)");
  return from_vector(system, r).unknowns;
}

SparseMatrixR jacobian(const HitchinSystem& system, const LogMetricState& state) {
  check_state(system, state);
  return system.jacobian_matrix(to_vector(state));
}

std::vector<ScalarField> full_log_metric(const HitchinSystem& system, const LogMetricState& state) {
  check_state(system, state);
  const int n = system.rank();
  const Eigen::VectorXd u = to_vector(state);
  std::vector<ScalarField> out(static_cast<std::size_t>(n), ScalarField(state.grid));
  std::vector<double> l(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < state.grid->size(); ++i) {
    system.full_log_metric_at(u, i, l.data());
    for (int k = 0; k < n; ++k) out[static_cast<std::size_t>(k)][i] = l[static_cast<std::size_t>(k)];
  }
  return out;
}

std::vector<ScalarField> arrow_terms(const HitchinSystem& system, const LogMetricState& state) {
  const auto l = full_log_metric(system, state);
  const int n = system.rank();
  std::vector<ScalarField> out(static_cast<std::size_t>(n), ScalarField(state.grid));
  for (std::size_t i = 0; i < state.grid->size(); ++i) {
    for (int k = 0; k < n; ++k) {
      const double a = system.arrow_coefficients()[static_cast<std::size_t>(k)][i];
      out[static_cast<std::size_t>(k)][i] =
          a == 0.0 ? 0.0 : a * std::exp(l[static_cast<std::size_t>((k + 1) % n)][i] - l[static_cast<std::size_t>(k)][i]);
    }
  }
  return out;
}

LogMetricState zero_state(const HitchinSystem& system) {
  LogMetricState s;
  s.grid = system.grid_ptr();
  s.unknowns.assign(static_cast<std::size_t>(system.unknown_count()), ScalarField(s.grid));
  return s;
}

LogMetricState fuchsian_state(const HitchinSystem& system) {
  LogMetricState s = zero_state(system);
  if (!system.grid().is_disc()) return s;
  const int m = system.unknown_count();
  for (std::size_t i = 0; i < system.grid().size(); ++i) {
    const auto l = fuchsian_log_metric(system.rank(), hyperbolic_metric_at(system.grid().abs_z(i)));
    for (int j = 0; j < m; ++j) s.unknowns[static_cast<std::size_t>(j)][i] = l[static_cast<std::size_t>(j)];
  }
  return s;
}

// ---------------------------------------------------------------------------

bool stability_check(const std::vector<int>& degrees, Variant variant,
                     std::optional<int> zero_arrow) {
  const int n = static_cast<int>(degrees.size());
  if (n < 2) throw InvalidArgument("need at least two degrees");
  if (variant == Variant::Sp4Gothen && n != 4) throw InvalidArgument("sp4-gothen has 4 line bundles");
  if (std::accumulate(degrees.begin(), degrees.end(), 0L) != 0) {
    throw InvalidArgument("degrees must sum to zero");
  }
  if (!zero_arrow) return true;
  const int j = *zero_arrow;
  if (j < 0 || j >= n) throw InvalidArgument("zero arrow index out of range");
  // Arrow j vanishing makes L_j, L_{j-1} + L_j, ... phi-invariant.
  long partial = 0;
  for (int k = 0; k < n - 1; ++k) {
    partial += degrees[static_cast<std::size_t>(((j - k) % n + n) % n)];
    if (partial >= 0) return false;
  }
  return true;
}

std::optional<bool> spec_stable(const CyclicSpec& spec) {
  if (!spec.degrees) return std::nullopt;
  if (spec.degrees->size() != static_cast<std::size_t>(spec.rank)) {
    throw InvalidArgument("degree list length must equal the rank");
  }
  std::optional<int> zero;
  const auto a = spec.arrows();
  for (int k = 0; k < spec.rank; ++k) {
    if (a[static_cast<std::size_t>(k)].is_zero()) {
      if (zero) return false;  // two vanishing arrows split off a proper invariant summand
      zero = k;
    }
  }
  return stability_check(*spec.degrees, spec.variant, zero);
}

CyclicSpec scale_last_arrow(const CyclicSpec& spec, Complex t) {
  CyclicSpec out = spec;
  out.t = spec.t * t;
  return out;
}

CyclicSpec gauge_image(const CyclicSpec& spec, Complex t) {
  if (t == Complex{}) throw InvalidArgument("gauge_image needs t != 0");
  const Complex root = std::pow(t, 1.0 / spec.rank);
  std::vector<HolomorphicDatum> a;
  for (const auto& d : spec.arrows()) a.push_back(d.scaled(root));
  CyclicSpec out{spec.rank, Variant::GeneralCyclic, std::move(a), 1.0, spec.degrees};
  return out;
}

std::vector<double> gauge_log_shift(int n, Complex t) {
  if (t == Complex{}) throw InvalidArgument("gauge shift needs t != 0");
  const double lt = std::log(std::abs(t));
  std::vector<double> s(static_cast<std::size_t>(n));
  for (int k = 1; k <= n; ++k) s[static_cast<std::size_t>(k - 1)] = (n + 1 - 2 * k) * lt / n;
  return s;
}

std::vector<ScalarField> gauge_transform(const HitchinSystem& system, const LogMetricState& state,
                                         Complex t) {
  const int n = system.rank();
  const auto shift = gauge_log_shift(n, t);
  const auto l = full_log_metric(system, state);
  std::vector<ScalarField> out;
  out.reserve(static_cast<std::size_t>(n - 1));
  for (int j = 0; j + 1 < n; ++j) {
    ScalarField f = l[static_cast<std::size_t>(j)];
    for (auto& v : f.values()) v += shift[static_cast<std::size_t>(j)];
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace hitchin
