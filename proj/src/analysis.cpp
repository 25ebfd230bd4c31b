#include "hitchin/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "hitchin/error.hpp"

namespace hitchin {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

MetricReport pullback_metric(const HitchinSystem& system, const LogMetricState& state) {
  MetricReport rep;
  rep.arrow_terms = arrow_terms(system, state);
  const Grid& grid = system.grid();
  const int n = system.rank();
  rep.g = ScalarField(state.grid);
  double energy = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double s = 0.0;
    for (const auto& U : rep.arrow_terms) s += U[i];
    rep.g[i] = 2.0 * n * s;
    energy += 2.0 * s * grid.area_weight(i);
  }
  rep.morse_energy = energy;
  for (const auto& a : system.arrow_coefficients()) {
    std::vector<unsigned char> z(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) z[i] = a[i] == 0.0 ? 1 : 0;
    rep.arrow_zero.push_back(std::move(z));
  }
  return rep;
}

Rational nu_reference(int n, int k) {
  if (k < 1 || k >= n) throw InvalidArgument("nu index out of range");
  long num = static_cast<long>(k - 1) * (n + 1 - k);
  long den = static_cast<long>(k) * (n - k);
  const long g = std::gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  if (num == 0) den = 1;
  return {num, den};
}

NuReport nu_ratios(const HitchinSystem& system, const LogMetricState& state) {
  if (system.spec().variant != Variant::HitchinComponent) {
    throw InvalidArgument("nu ratios are defined for the Hitchin component only");
  }
  const int n = system.rank();
  const int m = n / 2;
  const auto U = arrow_terms(system, state);
  NuReport rep;
  ScalarField nu1(state.grid);
  for (std::size_t i = 0; i < nu1.size(); ++i) nu1[i] = U[static_cast<std::size_t>(n - 1)][i] / U[0][i];
  rep.nu.push_back(std::move(nu1));
  rep.reference.push_back(nu_reference(n, 1));
  for (int k = 2; k <= m; ++k) {
    ScalarField nk(state.grid);
    for (std::size_t i = 0; i < nk.size(); ++i) {
      nk[i] = U[static_cast<std::size_t>(k - 2)][i] / U[static_cast<std::size_t>(k - 1)][i];
    }
    rep.nu.push_back(std::move(nk));
    rep.reference.push_back(nu_reference(n, k));
  }
  return rep;
}

double curvature_from_terms(const double* terms, int n) {
  double sum = 0.0;
  for (int k = 0; k < n; ++k) sum += terms[k];
  if (!(sum > 0.0)) return kNaN;
  if (n == 2) return -0.5;
  double num = 0.0;
  for (int k = 0; k < n; ++k) {
    const double d = terms[k] - terms[(k + 1) % n];
    num += d * d;
  }
  return -num / (2.0 * n * sum * sum);
}

namespace {

void fill_extrema(CurvatureReport& rep, const Grid& grid) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid.is_boundary(i) || rep.branch_mask[i]) continue;
    lo = std::min(lo, rep.K[i]);
    hi = std::max(hi, rep.K[i]);
  }
  rep.min_interior = lo;
  rep.max_interior = hi;
}

}  // namespace

CurvatureReport extrinsic_curvature(const HitchinSystem& system, const LogMetricState& state) {
  const auto U = arrow_terms(system, state);
  const int n = system.rank();
  const Grid& grid = system.grid();
  CurvatureReport rep;
  rep.K = ScalarField(state.grid);
  rep.branch_mask.assign(grid.size(), 0);
  std::vector<double> t(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (int k = 0; k < n; ++k) t[static_cast<std::size_t>(k)] = U[static_cast<std::size_t>(k)][i];
    rep.K[i] = curvature_from_terms(t.data(), n);
    if (std::isnan(rep.K[i])) rep.branch_mask[i] = 1;
  }
  fill_extrema(rep, grid);
  return rep;
}

double sp4_curvature_value(double f1, double f2) {
  const double d = 2.0 + f1 + f2;
  return -((f1 - 1.0) * (f1 - 1.0) + (f2 - 1.0) * (f2 - 1.0)) / (4.0 * d * d);
}

CurvatureReport sp4_curvature(const HitchinSystem& system, const LogMetricState& state) {
  if (system.spec().variant != Variant::Sp4Gothen) {
    throw InvalidArgument("sp4_curvature needs an sp4-gothen state");
  }
  const auto U = arrow_terms(system, state);
  const Grid& grid = system.grid();
  CurvatureReport rep;
  rep.K = ScalarField(state.grid);
  rep.branch_mask.assign(grid.size(), 0);
  rep.f.assign(2, ScalarField(state.grid));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    // U_1 = h_1^{-1} h_2 > 0 always, so no branch points.
    const double f1 = U[3][i] / U[0][i];
    const double f2 = U[1][i] / U[0][i];
    rep.f[0][i] = f1;
    rep.f[1][i] = f2;
    rep.K[i] = sp4_curvature_value(f1, f2);
    if (!std::isfinite(rep.K[i])) rep.branch_mask[i] = 1;
  }
  fill_extrema(rep, grid);
  return rep;
}

// ---------------------------------------------------------------------------

std::string to_string(SymmetricSpace s) {
  switch (s) {
    case SymmetricSpace::SLnC:
      return "SL(n,C)";
    case SymmetricSpace::SLnR:
      return "SL(n,R)";
    case SymmetricSpace::Sp2mR:
      return "Sp(2m,R)";
  }
  return "?";
}

namespace {

void check_p_element(const Eigen::MatrixXcd& X, SymmetricSpace space) {
  const auto n = X.rows();
  if (n < 2 || X.cols() != n) throw InvalidArgument("p elements must be square with n >= 2");
  const double scale = std::max(1.0, X.cwiseAbs().maxCoeff());
  const double tol = 1e-10 * scale;
  if ((X - X.adjoint()).cwiseAbs().maxCoeff() > tol) throw InvalidArgument("element is not Hermitian");
  if (std::abs(X.trace()) > tol * n) throw InvalidArgument("element is not trace free");
  if (space != SymmetricSpace::SLnC && X.imag().cwiseAbs().maxCoeff() > tol) {
    throw InvalidArgument("element is not real");
  }
  if (space == SymmetricSpace::Sp2mR) {
    if (n % 2 != 0) throw InvalidArgument("Sp(2m,R) needs even size");
    const auto m = n / 2;
    const Eigen::MatrixXcd A = X.topLeftCorner(m, m);
    const Eigen::MatrixXcd B = X.topRightCorner(m, m);
    if ((X.bottomRightCorner(m, m) + A).cwiseAbs().maxCoeff() > tol ||
        (X.bottomLeftCorner(m, m) - B).cwiseAbs().maxCoeff() > tol) {
      throw InvalidArgument("element is not in the Sp(2m,R) complement [[A,B],[B,-A]]");
    }
  }
}

double killing(const Eigen::MatrixXcd& X, const Eigen::MatrixXcd& Y) {
  return 2.0 * static_cast<double>(X.rows()) * (X * Y).trace().real();
}

}  // namespace

double symmetric_space_curvature(const Eigen::MatrixXcd& Y, const Eigen::MatrixXcd& Z,
                                 SymmetricSpace space) {
  check_p_element(Y, space);
  check_p_element(Z, space);
  if (Y.rows() != Z.rows()) throw InvalidArgument("Y and Z differ in size");
  const double yy = killing(Y, Y), zz = killing(Z, Z);
  // B-orthogonalize Z against Y; yy * zz - yz^2 loses precision for nearly parallel pairs.
  const Eigen::MatrixXcd W = Z - (killing(Y, Z) / yy) * Y;
  const double ww = killing(W, W);
  if (!(ww > 1e-12 * zz)) throw InvalidArgument("Y and Z span a degenerate plane");
  const Eigen::MatrixXcd C = Y * W - W * Y;
  return killing(C, C) / (yy * ww);
}

Eigen::MatrixXcd random_p_element(SymmetricSpace space, int n, std::mt19937_64& rng) {
  std::normal_distribution<double> N(0.0, 1.0);
  Eigen::MatrixXcd X(n, n);
  switch (space) {
    case SymmetricSpace::SLnC: {
      Eigen::MatrixXcd G(n, n);
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) G(i, j) = Complex(N(rng), N(rng));
      }
      X = G + G.adjoint();
      break;
    }
    case SymmetricSpace::SLnR: {
      Eigen::MatrixXd G(n, n);
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) G(i, j) = N(rng);
      }
      X = (G + G.transpose()).cast<Complex>();
      break;
    }
    case SymmetricSpace::Sp2mR: {
      if (n % 2 != 0) throw InvalidArgument("Sp(2m,R) needs even size");
      const int m = n / 2;
      Eigen::MatrixXd A(m, m), B(m, m);
      for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
          A(i, j) = N(rng);
          B(i, j) = N(rng);
        }
      }
      A = (A + A.transpose()).eval();
      B = (B + B.transpose()).eval();
      Eigen::MatrixXd R(n, n);
      R << A, B, B, -A;
      X = R.cast<Complex>();
      break;
    }
  }
  const Complex tr = X.trace() / static_cast<double>(n);
  X -= tr * Eigen::MatrixXcd::Identity(n, n);
  return X;
}

std::pair<Eigen::MatrixXcd, Eigen::MatrixXcd> extremal_plane(SymmetricSpace space, int n, int i,
                                                             int j) {
  if (space == SymmetricSpace::Sp2mR) {
    if (n % 2 != 0 || i < 0 || i >= n / 2) throw InvalidArgument("bad Sp(2m,R) plane index");
    j = n / 2 + i;
  }
  if (i < 0 || j < 0 || i >= n || j >= n || i == j) throw InvalidArgument("bad plane indices");
  Eigen::MatrixXcd Y = Eigen::MatrixXcd::Zero(n, n), Z = Eigen::MatrixXcd::Zero(n, n);
  Y(i, j) = Y(j, i) = 1.0;
  Z(i, i) = 1.0;
  Z(j, j) = -1.0;
  return {Y, Z};
}

// ---------------------------------------------------------------------------

double MarginPolicy::threshold() const {
  return std::max(10.0 * solver_tol, discretization_constant * spacing * spacing);
}

std::vector<unsigned char> verdict_region(const Grid& grid, int cells,
                                          const std::vector<unsigned char>& mask) {
  std::vector<unsigned char> r(grid.size(), 0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid.is_boundary(i)) continue;
    if (grid.cells_from_boundary(i) < cells) continue;
    if (!mask.empty() && mask[i]) continue;
    r[i] = 1;
  }
  return r;
}

FuchsianCalibration calibrate_fuchsian(std::shared_ptr<const Grid> grid, int n,
                                       const SolverConfig& config) {
  if (!grid->is_disc()) throw InvalidArgument("Fuchsian calibration needs a disc grid");
  const auto spec = hitchin_component(n, HolomorphicDatum::zero());
  const auto sys = make_system(spec, grid, BoundaryCondition::fuchsian());
  const auto exact = fuchsian_state(sys);
  const auto rep = solve(sys, exact, config);
  if (!rep.converged) throw NumericalError("Fuchsian calibration solve did not converge");
  const auto region = verdict_region(*grid, 5);

  FuchsianCalibration c;
  for (std::size_t j = 0; j < exact.unknowns.size(); ++j) {
    for (std::size_t i = 0; i < grid->size(); ++i) {
      if (region[i]) {
        c.log_metric = std::max(c.log_metric, std::abs(rep.state.unknowns[j][i] - exact.unknowns[j][i]));
      }
    }
  }
  const auto g_h = pullback_metric(sys, rep.state).g;
  const auto g_x = pullback_metric(sys, exact).g;
  const auto K_h = extrinsic_curvature(sys, rep.state).K;
  const double K_x = -6.0 / (n * n * (n * n - 1.0));
  const auto nu = nu_ratios(sys, rep.state);
  for (std::size_t i = 0; i < grid->size(); ++i) {
    if (!region[i]) continue;
    c.metric_relative = std::max(c.metric_relative, std::abs(g_h[i] - g_x[i]) / g_x[i]);
    if (n > 2) c.curvature = std::max(c.curvature, std::abs(K_h[i] - K_x));
    for (std::size_t k = 0; k < nu.nu.size(); ++k) {
      c.nu = std::max(c.nu, std::abs(nu.nu[k][i] - nu.reference[k].value()));
    }
  }
  const double h2 = grid->spacing() * grid->spacing();
  c.log_metric /= h2;
  c.metric_relative /= h2;
  c.nu /= h2;
  c.curvature /= h2;
  return c;
}

MarginPolicy margin_policy(const Grid& grid, double solver_tol, double discretization_constant) {
  MarginPolicy p;
  p.solver_tol = solver_tol;
  p.spacing = grid.spacing();
  p.discretization_constant = discretization_constant;
  return p;
}

namespace {

BoundCheck scan(const std::string& name, const ScalarField& value,
                const std::vector<unsigned char>& region, double threshold, bool strict,
                double (*margin_of)(double, double), double bound, bool relative) {
  BoundCheck c;
  c.name = name;
  c.threshold = threshold;
  c.min_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < value.size(); ++i) {
    if (!region[i]) continue;
    ++c.nodes_checked;
    double m = margin_of(value[i], bound);
    if (relative) {
      const double s = std::max(std::abs(value[i]), std::abs(bound));
      m = s == 0.0 ? 0.0 : m / s;
    }
    if (std::isnan(m)) m = -std::numeric_limits<double>::infinity();
    if (m < c.min_margin) {
      c.min_margin = m;
      c.worst_node = i;
    }
  }
  if (c.nodes_checked == 0) {
    c.min_margin = 0.0;
    c.holds = false;
    return c;
  }
  c.holds = strict ? c.min_margin > threshold : c.min_margin >= -threshold;
  return c;
}

}  // namespace

BoundCheck check_upper(const std::string& name, const ScalarField& value, double bound,
                       const std::vector<unsigned char>& region, double threshold, bool strict,
                       bool relative) {
  return scan(name, value, region, threshold, strict, [](double v, double b) { return b - v; }, bound,
              relative);
}

BoundCheck check_lower(const std::string& name, const ScalarField& value, double bound,
                       const std::vector<unsigned char>& region, double threshold, bool strict,
                       bool relative) {
  return scan(name, value, region, threshold, strict, [](double v, double b) { return v - b; }, bound,
              relative);
}

namespace {

BoundCheck relative_domination(const std::string& name, const ScalarField& lower,
                               const ScalarField& upper, const std::vector<unsigned char>& region,
                               double threshold) {
  if (lower.size() != upper.size()) throw InvalidArgument("compared fields differ in size");
  ScalarField margin(upper.grid_ptr());
  for (std::size_t i = 0; i < upper.size(); ++i) {
    const double s = std::max(std::abs(upper[i]), std::abs(lower[i]));
    margin[i] = s == 0.0 ? 0.0 : (upper[i] - lower[i]) / s;
  }
  return check_lower(name, margin, 0.0, region, threshold, true);
}

}  // namespace

DominationReport compare_states(const MetricReport& lower, const MetricReport& upper,
                                Quantity quantity, const std::vector<unsigned char>& region,
                                const MarginPolicy& policy) {
  if (&lower.g.grid() != &upper.g.grid()) throw InvalidArgument("states live on different grids");
  DominationReport rep;
  rep.threshold = policy.threshold();
  rep.solver_tol = policy.solver_tol;
  switch (quantity) {
    case Quantity::PullbackMetric:
      rep.items.push_back(relative_domination("g", lower.g, upper.g, region, rep.threshold));
      break;
    case Quantity::ArrowTerms: {
      if (lower.arrow_terms.size() != upper.arrow_terms.size()) {
        throw InvalidArgument("compared states have different ranks");
      }
      for (std::size_t k = 0; k < upper.arrow_terms.size(); ++k) {
        auto r = region;
        for (std::size_t i = 0; i < r.size(); ++i) {
          if (lower.arrow_zero[k][i] && upper.arrow_zero[k][i]) r[i] = 0;
        }
        rep.items.push_back(relative_domination("U_" + std::to_string(k + 1), lower.arrow_terms[k],
                                                upper.arrow_terms[k], r, rep.threshold));
      }
      break;
    }
    case Quantity::MorseEnergy: {
      BoundCheck c;
      c.name = "morse_energy";
      c.threshold = rep.threshold;
      const double s = std::max(std::abs(upper.morse_energy), std::abs(lower.morse_energy));
      c.min_margin = s == 0.0 ? 0.0 : (upper.morse_energy - lower.morse_energy) / s;
      c.nodes_checked = 1;
      c.holds = c.min_margin > rep.threshold;
      rep.items.push_back(c);
      break;
    }
  }
  rep.verdict = !rep.items.empty() &&
                std::all_of(rep.items.begin(), rep.items.end(), [](const BoundCheck& c) { return c.holds; });
  return rep;
}

}  // namespace hitchin
