#include "hitchin/maxprin.hpp"

#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "hitchin/error.hpp"

namespace hitchin {

bool CooperativeSystem::is_excluded(std::size_t node) const {
  for (const auto& e : excluded) {
    if (!e.empty() && e[node]) return true;
  }
  return false;
}

CooperativeSystem CooperativeSystem::zeros(std::shared_ptr<const Grid> grid, int n) {
  if (n < 1) throw InvalidArgument("cooperative system needs at least one unknown");
  CooperativeSystem s;
  s.grid = grid;
  s.n = n;
  s.metric = ScalarField(grid, 1.0);
  s.coupling.assign(static_cast<std::size_t>(n * n), ScalarField(grid));
  s.rhs.assign(static_cast<std::size_t>(n), ScalarField(grid));
  if (grid->is_disc()) s.boundary.assign(static_cast<std::size_t>(n), ScalarField(grid));
  return s;
}

void CooperativeSystem::validate() const {
  if (!grid) throw InvalidArgument("cooperative system without a grid");
  if (n < 1) throw InvalidArgument("cooperative system needs at least one unknown");
  const auto N = grid->size();
  auto check = [&](const ScalarField& f, const char* what) {
    if (f.size() != N) throw InvalidArgument(std::string(what) + " field has the wrong length");
  };
  if (metric.size() != 0) {
    check(metric, "metric");
    for (double v : metric.values()) {
      if (!(v > 0.0) || !std::isfinite(v)) throw InvalidArgument("metric must be positive");
    }
  }
  if (coupling.size() != static_cast<std::size_t>(n * n)) throw InvalidArgument("need n*n coupling fields");
  for (const auto& f : coupling) check(f, "coupling");
  if (rhs.size() != static_cast<std::size_t>(n)) throw InvalidArgument("need n right-hand sides");
  for (const auto& f : rhs) check(f, "rhs");
  if (!drift.empty()) {
    if (drift.size() != 2) throw InvalidArgument("drift needs two component fields");
    for (const auto& f : drift) check(f, "drift");
  }
  if (!boundary.empty()) {
    if (boundary.size() != static_cast<std::size_t>(n)) throw InvalidArgument("need n boundary fields");
    for (const auto& f : boundary) check(f, "boundary");
  }
  if (!excluded.empty()) {
    if (excluded.size() != static_cast<std::size_t>(n)) throw InvalidArgument("need n excluded sets");
    for (const auto& e : excluded) {
      if (!e.empty() && e.size() != N) throw InvalidArgument("excluded set has the wrong length");
    }
  }
  for (std::size_t p = 0; p < N; ++p) {
    if (is_excluded(p) || grid->is_boundary(p)) continue;
    for (const auto& f : coupling) {
      if (!std::isfinite(f[p])) throw InvalidArgument("coupling must be finite off the pole set");
    }
  }
}

// ---------------------------------------------------------------------------

std::optional<Partition> fully_coupled(const CouplingPattern& pattern) {
  const int n = static_cast<int>(pattern.size());
  for (const auto& row : pattern) {
    if (static_cast<int>(row.size()) != n) throw InvalidArgument("coupling pattern must be square");
  }
  for (int s = 0; s < n; ++s) {
    std::vector<bool> in(static_cast<std::size_t>(n), false);
    in[static_cast<std::size_t>(s)] = true;
    while (true) {
      // alpha_next = complement of {j : c_ij == 0 for all i in the current union}
      std::vector<bool> next(static_cast<std::size_t>(n), false);
      for (int i = 0; i < n; ++i) {
        if (!in[static_cast<std::size_t>(i)]) continue;
        for (int j = 0; j < n; ++j) {
          if (pattern[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) next[static_cast<std::size_t>(j)] = true;
        }
      }
      bool grew = false;
      for (int j = 0; j < n; ++j) {
        if (next[static_cast<std::size_t>(j)] && !in[static_cast<std::size_t>(j)]) {
          in[static_cast<std::size_t>(j)] = true;
          grew = true;
        }
      }
      if (!grew) break;
    }
    if (std::find(in.begin(), in.end(), false) != in.end()) {
      Partition p;
      for (int j = 0; j < n; ++j) (in[static_cast<std::size_t>(j)] ? p.alpha : p.beta).push_back(j);
      return p;
    }
  }
  return std::nullopt;
}

CouplingPattern coupling_pattern(const CooperativeSystem& sys, double tol) {
  CouplingPattern pat(static_cast<std::size_t>(sys.n), std::vector<bool>(static_cast<std::size_t>(sys.n), false));
  for (int i = 0; i < sys.n; ++i) {
    for (int j = 0; j < sys.n; ++j) {
      const auto& f = sys.c(i, j);
      for (std::size_t p = 0; p < f.size(); ++p) {
        if (sys.is_excluded(p)) continue;
        if (std::abs(f[p]) > tol) {
          pat[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = true;
          break;
        }
      }
    }
  }
  return pat;
}

ConditionReport check_conditions(const CooperativeSystem& sys, double tol) {
  if (!(tol >= 0.0)) throw InvalidArgument("tolerance must be nonnegative");
  sys.validate();
  ConditionReport rep;
  const int n = sys.n;
  for (std::size_t p = 0; p < sys.grid->size(); ++p) {
    if (sys.is_excluded(p)) continue;
    for (int j = 0; j < n; ++j) {
      double col = 0.0;
      for (int i = 0; i < n; ++i) {
        const double v = sys.c(i, j)[p];
        col += v;
        if (i != j && v < rep.worst_offdiagonal) {
          rep.worst_offdiagonal = v;
          rep.cooperative_node = p;
          rep.cooperative_i = i;
          rep.cooperative_j = j;
        }
      }
      if (rep.column_j < 0 || col > rep.worst_column_sum) {
        rep.worst_column_sum = col;
        rep.column_node = p;
        rep.column_j = j;
      }
    }
  }
  rep.cooperative = rep.worst_offdiagonal >= -tol;
  rep.column_dominant = rep.worst_column_sum <= tol;
  rep.partition = fully_coupled(coupling_pattern(sys, tol));
  rep.fully_coupled = !rep.partition.has_value();
  return rep;
}

// ---------------------------------------------------------------------------

namespace {

bool pinned(const CooperativeSystem& sys, int i, std::size_t p) {
  if (sys.grid->is_boundary(p)) return true;
  if (sys.excluded.empty()) return false;
  const auto& e = sys.excluded[static_cast<std::size_t>(i)];
  return !e.empty() && e[p];
}

double pinned_value(const CooperativeSystem& sys, int i, std::size_t p) {
  if (!sys.excluded.empty()) {
    const auto& e = sys.excluded[static_cast<std::size_t>(i)];
    if (!e.empty() && e[p]) return sys.pole_value;
  }
  return sys.boundary.empty() ? 0.0 : sys.boundary[static_cast<std::size_t>(i)][p];
}

/// Off-diagonal operator entries of g^{-1} Delta_h + upwind drift at node p, and the diagonal.
void operator_row(const CooperativeSystem& sys, std::size_t p,
                  std::vector<std::pair<std::size_t, double>>& off, double& diag) {
  const Grid& grid = *sys.grid;
  const double ginv = sys.metric.size() == 0 ? 1.0 : 1.0 / sys.metric[p];
  off.clear();
  diag = 0.0;
  for (const auto& e : grid.stencil_row(p)) {
    off.emplace_back(e.column, ginv * e.weight);
    diag -= ginv * e.weight;
  }
  if (sys.drift.empty()) return;
  const auto nb = grid.axis_neighbours(p);
  const double h[2] = {grid.spacing_x(), grid.spacing_y()};
  for (int d = 0; d < 2; ++d) {
    const double X = sys.drift[static_cast<std::size_t>(d)][p];
    if (X == 0.0) continue;
    const std::size_t fwd = nb[static_cast<std::size_t>(2 * d)];
    const std::size_t bwd = nb[static_cast<std::size_t>(2 * d + 1)];
    const std::size_t q = X > 0.0 ? fwd : bwd;
    if (q == Grid::npos) continue;
    const double w = std::abs(X) / h[d];
    off.emplace_back(q, w);
    diag -= w;
  }
}

}  // namespace

std::pair<SparseMatrixR, Eigen::VectorXd> assemble_cooperative(const CooperativeSystem& sys) {
  sys.validate();
  const int n = sys.n;
  const std::size_t N = sys.grid->size();
  const auto dof = static_cast<Eigen::Index>(N * static_cast<std::size_t>(n));
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(dof) * static_cast<std::size_t>(6 + n));
  Eigen::VectorXd b(dof);
  std::vector<std::pair<std::size_t, double>> off;
  double diag = 0.0;
  for (std::size_t p = 0; p < N; ++p) {
    bool have_row = false;
    for (int i = 0; i < n; ++i) {
      const auto r = static_cast<int>(p * static_cast<std::size_t>(n) + static_cast<std::size_t>(i));
      if (pinned(sys, i, p)) {
        trip.emplace_back(r, r, 1.0);
        b[r] = pinned_value(sys, i, p);
        continue;
      }
      if (!have_row) {
        operator_row(sys, p, off, diag);
        have_row = true;
      }
      for (const auto& [q, w] : off) trip.emplace_back(r, static_cast<int>(q * static_cast<std::size_t>(n) + static_cast<std::size_t>(i)), w);
      for (int j = 0; j < n; ++j) {
        double v = sys.c(i, j)[p];
        if (j == i) v += diag;
        if (v != 0.0 || j == i) trip.emplace_back(r, static_cast<int>(p * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)), v);
      }
      b[r] = sys.rhs[static_cast<std::size_t>(i)][p];
    }
  }
  SparseMatrixR A(dof, dof);
  A.setFromTriplets(trip.begin(), trip.end());
  return {std::move(A), std::move(b)};
}

std::vector<ScalarField> cooperative_residual(const CooperativeSystem& sys,
                                              const std::vector<ScalarField>& u) {
  if (u.size() != static_cast<std::size_t>(sys.n)) throw InvalidArgument("need n fields");
  const auto [A, b] = assemble_cooperative(sys);
  const std::size_t N = sys.grid->size();
  const auto n = static_cast<std::size_t>(sys.n);
  Eigen::VectorXd x(static_cast<Eigen::Index>(N * n));
  for (std::size_t p = 0; p < N; ++p) {
    for (std::size_t i = 0; i < n; ++i) x[static_cast<Eigen::Index>(p * n + i)] = u[i][p];
  }
  const Eigen::VectorXd r = A * x - b;
  std::vector<ScalarField> out(n, ScalarField(sys.grid));
  for (std::size_t p = 0; p < N; ++p) {
    for (std::size_t i = 0; i < n; ++i) {
      out[i][p] = pinned(sys, static_cast<int>(i), p) ? 0.0 : r[static_cast<Eigen::Index>(p * n + i)];
    }
  }
  return out;
}

LinearSolveResult solve_linear_cooperative(const CooperativeSystem& sys, bool certify, double tol) {
  LinearSolveResult res;
  res.conditions = check_conditions(sys, tol);
  res.certified = res.conditions.all();
  if (certify && !res.certified) {
    throw InvalidArgument("conditions (a)(b)(c) fail; refusing to certify positivity");
  }
  const auto [A, b] = assemble_cooperative(sys);
  Eigen::SparseMatrix<double> Ac = A;
  Ac.makeCompressed();
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(Ac);
  if (lu.info() != Eigen::Success) throw NumericalError("cooperative system is singular");
  const Eigen::VectorXd x = lu.solve(b);
  if (lu.info() != Eigen::Success || !x.allFinite()) {
    throw NumericalError("cooperative solve produced non-finite values");
  }
  const auto n = static_cast<std::size_t>(sys.n);
  res.u.assign(n, ScalarField(sys.grid));
  for (std::size_t p = 0; p < sys.grid->size(); ++p) {
    for (std::size_t i = 0; i < n; ++i) res.u[i][p] = x[static_cast<Eigen::Index>(p * n + i)];
  }
  return res;
}

CooperativeSystem rescale(const CooperativeSystem& sys, const std::vector<double>& lambda) {
  if (lambda.size() != static_cast<std::size_t>(sys.n)) throw InvalidArgument("need n scale factors");
  for (double l : lambda) {
    if (!(l > 0.0)) throw InvalidArgument("scale factors must be positive");
  }
  CooperativeSystem out = sys;
  for (int i = 0; i < sys.n; ++i) {
    const double li = lambda[static_cast<std::size_t>(i)];
    for (int j = 0; j < sys.n; ++j) {
      const double s = li / lambda[static_cast<std::size_t>(j)];
      for (auto& v : out.c(i, j).values()) v *= s;
    }
    for (auto& v : out.rhs[static_cast<std::size_t>(i)].values()) v *= li;
    if (!out.boundary.empty()) {
      for (auto& v : out.boundary[static_cast<std::size_t>(i)].values()) v *= li;
    }
  }
  out.pole_value = sys.pole_value;  // poles stay at +infinity in either scaling
  return out;
}

double exp_mean(double v) {
  if (std::abs(v) < 1e-5) return 1.0 + v / 2.0 + v * v / 6.0 + v * v * v / 24.0;
  return std::expm1(v) / v;
}

// ---------------------------------------------------------------------------

namespace {

CyclicSpec untwisted(const CyclicSpec& s) {
  CyclicSpec c = s;
  c.t = 1.0;
  c.degrees.reset();
  return c;
}

bool same_family(const CyclicSpec& a, const CyclicSpec& b) {
  const auto ua = untwisted(a), ub = untwisted(b);
  return ua.rank == ub.rank && ua.variant == ub.variant && ua.data == ub.data;
}

}  // namespace

DifferenceSystem difference_system(const HitchinSystem& sys_a, const LogMetricState& state_a,
                                   const HitchinSystem& sys_b, const LogMetricState& state_b) {
  if (sys_a.grid_ptr().get() != sys_b.grid_ptr().get()) {
    throw InvalidArgument("difference system needs both states on the same grid");
  }
  if (!same_family(sys_a.spec(), sys_b.spec())) {
    throw InvalidArgument("difference system needs two members of the same t-family");
  }
  if (sys_a.spec().t == Complex{}) throw InvalidArgument("the dominating member needs t != 0");
  const auto grid = sys_a.grid_ptr();
  const int n = sys_a.rank();
  const bool reduced = sys_b.spec().t == Complex{};
  const int m = reduced ? n - 1 : n;

  const auto la = full_log_metric(sys_a, state_a);
  const auto lb = full_log_metric(sys_b, state_b);
  const auto Ua = arrow_terms(sys_a, state_a);
  const auto Ub = arrow_terms(sys_b, state_b);
  const double last_shift =
      reduced ? 0.0 : 2.0 * std::log(std::abs(sys_a.spec().t) / std::abs(sys_b.spec().t));

  DifferenceSystem out;
  out.reduced = reduced;
  out.system = CooperativeSystem::zeros(grid, m);
  auto& cs = out.system;
  if (grid->is_disc()) cs.metric = hyperbolic_metric(grid);
  out.v.assign(static_cast<std::size_t>(m), ScalarField(grid));

  const auto N = grid->size();
  std::vector<double> c(static_cast<std::size_t>(n));
  for (std::size_t p = 0; p < N; ++p) {
    const double ginv = 1.0 / cs.metric[p];
    for (int k = 0; k < m; ++k) {
      const auto kk = static_cast<std::size_t>(k);
      const auto k1 = static_cast<std::size_t>((k + 1) % n);
      double v = (la[k1][p] - la[kk][p]) - (lb[k1][p] - lb[kk][p]);
      if (k == n - 1) v += last_shift;
      out.v[kk][p] = v;
      c[kk] = ginv * Ub[kk][p] * exp_mean(v);
    }
    for (int k = 0; k < m; ++k) {
      cs.c(k, k)[p] += -2.0 * c[static_cast<std::size_t>(k)];
      if (reduced) {
        if (k + 1 < m) cs.c(k, k + 1)[p] += c[static_cast<std::size_t>(k + 1)];
        if (k - 1 >= 0) cs.c(k, k - 1)[p] += c[static_cast<std::size_t>(k - 1)];
      } else {
        cs.c(k, (k + 1) % n)[p] += c[static_cast<std::size_t>((k + 1) % n)];
        cs.c(k, (k + n - 1) % n)[p] += c[static_cast<std::size_t>((k + n - 1) % n)];
      }
    }
    if (reduced) {
      const double forcing = -ginv * Ua[static_cast<std::size_t>(n - 1)][p];
      cs.rhs[0][p] += forcing;
      cs.rhs[static_cast<std::size_t>(m - 1)][p] += forcing;
    }
    if (grid->is_disc()) {
      for (int k = 0; k < m; ++k) cs.boundary[static_cast<std::size_t>(k)][p] = out.v[static_cast<std::size_t>(k)][p];
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

std::string to_string(ConditionViolation v) {
  switch (v) {
    case ConditionViolation::None:
      return "none";
    case ConditionViolation::Cooperative:
      return "cooperative";
    case ConditionViolation::ColumnDominance:
      return "column-dominance";
    case ConditionViolation::FullCoupling:
      return "full-coupling";
  }
  return "?";
}

ConditionViolation violation_from_string(const std::string& name) {
  for (auto v : {ConditionViolation::None, ConditionViolation::Cooperative,
                 ConditionViolation::ColumnDominance, ConditionViolation::FullCoupling}) {
    if (to_string(v) == name) return v;
  }
  throw InvalidArgument("unknown condition violation '" + name + "'");
}

namespace {

/// 1 + amp sin(2 pi (k1 x / Lx + k2 y / Ly) + phase): smooth, periodic on the torus.
class SmoothField {
 public:
  SmoothField(const Grid& grid, std::mt19937_64& rng, double amp) : amp_(amp) {
    std::uniform_int_distribution<int> k(0, 2);
    std::uniform_real_distribution<double> ph(0.0, 2.0 * std::numbers::pi);
    k1_ = k(rng);
    k2_ = grid.kind() == GridKind::RadialDisc ? 0 : k(rng);
    phase_ = ph(rng);
    if (grid.kind() == GridKind::Torus) {
      lx_ = grid.spec().periods[0];
      ly_ = grid.spec().periods[1];
    }
  }
  double operator()(const Grid& grid, std::size_t p) const {
    const double a = 2.0 * std::numbers::pi * (k1_ * grid.x(p) / lx_ + k2_ * grid.y(p) / ly_);
    return 1.0 + amp_ * std::sin(a + phase_);
  }

 private:
  double amp_;
  int k1_ = 0, k2_ = 0;
  double phase_ = 0.0;
  double lx_ = 1.0, ly_ = 1.0;
};

ScalarField smooth(std::shared_ptr<const Grid> grid, std::mt19937_64& rng, double base, double amp) {
  const SmoothField s(*grid, rng, amp);
  ScalarField f(grid);
  for (std::size_t p = 0; p < grid->size(); ++p) f[p] = base * s(*grid, p);
  return f;
}

}  // namespace

CooperativeSystem random_cooperative_system(std::shared_ptr<const Grid> grid, int n,
                                            std::mt19937_64& rng, ConditionViolation violate) {
  if (n < 1) throw InvalidArgument("need at least one unknown");
  if (n < 2 && (violate == ConditionViolation::FullCoupling || violate == ConditionViolation::Cooperative)) {
    throw InvalidArgument("this violation needs at least two unknowns");
  }
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  auto uniform = [&](double a, double b) { return a + (b - a) * unif(rng); };
  CooperativeSystem sys = CooperativeSystem::zeros(grid, n);
  sys.metric = smooth(grid, rng, 1.0, 0.5);
  if (unif(rng) < 0.5) {
    sys.drift = {smooth(grid, rng, uniform(-1.0, 1.0), 0.8), ScalarField(grid)};
    if (grid->kind() != GridKind::RadialDisc) sys.drift[1] = smooth(grid, rng, uniform(-1.0, 1.0), 0.8);
  }

  // Off-diagonal pattern: a random cycle plus extra edges keeps it strongly connected.
  std::vector<std::vector<bool>> pat(static_cast<std::size_t>(n), std::vector<bool>(static_cast<std::size_t>(n), false));
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  for (int k = 0; n > 1 && k < n; ++k) {
    pat[static_cast<std::size_t>(perm[static_cast<std::size_t>(k)])]
       [static_cast<std::size_t>(perm[static_cast<std::size_t>((k + 1) % n)])] = true;
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j && unif(rng) < 0.3) pat[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = true;
    }
  }
  if (violate == ConditionViolation::FullCoupling) {
    std::vector<bool> alpha(static_cast<std::size_t>(n), false);
    const int size = 1 + static_cast<int>(unif(rng) * (n - 1));
    for (int k = 0; k < size; ++k) alpha[static_cast<std::size_t>(perm[static_cast<std::size_t>(k)])] = true;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (alpha[static_cast<std::size_t>(i)] && !alpha[static_cast<std::size_t>(j)]) {
          pat[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = false;
        }
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (pat[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) sys.c(i, j) = smooth(grid, rng, uniform(0.2, 2.0), 0.5);
    }
  }
  // Diagonal: column sums are -d_j <= 0, strictly negative for at least one column.
  const int strict = static_cast<int>(unif(rng) * n);
  for (int j = 0; j < n; ++j) {
    const double base = j == strict ? uniform(0.1, 1.0) : (unif(rng) < 0.5 ? 0.0 : uniform(0.0, 1.0));
    const ScalarField d = smooth(grid, rng, base, 0.5);
    for (std::size_t p = 0; p < grid->size(); ++p) {
      double col = 0.0;
      for (int i = 0; i < n; ++i) {
        if (i != j) col += sys.c(i, j)[p];
      }
      sys.c(j, j)[p] = -col - d[p];
    }
  }
  const int forced = static_cast<int>(unif(rng) * n);
  for (int i = 0; i < n; ++i) {
    if (i != forced && unif(rng) < 0.5) continue;
    sys.rhs[static_cast<std::size_t>(i)] = smooth(grid, rng, -uniform(0.1, 1.0), 0.9);
  }
  if (grid->is_disc()) {
    for (int i = 0; i < n; ++i) {
      if (unif(rng) < 0.5) sys.boundary[static_cast<std::size_t>(i)] = smooth(grid, rng, uniform(0.0, 1.0), 0.9);
    }
  }

  // Interior nodes to host poles or witnesses.
  std::vector<std::size_t> interior;
  for (std::size_t p = 0; p < grid->size(); ++p) {
    if (!grid->is_boundary(p) && grid->cells_from_boundary(p) >= 2) interior.push_back(p);
  }
  auto pick = [&]() { return interior[static_cast<std::size_t>(unif(rng) * static_cast<double>(interior.size()))]; };
  if (!interior.empty() && unif(rng) < 0.3) {
    sys.excluded.assign(static_cast<std::size_t>(n), {});
    const auto i = static_cast<std::size_t>(unif(rng) * n);
    sys.excluded[i].assign(grid->size(), 0);
    sys.excluded[i][pick()] = 1;
  }

  if (violate == ConditionViolation::Cooperative || violate == ConditionViolation::ColumnDominance) {
    std::size_t p = pick();
    while (sys.is_excluded(p)) p = pick();
    const int j = static_cast<int>(unif(rng) * n);
    if (violate == ConditionViolation::Cooperative) {
      int i = static_cast<int>(unif(rng) * (n - 1));
      if (i >= j) ++i;
      const double delta = sys.c(i, j)[p] + uniform(0.5, 1.0);
      sys.c(i, j)[p] -= delta;
    } else {
      double col = 0.0;
      for (int i = 0; i < n; ++i) col += sys.c(i, j)[p];
      sys.c(j, j)[p] += -col + uniform(0.5, 1.0);
    }
  }
  return sys;
}

}  // namespace hitchin
