// Acceptance run: one PASS/FAIL line per criterion. Exit status is nonzero if any fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hitchin/analysis.hpp"
#include "hitchin/cli.hpp"
#include "hitchin/maxprin.hpp"
#include "hitchin/solver.hpp"

using namespace hitchin;

namespace {

// Pinned tolerances.
constexpr double kRadius = 0.8;
constexpr int kNodes = 256;
constexpr int kBoundaryCells = 5;
constexpr double kSolverTol = 1e-10;
constexpr double kResidualConstant = 500.0;  // residual <= C h^2
constexpr double kOrder = 2.0, kOrderSlack = 0.2;
constexpr double kCurvatureConstTol = 1e-6;
constexpr double kBoundTol = 1e-6;
constexpr double kGaugeFactor = 10.0;  // times the solver tolerance
constexpr double kSymSlack = 1e-10;
constexpr double kExtremalTol = 1e-12;
constexpr int kSymSamples = 10000;
constexpr int kMaxPrincipleInstances = 200;
constexpr double kPositivityTol = 1e-8;
constexpr int kPatternTrials = 100;

struct Result {
  bool pass = true;
  std::ostringstream detail;
  std::string failures;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      failures += " [failed: " + what + "]";
    }
  }
};

HolomorphicDatum z_pow(int d) { return HolomorphicDatum::monomial(1.0, d); }
const HolomorphicDatum kOne = HolomorphicDatum::constant(1.0);

std::shared_ptr<const Grid> radial(int n) { return build_grid({GridKind::RadialDisc, n, 0, kRadius}); }

SolverConfig solver_config() {
  SolverConfig c;
  c.tol_residual = kSolverTol;
  return c;
}

RunConfig run_config(const CyclicSpec& spec) {
  RunConfig c;
  c.grid = {GridKind::RadialDisc, kNodes, 0, kRadius};
  c.spec = spec;
  c.solver = solver_config();
  c.boundary_cells = kBoundaryCells;
  return c;
}

double max_residual(const HitchinSystem& sys, const LogMetricState& s) {
  double r = 0.0;
  for (const auto& f : residual(sys, s)) r = std::max(r, f.max_abs());
  return r;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

double min_margin(const json& verdict, const std::function<bool(const std::string&)>& keep) {
  double m = INFINITY;
  for (const auto& c : verdict["checks"]) {
    if (c.contains("min_margin") && keep(c["name"].get<std::string>())) m = std::min(m, c["min_margin"].get<double>());
  }
  return m;
}

bool all_hold(const json& verdict, const std::function<bool(const std::string&)>& keep) {
  bool ok = verdict["status"] != "inconclusive";
  for (const auto& c : verdict["checks"]) {
    if (keep(c["name"].get<std::string>())) ok = ok && c["holds"].get<bool>();
  }
  return ok;
}

// ---------------------------------------------------------------------------

void fuchsian_exactness(Result& r) {
  double worst_c = 0.0, worst_order_dev = 0.0;
  for (int n = 2; n <= 6; ++n) {
    std::vector<double> res;
    for (int N : {128, 256, 512}) {
      const auto g = radial(N);
      const auto sys = make_system(hitchin_component(n, HolomorphicDatum::zero()), g, BoundaryCondition::fuchsian());
      res.push_back(max_residual(sys, fuchsian_state(sys)));
      if (N == kNodes) {
        const double c = res.back() / (g->spacing() * g->spacing());
        worst_c = std::max(worst_c, c);
        r.require(c <= kResidualConstant, "n=" + std::to_string(n) + " residual/h^2=" + fmt(c));
      }
    }
    for (std::size_t k = 0; k + 1 < res.size(); ++k) {
      const double p = std::log2(res[k] / res[k + 1]);
      worst_order_dev = std::max(worst_order_dev, std::abs(p - kOrder));
      r.require(std::abs(p - kOrder) <= kOrderSlack, "n=" + std::to_string(n) + " order=" + fmt(p));
    }
  }
  r.detail << "max residual/h^2 " << fmt(worst_c) << " (C=" << kResidualConstant << "), max |order-2| "
           << fmt(worst_order_dev);
}

void fuchsian_curvature(Result& r) {
  const auto g = radial(kNodes);
  const auto region = verdict_region(*g, kBoundaryCells);
  for (int n = 3; n <= 5; ++n) {
    const auto sys = make_system(hitchin_component(n, HolomorphicDatum::zero()), g, BoundaryCondition::fuchsian());
    const auto rep = solve(sys, fuchsian_state(sys), solver_config());
    r.require(rep.converged, "solve n=" + std::to_string(n));
    const auto K = extrinsic_curvature(sys, rep.state);
    const double want = -6.0 / (n * n * (n * n - 1.0));
    double dev = 0.0;
    for (std::size_t i = 0; i < g->size(); ++i) {
      if (region[i]) dev = std::max(dev, std::abs(K.K[i] - want));
    }
    r.require(dev <= kCurvatureConstTol, "n=" + std::to_string(n) + " deviation " + fmt(dev));
    r.detail << "n=" << n << " K=" << fmt(want) << " dev " << fmt(dev) << "; ";
  }
}

struct HitchinCase {
  int n;
  HolomorphicDatum q;
  std::string label;
};

std::vector<HitchinCase> hitchin_cases() {
  std::vector<HitchinCase> out;
  for (int n = 3; n <= 5; ++n) {
    out.push_back({n, z_pow(1), "z"});
    out.push_back({n, z_pow(2), "z^2"});
    out.push_back({n, HolomorphicDatum::constant(0.3), "0.3"});
  }
  return out;
}

void nu_bounds(Result& r) {
  double worst = INFINITY;
  for (const auto& c : hitchin_cases()) {
    const auto v = verify_theorem(run_config(hitchin_component(c.n, c.q)), Theorem::NuBounds);
    const auto keep = [](const std::string&) { return true; };
    const double m = min_margin(v, keep);
    worst = std::min(worst, m);
    r.require(v["pass"].get<bool>() && all_hold(v, keep) && m > 0.0,
              "n=" + std::to_string(c.n) + " q=" + c.label + " margin " + fmt(m));
  }
  r.detail << "9 states, smallest relative margin " << fmt(worst);
}

void curvature_bounds(Result& r) {
  const auto g = radial(kNodes);
  double worst_lower = INFINITY, worst_upper = INFINITY;
  for (const auto& c : hitchin_cases()) {
    const auto sys = make_system(hitchin_component(c.n, c.q), g, BoundaryCondition::fuchsian());
    const auto rep = solve(sys, fuchsian_state(sys), solver_config());
    const std::string tag = "n=" + std::to_string(c.n) + " q=" + c.label;
    r.require(rep.converged, "solve " + tag);
    const auto K = extrinsic_curvature(sys, rep.state);
    const auto region = verdict_region(*g, kBoundaryCells, K.branch_mask);
    const double lower = -1.0 / (c.n * (c.n - 1.0) * (c.n - 1.0));
    const double threshold =
        margin_policy(*g, kSolverTol, calibrate_fuchsian(g, c.n, solver_config()).curvature).threshold();
    const auto lo = check_lower("K >= lower", K.K, lower, region, kBoundTol, false);
    const auto hi = check_upper("K < 0", K.K, 0.0, region, threshold, true);
    worst_lower = std::min(worst_lower, lo.min_margin);
    worst_upper = std::min(worst_upper, hi.min_margin);
    r.require(lo.holds, tag + " lower margin " + fmt(lo.min_margin));
    r.require(hi.holds, tag + " upper margin " + fmt(hi.min_margin));
  }
  r.detail << "min K - lower " << fmt(worst_lower) << " (slack " << kBoundTol << "), min -K " << fmt(worst_upper);
}

bool is_difference_check(const std::string& name) {
  return name.find("difference system") != std::string::npos || name.find(": v_") != std::string::npos;
}

CyclicSpec monotonicity_gc() { return general_cyclic({kOne, z_pow(1), z_pow(1)}); }
CyclicSpec monotonicity_sp4() { return sp4_gothen(kOne, z_pow(1)); }
const std::vector<double> kTs = {0.0, 0.5, 1.0, 2.0};

void t_monotonicity(Result& r) {
  for (const auto& [label, spec] : {std::pair{"GC(1,z,z)", monotonicity_gc()}, std::pair{"Sp4(1,z)", monotonicity_sp4()}}) {
    auto cfg = run_config(spec);
    cfg.t_list = kTs;
    const auto v = verify_theorem(cfg, Theorem::Monotonicity);
    const auto keep = [](const std::string& n) { return !is_difference_check(n); };
    const double m = min_margin(v, keep);
    r.require(all_hold(v, keep), std::string(label) + " margin " + fmt(m));
    r.detail << label << " min relative increase " << fmt(m) << ", energy";
    for (const auto& e : v["morse_energy"]) r.detail << " " << fmt(e["morse_energy"].get<double>());
    r.detail << "; ";
  }
}

void gauge_identity(Result& r) {
  const auto g = radial(kNodes);
  const auto spec = monotonicity_gc();
  double worst = 0.0;
  for (double t : {2.0, 5.0}) {
    const auto sa = make_system(scale_last_arrow(spec, t), g, BoundaryCondition::fuchsian());
    const auto ra = solve(sa, fuchsian_state(sa), solver_config());
    // Same boundary data, carried through the constant gauge.
    const auto shifted = gauge_transform(sa, ra.state, t);
    const auto sb = make_system(gauge_image(spec, t), g, BoundaryCondition::custom(shifted));
    const auto rb = solve(sb, fuchsian_state(sb), solver_config());
    r.require(ra.converged && rb.converged, "solve t=" + fmt(t));
    const auto ga = pullback_metric(sa, ra.state).g;
    const auto gb = pullback_metric(sb, rb.state).g;
    double dev = 0.0;
    for (std::size_t i = 0; i < g->size(); ++i) dev = std::max(dev, std::abs(ga[i] - gb[i]) / gb[i]);
    worst = std::max(worst, dev);
    r.require(dev <= kGaugeFactor * kSolverTol, "t=" + fmt(t) + " deviation " + fmt(dev));
  }
  r.detail << "max relative |g - g'| " << fmt(worst) << " (limit " << fmt(kGaugeFactor * kSolverTol) << ")";
}

void fiber_comparison(Result& r) {
  struct Case {
    std::string label;
    CyclicSpec spec;
  };
  const std::vector<Case> stated = {
      {"n=2 mu=1 nu=z^2", slnr(2, {z_pow(2), kOne})},
      {"n=3 mu=1 nu=z^3", slnr(3, {z_pow(3), kOne})},
      {"n=4 gamma=1 mu=1 nu=z^4", slnr(4, {z_pow(4), kOne, kOne})},
  };
  for (const auto& c : stated) {
    const auto v = verify_theorem(run_config(c.spec), Theorem::HitchinFiberComparison);
    const auto keep = [](const std::string&) { return true; };
    const double m = min_margin(v, keep);
    r.require(all_hold(v, keep), c.label + " margin " + fmt(m));
    r.detail << c.label << " margin " << fmt(m) << "; ";
  }
  // Not part of the verdict: a case whose arrows differ from the partner's.
  const auto extra = verify_theorem(run_config(slnr(4, {z_pow(3), kOne, z_pow(1)})), Theorem::HitchinFiberComparison);
  r.detail << "(supplementary n=4 gamma=1 mu=z nu=z^3 margin "
           << fmt(min_margin(extra, [](const std::string&) { return true; })) << ")";
}

void sp4_bounds(Result& r) {
  const std::vector<std::pair<std::string, CyclicSpec>> cases = {
      {"mu=1 nu=0", sp4_gothen(kOne, HolomorphicDatum::zero())},
      {"mu=z nu=0", sp4_gothen(z_pow(1), HolomorphicDatum::zero())},
      {"mu=1 nu=z", sp4_gothen(kOne, z_pow(1))},
      {"mu=z nu=1", sp4_gothen(z_pow(1), kOne)},
      {"mu=1 nu=z^2", sp4_gothen(kOne, z_pow(2))},
  };
  for (const auto& [label, spec] : cases) {
    const auto v = verify_theorem(run_config(spec), Theorem::Sp4Bounds);
    const auto keep = [](const std::string&) { return true; };
    r.require(all_hold(v, keep), label);
    r.detail << label << " K in [" << fmt(v["K_min"].get<double>()) << ", " << fmt(v["K_max"].get<double>()) << "]";
    for (const auto& c : v["checks"]) {
      if (!c["holds"].get<bool>()) r.detail << " (" << c["name"].get<std::string>() << " fails)";
    }
    r.detail << "; ";
  }
}

void symmetric_space(Result& r) {
  std::mt19937_64 rng(20240);
  double worst_extremal = 0.0, lo = INFINITY, hi = -INFINITY;
  for (auto space : {SymmetricSpace::SLnC, SymmetricSpace::SLnR, SymmetricSpace::Sp2mR}) {
    for (int n = 2; n <= 6; ++n) {
      if (space == SymmetricSpace::Sp2mR && n % 2) continue;
      const std::string tag = to_string(space) + " n=" + std::to_string(n);
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
          if (space == SymmetricSpace::Sp2mR && (i >= n / 2 || j != n / 2 + i)) continue;
          const auto [Y, Z] = extremal_plane(space, n, i, j);
          const double dev = std::abs(symmetric_space_curvature(Y, Z, space) + 1.0 / n);
          worst_extremal = std::max(worst_extremal, dev);
          r.require(dev <= kExtremalTol, tag + " extremal deviation " + fmt(dev));
        }
      }
      bool ok = true;
      for (int s = 0; s < kSymSamples; ++s) {
        const auto Y = random_p_element(space, n, rng);
        const auto Z = random_p_element(space, n, rng);
        const double k = symmetric_space_curvature(Y, Z, space);
        lo = std::min(lo, k * n);
        hi = std::max(hi, k);
        ok = ok && k >= -1.0 / n - kSymSlack && k <= kSymSlack;
      }
      r.require(ok, tag + " random planes out of range");
    }
  }
  r.detail << "min n*K over random planes " << fmt(lo) << ", max K " << fmt(hi) << ", extremal deviation "
           << fmt(worst_extremal);
}

bool exhaustive_coupled(const CouplingPattern& p) {
  const int n = static_cast<int>(p.size());
  for (unsigned mask = 1; mask + 1 < (1u << n); ++mask) {
    bool closed = true;
    for (int i = 0; i < n && closed; ++i) {
      if (!(mask >> i & 1u)) continue;
      for (int j = 0; j < n; ++j) {
        if (i != j && p[i][j] && !(mask >> j & 1u)) closed = false;
      }
    }
    if (closed) return false;
  }
  return true;
}

void maximum_principle(Result& r) {
  std::mt19937_64 rng(7);
  const std::vector<std::shared_ptr<const Grid>> grids = {
      build_grid({GridKind::Torus, 16, 0, kRadius, {1.0, 1.0}}),
      build_grid({GridKind::Disc2D, 17, 0, kRadius}),
      radial(65),
  };
  int bad = 0;
  double worst = INFINITY;
  for (int k = 0; k < kMaxPrincipleInstances; ++k) {
    const int n = 2 + k % 3;
    const auto sys = random_cooperative_system(grids[static_cast<std::size_t>(k) % grids.size()], n, rng);
    const auto res = solve_linear_cooperative(sys, true);
    double scale = 0.0, lowest = INFINITY;
    for (int i = 0; i < n; ++i) {
      for (std::size_t p = 0; p < sys.grid->size(); ++p) {
        const bool pole = !sys.excluded.empty() && !sys.excluded[static_cast<std::size_t>(i)].empty() &&
                          sys.excluded[static_cast<std::size_t>(i)][p];
        if (pole) continue;
        scale = std::max(scale, std::abs(res.u[static_cast<std::size_t>(i)][p]));
        lowest = std::min(lowest, res.u[static_cast<std::size_t>(i)][p]);
      }
    }
    const double rel = lowest / std::max(scale, 1e-300);
    worst = std::min(worst, rel);
    if (!res.certified || lowest <= -kPositivityTol * scale) ++bad;
  }
  r.require(bad == 0, std::to_string(bad) + " instances with negative minimum");

  int flagged = 0, controls = 0;
  for (auto v : {ConditionViolation::Cooperative, ConditionViolation::ColumnDominance, ConditionViolation::FullCoupling}) {
    for (int k = 0; k < 10; ++k, ++controls) {
      const auto sys = random_cooperative_system(grids[static_cast<std::size_t>(k) % grids.size()], 2 + k % 3, rng, v);
      const auto c = check_conditions(sys);
      const bool exact = c.cooperative == (v != ConditionViolation::Cooperative) &&
                         c.column_dominant == (v != ConditionViolation::ColumnDominance) &&
                         c.fully_coupled == (v != ConditionViolation::FullCoupling);
      if (exact) ++flagged;
    }
  }
  r.require(flagged == controls, "controls flagged " + std::to_string(flagged) + "/" + std::to_string(controls));

  int agree = 0;
  std::bernoulli_distribution edge(0.2);
  for (int k = 0; k < kPatternTrials; ++k) {
    const int n = 1 + k % 12;
    CouplingPattern p(static_cast<std::size_t>(n), std::vector<bool>(static_cast<std::size_t>(n)));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) p[i][j] = i == j || edge(rng);
    }
    if (fully_coupled(p).has_value() == exhaustive_coupled(p)) continue;
    ++agree;
  }
  r.require(agree == kPatternTrials, "partition oracle agreement " + std::to_string(agree));
  r.detail << kMaxPrincipleInstances << " instances, worst min u / scale " << fmt(worst) << "; controls "
           << flagged << "/" << controls << "; patterns " << agree << "/" << kPatternTrials;
}

void difference_oracle(Result& r) {
  const auto g = radial(kNodes);
  const auto region = verdict_region(*g, kBoundaryCells);
  for (const auto& [label, spec] : {std::pair{"GC(1,z,z)", monotonicity_gc()}, std::pair{"Sp4(1,z)", monotonicity_sp4()}}) {
    const auto cont = continuation_solve(spec, g, kTs, solver_config());
    r.require(cont.completed, std::string(label) + " continuation");
    if (!cont.completed) continue;
    double vmin = INFINITY;
    for (std::size_t i = 1; i < cont.steps.size(); ++i) {
      const auto& a = cont.steps[i];
      const auto& b = cont.steps[i - 1];
      const auto d = difference_system(a.system, a.report.state, b.system, b.report.state);
      const auto c = check_conditions(d.system);
      r.require(c.all(), std::string(label) + " (a)(b)(c) at t=" + fmt(a.t));
      for (const auto& v : d.v) {
        const auto chk = check_lower("v > 0", v, 0.0, region, 0.0, true);
        vmin = std::min(vmin, chk.min_margin);
        r.require(chk.holds, std::string(label) + " v > 0 at t=" + fmt(a.t));
      }
    }
    r.detail << label << " min v " << fmt(vmin) << "; ";
  }
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, void (*)(Result&)>> criteria = {
      {"Fuchsian exactness", fuchsian_exactness},
      {"Fuchsian curvature constants", fuchsian_curvature},
      {"nu-bounds", nu_bounds},
      {"curvature bounds", curvature_bounds},
      {"t-monotonicity", t_monotonicity},
      {"gauge identity", gauge_identity},
      {"Hitchin-fiber comparison", fiber_comparison},
      {"Sp(4,R) bounds", sp4_bounds},
      {"symmetric-space curvature", symmetric_space},
      {"maximum-principle suite", maximum_principle},
      {"difference-system oracle", difference_oracle},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Result r;
    try {
      criteria[k].second(r);
    } catch (const std::exception& e) {
      r.pass = false;
      r.failures += std::string(" [exception: ") + e.what() + "]";
    }
    if (!r.pass) ++failed;
    std::cout << (r.pass ? "PASS" : "FAIL") << "  " << (k + 1) << ". " << criteria[k].first << ": " << r.detail.str()
              << r.failures << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria pass" << std::endl;
  return failed == 0 ? 0 : 1;
}
