#include "hitchin/cli.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <ostream>

#include "hitchin/error.hpp"

namespace hitchin {

std::string to_string(Theorem t) {
  switch (t) {
    case Theorem::Monotonicity:
      return "monotonicity";
    case Theorem::NuBounds:
      return "nu-bounds";
    case Theorem::Curvature:
      return "curvature";
    case Theorem::HitchinFiberComparison:
      return "hitchin-fiber-comparison";
    case Theorem::Sp4Bounds:
      return "sp4-bounds";
    case Theorem::MaxPrinciple:
      return "max-principle";
    case Theorem::SymSpaceCurvature:
      return "sym-space-curvature";
  }
  return "?";
}

std::vector<Theorem> all_theorems() {
  return {Theorem::Monotonicity, Theorem::NuBounds,     Theorem::Curvature,
          Theorem::HitchinFiberComparison, Theorem::Sp4Bounds, Theorem::MaxPrinciple,
          Theorem::SymSpaceCurvature};
}

Theorem theorem_from_string(const std::string& name) {
  for (auto t : all_theorems()) {
    if (to_string(t) == name) return t;
  }
  throw InvalidArgument("unknown theorem '" + name + "'");
}

// ---------------------------------------------------------------------------
// Config

RunConfig run_config_from_json(const json& j) {
  if (!j.is_object()) throw InvalidArgument("config: expected an object");
  static const std::vector<std::string> keys = {"grid",    "spec", "solver", "t_list",         "partner",
                                                "samples", "seed", "ranks",  "boundary_cells", "max_principle",
                                                "out"};
  for (const auto& [k, v] : j.items()) {
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) {
      throw InvalidArgument("config: unknown key '" + k + "'");
    }
  }
  auto get = [&](const char* key, auto fallback) {
    if (!j.contains(key)) return fallback;
    try {
      return j.at(key).get<decltype(fallback)>();
    } catch (const json::exception&) {
      throw InvalidArgument(std::string("config.") + key + ": wrong type");
    }
  };
  RunConfig c;
  if (!j.contains("grid")) throw InvalidArgument("config: missing key 'grid'");
  c.grid = grid_spec_from_json(j["grid"]);
  if (j.contains("spec")) c.spec = cyclic_spec_from_json(j["spec"]);
  if (j.contains("solver")) c.solver = solver_config_from_json(j["solver"]);
  c.t_list = get("t_list", c.t_list);
  if (c.t_list.empty()) c.t_list = c.solver.continuation_steps;
  if (j.contains("partner")) c.partner = cyclic_spec_from_json(j["partner"]);
  c.samples = get("samples", c.samples);
  c.seed = get("seed", c.seed);
  c.ranks = get("ranks", c.ranks);
  c.boundary_cells = get("boundary_cells", c.boundary_cells);
  c.out = get("out", c.out.string());
  if (j.contains("max_principle")) {
    const auto& m = j["max_principle"];
    if (!m.is_object()) throw InvalidArgument("config.max_principle: expected an object");
    for (const auto& [k, v] : m.items()) {
      if (k != "ranks" && k != "instances" && k != "control") {
        throw InvalidArgument("config.max_principle: unknown key '" + k + "'");
      }
    }
    try {
      if (m.contains("ranks")) c.max_principle.ranks = m["ranks"].get<std::vector<int>>();
      if (m.contains("instances")) c.max_principle.instances = m["instances"].get<int>();
      if (m.contains("control")) c.max_principle.control = violation_from_string(m["control"].get<std::string>());
    } catch (const json::exception&) {
      throw InvalidArgument("config.max_principle: wrong type");
    }
  }
  if (c.samples < 1) throw InvalidArgument("config.samples must be positive");
  if (c.boundary_cells < 0) throw InvalidArgument("config.boundary_cells must be nonnegative");
  if (c.max_principle.instances < 1) throw InvalidArgument("config.max_principle.instances must be positive");
  for (int n : c.ranks) {
    if (n < 2) throw InvalidArgument("config.ranks entries must be >= 2");
  }
  for (int n : c.max_principle.ranks) {
    if (n < 1) throw InvalidArgument("config.max_principle.ranks entries must be >= 1");
  }
  return c;
}

json to_json(const RunConfig& c) {
  json j = {{"grid", to_json(c.grid)},
            {"solver", to_json(c.solver)},
            {"t_list", c.t_list},
            {"samples", c.samples},
            {"seed", c.seed},
            {"ranks", c.ranks},
            {"boundary_cells", c.boundary_cells},
            {"max_principle",
             {{"ranks", c.max_principle.ranks},
              {"instances", c.max_principle.instances},
              {"control", to_string(c.max_principle.control)}}},
            {"out", c.out.string()}};
  if (c.spec) j["spec"] = to_json(*c.spec);
  if (c.partner) j["partner"] = to_json(*c.partner);
  return j;
}

RunConfig load_run_config(const std::filesystem::path& path) { return run_config_from_json(read_json_file(path)); }

CyclicSpec fiber_partner(const CyclicSpec& spec) {
  HolomorphicDatum q = HolomorphicDatum::constant(1.0);
  for (const auto& a : spec.arrows()) q = q.times(a);
  return hitchin_component(spec.rank, q);
}

// ---------------------------------------------------------------------------
// Verification

namespace {

const char* kBoundaryNote =
    "disc charts carry Fuchsian Dirichlet data on the boundary circle; verdicts exclude nodes "
    "within boundary_cells of it";

struct Solved {
  HitchinSystem system;
  SolveReport report;
};

Solved solve_spec(const CyclicSpec& spec, std::shared_ptr<const Grid> grid, const SolverConfig& config) {
  HitchinSystem sys = make_system(spec, grid, default_boundary(*grid));
  SolveReport rep = solve(sys, fuchsian_state(sys), config);
  return {std::move(sys), std::move(rep)};
}

json solve_summary(const std::string& label, const SolveReport& r) {
  json j = to_json(r);
  j["label"] = label;
  j.erase("residual_history");
  j.erase("step_sizes");
  j.erase("linear_iterations");
  return j;
}

struct Verdict {
  json checks = json::array();
  json solves = json::array();
  json extra = json::object();
  bool pass = true;
  bool inconclusive = false;

  void add(const BoundCheck& c, const Grid& grid) {
    checks.push_back(to_json(c, grid));
    pass = pass && c.holds;
  }
  void add(const DominationReport& r, const Grid& grid, const std::string& label) {
    for (const auto& c : r.items) {
      json j = to_json(c, grid);
      j["name"] = label + ": " + c.name;
      checks.push_back(j);
    }
    pass = pass && r.verdict;
  }
  void add_flag(const std::string& name, bool holds, json detail = json::object()) {
    detail["name"] = name;
    detail["holds"] = holds;
    checks.push_back(detail);
    pass = pass && holds;
  }
  /// Records the solve; returns false when it failed (verdict becomes inconclusive).
  bool track(const std::string& label, const SolveReport& r) {
    solves.push_back(solve_summary(label, r));
    if (!r.converged) inconclusive = true;
    return r.converged;
  }

  json finish(const RunConfig& cfg, Theorem theorem, double threshold) const {
    json j = {{"theorem", to_string(theorem)},
              {"pass", pass && !inconclusive},
              {"status", inconclusive ? "inconclusive" : (pass ? "pass" : "fail")},
              {"threshold", threshold},
              {"checks", checks},
              {"solves", solves},
              {"config", to_json(cfg)}};
    if (cfg.grid.kind != GridKind::Torus) j["boundary_convention"] = kBoundaryNote;
    for (const auto& [k, v] : extra.items()) j[k] = v;
    return j;
  }
};

const CyclicSpec& need_spec(const RunConfig& cfg, Theorem t) {
  if (!cfg.spec) throw InvalidArgument("theorem " + to_string(t) + " needs a 'spec' in the config");
  return *cfg.spec;
}

void need_variant(const CyclicSpec& s, std::initializer_list<Variant> ok, Theorem t) {
  if (std::find(ok.begin(), ok.end(), s.variant) == ok.end()) {
    throw InvalidArgument("theorem " + to_string(t) + " does not apply to variant " + to_string(s.variant));
  }
}

void need_disc(const Grid& g, Theorem t) {
  if (!g.is_disc()) throw InvalidArgument("theorem " + to_string(t) + " needs a disc grid");
}

/// Threshold for ratio-type quantities (ratios and relative margins), whose Fuchsian values the
/// discrete scheme reproduces.
MarginPolicy ratio_policy(const RunConfig& cfg, std::shared_ptr<const Grid> grid, int n) {
  const double C = calibrate_fuchsian(grid, n, cfg.solver).nu;
  MarginPolicy p = margin_policy(*grid, cfg.solver.tol_residual, C);
  p.boundary_cells = cfg.boundary_cells;
  return p;
}

MarginPolicy curvature_policy(const RunConfig& cfg, std::shared_ptr<const Grid> grid, int n) {
  const double C = calibrate_fuchsian(grid, n, cfg.solver).curvature;
  MarginPolicy p = margin_policy(*grid, cfg.solver.tol_residual, C);
  p.boundary_cells = cfg.boundary_cells;
  return p;
}

std::vector<unsigned char> any_of_masks(std::initializer_list<const std::vector<unsigned char>*> masks) {
  std::vector<unsigned char> m;
  for (const auto* x : masks) {
    if (m.empty()) m.assign(x->size(), 0);
    for (std::size_t i = 0; i < x->size(); ++i) m[i] = m[i] || (*x)[i];
  }
  return m;
}

constexpr double kBoundTol = 1e-6;  // slack on non-strict curvature bounds

json verify_monotonicity(const RunConfig& cfg) {
  const auto& spec = need_spec(cfg, Theorem::Monotonicity);
  auto grid = build_grid(cfg.grid);
  need_disc(*grid, Theorem::Monotonicity);
  const std::vector<double> ts = cfg.t_list.empty() ? std::vector<double>{0.0, 0.5, 1.0, 2.0} : cfg.t_list;
  const auto policy = ratio_policy(cfg, grid, spec.rank);
  const auto region = verdict_region(*grid, cfg.boundary_cells);
  Verdict v;
  const auto cont = continuation_solve(spec, grid, ts, cfg.solver);
  for (const auto& s : cont.steps) v.track("t=" + std::to_string(s.t), s.report);
  if (!cont.completed) {
    v.inconclusive = true;
    return v.finish(cfg, Theorem::Monotonicity, policy.threshold());
  }
  std::vector<MetricReport> metrics;
  json energy = json::array();
  for (const auto& s : cont.steps) {
    metrics.push_back(pullback_metric(s.system, s.report.state));
    energy.push_back({{"t", s.t}, {"morse_energy", metrics.back().morse_energy}});
  }
  v.extra["morse_energy"] = energy;
  for (std::size_t i = 1; i < cont.steps.size(); ++i) {
    const std::string pair = "t=" + std::to_string(cont.steps[i - 1].t) + " < t=" + std::to_string(cont.steps[i].t);
    v.add(compare_states(metrics[i - 1], metrics[i], Quantity::ArrowTerms, region, policy), *grid, pair);
    v.add(compare_states(metrics[i - 1], metrics[i], Quantity::PullbackMetric, region, policy), *grid, pair);
    v.add(compare_states(metrics[i - 1], metrics[i], Quantity::MorseEnergy, region, policy), *grid, pair);

    // Linearized difference system: cooperative, with v > 0.
    const auto& a = cont.steps[i];
    const auto& b = cont.steps[i - 1];
    const auto d = difference_system(a.system, a.report.state, b.system, b.report.state);
    const auto cond = check_conditions(d.system);
    json detail = to_json(cond, *grid);
    detail["reduced"] = d.reduced;
    v.add_flag(pair + ": difference system (a)(b)(c)", cond.all(), detail);
    for (std::size_t k = 0; k < d.v.size(); ++k) {
      v.add(check_lower(pair + ": v_" + std::to_string(k + 1) + " > 0", d.v[k], 0.0, region,
                        policy.threshold(), true),
            *grid);
    }
  }
  return v.finish(cfg, Theorem::Monotonicity, policy.threshold());
}

json verify_nu_bounds(const RunConfig& cfg) {
  const auto& spec = need_spec(cfg, Theorem::NuBounds);
  need_variant(spec, {Variant::HitchinComponent}, Theorem::NuBounds);
  auto grid = build_grid(cfg.grid);
  need_disc(*grid, Theorem::NuBounds);
  const int n = spec.rank;
  const auto policy = ratio_policy(cfg, grid, n);
  Verdict v;
  const auto s = solve_spec(spec, grid, cfg.solver);
  if (!v.track("spec", s.report)) return v.finish(cfg, Theorem::NuBounds, policy.threshold());
  const auto nu = nu_ratios(s.system, s.report.state);
  const auto metric = pullback_metric(s.system, s.report.state);
  const auto& z = metric.arrow_zero;
  for (std::size_t k = 0; k < nu.nu.size(); ++k) {
    // nu_1 = U_n / U_1, nu_k = U_{k-1} / U_k; 0/0 only where both arrows vanish identically.
    const std::size_t num = k == 0 ? static_cast<std::size_t>(n - 1) : k - 1;
    const std::size_t den = k;
    const auto region = verdict_region(*grid, cfg.boundary_cells, any_of_masks({&z[num], &z[den]}));
    const auto& ref = nu.reference[k];
    const std::string name = "nu_" + std::to_string(k + 1);
    v.add(check_lower(name + " > " + std::to_string(ref.num) + "/" + std::to_string(ref.den), nu.nu[k],
                      ref.value(), region, policy.threshold(), true, true),
          *grid);
    v.add(check_upper(name + " < 1", nu.nu[k], 1.0, region, policy.threshold(), true, true), *grid);
  }
  return v.finish(cfg, Theorem::NuBounds, policy.threshold());
}

json verify_curvature(const RunConfig& cfg) {
  const auto& spec = need_spec(cfg, Theorem::Curvature);
  auto grid = build_grid(cfg.grid);
  need_disc(*grid, Theorem::Curvature);
  const int n = spec.rank;
  const auto policy = curvature_policy(cfg, grid, std::max(n, 3));
  Verdict v;
  const auto s = solve_spec(spec, grid, cfg.solver);
  if (!v.track("spec", s.report)) return v.finish(cfg, Theorem::Curvature, policy.threshold());
  const auto K = spec.variant == Variant::Sp4Gothen ? sp4_curvature(s.system, s.report.state)
                                                     : extrinsic_curvature(s.system, s.report.state);
  const auto region = verdict_region(*grid, cfg.boundary_cells, K.branch_mask);
  v.extra["K_min"] = K.min_interior;
  v.extra["K_max"] = K.max_interior;
  if (spec.variant == Variant::HitchinComponent) {
    const double lower = -1.0 / (n * (n - 1.0) * (n - 1.0));
    v.add(check_lower("K >= -1/(n(n-1)^2)", K.K, lower, region, kBoundTol, false), *grid);
    v.add(check_upper("K < 0", K.K, 0.0, region, policy.threshold(), true), *grid);
    if (n >= 4 && !spec.data[0].is_zero()) {
      // At zeros of q_n the curvature sits at or below the Fuchsian value.
      const auto metric = pullback_metric(s.system, s.report.state);
      auto zeros = metric.arrow_zero.back();
      for (std::size_t i = 0; i < zeros.size(); ++i) zeros[i] = zeros[i] && !K.branch_mask[i] && !grid->is_boundary(i);
      if (std::find(zeros.begin(), zeros.end(), 1) != zeros.end()) {
        const double fuchsian = -6.0 / (n * n * (n * n - 1.0));
        v.add(check_upper("K <= -6/(n^2(n^2-1)) at zeros of q_n", K.K, fuchsian, zeros, kBoundTol, false), *grid);
      }
    }
  } else {
    v.add(check_lower("K >= -1/n", K.K, -1.0 / n, region, kBoundTol, false), *grid);
    v.add(check_upper("K <= 0", K.K, 0.0, region, kBoundTol, false), *grid);
  }
  return v.finish(cfg, Theorem::Curvature, policy.threshold());
}

json verify_fiber_comparison(const RunConfig& cfg) {
  const auto& spec = need_spec(cfg, Theorem::HitchinFiberComparison);
  need_variant(spec, {Variant::SLnR_Even, Variant::SLnR_Odd}, Theorem::HitchinFiberComparison);
  auto grid = build_grid(cfg.grid);
  need_disc(*grid, Theorem::HitchinFiberComparison);
  const CyclicSpec partner = cfg.partner ? *cfg.partner : fiber_partner(spec);
  if (partner.rank != spec.rank) throw InvalidArgument("partner rank differs from spec rank");
  const auto policy = ratio_policy(cfg, grid, spec.rank);
  Verdict v;
  v.extra["partner"] = to_json(partner);
  auto other = std::async(std::launch::async, [&] { return solve_spec(partner, grid, cfg.solver); });
  const auto a = solve_spec(spec, grid, cfg.solver);
  const auto b = other.get();
  const bool ok = v.track("spec", a.report) & v.track("partner", b.report);
  if (!ok) return v.finish(cfg, Theorem::HitchinFiberComparison, policy.threshold());
  const auto region = verdict_region(*grid, cfg.boundary_cells);
  v.add(compare_states(pullback_metric(a.system, a.report.state), pullback_metric(b.system, b.report.state),
                       Quantity::PullbackMetric, region, policy),
        *grid, "g < g_partner");
  return v.finish(cfg, Theorem::HitchinFiberComparison, policy.threshold());
}

json verify_sp4(const RunConfig& cfg) {
  const auto& spec = need_spec(cfg, Theorem::Sp4Bounds);
  need_variant(spec, {Variant::Sp4Gothen}, Theorem::Sp4Bounds);
  auto grid = build_grid(cfg.grid);
  need_disc(*grid, Theorem::Sp4Bounds);
  const auto policy = curvature_policy(cfg, grid, 4);
  Verdict v;
  const auto s = solve_spec(spec, grid, cfg.solver);
  if (!v.track("spec", s.report)) return v.finish(cfg, Theorem::Sp4Bounds, policy.threshold());
  const auto K = sp4_curvature(s.system, s.report.state);
  const auto region = verdict_region(*grid, cfg.boundary_cells, K.branch_mask);
  const bool mu_fuchsian = spec.arrows().back().is_zero();
  v.extra["mu_fuchsian"] = mu_fuchsian;
  v.extra["K_min"] = K.min_interior;
  v.extra["K_max"] = K.max_interior;
  v.add(check_lower("K >= -1/8", K.K, -0.125, region, kBoundTol, false), *grid);
  if (mu_fuchsian) {
    v.add(check_upper("K < -1/40", K.K, -0.025, region, policy.threshold(), true), *grid);
    json sharp = json::array();
    bool sharp_ok = true;
    const double h = grid->spacing();
    for (const auto& r : roots(spec.data[0])) {
      if (std::abs(r) >= grid->spec().radius) continue;
      const auto node = grid->nearest_node(r);
      const double dev = std::abs(K.K[node] + 0.125);
      sharp_ok = sharp_ok && dev <= h;
      json w = node_json(*grid, node);
      w["K"] = K.K[node];
      w["deviation"] = dev;
      w["tolerance"] = h;
      sharp.push_back(w);
    }
    v.add_flag("K within spacing of -1/8 at zeros of mu", sharp_ok, {{"nodes", sharp}});
  } else {
    v.add(check_upper("K < 0", K.K, 0.0, region, policy.threshold(), true), *grid);
    v.add(check_upper("f_1 < 4/3", K.f[0], 4.0 / 3.0, region, policy.threshold(), true), *grid);
    v.add(check_upper("f_2 < 4/3", K.f[1], 4.0 / 3.0, region, policy.threshold(), true), *grid);
  }
  return v.finish(cfg, Theorem::Sp4Bounds, policy.threshold());
}

json verify_max_principle(const RunConfig& cfg) {
  auto grid = build_grid(cfg.grid);
  std::mt19937_64 rng(cfg.seed);
  const auto control = cfg.max_principle.control;
  const auto& ranks = cfg.max_principle.ranks;
  Verdict v;
  int flagged = 0, certified = 0, positive = 0;
  double worst = std::numeric_limits<double>::infinity();
  json failures = json::array();
  for (int k = 0; k < cfg.max_principle.instances; ++k) {
    const int n = ranks[static_cast<std::size_t>(k) % ranks.size()];
    const auto sys = random_cooperative_system(grid, n, rng, control);
    const auto cond = check_conditions(sys);
    if (control != ConditionViolation::None) {
      const bool exact = (control == ConditionViolation::Cooperative) == !cond.cooperative &&
                         (control == ConditionViolation::ColumnDominance) == !cond.column_dominant &&
                         (control == ConditionViolation::FullCoupling) == !cond.fully_coupled;
      flagged += exact;
      if (!exact && failures.size() < 10) failures.push_back({{"instance", k}, {"conditions", to_json(cond, *grid)}});
      continue;
    }
    if (!cond.all()) {
      if (failures.size() < 10) failures.push_back({{"instance", k}, {"conditions", to_json(cond, *grid)}});
      continue;
    }
    ++certified;
    const auto res = solve_linear_cooperative(sys, true);
    double mn = std::numeric_limits<double>::infinity(), scale = 0.0;
    for (int i = 0; i < n; ++i) {
      for (std::size_t p = 0; p < grid->size(); ++p) {
        if (!sys.excluded.empty() && !sys.excluded[static_cast<std::size_t>(i)].empty() &&
            sys.excluded[static_cast<std::size_t>(i)][p]) {
          continue;
        }
        mn = std::min(mn, res.u[static_cast<std::size_t>(i)][p]);
        scale = std::max(scale, std::abs(res.u[static_cast<std::size_t>(i)][p]));
      }
    }
    const bool ok = mn > -1e-8 * scale;
    positive += ok;
    if (scale > 0.0) worst = std::min(worst, mn / scale);
    if (!ok && failures.size() < 10) failures.push_back({{"instance", k}, {"min_u", mn}, {"scale", scale}});
  }
  const int total = cfg.max_principle.instances;
  v.extra["control"] = to_string(control);
  v.extra["failures"] = failures;
  if (control != ConditionViolation::None) {
    v.extra["verdict"] = "conditions fail, positivity not asserted";
    v.add_flag("violated condition flagged", flagged == total, {{"flagged", flagged}, {"instances", total}});
  } else {
    v.extra["worst_relative_min"] = worst;
    v.add_flag("random instances satisfy (a)(b)(c)", certified == total, {{"certified", certified}, {"instances", total}});
    v.add_flag("min u > -1e-8 scale", positive == certified, {{"positive", positive}, {"certified", certified}});
  }
  return v.finish(cfg, Theorem::MaxPrinciple, 1e-8);
}

json verify_sym_space(const RunConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  Verdict v;
  json groups = json::array();
  for (auto space : {SymmetricSpace::SLnC, SymmetricSpace::SLnR, SymmetricSpace::Sp2mR}) {
    for (int n : cfg.ranks) {
      if (space == SymmetricSpace::Sp2mR && n % 2 != 0) continue;
      double lo = std::numeric_limits<double>::infinity(), hi = -lo;
      int outside = 0;
      for (int s = 0; s < cfg.samples; ++s) {
        const auto Y = random_p_element(space, n, rng);
        const auto Z = random_p_element(space, n, rng);
        const double k = symmetric_space_curvature(Y, Z, space);
        lo = std::min(lo, k);
        hi = std::max(hi, k);
        if (!(k >= -1.0 / n - 1e-10 && k <= 1e-10)) ++outside;
      }
      const auto [Y, Z] = space == SymmetricSpace::Sp2mR ? extremal_plane(space, n, 0, n / 2) : extremal_plane(space, n, 0, 1);
      const double ext = symmetric_space_curvature(Y, Z, space);
      const std::string tag = to_string(space) + " n=" + std::to_string(n);
      v.add_flag(tag + ": samples in [-1/n, 0]", outside == 0, {{"min", lo}, {"max", hi}, {"samples", cfg.samples}});
      v.add_flag(tag + ": extremal plane = -1/n", std::abs(ext + 1.0 / n) <= 1e-12, {{"value", ext}});
    }
  }
  return v.finish(cfg, Theorem::SymSpaceCurvature, 1e-10);
}

}  // namespace

json verify_theorem(const RunConfig& config, Theorem theorem) {
  switch (theorem) {
    case Theorem::Monotonicity:
      return verify_monotonicity(config);
    case Theorem::NuBounds:
      return verify_nu_bounds(config);
    case Theorem::Curvature:
      return verify_curvature(config);
    case Theorem::HitchinFiberComparison:
      return verify_fiber_comparison(config);
    case Theorem::Sp4Bounds:
      return verify_sp4(config);
    case Theorem::MaxPrinciple:
      return verify_max_principle(config);
    case Theorem::SymSpaceCurvature:
      return verify_sym_space(config);
  }
  throw InvalidArgument("unknown theorem");
}

json sweep_table(const RunConfig& cfg) {
  if (!cfg.spec) throw InvalidArgument("sweep needs a 'spec' in the config");
  if (cfg.t_list.empty()) throw InvalidArgument("sweep needs a non-empty 't_list'");
  const auto& spec = *cfg.spec;
  const double t0 = cfg.t_list.front();
  if (t0 == 0.0) {
    const auto stable = spec_stable(scale_last_arrow(spec, 0.0));
    if (stable && !*stable) {
      throw InvalidArgument(
          "the t = 0 member is unstable: with the last arrow zero, stability needs every partial "
          "sum of deg L_{n+1-i}, i = 1..k, to be negative for k = 1..n-1");
    }
  }
  auto grid = build_grid(cfg.grid);
  const auto cont = continuation_solve(spec, grid, cfg.t_list, cfg.solver);
  const auto region = verdict_region(*grid, cfg.boundary_cells);
  json rows = json::array();
  bool increasing = true;
  double prev = -std::numeric_limits<double>::infinity();
  for (const auto& s : cont.steps) {
    const auto m = pullback_metric(s.system, s.report.state);
    const auto K = s.spec.variant == Variant::Sp4Gothen ? sp4_curvature(s.system, s.report.state)
                                                         : extrinsic_curvature(s.system, s.report.state);
    double gmin = std::numeric_limits<double>::infinity(), gmax = -gmin;
    for (std::size_t i = 0; i < grid->size(); ++i) {
      if (!region[i]) continue;
      gmin = std::min(gmin, m.g[i]);
      gmax = std::max(gmax, m.g[i]);
    }
    if (s.report.converged) {
      increasing = increasing && m.morse_energy > prev;
      prev = m.morse_energy;
    }
    rows.push_back({{"t", s.t},
                    {"converged", s.report.converged},
                    {"residual_norm", s.report.state.residual_norm},
                    {"morse_energy", m.morse_energy},
                    {"g_min", gmin},
                    {"g_max", gmax},
                    {"K_min", K.min_interior},
                    {"K_max", K.max_interior}});
  }
  json j = {{"rows", rows},
            {"completed", cont.completed},
            {"morse_energy_increasing", cont.completed && increasing},
            {"config", to_json(cfg)}};
  if (cont.failed_t) j["failed_t"] = *cont.failed_t;
  if (grid->is_disc()) j["boundary_convention"] = kBoundaryNote;
  return j;
}

// ---------------------------------------------------------------------------
// Subcommands

namespace {

template <class F>
int guarded(std::ostream& log, F&& body) {
  try {
    return body();
  } catch (const InvalidArgument& e) {
    log << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const NumericalError& e) {
    log << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const IoError& e) {
    log << "i/o failure: " << e.what() << "\n";
    return kIo;
  } catch (const std::filesystem::filesystem_error& e) {
    log << "i/o failure: " << e.what() << "\n";
    return kIo;
  }
}

}  // namespace

int cmd_solve(const RunConfig& cfg, std::ostream& log) {
  return guarded(log, [&] {
    if (!cfg.spec) throw InvalidArgument("solve needs a 'spec' in the config");
    auto grid = build_grid(cfg.grid);
    const auto s = solve_spec(*cfg.spec, grid, cfg.solver);
    json report = to_json(s.report);
    report["spec"] = to_json(*cfg.spec);
    report["grid"] = to_json(cfg.grid);
    report["solver"] = to_json(cfg.solver);
    if (grid->is_disc()) report["boundary_convention"] = kBoundaryNote;

    const auto metric = pullback_metric(s.system, s.report.state);
    report["morse_energy"] = metric.morse_energy;
    write_json(cfg.out / "report.json", report);

    std::vector<std::string> names;
    std::vector<const ScalarField*> fields;
    for (std::size_t j = 0; j < s.report.state.unknowns.size(); ++j) {
      names.push_back("u_" + std::to_string(j + 1));
      fields.push_back(&s.report.state.unknowns[j]);
    }
    names.push_back("g");
    fields.push_back(&metric.g);
    const auto res = residual(s.system, s.report.state);
    for (std::size_t j = 0; j < res.size(); ++j) {
      names.push_back("residual_" + std::to_string(j + 1));
      fields.push_back(&res[j]);
    }
    write_fields_csv(cfg.out / "state.csv", *grid, names, fields);

    std::string hist = "iteration,residual_norm\n";
    for (std::size_t i = 0; i < s.report.residual_history.size(); ++i) {
      hist += std::to_string(i) + "," + json(s.report.residual_history[i]).dump() + "\n";
    }
    write_text_atomic(cfg.out / "residual_history.csv", hist);

    log << "solve: " << to_string(s.report.status) << " after " << s.report.iterations
        << " iterations, residual " << s.report.state.residual_norm << "\n";
    return s.report.converged ? kPass : kNumerical;
  });
}

int cmd_verify(const RunConfig& cfg, Theorem theorem, std::ostream& log) {
  return guarded(log, [&] {
    const json v = verify_theorem(cfg, theorem);
    write_json(cfg.out / ("verdict-" + to_string(theorem) + ".json"), v);
    log << "verify " << to_string(theorem) << ": " << v["status"].get<std::string>();
    if (v.contains("verdict")) log << " (" << v["verdict"].get<std::string>() << ")";
    log << "\n";
    for (const auto& c : v["checks"]) {
      log << "  [" << (c["holds"].get<bool>() ? "ok" : "FAIL") << "] " << c["name"].get<std::string>();
      if (c.contains("min_margin")) log << "  margin " << c["min_margin"].dump();
      log << "\n";
    }
    if (v["status"] == "inconclusive") return kNumerical;
    return v["pass"].get<bool>() ? kPass : kVerdictFailed;
  });
}

int cmd_sweep(const RunConfig& cfg, std::ostream& log) {
  return guarded(log, [&] {
    const json t = sweep_table(cfg);
    write_json(cfg.out / "sweep.json", t);
    std::string csv = "t,converged,morse_energy,g_min,g_max,K_min,K_max\n";
    for (const auto& r : t["rows"]) {
      csv += r["t"].dump() + "," + (r["converged"].get<bool>() ? "1" : "0") + "," + r["morse_energy"].dump() +
             "," + r["g_min"].dump() + "," + r["g_max"].dump() + "," + r["K_min"].dump() + "," +
             r["K_max"].dump() + "\n";
    }
    write_text_atomic(cfg.out / "sweep.csv", csv);
    log << csv;
    if (!t["completed"].get<bool>()) {
      log << "sweep: continuation failed at t = " << t["failed_t"].dump() << "\n";
      return kNumerical;
    }
    log << "sweep: morse energy " << (t["morse_energy_increasing"].get<bool>() ? "strictly increasing" : "NOT increasing")
        << "\n";
    return t["morse_energy_increasing"].get<bool>() ? kPass : kVerdictFailed;
  });
}

}  // namespace hitchin
