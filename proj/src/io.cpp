#include "hitchin/io.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "hitchin/error.hpp"

namespace hitchin {

std::string to_string(GridKind k) {
  switch (k) {
    case GridKind::RadialDisc:
      return "radial-disc";
    case GridKind::Disc2D:
      return "disc-2d";
    case GridKind::Torus:
      return "torus";
  }
  return "?";
}

GridKind grid_kind_from_string(const std::string& name) {
  for (auto k : {GridKind::RadialDisc, GridKind::Disc2D, GridKind::Torus}) {
    if (to_string(k) == name) return k;
  }
  throw InvalidArgument("unknown grid kind '" + name + "' (radial-disc, disc-2d, torus)");
}

std::string to_string(LinearSolverKind k) {
  switch (k) {
    case LinearSolverKind::Auto:
      return "auto";
    case LinearSolverKind::DirectBanded:
      return "direct-banded";
    case LinearSolverKind::IterativeKrylov:
      return "iterative-krylov";
  }
  return "?";
}

LinearSolverKind linear_solver_from_string(const std::string& name) {
  for (auto k : {LinearSolverKind::Auto, LinearSolverKind::DirectBanded, LinearSolverKind::IterativeKrylov}) {
    if (to_string(k) == name) return k;
  }
  throw InvalidArgument("unknown linear solver '" + name + "'");
}

namespace {

void expect_object(const json& j, const std::string& where, const std::set<std::string>& keys) {
  if (!j.is_object()) throw InvalidArgument(where + ": expected an object");
  for (const auto& [k, v] : j.items()) {
    if (!keys.count(k)) throw InvalidArgument(where + ": unknown key '" + k + "'");
  }
}

template <class T>
T field(const json& j, const std::string& key, const std::string& where, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw InvalidArgument(where + "." + key + ": wrong type");
  }
}

template <class T>
T required(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) throw InvalidArgument(where + ": missing key '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw InvalidArgument(where + "." + key + ": wrong type");
  }
}

}  // namespace

Complex complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw InvalidArgument("expected a number or [re, im], got " + j.dump());
}

json to_json(Complex c) {
  if (c.imag() == 0.0) return c.real();
  return json::array({c.real(), c.imag()});
}

HolomorphicDatum datum_from_json(const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "zero") return HolomorphicDatum::zero();
    throw InvalidArgument("datum: unknown shorthand '" + j.get<std::string>() + "'");
  }
  if (j.is_number()) return HolomorphicDatum::constant(j.get<double>());
  if (!j.is_object() || j.size() != 1) {
    throw InvalidArgument("datum: expected \"zero\", a number, or one of constant/monomial/polynomial");
  }
  const auto& [key, v] = *j.items().begin();
  if (key == "constant") return HolomorphicDatum::constant(complex_from_json(v));
  if (key == "monomial") {
    expect_object(v, "datum.monomial", {"coefficient", "degree"});
    const Complex c = v.contains("coefficient") ? complex_from_json(v["coefficient"]) : Complex{1.0, 0.0};
    return HolomorphicDatum::monomial(c, required<int>(v, "degree", "datum.monomial"));
  }
  if (key == "polynomial") {
    if (!v.is_array()) throw InvalidArgument("datum.polynomial: expected a coefficient list");
    std::vector<Complex> c;
    for (const auto& e : v) c.push_back(complex_from_json(e));
    return HolomorphicDatum::polynomial(std::move(c));
  }
  throw InvalidArgument("datum: unknown kind '" + key + "'");
}

json to_json(const HolomorphicDatum& d) {
  switch (d.kind()) {
    case HolomorphicDatum::Kind::Zero:
      return "zero";
    case HolomorphicDatum::Kind::Constant:
      return {{"constant", to_json(d.coefficients()[0])}};
    case HolomorphicDatum::Kind::Monomial:
      return {{"monomial", {{"coefficient", to_json(d.coefficients().back())}, {"degree", d.degree()}}}};
    case HolomorphicDatum::Kind::Polynomial: {
      json c = json::array();
      for (auto x : d.coefficients()) c.push_back(to_json(x));
      return {{"polynomial", c}};
    }
  }
  return nullptr;
}

GridSpec grid_spec_from_json(const json& j) {
  expect_object(j, "grid", {"kind", "resolution", "resolution_y", "radius", "periods"});
  GridSpec g;
  g.kind = grid_kind_from_string(required<std::string>(j, "kind", "grid"));
  g.resolution = field<int>(j, "resolution", "grid", g.resolution);
  g.resolution_y = field<int>(j, "resolution_y", "grid", g.resolution_y);
  g.radius = field<double>(j, "radius", "grid", g.radius);
  if (j.contains("periods")) {
    const auto p = field<std::vector<double>>(j, "periods", "grid", {});
    if (p.size() != 2) throw InvalidArgument("grid.periods: expected two numbers");
    g.periods = {p[0], p[1]};
  }
  g.validate();
  return g;
}

json to_json(const GridSpec& g) {
  json j = {{"kind", to_string(g.kind)}, {"resolution", g.resolution}};
  if (g.kind == GridKind::Torus) {
    j["resolution_y"] = g.resolution_y;
    j["periods"] = {g.periods[0], g.periods[1]};
  } else {
    j["radius"] = g.radius;
  }
  return j;
}

CyclicSpec cyclic_spec_from_json(const json& j) {
  expect_object(j, "spec", {"variant", "rank", "data", "t", "degrees"});
  CyclicSpec s;
  s.variant = variant_from_string(required<std::string>(j, "variant", "spec"));
  s.rank = required<int>(j, "rank", "spec");
  if (!j.contains("data") || !j["data"].is_array()) throw InvalidArgument("spec: 'data' must be a list");
  for (const auto& d : j["data"]) s.data.push_back(datum_from_json(d));
  if (j.contains("t")) s.t = complex_from_json(j["t"]);
  if (j.contains("degrees")) s.degrees = field<std::vector<int>>(j, "degrees", "spec", {});
  s.validate();
  return s;
}

json to_json(const CyclicSpec& s) {
  json data = json::array();
  for (const auto& d : s.data) data.push_back(to_json(d));
  json j = {{"variant", to_string(s.variant)}, {"rank", s.rank}, {"data", data}, {"t", to_json(s.t)}};
  if (s.degrees) j["degrees"] = *s.degrees;
  return j;
}

SolverConfig solver_config_from_json(const json& j) {
  expect_object(j, "solver",
                {"tol_residual", "max_newton_iters", "backtrack_factor", "min_step", "sufficient_decrease",
                 "linear_solver", "krylov_tol", "krylov_restart", "krylov_max_iters", "continuation_steps"});
  SolverConfig c;
  c.tol_residual = field(j, "tol_residual", "solver", c.tol_residual);
  c.max_newton_iters = field(j, "max_newton_iters", "solver", c.max_newton_iters);
  c.backtrack_factor = field(j, "backtrack_factor", "solver", c.backtrack_factor);
  c.min_step = field(j, "min_step", "solver", c.min_step);
  c.sufficient_decrease = field(j, "sufficient_decrease", "solver", c.sufficient_decrease);
  if (j.contains("linear_solver")) {
    c.linear_solver = linear_solver_from_string(required<std::string>(j, "linear_solver", "solver"));
  }
  c.krylov_tol = field(j, "krylov_tol", "solver", c.krylov_tol);
  c.krylov_restart = field(j, "krylov_restart", "solver", c.krylov_restart);
  c.krylov_max_iters = field(j, "krylov_max_iters", "solver", c.krylov_max_iters);
  c.continuation_steps = field(j, "continuation_steps", "solver", c.continuation_steps);
  c.validate();
  return c;
}

json to_json(const SolverConfig& c) {
  return {{"tol_residual", c.tol_residual},
          {"max_newton_iters", c.max_newton_iters},
          {"backtrack_factor", c.backtrack_factor},
          {"min_step", c.min_step},
          {"sufficient_decrease", c.sufficient_decrease},
          {"linear_solver", to_string(c.linear_solver)},
          {"krylov_tol", c.krylov_tol},
          {"krylov_restart", c.krylov_restart},
          {"krylov_max_iters", c.krylov_max_iters}};
}

json to_json(const SolveReport& r) {
  json j = {{"converged", r.converged},
            {"status", to_string(r.status)},
            {"iterations", r.iterations},
            {"residual_norm", r.state.residual_norm},
            {"residual_history", r.residual_history},
            {"step_sizes", r.step_sizes},
            {"linear_iterations", r.linear_iterations}};
  if (r.failure_iteration) j["failure_iteration"] = *r.failure_iteration;
  if (!r.message.empty()) j["message"] = r.message;
  return j;
}

json node_json(const Grid& grid, std::size_t node) {
  return {{"node", node}, {"x", grid.x(node)}, {"y", grid.y(node)}};
}

json to_json(const BoundCheck& c, const Grid& grid) {
  json j = {{"name", c.name},
            {"holds", c.holds},
            {"min_margin", c.min_margin},
            {"threshold", c.threshold},
            {"nodes_checked", c.nodes_checked}};
  if (c.nodes_checked > 0 && c.worst_node < grid.size()) j["worst"] = node_json(grid, c.worst_node);
  return j;
}

json to_json(const DominationReport& r, const Grid& grid) {
  json items = json::array();
  for (const auto& c : r.items) items.push_back(to_json(c, grid));
  return {{"verdict", r.verdict}, {"threshold", r.threshold}, {"solver_tol", r.solver_tol}, {"items", items}};
}

json to_json(const ConditionReport& r, const Grid& grid) {
  json j;
  j["cooperative"] = {{"holds", r.cooperative}, {"worst_offdiagonal", r.worst_offdiagonal}};
  if (r.cooperative_i >= 0) {
    j["cooperative"]["witness"] = node_json(grid, r.cooperative_node);
    j["cooperative"]["witness"]["i"] = r.cooperative_i;
    j["cooperative"]["witness"]["j"] = r.cooperative_j;
  }
  j["column_dominant"] = {{"holds", r.column_dominant}, {"worst_column_sum", r.worst_column_sum}};
  if (r.column_j >= 0) {
    j["column_dominant"]["witness"] = node_json(grid, r.column_node);
    j["column_dominant"]["witness"]["j"] = r.column_j;
  }
  j["fully_coupled"] = {{"holds", r.fully_coupled}};
  if (r.partition) {
    j["fully_coupled"]["partition"] = {{"alpha", r.partition->alpha}, {"beta", r.partition->beta}};
  }
  return j;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(path.string() + ": malformed JSON: " + e.what());
  }
}

void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create " + path.parent_path().string() + ": " + ec.message());
  }
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << text;
    out.flush();
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot rename into " + path.string());
  }
}

void write_json(const std::filesystem::path& path, const json& j) { write_text_atomic(path, j.dump(2) + "\n"); }

std::string fields_csv(const Grid& grid, const std::vector<std::string>& names,
                       const std::vector<const ScalarField*>& fields) {
  if (names.size() != fields.size()) throw InvalidArgument("one name per field");
  for (const auto* f : fields) {
    if (f->size() != grid.size()) throw InvalidArgument("field does not live on this grid");
  }
  std::ostringstream os;
  os.precision(17);
  os << "node,x,y";
  for (const auto& n : names) os << ',' << n;
  os << '\n';
  for (std::size_t i = 0; i < grid.size(); ++i) {
    os << i << ',' << grid.x(i) << ',' << grid.y(i);
    for (const auto* f : fields) os << ',' << (*f)[i];
    os << '\n';
  }
  return os.str();
}

void write_fields_csv(const std::filesystem::path& path, const Grid& grid,
                      const std::vector<std::string>& names,
                      const std::vector<const ScalarField*>& fields) {
  write_text_atomic(path, fields_csv(grid, names, fields));
}

}  // namespace hitchin
