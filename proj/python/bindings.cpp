#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hitchin/cli.hpp"
#include "hitchin/error.hpp"

namespace py = pybind11;
using namespace hitchin;

namespace {

std::string solve_json(const std::string& config) {
  const RunConfig cfg = run_config_from_json(json::parse(config));
  if (!cfg.spec) throw InvalidArgument("solve needs a 'spec' in the config");
  auto grid = build_grid(cfg.grid);
  const auto sys = make_system(*cfg.spec, grid, default_boundary(*grid));
  const auto rep = solve(sys, fuchsian_state(sys), cfg.solver);
  json j = to_json(rep);
  std::vector<double> x(grid->size()), y(grid->size());
  for (std::size_t i = 0; i < grid->size(); ++i) {
    x[i] = grid->x(i);
    y[i] = grid->y(i);
  }
  j["x"] = x;
  j["y"] = y;
  json u = json::array();
  for (const auto& f : rep.state.unknowns) u.push_back(f.values());
  j["unknowns"] = u;
  const auto m = pullback_metric(sys, rep.state);
  j["g"] = m.g.values();
  j["morse_energy"] = m.morse_energy;
  return j.dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Cyclic Hitchin equation lab";

  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  m.def("solve", &solve_json, py::arg("config"));
  m.def(
      "verify",
      [](const std::string& config, const std::string& theorem) {
        return verify_theorem(run_config_from_json(json::parse(config)), theorem_from_string(theorem)).dump();
      },
      py::arg("config"), py::arg("theorem"));
  m.def(
      "sweep", [](const std::string& config) { return sweep_table(run_config_from_json(json::parse(config))).dump(); },
      py::arg("config"));
  m.def("theorems", [] {
    std::vector<std::string> out;
    for (auto t : all_theorems()) out.push_back(to_string(t));
    return out;
  });

  m.def("hyperbolic_metric_at", &hyperbolic_metric_at, py::arg("abs_z"));
  m.def(
      "nu_reference",
      [](int n, int k) {
        const auto r = nu_reference(n, k);
        return std::make_pair(r.num, r.den);
      },
      py::arg("n"), py::arg("k"));
  m.def(
      "stability_check",
      [](const std::vector<int>& degrees, const std::string& variant, std::optional<int> zero_arrow) {
        return stability_check(degrees, variant_from_string(variant), zero_arrow);
      },
      py::arg("degrees"), py::arg("variant"), py::arg("zero_arrow") = py::none());
  m.def(
      "symmetric_space_curvature",
      [](const Eigen::MatrixXcd& Y, const Eigen::MatrixXcd& Z, const std::string& space) {
        for (auto s : {SymmetricSpace::SLnC, SymmetricSpace::SLnR, SymmetricSpace::Sp2mR}) {
          if (to_string(s) == space) return symmetric_space_curvature(Y, Z, s);
        }
        throw InvalidArgument("unknown symmetric space '" + space + "'");
      },
      py::arg("Y"), py::arg("Z"), py::arg("space"));
  m.def(
      "fully_coupled",
      [](const std::vector<std::vector<bool>>& pattern) -> py::object {
        const auto p = fully_coupled(pattern);
        if (!p) return py::none();
        return py::make_tuple(p->alpha, p->beta);
      },
      py::arg("pattern"));
}
