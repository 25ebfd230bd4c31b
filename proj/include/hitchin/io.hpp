#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "hitchin/analysis.hpp"
#include "hitchin/maxprin.hpp"
#include "hitchin/solver.hpp"

namespace hitchin {

using json = nlohmann::json;

std::string to_string(GridKind k);
GridKind grid_kind_from_string(const std::string& name);
std::string to_string(LinearSolverKind k);
LinearSolverKind linear_solver_from_string(const std::string& name);

// Config parsing. Malformed input raises InvalidArgument naming the offending key.

/// A number, or [re, im].
Complex complex_from_json(const json& j);
json to_json(Complex c);

/// "zero" | {"constant": c} | {"monomial": {"coefficient": c, "degree": d}} |
/// {"polynomial": [c_0, c_1, ...]}.
HolomorphicDatum datum_from_json(const json& j);
json to_json(const HolomorphicDatum& d);

GridSpec grid_spec_from_json(const json& j);
json to_json(const GridSpec& g);

CyclicSpec cyclic_spec_from_json(const json& j);
json to_json(const CyclicSpec& s);

SolverConfig solver_config_from_json(const json& j);
json to_json(const SolverConfig& c);

// Reports.

json to_json(const SolveReport& r);
json to_json(const BoundCheck& c, const Grid& grid);
json to_json(const DominationReport& r, const Grid& grid);
json to_json(const ConditionReport& r, const Grid& grid);
json node_json(const Grid& grid, std::size_t node);

// Output. Every file is written to a temporary sibling and renamed into place.

json read_json_file(const std::filesystem::path& path);
void write_text_atomic(const std::filesystem::path& path, const std::string& text);
void write_json(const std::filesystem::path& path, const json& j);

/// CSV with columns node, x, y, then one column per field.
std::string fields_csv(const Grid& grid, const std::vector<std::string>& names,
                       const std::vector<const ScalarField*>& fields);
void write_fields_csv(const std::filesystem::path& path, const Grid& grid,
                      const std::vector<std::string>& names,
                      const std::vector<const ScalarField*>& fields);

}  // namespace hitchin
