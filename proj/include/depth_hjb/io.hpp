#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "depth_hjb/density.hpp"
#include "depth_hjb/report.hpp"
#include "depth_hjb/solver.hpp"

namespace depth_hjb {

// Density specification files: {"kind": ..., parameters...}; see
// fixtures/densities/ for one example per kind.
Density density_from_json(const nlohmann::json& j);
nlohmann::json load_density_json(const std::string& path);
Density load_density(const std::string& path);

// Doubles are serialized with %.17g so identical values give identical bytes.
std::string format_double(double v);

void write_field_csv(const std::string& path, const GridField& field);
nlohmann::json grid_spec_json(const GridSpec& spec);
nlohmann::json solve_diagnostics_json(const SolveReport& report);
void write_text_file(const std::string& path, const std::string& content);
void write_json_file(const std::string& path, const nlohmann::json& j);

nlohmann::json contours_json(const std::vector<LevelContours>& contours);
nlohmann::json comparison_json(const ComparisonReport& report);

void write_depth_csv(const std::string& path, const std::vector<Vec2>& points,
                     const std::vector<DepthResult>& results);

std::vector<Vec2> read_points_csv(const std::string& path);

}  // namespace depth_hjb
