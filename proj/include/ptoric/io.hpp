#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "ptoric/analysis.hpp"
#include "ptoric/displacement.hpp"

namespace ptoric {

/// Writes to a temporary sibling and renames it over the target.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

nlohmann::json to_json(const VerificationReport& report);
nlohmann::json to_json(const LagrangianDefect& defect);
nlohmann::json to_json(const RefinementCheck& check);
nlohmann::json to_json(const EquivalenceVerdict& verdict);
nlohmann::json to_json(const CutProfile& profile);
nlohmann::json to_json(const DisplacementReport& report);
nlohmann::json to_json(const TorusResolution& resolution);
nlohmann::json to_json(const TorusSpec& spec);

/// Metadata header for a torus CSV: spec, resolutions, invariant residuals.
nlohmann::json torus_metadata(const TorusSample& sample);

/// Columns t, phi_1..phi_k, Re z_1, Im z_1, ..., Re z_{k+1}, Im z_{k+1}.
std::string torus_csv(const TorusSample& sample);

/// Torus CSV schema with an extra leading time column.
std::string cloud_csv(const TorusSample& sample, const std::vector<PhasePoint>& points, double time);

/// Static SVG of a base-plane loop, optionally with projected point clouds.
std::string loop_svg(const Loop& loop, const std::vector<Complex>& extra_points = {});

}  // namespace ptoric
