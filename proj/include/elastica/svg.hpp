#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "elastica/core.hpp"

namespace elastica {

/// Renders a row of curve snapshots (a geodesic strip) as a standalone SVG.
/// All snapshots share one scale so growth along the path stays visible;
/// output is deterministic (fixed precision, no timestamps).
std::string geodesic_strip_svg(const std::vector<DiscreteCurve>& snapshots,
                               const std::vector<std::string>& labels,
                               double cell_size = 160.0);

void write_svg(const std::filesystem::path& path, const std::string& svg);

}  // namespace elastica
