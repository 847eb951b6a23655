#pragma once

#include <string>
#include <vector>

#include "elastica/io.hpp"

namespace elastica {

struct CheckResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string details;  ///< measured values or the caught error
    double seconds = 0.0;
};

struct SelftestOptions {
    bool quick = false;  ///< smaller grids, subset of checks
    unsigned seed = 2025;
    double tol_f = 1e-10;
    double eps_bvp = 1e-3;
    int steps = 25;
};

/// Runs the acceptance checks and returns one result per criterion. Checks
/// never throw: failures (including solver errors) are reported in the
/// result entries.
std::vector<CheckResult> run_acceptance(const SelftestOptions& opts = {});

std::string report_to_json(const std::vector<CheckResult>& results);

}  // namespace elastica
