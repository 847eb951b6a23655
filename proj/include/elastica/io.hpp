#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "elastica/core.hpp"

namespace elastica {

/// On-disk shape: name, topology, point list, optional explicit grid.
/// JSON layout: {"name": ..., "topology": "open"|"closed",
/// "points": [[x,y],...], "grid": [...](optional)}.
struct ShapeFile {
    std::string name;
    Topology topology = Topology::closed;
    Eigen::Matrix2Xd points;
    std::optional<Eigen::VectorXd> grid;
};

struct LoadOptions {
    bool arclength = false;      ///< resample proportional to arc length
    Index resample_to = 0;       ///< 0 keeps the stored resolution
    Topology csv_topology = Topology::closed;  ///< topology for CSV input
};

/// Reads a ShapeFile from JSON (.json) or two-column CSV (anything else).
/// Closed shapes with a duplicated final point are normalized (the
/// duplicate is dropped and noted on the log stream).
ShapeFile read_shape_file(const std::filesystem::path& path,
                          const LoadOptions& opts = {});

void write_shape_file(const std::filesystem::path& path, const ShapeFile& s);

/// ShapeFile -> validated curve (uniform grid unless one is stored).
DiscreteCurve shape_to_curve(const ShapeFile& s, const LoadOptions& opts = {});

DiscreteCurve load_shape(const std::filesystem::path& path,
                         const LoadOptions& opts = {});

/// Deterministic analytic fixtures.
DiscreteCurve synth_circle(Index n, double radius = 1.0,
                           const Vector2d& center = Vector2d::Zero());
DiscreteCurve synth_ellipse(Index n, double rx = 2.0, double ry = 1.0);
/// Ellipse with a single inward fold; regular for the default parameters.
DiscreteCurve synth_ellipse_fold(Index n, double depth = 0.8,
                                 double width = 0.4);
DiscreteCurve synth_star(Index n, int spikes = 5, double amplitude = 0.3);
DiscreteCurve synth_segment(Index n, double length = 2.0 * 3.14159265358979);
DiscreteCurve synth_arc(Index n, double radius = 1.0,
                        double span = 3.14159265358979);

/// Dispatch by name: circle | ellipse | ellipse_fold | star | segment | arc.
struct SynthParams {
    Index n = 300;
    double radius = 1.0;
    double rx = 2.0, ry = 1.0;
    double depth = 0.8, width = 0.4;
    int spikes = 5;
    double amplitude = 0.3;
    double length = 2.0 * 3.14159265358979;
    double span = 3.14159265358979;
};

ShapeFile synth_shape(const std::string& kind, const SynthParams& params);

/// Solver configuration shared by the command-line tools.
struct RunConfig {
    double a = 1.0;
    double b = 0.5;
    int steps = 25;
    double tol_f = 1e-10;
    double eps_bvp = 1e-3;
    double tol_rel = 1e-4;
    int max_iter = 500;
    int max_outer = 100;
    bool refine = true;
    int refine_cap = 8;
    bool arclength = false;
    bool audit_symmetry = false;
    bool match = false;
    unsigned seed = 2025;
    bool quick = false;
    std::string out_dir = ".";

    void validate() const;
};

/// Pairwise distance table with per-pair timing and status.
struct DistanceTable {
    std::vector<std::string> names;
    Eigen::MatrixXd distance;          ///< row -> column direction
    Eigen::MatrixXd seconds;
    std::vector<std::vector<std::string>> status;

    std::string to_csv() const;
    std::string to_json() const;
};

}  // namespace elastica
