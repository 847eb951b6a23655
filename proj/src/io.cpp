#include "elastica/io.hpp"

#include <cmath>
#include <algorithm>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "elastica/interpolate.hpp"

namespace elastica {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

using nlohmann::json;

ShapeFile shape_from_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    ShapeFile s;
    try {
        s.name = doc.value("name", path.stem().string());
        const std::string topo = doc.value("topology", "closed");
        if (topo == "open")
            s.topology = Topology::open;
        else if (topo == "closed")
            s.topology = Topology::closed;
        else
            throw ParseError(path.string() + ": unknown topology '" + topo +
                             "'");
        const auto& pts = doc.at("points");
        s.points.resize(2, static_cast<Index>(pts.size()));
        Index j = 0;
        for (const auto& p : pts) {
            if (!p.is_array() || p.size() != 2)
                throw ParseError(path.string() + ": point " +
                                 std::to_string(j) + " is not [x, y]");
            s.points(0, j) = p[0].get<double>();
            s.points(1, j) = p[1].get<double>();
            ++j;
        }
        if (doc.contains("grid")) {
            const auto& g = doc.at("grid");
            Eigen::VectorXd grid(static_cast<Index>(g.size()));
            for (Index i = 0; i < grid.size(); ++i)
                grid[i] = g[static_cast<size_t>(i)].get<double>();
            s.grid = grid;
        }
    } catch (const json::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    return s;
}

ShapeFile shape_from_csv(const std::filesystem::path& path,
                         Topology topology) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    ShapeFile s;
    s.name = path.stem().string();
    s.topology = topology;
    std::vector<Vector2d> pts;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        double x, y;
        if (!(row >> x >> y))
            throw ParseError(path.string() + ":" + std::to_string(lineno) +
                             ": expected two numeric columns");
        pts.emplace_back(x, y);
    }
    s.points.resize(2, static_cast<Index>(pts.size()));
    for (Index j = 0; j < s.points.cols(); ++j)
        s.points.col(j) = pts[static_cast<size_t>(j)];
    return s;
}

void normalize_shape(ShapeFile& s) {
    const Index n = s.points.cols();
    if (s.topology == Topology::closed && n >= 2 &&
        (s.points.col(0) - s.points.col(n - 1)).norm() <=
            1e-12 * (1.0 + s.points.cwiseAbs().maxCoeff())) {
        std::cerr << "note: dropping duplicated closing point of shape '"
                  << s.name << "'\n";
        s.points.conservativeResize(2, n - 1);
        if (s.grid && s.grid->size() == n) {
            Eigen::VectorXd g = s.grid->head(n - 1);
            s.grid = g;
        }
    }
    if (s.points.cols() < 4)
        throw ParseError("shape '" + s.name + "': needs at least 4 points");
    if (!s.points.allFinite())
        throw ParseError("shape '" + s.name + "': non-finite coordinates");
}

}  // namespace

ShapeFile read_shape_file(const std::filesystem::path& path,
                          const LoadOptions& opts) {
    ShapeFile s = path.extension() == ".json"
                      ? shape_from_json(path)
                      : shape_from_csv(path, opts.csv_topology);
    normalize_shape(s);
    return s;
}

void write_shape_file(const std::filesystem::path& path, const ShapeFile& s) {
    json doc;
    doc["name"] = s.name;
    doc["topology"] = s.topology == Topology::open ? "open" : "closed";
    json pts = json::array();
    for (Index j = 0; j < s.points.cols(); ++j)
        pts.push_back({s.points(0, j), s.points(1, j)});
    doc["points"] = pts;
    if (s.grid) {
        json g = json::array();
        for (Index j = 0; j < s.grid->size(); ++j) g.push_back((*s.grid)[j]);
        doc["grid"] = g;
    }
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path.string());
    out << doc.dump(2) << "\n";
}

DiscreteCurve shape_to_curve(const ShapeFile& s, const LoadOptions& opts) {
    DiscreteCurve c;
    try {
        if (s.grid)
            c = make_curve(s.points, *s.grid, s.topology);
        else
            c = make_curve(s.points, s.topology);
    } catch (const RegularityError& e) {
        throw RegularityError("shape '" + s.name + "': " + e.what());
    }
    if (opts.arclength) c = arclength_resample(c, opts.resample_to);
    else if (opts.resample_to > 0 && opts.resample_to != c.size())
        c = resample_curve(c, uniform_grid(opts.resample_to, c.topology));
    return c;
}

DiscreteCurve load_shape(const std::filesystem::path& path,
                         const LoadOptions& opts) {
    return shape_to_curve(read_shape_file(path, opts), opts);
}

DiscreteCurve synth_circle(Index n, double radius, const Vector2d& center) {
    const Eigen::VectorXd grid = uniform_grid(n, Topology::closed);
    Eigen::Matrix2Xd pts(2, n);
    for (Index j = 0; j < n; ++j)
        pts.col(j) = center + radius * Vector2d(std::cos(grid[j]),
                                                std::sin(grid[j]));
    return make_curve(std::move(pts), grid, Topology::closed);
}

DiscreteCurve synth_ellipse(Index n, double rx, double ry) {
    const Eigen::VectorXd grid = uniform_grid(n, Topology::closed);
    Eigen::Matrix2Xd pts(2, n);
    for (Index j = 0; j < n; ++j)
        pts.col(j) =
            Vector2d(rx * std::cos(grid[j]), ry * std::sin(grid[j]));
    return make_curve(std::move(pts), grid, Topology::closed);
}

DiscreteCurve synth_ellipse_fold(Index n, double depth, double width) {
    // base ellipse with an inward finger at theta = 0: a periodic bump
    // displaces the boundary along the inward normal
    const Eigen::VectorXd grid = uniform_grid(n, Topology::closed);
    Eigen::Matrix2Xd pts(2, n);
    for (Index j = 0; j < n; ++j) {
        const double t = grid[j];
        const Vector2d e(2.0 * std::cos(t), std::sin(t));
        const Vector2d tangent(-2.0 * std::sin(t), std::cos(t));
        const Vector2d outward =
            Vector2d(tangent.y(), -tangent.x()).normalized();
        const double bump =
            std::exp((std::cos(t) - 1.0) / (width * width));
        pts.col(j) = e - depth * bump * outward;
    }
    return make_curve(std::move(pts), grid, Topology::closed);
}

DiscreteCurve synth_star(Index n, int spikes, double amplitude) {
    const Eigen::VectorXd grid = uniform_grid(n, Topology::closed);
    Eigen::Matrix2Xd pts(2, n);
    for (Index j = 0; j < n; ++j) {
        const double r = 1.0 + amplitude * std::cos(spikes * grid[j]);
        pts.col(j) = r * Vector2d(std::cos(grid[j]), std::sin(grid[j]));
    }
    return make_curve(std::move(pts), grid, Topology::closed);
}

DiscreteCurve synth_segment(Index n, double length) {
    const Eigen::VectorXd grid = uniform_grid(n, Topology::open);
    Eigen::Matrix2Xd pts(2, n);
    for (Index j = 0; j < n; ++j)
        pts.col(j) = Vector2d(length * grid[j] / kTwoPi, 0.0);
    return make_curve(std::move(pts), grid, Topology::open);
}

DiscreteCurve synth_arc(Index n, double radius, double span) {
    const Eigen::VectorXd grid = uniform_grid(n, Topology::open);
    Eigen::Matrix2Xd pts(2, n);
    for (Index j = 0; j < n; ++j) {
        const double t = span * grid[j] / kTwoPi;
        pts.col(j) = radius * Vector2d(std::cos(t), std::sin(t));
    }
    return make_curve(std::move(pts), grid, Topology::open);
}

ShapeFile synth_shape(const std::string& kind, const SynthParams& params) {
    DiscreteCurve c;
    if (kind == "circle")
        c = synth_circle(params.n, params.radius);
    else if (kind == "ellipse")
        c = synth_ellipse(params.n, params.rx, params.ry);
    else if (kind == "ellipse_fold")
        c = synth_ellipse_fold(params.n, params.depth, params.width);
    else if (kind == "star")
        c = synth_star(params.n, params.spikes, params.amplitude);
    else if (kind == "segment")
        c = synth_segment(params.n, params.length);
    else if (kind == "arc")
        c = synth_arc(params.n, params.radius, params.span);
    else
        throw ParseError("synth: unknown kind '" + kind +
                         "' (circle|ellipse|ellipse_fold|star|segment|arc)");
    ShapeFile s;
    s.name = kind;
    s.topology = c.topology;
    s.points = c.points;
    return s;
}

void RunConfig::validate() const {
    if (!(tol_f > 0.0) || !(eps_bvp > 0.0) || !(tol_rel > 0.0))
        throw Error("RunConfig: tolerances must be positive");
    ElasticParams check(a, b);  // validates positivity and 4b^2 >= a^2
    (void)check;
    if (steps < 1 || max_iter < 1 || max_outer < 1 || refine_cap < 1)
        throw Error("RunConfig: iteration counts must be positive");
}

std::string DistanceTable::to_csv() const {
    std::ostringstream out;
    out.precision(12);
    out << "shape";
    for (const auto& n : names) out << "," << n;
    out << "\n";
    for (size_t i = 0; i < names.size(); ++i) {
        out << names[i];
        for (size_t j = 0; j < names.size(); ++j)
            out << "," << distance(static_cast<Index>(i),
                                   static_cast<Index>(j));
        out << "\n";
    }
    return out.str();
}

std::string DistanceTable::to_json() const {
    json doc;
    doc["names"] = names;
    json rows = json::array();
    for (size_t i = 0; i < names.size(); ++i) {
        json row = json::array();
        for (size_t j = 0; j < names.size(); ++j) {
            json cell;
            cell["distance"] = distance(static_cast<Index>(i),
                                        static_cast<Index>(j));
            cell["seconds"] =
                seconds(static_cast<Index>(i), static_cast<Index>(j));
            cell["status"] = status[i][j];
            row.push_back(cell);
        }
        rows.push_back(row);
    }
    doc["entries"] = rows;
    return doc.dump(2);
}

}  // namespace elastica
