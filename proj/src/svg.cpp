#include "elastica/svg.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace elastica {

std::string geodesic_strip_svg(const std::vector<DiscreteCurve>& snapshots,
                               const std::vector<std::string>& labels,
                               double cell_size) {
    if (snapshots.empty()) throw Error("geodesic_strip_svg: no snapshots");

    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& c : snapshots) {
        xmin = std::min(xmin, c.points.row(0).minCoeff());
        xmax = std::max(xmax, c.points.row(0).maxCoeff());
        ymin = std::min(ymin, c.points.row(1).minCoeff());
        ymax = std::max(ymax, c.points.row(1).maxCoeff());
    }
    const double span = std::max(xmax - xmin, ymax - ymin);
    const double pad = 0.08 * cell_size;
    const double scale = (cell_size - 2.0 * pad) / (span > 0 ? span : 1.0);
    const double cx = 0.5 * (xmin + xmax);
    const double cy = 0.5 * (ymin + ymax);

    std::ostringstream out;
    out << std::fixed << std::setprecision(3);
    const double width = cell_size * static_cast<double>(snapshots.size());
    const double height = cell_size + 20.0;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
        << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " "
        << height << "\">\n";
    out << "<rect width=\"" << width << "\" height=\"" << height
        << "\" fill=\"white\"/>\n";

    for (size_t s = 0; s < snapshots.size(); ++s) {
        const DiscreteCurve& c = snapshots[s];
        const double ox = cell_size * static_cast<double>(s) +
                          0.5 * cell_size;
        const double oy = 0.5 * cell_size;
        out << (c.closed() ? "<polygon" : "<polyline") << " points=\"";
        for (Index j = 0; j < c.size(); ++j) {
            const double x = ox + scale * (c.points(0, j) - cx);
            const double y = oy - scale * (c.points(1, j) - cy);
            if (j) out << " ";
            out << x << "," << y;
        }
        out << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1.2\"/>\n";
        if (s < labels.size() && !labels[s].empty())
            out << "<text x=\"" << ox << "\" y=\"" << cell_size + 14.0
                << "\" font-family=\"sans-serif\" font-size=\"11\" "
                   "text-anchor=\"middle\">"
                << labels[s] << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

void write_svg(const std::filesystem::path& path, const std::string& svg) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path.string());
    out << svg;
}

}  // namespace elastica
