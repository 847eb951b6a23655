#include "elastica/core.hpp"

#include <cmath>
#include <numbers>

#include "elastica/calculus.hpp"

namespace elastica {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

Eigen::VectorXd uniform_grid(Index n, Topology topology) {
    Eigen::VectorXd grid(n);
    if (topology == Topology::closed) {
        for (Index j = 0; j < n; ++j)
            grid[j] = kTwoPi * static_cast<double>(j) / static_cast<double>(n);
    } else {
        for (Index j = 0; j < n; ++j)
            grid[j] =
                kTwoPi * static_cast<double>(j) / static_cast<double>(n - 1);
    }
    return grid;
}

void validate_curve(const DiscreteCurve& c, double regularity_floor) {
    const Index n = c.size();
    if (n < 4) throw Error("DiscreteCurve: needs at least 4 nodes");
    if (c.grid.size() != n)
        throw GridMismatch("DiscreteCurve: grid/points length mismatch");
    if (!c.points.allFinite() || !c.grid.allFinite())
        throw Error("DiscreteCurve: non-finite data");

    for (Index j = 0; j + 1 < n; ++j)
        if (!(c.grid[j + 1] > c.grid[j]))
            throw Error("DiscreteCurve: grid must be strictly increasing");
    if (c.closed()) {
        if (c.grid[0] < 0.0 || !(c.grid[n - 1] < kTwoPi) ||
            !(kTwoPi - c.grid[n - 1] + c.grid[0] > 0.0))
            throw TopologyError(
                "DiscreteCurve: closed grid must lie in [0, 2pi) with a "
                "positive wraparound gap");
    } else {
        if (std::abs(c.grid[0]) > 1e-12 ||
            std::abs(c.grid[n - 1] - kTwoPi) > 1e-12)
            throw TopologyError(
                "DiscreteCurve: open grid must span [0, 2pi]");
    }

    const Eigen::VectorXd speed = derivative(c).colwise().norm();
    const double mean_speed = speed.mean();
    const double coord_scale = c.points.cwiseAbs().maxCoeff();
    if (!(mean_speed > 1e-14 * (coord_scale + 1.0)))
        throw RegularityError("DiscreteCurve: curve is globally degenerate");
    const double floor = regularity_floor * mean_speed;
    for (Index j = 0; j < n; ++j)
        if (!(speed[j] > floor))
            throw RegularityError("DiscreteCurve: speed below regularity "
                                  "floor at node " + std::to_string(j));
}

DiscreteCurve make_curve(Eigen::Matrix2Xd points, Eigen::VectorXd grid,
                         Topology topology, double regularity_floor) {
    DiscreteCurve c{std::move(points), std::move(grid), topology};
    // Snap open endpoints so downstream code can rely on exact 0 and 2pi.
    if (topology == Topology::open && c.grid.size() >= 2) {
        if (std::abs(c.grid[0]) <= 1e-12) c.grid[0] = 0.0;
        if (std::abs(c.grid[c.grid.size() - 1] - kTwoPi) <= 1e-12)
            c.grid[c.grid.size() - 1] = kTwoPi;
    }
    validate_curve(c, regularity_floor);
    return c;
}

DiscreteCurve make_curve(Eigen::Matrix2Xd points, Topology topology,
                         double regularity_floor) {
    const Index n = points.cols();
    return make_curve(std::move(points), uniform_grid(n, topology), topology,
                      regularity_floor);
}

}  // namespace elastica
