#include <cmath>

#include "elastica/closed_space.hpp"
#include "elastica/reparam.hpp"

namespace elastica {

namespace {

// Horizontal-lift field map: constant extension of X, vertical part removed
// at the given base curve.
VectorField2 horizontal_at(const DiscreteCurve& base, const VectorField2& X,
                           const ElasticParams& p) {
    const Eigen::VectorXd mu = vertical_project(base, X, p);
    const VectorField2 cp = derivative(base);
    return X - (cp.array().rowwise() * mu.transpose().array()).matrix();
}

}  // namespace

double oneill_term(const DiscreteCurve& c, const VectorField2& X,
                   const VectorField2& Y, const ElasticParams& p,
                   double fd_step) {
    if (c.closed())
        throw TopologyError(
            "oneill_term: open curves only (the parameterized space is flat "
            "only there)");
    // horizontality of the inputs: the vertical projection must vanish
    const double gx = elastic_metric(c, X, X, p);
    const double gy = elastic_metric(c, Y, Y, p);
    {
        const VectorField2 cp = derivative(c);
        const Eigen::VectorXd mux = vertical_project(c, X, p);
        const Eigen::VectorXd muy = vertical_project(c, Y, p);
        const VectorField2 vx =
            (cp.array().rowwise() * mux.transpose().array()).matrix();
        const VectorField2 vy =
            (cp.array().rowwise() * muy.transpose().array()).matrix();
        if (elastic_metric(c, vx, vx, p) > 1e-8 * (gx + 1e-30) ||
            elastic_metric(c, vy, vy, p) > 1e-8 * (gy + 1e-30))
            throw Error("oneill_term: inputs are not horizontal");
    }

    // bracket of the horizontal-lift field maps by central differences
    const VectorField2 xh = horizontal_at(c, X, p);
    const VectorField2 yh = horizontal_at(c, Y, p);
    const double scale = c.points.cwiseAbs().maxCoeff();
    const double eps_x =
        fd_step * scale / std::max(xh.cwiseAbs().maxCoeff(), 1e-30);
    const double eps_y =
        fd_step * scale / std::max(yh.cwiseAbs().maxCoeff(), 1e-30);

    auto shifted = [&](const VectorField2& dir, double eps) {
        DiscreteCurve moved = c;
        moved.points += eps * dir;
        return moved;
    };

    const VectorField2 dy_along_x =
        (horizontal_at(shifted(xh, eps_x), Y, p) -
         horizontal_at(shifted(xh, -eps_x), Y, p)) /
        (2.0 * eps_x);
    const VectorField2 dx_along_y =
        (horizontal_at(shifted(yh, eps_y), X, p) -
         horizontal_at(shifted(yh, -eps_y), X, p)) /
        (2.0 * eps_y);
    const VectorField2 bracket = dy_along_x - dx_along_y;

    // vertical part of the bracket, measured in the metric
    const Eigen::VectorXd mu = vertical_project(c, bracket, p);
    const VectorField2 cp = derivative(c);
    const VectorField2 vertical =
        (cp.array().rowwise() * mu.transpose().array()).matrix();
    return 0.75 * elastic_metric(c, vertical, vertical, p);
}

}  // namespace elastica
