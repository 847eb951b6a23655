#include "elastica/calculus.hpp"

#include <cmath>
#include <numbers>

namespace elastica {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Fornberg weights for the first derivative at x0 from the given nodes
// (exact for polynomials of degree nodes.size()-1).
Eigen::VectorXd fd_weights(double x0, const Eigen::VectorXd& nodes) {
    const Index n = nodes.size();
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, 2);
    double c1 = 1.0;
    double c4 = nodes[0] - x0;
    c(0, 0) = 1.0;
    for (Index i = 1; i < n; ++i) {
        double c2 = 1.0;
        const double c5 = c4;
        c4 = nodes[i] - x0;
        for (Index j = 0; j < i; ++j) {
            const double c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if (j == i - 1) {
                c(i, 1) = c1 * (c(i - 1, 0) - c5 * c(i - 1, 1)) / c2;
                c(i, 0) = -c1 * c5 * c(i - 1, 0) / c2;
            }
            c(j, 1) = (c4 * c(j, 1) - c(j, 0)) / c3;
            c(j, 0) = c4 * c(j, 0) / c3;
        }
        c1 = c2;
    }
    return c.col(1);
}

}  // namespace

Eigen::VectorXd trapezoid_weights(const Eigen::VectorXd& grid,
                                  Topology topology) {
    const Index n = grid.size();
    Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
    if (topology == Topology::closed) {
        for (Index j = 0; j < n; ++j) {
            const double gap =
                (j + 1 < n) ? grid[j + 1] - grid[j]
                            : kTwoPi - grid[n - 1] + grid[0];
            w[j] += 0.5 * gap;
            w[(j + 1) % n] += 0.5 * gap;
        }
    } else {
        for (Index j = 0; j + 1 < n; ++j) {
            const double gap = grid[j + 1] - grid[j];
            w[j] += 0.5 * gap;
            w[j + 1] += 0.5 * gap;
        }
    }
    return w;
}

namespace {

// Stencil window (node indices and weights) for d/dtheta at node j.
// Five-node windows (fewer on tiny grids); one-sided at open ends.
template <class Visit>
void visit_stencil(const Eigen::VectorXd& grid, Topology topology, Index j,
                   Visit&& visit) {
    const Index n = grid.size();
    const Index window = std::min<Index>(5, n);
    const Index half = window / 2;
    Index first;  // window start (offset into the cyclic grid)
    if (topology == Topology::closed) {
        first = j - half;
    } else {
        first = std::clamp<Index>(j - half, 0, n - window);
    }
    Eigen::VectorXd nodes(window);
    for (Index i = 0; i < window; ++i) {
        const Index raw = first + i;
        if (topology == Topology::closed) {
            const Index idx = ((raw % n) + n) % n;
            const double shift = raw < 0 ? -kTwoPi : (raw >= n ? kTwoPi : 0.0);
            nodes[i] = grid[idx] + shift;
        } else {
            nodes[i] = grid[raw];
        }
    }
    const Eigen::VectorXd w = fd_weights(grid[j], nodes);
    for (Index i = 0; i < window; ++i) {
        const Index raw = first + i;
        const Index idx =
            topology == Topology::closed ? ((raw % n) + n) % n : raw;
        visit(idx, w[i]);
    }
}

}  // namespace

Eigen::MatrixXd grid_derivative(const Eigen::MatrixXd& values,
                                const Eigen::VectorXd& grid,
                                Topology topology) {
    const Index n = grid.size();
    if (values.cols() != n)
        throw GridMismatch("grid_derivative: values/grid length mismatch");
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(values.rows(), n);
    for (Index j = 0; j < n; ++j)
        visit_stencil(grid, topology, j, [&](Index k, double w) {
            out.col(j) += w * values.col(k);
        });
    return out;
}

Eigen::SparseMatrix<double> derivative_matrix(const Eigen::VectorXd& grid,
                                              Topology topology) {
    const Index n = grid.size();
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(5 * n);
    for (Index j = 0; j < n; ++j)
        visit_stencil(grid, topology, j, [&](Index k, double w) {
            triplets.emplace_back(j, k, w);
        });
    Eigen::SparseMatrix<double> d(n, n);
    d.setFromTriplets(triplets.begin(), triplets.end());
    return d;
}

Eigen::VectorXd grid_derivative_scalar(const Eigen::VectorXd& values,
                                       const Eigen::VectorXd& grid,
                                       Topology topology) {
    return grid_derivative(Eigen::MatrixXd(values.transpose()), grid, topology)
        .row(0)
        .transpose();
}

Eigen::MatrixXd cumtrapz(const Eigen::MatrixXd& values,
                         const Eigen::VectorXd& grid) {
    const Index n = grid.size();
    Eigen::MatrixXd out(values.rows(), n);
    out.col(0).setZero();
    for (Index j = 1; j < n; ++j)
        out.col(j) = out.col(j - 1) + 0.5 * (grid[j] - grid[j - 1]) *
                                          (values.col(j) + values.col(j - 1));
    return out;
}

Eigen::VectorXd integrate_dtheta(const Eigen::MatrixXd& values,
                                 const Eigen::VectorXd& grid,
                                 Topology topology) {
    const Eigen::VectorXd w = trapezoid_weights(grid, topology);
    return values * w;
}

VectorField2 derivative(const DiscreteCurve& c) {
    return grid_derivative(c.points, c.grid, c.topology);
}

Frame frame(const DiscreteCurve& c, double regularity_floor) {
    Frame f;
    const VectorField2 d = derivative(c);
    const Index n = d.cols();
    f.speed = d.colwise().norm();
    const double floor = regularity_floor * f.speed.mean();
    for (Index j = 0; j < n; ++j)
        if (!(f.speed[j] > floor))
            throw RegularityError("frame: speed below regularity floor at "
                                  "node " + std::to_string(j));

    f.tangent = d.array().rowwise() / f.speed.transpose().array();
    f.normal.resize(2, n);
    f.normal.row(0) = -f.tangent.row(1);
    f.normal.row(1) = f.tangent.row(0);

    f.angle.resize(n);
    f.angle[0] = std::atan2(f.tangent(1, 0), f.tangent(0, 0));
    double raw_prev = f.angle[0];
    for (Index j = 1; j < n; ++j) {
        const double raw = std::atan2(f.tangent(1, j), f.tangent(0, j));
        double delta = raw - raw_prev;
        delta -= kTwoPi * std::round(delta / kTwoPi);
        f.angle[j] = f.angle[j - 1] + delta;
        raw_prev = raw;
    }
    if (c.closed()) {
        const double raw0 = std::atan2(f.tangent(1, 0), f.tangent(0, 0));
        double delta = raw0 - raw_prev;
        delta -= kTwoPi * std::round(delta / kTwoPi);
        f.turning = (f.angle[n - 1] + delta - f.angle[0]) / kTwoPi;
    }
    return f;
}

Eigen::MatrixXd arc_derivative(const DiscreteCurve& c,
                               const Eigen::MatrixXd& values) {
    const Eigen::VectorXd speed = derivative(c).colwise().norm();
    const double floor = kRegularityFloor * speed.mean();
    if (!(speed.minCoeff() > floor))
        throw RegularityError("arc_derivative: curve is not regular");
    Eigen::MatrixXd d = grid_derivative(values, c.grid, c.topology);
    d.array().rowwise() /= speed.transpose().array();
    return d;
}

Eigen::VectorXd arc_derivative_scalar(const DiscreteCurve& c,
                                      const Eigen::VectorXd& values) {
    return arc_derivative(c, Eigen::MatrixXd(values.transpose()))
        .row(0)
        .transpose();
}

Eigen::VectorXd curvature(const DiscreteCurve& c) {
    const Frame f = frame(c);
    const Eigen::MatrixXd dv =
        grid_derivative(f.tangent, c.grid, c.topology);
    return (dots(dv, f.normal).transpose().array() / f.speed.array())
        .matrix();
}

double integrate_ds(const DiscreteCurve& c, const Eigen::VectorXd& f) {
    const Eigen::VectorXd speed = derivative(c).colwise().norm();
    const Eigen::VectorXd w = trapezoid_weights(c.grid, c.topology);
    return (w.array() * speed.array() * f.array()).sum();
}

FirstVariations first_variations(const DiscreteCurve& c,
                                 const VectorField2& h) {
    if (h.cols() != c.size())
        throw GridMismatch("first_variations: field length mismatch");
    const Frame f = frame(c);
    const Index n = c.size();

    const Eigen::MatrixXd dh = grid_derivative(h, c.grid, c.topology);
    // omega = <D_s h, n>, gamma = <D_s h, v>
    const Eigen::ArrayXd omega =
        dots(dh, f.normal).transpose().array() / f.speed.array();
    const Eigen::ArrayXd gamma =
        dots(dh, f.tangent).transpose().array() / f.speed.array();

    FirstVariations out;
    out.tangent = f.normal.array().rowwise() * omega.transpose();
    out.normal = -(f.tangent.array().rowwise() * omega.transpose());
    out.speed = (gamma * f.speed.array()).matrix();

    // Exact derivative of the discrete curvature map
    // kappa = <(Dv)/|c'|, n>:
    //   d kappa = <D(dv), n>/|c'| + <Dv, dn>/|c'| - kappa <D_s h, v>.
    const Eigen::MatrixXd dv_field = out.tangent;
    const Eigen::MatrixXd Dv = grid_derivative(f.tangent, c.grid, c.topology);
    const Eigen::MatrixXd Ddv = grid_derivative(dv_field, c.grid, c.topology);
    const Eigen::ArrayXd kappa =
        dots(Dv, f.normal).transpose().array() / f.speed.array();
    out.curvature.resize(n);
    out.curvature =
        (dots(Ddv, f.normal).transpose().array() / f.speed.array() +
         dots(Dv, out.normal).transpose().array() / f.speed.array() -
         kappa * gamma)
            .matrix();
    return out;
}

}  // namespace elastica
