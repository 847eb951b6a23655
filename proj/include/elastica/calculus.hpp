#pragma once

#include <Eigen/Sparse>

#include "elastica/core.hpp"

namespace elastica {

/// Trapezoid quadrature weights for the grid; closed grids use the periodic
/// rule with wraparound gap 2pi - theta_{n-1} + theta_0.
Eigen::VectorXd trapezoid_weights(const Eigen::VectorXd& grid,
                                  Topology topology);

/// d/dtheta of row-wise sampled data by non-uniform central differences
/// (exact for quadratics). Closed data wraps periodically, open data uses
/// second-order one-sided stencils at the ends.
Eigen::MatrixXd grid_derivative(const Eigen::MatrixXd& values,
                                const Eigen::VectorXd& grid,
                                Topology topology);
Eigen::VectorXd grid_derivative_scalar(const Eigen::VectorXd& values,
                                       const Eigen::VectorXd& grid,
                                       Topology topology);

/// The difference operator of grid_derivative as a sparse matrix (acts on
/// row vectors of samples from the right, i.e. (D f)_m = sum_k D_{mk} f_k).
Eigen::SparseMatrix<double> derivative_matrix(const Eigen::VectorXd& grid,
                                              Topology topology);

/// Cumulative trapezoid integral of row-wise data, zero at the first node;
/// covers [grid(0), grid(n-1)] (the wraparound interval of a closed grid is
/// not included).
Eigen::MatrixXd cumtrapz(const Eigen::MatrixXd& values,
                         const Eigen::VectorXd& grid);

/// Integral of row-wise data over the full (cyclic) grid.
Eigen::VectorXd integrate_dtheta(const Eigen::MatrixXd& values,
                                 const Eigen::VectorXd& grid,
                                 Topology topology);

/// Row vector of column-wise dot products <a_j, b_j>.
inline Eigen::RowVectorXd dots(const Eigen::MatrixXd& a,
                               const Eigen::MatrixXd& b) {
    return (a.cwiseProduct(b)).colwise().sum();
}

/// c'(theta_j) node-wise.
VectorField2 derivative(const DiscreteCurve& c);

struct Frame {
    Eigen::VectorXd speed;    ///< |c'|
    VectorField2 tangent;     ///< v = c'/|c'|
    VectorField2 normal;      ///< n = v rotated by pi/2
    Eigen::VectorXd angle;    ///< continuous lift of the turning angle
    double turning = 0.0;     ///< closed curves: total angle increment / 2pi
};

Frame frame(const DiscreteCurve& c,
            double regularity_floor = kRegularityFloor);

/// D_s f = f' / |c'| node-wise, same stencils as `derivative`.
Eigen::MatrixXd arc_derivative(const DiscreteCurve& c,
                               const Eigen::MatrixXd& values);
Eigen::VectorXd arc_derivative_scalar(const DiscreteCurve& c,
                                      const Eigen::VectorXd& values);

/// kappa = <D_s v, n> node-wise.
Eigen::VectorXd curvature(const DiscreteCurve& c);

/// int f ds = int f |c'| dtheta by (periodic) trapezoid quadrature.
double integrate_ds(const DiscreteCurve& c, const Eigen::VectorXd& f);

/// First variations of the frame quantities in direction h. These are the
/// exact derivatives of the discrete maps c -> v, n, |c'|, kappa, so they
/// match central finite differences of the discretization to solver
/// precision and converge to the classical variational formulas
///   D_{c,h} v      = <D_s h, n> n
///   D_{c,h} n      = -<D_s h, n> v
///   D_{c,h} |c'|   = <D_s h, v> |c'|
///   D_{c,h} kappa  = <D_s^2 h, n> - 2 kappa <D_s h, v>
/// at the stencil order.
struct FirstVariations {
    VectorField2 tangent;
    VectorField2 normal;
    Eigen::VectorXd speed;
    Eigen::VectorXd curvature;
};

FirstVariations first_variations(const DiscreteCurve& c,
                                 const VectorField2& h);

}  // namespace elastica
