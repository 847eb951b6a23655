#pragma once

#include "elastica/core.hpp"

namespace elastica {

/// Solves a cyclic tridiagonal system. `lower[i]` couples row i to i-1
/// (lower[0] to the last column), `upper[i]` couples row i to i+1
/// (upper[n-1] to the first column).
Eigen::VectorXd solve_cyclic_tridiagonal(const Eigen::VectorXd& lower,
                                         const Eigen::VectorXd& diag,
                                         const Eigen::VectorXd& upper,
                                         const Eigen::VectorXd& rhs);

/// Componentwise periodic cubic spline over a strictly increasing grid in
/// [0, 2pi); evaluation wraps modulo 2pi.
class PeriodicSpline {
  public:
    PeriodicSpline(Eigen::VectorXd grid, Eigen::MatrixXd values);

    Eigen::VectorXd operator()(double x) const;
    Eigen::MatrixXd operator()(const Eigen::VectorXd& xs) const;
    Eigen::VectorXd derivative(double x) const;

    Index size() const { return grid_.size(); }

  private:
    Eigen::VectorXd grid_;
    Eigen::MatrixXd values_;
    Eigen::MatrixXd moments_;  // second derivatives at the nodes
};

/// Componentwise natural cubic spline on [x0, xn] (no wrap).
class NaturalSpline {
  public:
    NaturalSpline(Eigen::VectorXd grid, Eigen::MatrixXd values);

    Eigen::VectorXd operator()(double x) const;
    Eigen::MatrixXd operator()(const Eigen::VectorXd& xs) const;

  private:
    Eigen::VectorXd grid_;
    Eigen::MatrixXd values_;
    Eigen::MatrixXd moments_;
};

/// Resamples a curve onto a new grid: periodic (closed) or natural (open)
/// cubic spline of the points, or piecewise-linear when `linear` is set.
DiscreteCurve resample_curve(const DiscreteCurve& c,
                             const Eigen::VectorXd& new_grid,
                             bool linear = false);

/// Resamples so that the nodes are equally spaced in arc length (the grid
/// stays uniform in the parameter).
DiscreteCurve arclength_resample(const DiscreteCurve& c, Index n = 0);

}  // namespace elastica
