#pragma once

#include <vector>

#include "elastica/closed_space.hpp"
#include "elastica/interpolate.hpp"

namespace elastica {

/// Discrete orientation-preserving diffeomorphism of S^1, stored as a
/// continuous lift psi: [0,2pi) -> R with psi(x + 2pi) = psi(x) + 2pi.
/// Evaluation between nodes uses monotone cubic Hermite interpolation
/// (spline-estimated slopes, limited where they would break monotonicity).
class CircleDiffeo {
  public:
    CircleDiffeo(Eigen::VectorXd grid, Eigen::VectorXd lift_values);

    static CircleDiffeo identity(const Eigen::VectorXd& grid);

    double operator()(double x) const;
    double derivative(double x) const;

    const Eigen::VectorXd& grid() const { return grid_; }
    const Eigen::VectorXd& values() const { return values_; }
    Index size() const { return grid_.size(); }

    /// Same map re-sampled onto another grid.
    CircleDiffeo resampled(const Eigen::VectorXd& new_grid) const;

  private:
    Eigen::VectorXd grid_;
    Eigen::VectorXd values_;
    Eigen::VectorXd slopes_;
};

/// Dense-sampling monotonicity check (derivative positive at `oversample`
/// points per cell).
bool strictly_monotone(const CircleDiffeo& psi, int oversample = 10);

/// (psi o eta)(x_j) = psi(eta(x_j)) on eta's grid. Throws MonotonicityLost
/// when the composed node values stop increasing (under-resolved map).
CircleDiffeo compose(const CircleDiffeo& psi, const CircleDiffeo& eta);

/// Flow of the vector field mu (node values on `grid`, piecewise-linear in
/// between) up to time alpha starting from the identity, by classical
/// fourth-order steps. `substeps` 0 picks enough steps that each moves at
/// most half a grid cell.
CircleDiffeo flow(const Eigen::VectorXd& grid, const Eigen::VectorXd& mu,
                  double alpha, int substeps = 0);

/// Orthogonal projection of the deformation h onto the vertical subspace
/// {c' mu}: Galerkin solve of G_c(c' mu, c' nu) = G_c(h, c' nu) over
/// periodic (closed) or endpoint-pinned (open) first-order Lagrange
/// elements on the curve's grid. Returns the node values of mu.
Eigen::VectorXd vertical_project(const DiscreteCurve& c,
                                 const VectorField2& h,
                                 const ElasticParams& p);

/// Vertical projection driven by a lift-space momentum: solves the same
/// Galerkin system with right side <momentum, dR(c' hat_i)>, avoiding the
/// lossy reconstruction of the curve-space deformation.
Eigen::VectorXd vertical_project_momentum(const DiscreteCurve& c,
                                          const Eigen::MatrixXd& momentum,
                                          const ElasticParams& p);

/// d o psi via periodic cubic interpolation of d's points, sampled on
/// psi's grid.
DiscreteCurve reparameterize(const DiscreteCurve& d, const CircleDiffeo& psi);

struct ReparamGradient {
    Eigen::VectorXd mu;  ///< descent direction (= -grad E); flow along -mu
    double distance = 0.0;
    LogResult log;
};

/// Right-trivialized gradient of E(psi) = 1/2 dist(c, d o psi)^2: the
/// vertical projection of the boundary-value solution pulled back to curve
/// space.
ReparamGradient reparam_gradient(const DiscreteCurve& c,
                                 const DiscreteCurve& d,
                                 const CircleDiffeo& psi,
                                 const ElasticParams& p, int steps,
                                 const LogOptions& opts = {});

struct RefinementEvent {
    int iteration = 0;
    std::vector<double> inserted;
    std::vector<double> removed;
    Index size_after = 0;
    bool cap_hit = false;

    bool changed() const { return !inserted.empty() || !removed.empty(); }
};

/// One refinement sweep: bisects cells whose image under psi is wider than
/// the uniform spacing 2pi/n0 and removes nodes whose neighbours suffice,
/// never two adjacent ones. The grid size is capped at cap * n0.
std::pair<Eigen::VectorXd, RefinementEvent> refine_grid(
    const Eigen::VectorXd& grid, const CircleDiffeo& psi, Index n0,
    int cap = 8);

struct MatchOptions {
    ElasticParams params{1.0, 0.5};
    int steps = 25;            ///< RATTLE steps of the inner solver
    double tol_rel = 1e-4;     ///< relative decrease stopping threshold
    int max_outer = 100;
    double alpha_init = 0.1;
    double alpha_grow = 1.5;
    double alpha_min = 1e-10;
    double alpha_max = 1.0;
    /// Per-step compression bound: the step time is clamped so that
    /// alpha * max|mu'| stays below this (one flow step then changes psi'
    /// by at most e^{+-slope_cap}).
    double slope_cap = 0.35;
    /// Stop (with an incompleteness diagnostic) once the map compresses some
    /// parameter interval this strongly: the descent is then chasing the
    /// point-collapse of a fold and no minimizer exists.
    double slope_floor = 1e-6;
    bool refine = true;
    int refine_cap = 8;
    LogOptions log;
};

struct MatchResult {
    CircleDiffeo psi;
    std::vector<double> distance_history;  ///< accepted objective values
    ClosedGeodesic final_geodesic;
    std::vector<RefinementEvent> refinement_log;
    bool incompleteness_detected = false;
    std::string diagnostic;
    int iterations = 0;
};

/// Gradient descent over Diff(S^1) minimizing dist(c, d o psi): per
/// iteration one gradient evaluation, an adaptive step along the backward
/// flow, optionally one grid refinement sweep.
MatchResult solve_bvp_shapes(const DiscreteCurve& c, const DiscreteCurve& d,
                             const MatchOptions& opts = {});

}  // namespace elastica
