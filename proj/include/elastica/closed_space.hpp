#pragma once

#include <vector>

#include "elastica/open_space.hpp"
#include "elastica/transforms.hpp"

namespace elastica {

/// Weighted L^2 inner product of node-wise fields, sum_j w_j <a_j, b_j>.
inline double weighted_inner(const Eigen::VectorXd& w,
                             const Eigen::MatrixXd& a,
                             const Eigen::MatrixXd& b) {
    return (w.array() * dots(a, b).transpose().array()).sum();
}

inline double weighted_norm(const Eigen::VectorXd& w,
                            const Eigen::MatrixXd& a) {
    return std::sqrt(std::max(weighted_inner(w, a, a), 0.0));
}

/// Closure constraint F(q) = int |q| q dtheta (planar lift) respectively
/// int sqrt(q1^2+q2^2) (q1, q2) dtheta (cone lift). Lifts of closed curves
/// satisfy F = 0.
Vector2d constraint(const LiftedCurve& q);

/// Pointwise gradient field of the constraint component (0 or 1) with
/// respect to the weighted L^2 structure.
Eigen::MatrixXd constraint_gradient(const LiftedCurve& q, int component);

/// Basis of the orthogonal complement of the tangent space of the
/// constraint manifold inside the (cone-tangent) lift space.
struct NormalBasis {
    Eigen::MatrixXd u1, u2;    ///< cone-tangent projections of grad F_i
    Eigen::MatrixXd on1, on2;  ///< L^2-orthonormalized pair
};

NormalBasis normal_basis(const LiftedCurve& q);

/// L^2-orthogonal projection onto the tangent space of the constraint
/// manifold at q (for cone lifts this includes the pointwise cone-tangency
/// projection).
Eigen::MatrixXd project_tangent(const LiftedCurve& q, Eigen::MatrixXd p);

/// Newton projection of a planar lift onto the constraint manifold F = 0.
/// Lifts of closed curves carry an O(h^4) constraint defect on non-uniform
/// grids; this removes it along the constraint gradients.
LiftedCurve project_to_constraint(LiftedCurve q, double tol = 1e-12,
                                  int max_newton = 20);

struct RattleOptions {
    double tol_f = 1e-10;  ///< constraint tolerance of the position solve
    int max_newton = 50;
};

/// Time-discrete constrained geodesic produced by the RATTLE integrator.
struct GeodesicPath {
    Eigen::VectorXd times;
    std::vector<Eigen::MatrixXd> states;
    std::vector<Eigen::MatrixXd> momenta;
    Eigen::VectorXd constraint_norm;  ///< max-norm of F per state
    Eigen::VectorXd energy;           ///< 1/2 ||p||^2 per state
    Eigen::Matrix2Xd lambda;          ///< position multipliers per step
    Eigen::Matrix2Xd mu;              ///< velocity multipliers per step
    Eigen::VectorXd grid;
    Topology topology = Topology::closed;
    ElasticParams params;

    Index steps() const { return times.size() - 1; }
    LiftedCurve state_at(Index i) const {
        return LiftedCurve{states.at(i), grid, topology, params};
    }
    LiftedCurve end_state() const { return state_at(times.size() - 1); }
};

/// Constrained geodesic shooting: N RATTLE steps of size 1/N starting at q
/// with momentum p (projected onto the tangent space first). Planar lifts
/// (4b^2 == a^2) only; the cone case would need the pointwise cone
/// constraints inside the solver as well.
GeodesicPath exp_rattle(const LiftedCurve& q, const Eigen::MatrixXd& p,
                        int steps, const RattleOptions& opts = {});

struct LogOptions {
    double eps_rel = 1e-3;    ///< stop when the endpoint gap <= eps_rel*||q1||
    int max_iter = 500;
    double alpha_init = 1.0;
    double alpha_grow = 1.2;
    double alpha_min = 1e-8;
    RattleOptions rattle;
};

struct LogResult {
    Eigen::MatrixXd momentum;
    std::vector<double> residuals;  ///< endpoint gaps of accepted iterates
    bool converged = false;
    int iterations = 0;
};

/// Fixed-point solver for the geodesic boundary value problem on the
/// constraint manifold: iterates p <- p + alpha Proj(q0, q1 - Exp(q0,p)).
LogResult log_shooting(const LiftedCurve& q0, const LiftedCurve& q1,
                       int steps, const LogOptions& opts = {});

struct ClosedGeodesic {
    double distance = 0.0;
    GeodesicPath path;
    LogResult log;
};

/// Geodesic distance between parameterized closed curves (modulo
/// translations): lift, solve the boundary value problem, return the
/// momentum norm and the shot path.
ClosedGeodesic param_distance(const DiscreteCurve& c0,
                              const DiscreteCurve& c1,
                              const ElasticParams& p, int steps,
                              const LogOptions& opts = {});

/// Second fundamental form of the constraint manifold (planar lift case):
/// normal component of the derivative of the projected constant field k
/// along the projected constant field h, by central finite differences of
/// the field map.
Eigen::MatrixXd second_fundamental_form(const LiftedCurve& q,
                                        const Eigen::MatrixXd& h,
                                        const Eigen::MatrixXd& k,
                                        double fd_step = 1e-5);

/// Sectional curvature of the constraint manifold in the plane spanned by
/// the projections of h and k (Gauss equation; ambient space flat).
double sectional_curvature_preshape(const LiftedCurve& q,
                                    const Eigen::MatrixXd& h,
                                    const Eigen::MatrixXd& k,
                                    double fd_step = 1e-5);

/// Same machinery for the unconstrained space of cone-valued curves (open
/// curves, no closure constraint): the normal space is the pointwise cone
/// normal. The cone is intrinsically flat, so the value vanishes up to
/// finite-difference noise.
double sectional_curvature_open(const LiftedCurve& q,
                                const Eigen::MatrixXd& h,
                                const Eigen::MatrixXd& k,
                                double fd_step = 1e-5);

/// O'Neill correction term (3/4)|[X~, Y~]^vert|^2 of the submersion onto
/// unparameterized open curves, evaluated at c for horizontal fields X, Y.
/// Non-negative by construction; it is the whole sectional curvature of the
/// open shape space since the parameterized space is flat.
double oneill_term(const DiscreteCurve& c, const VectorField2& X,
                   const VectorField2& Y, const ElasticParams& p,
                   double fd_step = 1e-5);

}  // namespace elastica
