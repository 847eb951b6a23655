#pragma once

#include <utility>
#include <vector>

#include "elastica/transforms.hpp"

namespace elastica {

// The cone C^{a,b} is flat: the polar-coordinate domain {r > 0} covers it
// isometrically via
//   q(r, phi) = (r/m cos(m phi), r/m sin(m phi), sqrt(4b^2-a^2)/(2b) r),
// with m = 2b/a. Everything here works in the chart coordinates
// (x1, x2) = (r cos phi, r sin phi), where geodesics are straight segments.
// When 4b^2 == a^2 the lift lives in the punctured plane and the chart is
// the identity.

/// Polar chart coordinates of a single cone point; the branch k shifts the
/// angle by (a/2b) 2 pi k.
std::pair<double, double> cone_lift(const Eigen::VectorXd& q, int k,
                                    const ElasticParams& p);

/// Inverse of cone_lift (the covering map).
Eigen::VectorXd cone_chart_point(double r, double phi,
                                 const ElasticParams& p);

/// Chord length between the chart representatives at a fixed relative
/// branch k.
double cone_chord(const Eigen::VectorXd& q, const Eigen::VectorXd& q_bar,
                  int k, const ElasticParams& p);

/// Geodesic distance on the cone: minimum of the chord over the branch.
/// Only |k| <= ceil(2b/a) + 1 can realize the minimum.
std::pair<double, int> cone_distance(const Eigen::VectorXd& q,
                                     const Eigen::VectorXd& q_bar,
                                     const ElasticParams& p);

/// Node-wise chart coordinates of a lifted curve, with the angle unwrapped
/// continuously along the parameter (anchor branch in (-pi, pi]).
struct ChartLift {
    Eigen::VectorXd radius;
    Eigen::VectorXd angle;

    Eigen::Matrix2Xd points() const {
        Eigen::Matrix2Xd x(2, radius.size());
        x.row(0) = (radius.array() * angle.array().cos()).transpose();
        x.row(1) = (radius.array() * angle.array().sin()).transpose();
        return x;
    }
};

ChartLift lift_curve(const LiftedCurve& q);

/// Lifted curve from chart points; `angle_ref` selects the continuous angle
/// branch (the actual angle is taken within pi of the reference).
LiftedCurve chart_to_lift(const Eigen::Matrix2Xd& x,
                          const Eigen::VectorXd& angle_ref,
                          const Eigen::VectorXd& grid, Topology topology,
                          const ElasticParams& p);

/// Chart velocity of a lift-space tangent dq at q.
Eigen::Matrix2Xd chart_velocity(const LiftedCurve& q, const ChartLift& lift,
                                const Eigen::MatrixXd& dq);

/// Closed-form geodesic between open curves: node paths are straight
/// segments in the chart, with one global branch choice for the whole curve.
struct OpenGeodesic {
    LiftedCurve q0, q1;
    Eigen::Matrix2Xd x0, x1;          ///< chart endpoints per node
    Eigen::VectorXd angle0, angle1;   ///< continuous angle lifts
    Vector2d basepoint0, basepoint1;
    int branch_k = 0;
    std::vector<std::pair<int, double>> branch_energy;  ///< searched branches
    std::vector<Index> apex_nodes;    ///< nodes whose segment meets the apex

    bool degenerate() const { return !apex_nodes.empty(); }
    double distance() const;

    /// Lift at time t in [0, 1]; throws DegenerateInterior when a node
    /// radius falls below the apex threshold at this t.
    LiftedCurve lift_at(double t) const;

    /// Curve at time t via the inverse transform; basepoints interpolate
    /// linearly between the endpoint basepoints.
    DiscreteCurve curve_at(double t, bool validate = true) const;
};

OpenGeodesic open_geodesic(const DiscreteCurve& c0, const DiscreteCurve& c1,
                           const ElasticParams& p);

double open_distance(const DiscreteCurve& c0, const DiscreteCurve& c1,
                     const ElasticParams& p);

/// Initial velocity whose flat geodesic reaches c1 at t = 1 (up to
/// translation): the chart difference pulled back through the transform
/// differential.
VectorField2 open_log(const DiscreteCurve& c0, const DiscreteCurve& c1,
                      const ElasticParams& p);

struct OpenShot {
    DiscreteCurve curve;
    /// Transported velocity pulled back to curve space. Re-deriving it
    /// discretely loses the cumulative-trapezoid remainder, so composing
    /// shots through this field is accurate only to stencil order; use
    /// continue_shot for exact straight-line continuation.
    VectorField2 velocity;
    Eigen::Matrix2Xd chart_point;  ///< x(t) per node
    Eigen::Matrix2Xd chart_rate;   ///< chart velocity (constant on the line)
    Eigen::VectorXd chart_angle;   ///< continuous angle lift at time t
    Vector2d basepoint_rate;
    ElasticParams params;
};

/// Straight-line solution of the geodesic equation: lift, move along the
/// chart line for time t, invert. Throws ExistenceTimeExceeded (carrying the
/// maximal admissible time) when a node would cross the apex before t.
OpenShot explicit_exp_flow(const DiscreteCurve& c0, const VectorField2& u0,
                           double t, const ElasticParams& p);

/// Continues the straight chart line for another dt.
OpenShot continue_shot(const OpenShot& shot, double dt);

DiscreteCurve explicit_exp(const DiscreteCurve& c0, const VectorField2& u0,
                           double t, const ElasticParams& p);

}  // namespace elastica
