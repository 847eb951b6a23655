#include "elastica/open_space.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace elastica {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Relative radius floor below which a chart point counts as an apex hit.
constexpr double kApexTol = 1e-9;

double wrap_pi(double x) { return x - kTwoPi * std::round(x / kTwoPi); }

// Continuous unwrap of atan2(q2, q1) along the nodes, anchored in (-pi, pi].
Eigen::VectorXd unwrapped_angle(const Eigen::MatrixXd& values) {
    const Index n = values.cols();
    Eigen::VectorXd angle(n);
    angle[0] = std::atan2(values(1, 0), values(0, 0));
    double raw_prev = angle[0];
    for (Index j = 1; j < n; ++j) {
        const double raw = std::atan2(values(1, j), values(0, j));
        angle[j] = angle[j - 1] + wrap_pi(raw - raw_prev);
        raw_prev = raw;
    }
    return angle;
}

int branch_range(const ElasticParams& p) {
    return static_cast<int>(std::ceil(2.0 * p.b / p.a)) + 1;
}

}  // namespace

std::pair<double, double> cone_lift(const Eigen::VectorXd& q, int k,
                                    const ElasticParams& p) {
    if (p.flat_plane()) {
        if (q.size() != 2) throw ConeViolation("cone_lift: expected 2 rows");
        return {q.norm(), std::atan2(q[1], q[0]) + kTwoPi * k};
    }
    if (q.size() != 3) throw ConeViolation("cone_lift: expected 3 rows");
    if (!(q[2] > 0.0)) throw ConeViolation("cone_lift: q3 must be positive");
    const double r = 2.0 * p.b / p.cone_coeff() * q[2];
    const double phi =
        p.a / (2.0 * p.b) * (std::atan2(q[1], q[0]) + kTwoPi * k);
    return {r, phi};
}

Eigen::VectorXd cone_chart_point(double r, double phi,
                                 const ElasticParams& p) {
    if (p.flat_plane())
        return Vector2d(r * std::cos(phi), r * std::sin(phi));
    const double m = 2.0 * p.b / p.a;
    Eigen::VectorXd q(3);
    q[0] = r / m * std::cos(m * phi);
    q[1] = r / m * std::sin(m * phi);
    q[2] = p.cone_coeff() / (2.0 * p.b) * r;
    return q;
}

double cone_chord(const Eigen::VectorXd& q, const Eigen::VectorXd& q_bar,
                  int k, const ElasticParams& p) {
    if (p.flat_plane()) return (q - q_bar).norm();
    const double factor =
        4.0 * p.b * p.b / (4.0 * p.b * p.b - p.a * p.a);
    const double dphi =
        p.a / (2.0 * p.b) *
            (std::atan2(q[1], q[0]) - std::atan2(q_bar[1], q_bar[0])) +
        p.a / p.b * std::numbers::pi * k;
    const double d2 = factor * (q[2] * q[2] + q_bar[2] * q_bar[2] -
                                2.0 * q[2] * q_bar[2] * std::cos(dphi));
    return std::sqrt(std::max(d2, 0.0));
}

std::pair<double, int> cone_distance(const Eigen::VectorXd& q,
                                     const Eigen::VectorXd& q_bar,
                                     const ElasticParams& p) {
    if (p.flat_plane()) return {(q - q_bar).norm(), 0};
    double best = std::numeric_limits<double>::infinity();
    int best_k = 0;
    const int range = branch_range(p);
    // search by increasing |k| so ties resolve to the smallest branch
    for (int step = 0; step <= 2 * range; ++step) {
        const int k = (step % 2 == 1) ? (step + 1) / 2 : -(step / 2);
        const double d = cone_chord(q, q_bar, k, p);
        if (d < best * (1.0 - 1e-14)) {
            best = d;
            best_k = k;
        }
    }
    return {best, best_k};
}

ChartLift lift_curve(const LiftedCurve& q) {
    validate_lifted(q);
    ChartLift lift;
    if (q.params.flat_plane()) {
        lift.radius = q.values.colwise().norm();
        lift.angle = unwrapped_angle(q.values);
    } else {
        lift.radius =
            (2.0 * q.params.b / q.params.cone_coeff()) * q.values.row(2);
        lift.angle = q.params.a / (2.0 * q.params.b) *
                     unwrapped_angle(q.values.topRows(2));
    }
    return lift;
}

LiftedCurve chart_to_lift(const Eigen::Matrix2Xd& x,
                          const Eigen::VectorXd& angle_ref,
                          const Eigen::VectorXd& grid, Topology topology,
                          const ElasticParams& p) {
    const Index n = x.cols();
    LiftedCurve q;
    q.grid = grid;
    q.topology = topology;
    q.params = p;
    q.values.resize(p.lift_dim(), n);
    for (Index j = 0; j < n; ++j) {
        const double r = x.col(j).norm();
        const double raw = std::atan2(x(1, j), x(0, j));
        const double phi = angle_ref[j] + wrap_pi(raw - angle_ref[j]);
        q.values.col(j) = cone_chart_point(r, phi, p);
    }
    return q;
}

Eigen::Matrix2Xd chart_velocity(const LiftedCurve& q, const ChartLift& lift,
                                const Eigen::MatrixXd& dq) {
    const Index n = q.size();
    const ElasticParams& p = q.params;
    Eigen::Matrix2Xd xdot(2, n);
    for (Index j = 0; j < n; ++j) {
        double r_dot, phi_dot;
        if (p.flat_plane()) {
            // chart is the identity
            xdot.col(j) = dq.col(j);
            continue;
        }
        const double rho2 = q.values.col(j).head<2>().squaredNorm();
        r_dot = 2.0 * p.b / p.cone_coeff() * dq(2, j);
        phi_dot = p.a / (2.0 * p.b) *
                  (q.values(0, j) * dq(1, j) - q.values(1, j) * dq(0, j)) /
                  rho2;
        const double cphi = std::cos(lift.angle[j]);
        const double sphi = std::sin(lift.angle[j]);
        xdot(0, j) = r_dot * cphi - lift.radius[j] * sphi * phi_dot;
        xdot(1, j) = r_dot * sphi + lift.radius[j] * cphi * phi_dot;
    }
    return xdot;
}

double OpenGeodesic::distance() const {
    const Eigen::VectorXd w = trapezoid_weights(q0.grid, q0.topology);
    const Eigen::Matrix2Xd diff = x1 - x0;
    return std::sqrt(
        (w.array() * diff.colwise().squaredNorm().transpose().array())
            .sum());
}

LiftedCurve OpenGeodesic::lift_at(double t) const {
    const Eigen::Matrix2Xd x = (1.0 - t) * x0 + t * x1;
    const double floor = kApexTol * std::sqrt(x0.colwise().squaredNorm().mean());
    if (t > 0.0 && t < 1.0) {
        for (Index j = 0; j < x.cols(); ++j)
            if (x.col(j).norm() <= floor)
                throw DegenerateInterior(
                    "OpenGeodesic: node " + std::to_string(j) +
                    " reaches the cone apex at t = " + std::to_string(t));
    }
    const Eigen::VectorXd angle_ref = (1.0 - t) * angle0 + t * angle1;
    return chart_to_lift(x, angle_ref, q0.grid, q0.topology, q0.params);
}

DiscreteCurve OpenGeodesic::curve_at(double t, bool validate) const {
    const Vector2d basepoint = (1.0 - t) * basepoint0 + t * basepoint1;
    return r_inverse(lift_at(t), basepoint, nullptr, validate);
}

OpenGeodesic open_geodesic(const DiscreteCurve& c0, const DiscreteCurve& c1,
                           const ElasticParams& p) {
    if (c0.closed() || c1.closed())
        throw TopologyError("open_geodesic: open curves only");
    if (c0.size() != c1.size() ||
        (c0.grid - c1.grid).cwiseAbs().maxCoeff() > 1e-12)
        throw GridMismatch("open_geodesic: curves must share their grid");

    OpenGeodesic g;
    g.q0 = r_transform(c0, p);
    g.q1 = r_transform(c1, p);
    g.basepoint0 = c0.points.col(0);
    g.basepoint1 = c1.points.col(0);

    const ChartLift l0 = lift_curve(g.q0);
    ChartLift l1 = lift_curve(g.q1);
    g.angle0 = l0.angle;

    const Eigen::VectorXd w = trapezoid_weights(c0.grid, c0.topology);
    // One global branch for all nodes (the lifts are continuous in theta, so
    // the minimization over k happens once, not pointwise).
    const int range = p.flat_plane() ? 0 : branch_range(p);
    const double shift =
        p.flat_plane() ? kTwoPi : p.a / (2.0 * p.b) * kTwoPi;
    double best = std::numeric_limits<double>::infinity();
    int best_k = 0;
    for (int k = -range; k <= range; ++k) {
        double total = 0.0;
        for (Index j = 0; j < c0.size(); ++j) {
            const double dphi = l1.angle[j] + shift * k - l0.angle[j];
            total += w[j] * (l0.radius[j] * l0.radius[j] +
                             l1.radius[j] * l1.radius[j] -
                             2.0 * l0.radius[j] * l1.radius[j] *
                                 std::cos(dphi));
        }
        g.branch_energy.emplace_back(k, total);
        if (total < best) {
            best = total;
            best_k = k;
        }
    }
    g.branch_k = best_k;
    l1.angle.array() += shift * best_k;
    g.angle1 = l1.angle;
    g.x0 = l0.points();
    g.x1 = l1.points();

    // flag node segments that pass through (or graze) the apex
    const double floor =
        kApexTol * std::sqrt(l0.radius.array().square().mean());
    for (Index j = 0; j < c0.size(); ++j) {
        const Vector2d a = g.x0.col(j);
        const Vector2d d = g.x1.col(j) - a;
        const double len2 = d.squaredNorm();
        double rmin = std::min(a.norm(), g.x1.col(j).norm());
        if (len2 > 0.0) {
            const double s = std::clamp(-a.dot(d) / len2, 0.0, 1.0);
            rmin = std::min(rmin, (a + s * d).norm());
        }
        if (rmin <= floor) g.apex_nodes.push_back(j);
    }
    return g;
}

double open_distance(const DiscreteCurve& c0, const DiscreteCurve& c1,
                     const ElasticParams& p) {
    return open_geodesic(c0, c1, p).distance();
}

VectorField2 open_log(const DiscreteCurve& c0, const DiscreteCurve& c1,
                      const ElasticParams& p) {
    const OpenGeodesic g = open_geodesic(c0, c1, p);
    const Eigen::Matrix2Xd xdot = g.x1 - g.x0;
    // pull the chart velocity back to a lift-space tangent at q0
    const Index n = c0.size();
    Eigen::MatrixXd dq(p.lift_dim(), n);
    if (p.flat_plane()) {
        dq = xdot;
    } else {
        const double m = 2.0 * p.b / p.a;
        for (Index j = 0; j < n; ++j) {
            const double r = g.x0.col(j).norm();
            const double cphi = std::cos(g.angle0[j]);
            const double sphi = std::sin(g.angle0[j]);
            const double r_dot =
                cphi * xdot(0, j) + sphi * xdot(1, j);
            const double phi_dot =
                (-sphi * xdot(0, j) + cphi * xdot(1, j)) / r;
            const double mphi = m * g.angle0[j];
            dq(0, j) = r_dot / m * std::cos(mphi) -
                       r * std::sin(mphi) * phi_dot;
            dq(1, j) = r_dot / m * std::sin(mphi) +
                       r * std::cos(mphi) * phi_dot;
            dq(2, j) = p.cone_coeff() / (2.0 * p.b) * r_dot;
        }
    }
    return r_differential_inverse(c0, dq, p);
}

namespace {

// Lift-space tangent corresponding to a chart velocity at chart position
// (r e^{i phi} per node).
Eigen::MatrixXd lift_rate_from_chart(const Eigen::Matrix2Xd& x,
                                     const Eigen::VectorXd& angle,
                                     const Eigen::Matrix2Xd& xdot,
                                     const ElasticParams& p) {
    if (p.flat_plane()) return xdot;
    const Index n = x.cols();
    const double m = 2.0 * p.b / p.a;
    Eigen::MatrixXd dq(3, n);
    for (Index j = 0; j < n; ++j) {
        const double r = x.col(j).norm();
        const double cphi = std::cos(angle[j]);
        const double sphi = std::sin(angle[j]);
        const double r_dot = cphi * xdot(0, j) + sphi * xdot(1, j);
        const double phi_dot =
            (-sphi * xdot(0, j) + cphi * xdot(1, j)) / r;
        const double mphi = m * angle[j];
        dq(0, j) =
            r_dot / m * std::cos(mphi) - r * std::sin(mphi) * phi_dot;
        dq(1, j) =
            r_dot / m * std::sin(mphi) + r * std::cos(mphi) * phi_dot;
        dq(2, j) = p.cone_coeff() / (2.0 * p.b) * r_dot;
    }
    return dq;
}

// First time > 0 at which some node line x_j + s xdot_j enters the apex
// disk of the given radius floor.
double apex_entry_time(const Eigen::Matrix2Xd& x,
                       const Eigen::Matrix2Xd& xdot, double floor) {
    double t_max = std::numeric_limits<double>::infinity();
    for (Index j = 0; j < x.cols(); ++j) {
        const Vector2d a = x.col(j);
        const Vector2d d = xdot.col(j);
        const double dd = d.squaredNorm();
        if (dd == 0.0) continue;
        const double ad = a.dot(d);
        const double disc = ad * ad - dd * (a.squaredNorm() - floor * floor);
        if (disc < 0.0) continue;  // the node line misses the apex disk
        const double s = (-ad - std::sqrt(disc)) / dd;
        if (s > 0.0) t_max = std::min(t_max, s);
    }
    return t_max;
}

// Integrand of the inverse transform, (1/2ab) |q| (q1, q2) per node.
Eigen::Matrix2Xd inverse_integrand(const LiftedCurve& q) {
    const Eigen::ArrayXd norms = q.values.colwise().norm().transpose();
    return (q.values.topRows(2).array().rowwise() * norms.transpose())
               .matrix() /
           (2.0 * q.params.a * q.params.b);
}

OpenShot shot_from_chart(const Eigen::Matrix2Xd& x0,
                         const Eigen::VectorXd& angle0,
                         const Eigen::Matrix2Xd& xdot,
                         const Eigen::Matrix2Xd& anchor_points,
                         const Vector2d& basepoint_rate,
                         const Eigen::VectorXd& grid, Topology topology,
                         const ElasticParams& p, double t) {
    const double floor =
        kApexTol * std::sqrt(x0.colwise().squaredNorm().mean());
    const double t_max = apex_entry_time(x0, xdot, floor);
    if (std::abs(t) >= t_max)
        throw ExistenceTimeExceeded(
            "explicit_exp: a node reaches the cone apex before the "
            "requested time",
            t_max);

    OpenShot shot;
    shot.params = p;
    shot.chart_point = x0 + t * xdot;
    shot.chart_rate = xdot;
    shot.basepoint_rate = basepoint_rate;
    // the chart segment subtends < pi at the origin, so the branch follows
    // the starting angle
    const LiftedCurve qt =
        chart_to_lift(shot.chart_point, angle0, grid, topology, p);
    shot.chart_angle.resize(angle0.size());
    for (Index j = 0; j < angle0.size(); ++j) {
        const double raw =
            std::atan2(shot.chart_point(1, j), shot.chart_point(0, j));
        shot.chart_angle[j] = angle0[j] + wrap_pi(raw - angle0[j]);
    }

    // Invert anchored at the start curve: integrating the integrand
    // difference cancels the quadrature bias shared by both lifts, so t = 0
    // reproduces the anchor exactly and shots compose exactly.
    const LiftedCurve q_anchor = chart_to_lift(x0, angle0, grid, topology, p);
    const Eigen::Matrix2Xd delta =
        cumtrapz(inverse_integrand(qt) - inverse_integrand(q_anchor), grid);
    shot.curve.points =
        anchor_points + delta;
    shot.curve.points.colwise() += Vector2d(t * basepoint_rate);
    shot.curve.grid = grid;
    shot.curve.topology = topology;
    validate_curve(shot.curve);

    const Eigen::MatrixXd dq_t =
        lift_rate_from_chart(shot.chart_point, shot.chart_angle, xdot, p);
    shot.velocity = r_differential_inverse(shot.curve, dq_t, p);
    shot.velocity.colwise() += basepoint_rate;
    return shot;
}

}  // namespace

OpenShot explicit_exp_flow(const DiscreteCurve& c0, const VectorField2& u0,
                           double t, const ElasticParams& p) {
    if (c0.closed())
        throw TopologyError("explicit_exp: open curves only");
    const LiftedCurve q0 = r_transform(c0, p);
    const ChartLift l0 = lift_curve(q0);
    const Eigen::MatrixXd dq = r_differential(c0, u0, p);
    const Eigen::Matrix2Xd xdot = chart_velocity(q0, l0, dq);
    return shot_from_chart(l0.points(), l0.angle, xdot, c0.points,
                           u0.col(0), c0.grid, c0.topology, p, t);
}

OpenShot continue_shot(const OpenShot& shot, double dt) {
    return shot_from_chart(shot.chart_point, shot.chart_angle,
                           shot.chart_rate, shot.curve.points,
                           shot.basepoint_rate, shot.curve.grid,
                           shot.curve.topology, shot.params, dt);
}

DiscreteCurve explicit_exp(const DiscreteCurve& c0, const VectorField2& u0,
                           double t, const ElasticParams& p) {
    return explicit_exp_flow(c0, u0, t, p).curve;
}

}  // namespace elastica
