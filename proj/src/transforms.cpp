#include "elastica/transforms.hpp"

#include <cmath>

namespace elastica {

namespace {

// omega = <D_s h, n>, gamma = <D_s h, v> node-wise.
struct MetricComponents {
    Eigen::ArrayXd omega, gamma;
};

MetricComponents components(const DiscreteCurve& c, const Frame& f,
                            const VectorField2& h) {
    if (h.cols() != c.size())
        throw GridMismatch("vector field length does not match curve");
    const Eigen::MatrixXd dh = grid_derivative(h, c.grid, c.topology);
    MetricComponents mc;
    mc.omega = dots(dh, f.normal).transpose().array() / f.speed.array();
    mc.gamma = dots(dh, f.tangent).transpose().array() / f.speed.array();
    return mc;
}

}  // namespace

void validate_lifted(const LiftedCurve& q, double cone_tol) {
    const Index n = q.size();
    if (n < 4) throw Error("LiftedCurve: needs at least 4 nodes");
    if (q.grid.size() != n)
        throw GridMismatch("LiftedCurve: grid/values length mismatch");
    if (q.dim() != q.params.lift_dim())
        throw ConeViolation("LiftedCurve: row count does not match params");
    if (q.dim() == 3) {
        const double a2 = q.params.a * q.params.a;
        const double k2 = 4.0 * q.params.b * q.params.b - a2;
        for (Index j = 0; j < n; ++j) {
            const double rho2 = q.values(0, j) * q.values(0, j) +
                                q.values(1, j) * q.values(1, j);
            const double h2 = q.values(2, j) * q.values(2, j);
            const double lhs = k2 * rho2;
            const double rhs = a2 * h2;
            if (!(q.values(2, j) > 0.0) ||
                std::abs(lhs - rhs) > cone_tol * 0.5 * (lhs + rhs))
                throw ConeViolation("LiftedCurve: node " + std::to_string(j) +
                                    " is off the cone");
        }
    } else {
        const Eigen::VectorXd norms = q.values.colwise().norm();
        const double floor =
            std::sqrt(kRegularityFloor) *
            std::sqrt(norms.squaredNorm() / static_cast<double>(n));
        for (Index j = 0; j < n; ++j)
            if (!(norms[j] > floor))
                throw ConeViolation("LiftedCurve: node " + std::to_string(j) +
                                    " too close to the origin");
    }
}

LiftedCurve r_transform(const DiscreteCurve& c, const ElasticParams& p) {
    const Frame f = frame(c);
    const Eigen::ArrayXd root = f.speed.array().sqrt();
    LiftedCurve q;
    q.grid = c.grid;
    q.topology = c.topology;
    q.params = p;
    if (p.flat_plane()) {
        q.values = p.a * (f.tangent.array().rowwise() * root.transpose());
    } else {
        q.values.resize(3, c.size());
        q.values.topRows(2) =
            p.a * (f.tangent.array().rowwise() * root.transpose());
        q.values.row(2) = (p.cone_coeff() * root).transpose();
    }
    return q;
}

Eigen::MatrixXd r_differential(const DiscreteCurve& c, const VectorField2& h,
                               const ElasticParams& p) {
    const Frame f = frame(c);
    const MetricComponents mc = components(c, f, h);
    const Eigen::ArrayXd root = f.speed.array().sqrt();
    const Eigen::ArrayXd half_gamma_root = 0.5 * mc.gamma * root;
    Eigen::MatrixXd dq(p.lift_dim(), c.size());
    dq.topRows(2) =
        p.a * (f.tangent.array().rowwise() * half_gamma_root.transpose() +
               f.normal.array().rowwise() * (mc.omega * root).transpose());
    if (!p.flat_plane())
        dq.row(2) = (p.cone_coeff() * half_gamma_root).transpose();
    return dq;
}

VectorField2 r_differential_inverse(const DiscreteCurve& c,
                                    const Eigen::MatrixXd& dq,
                                    const ElasticParams& p) {
    if (dq.cols() != c.size())
        throw GridMismatch("r_differential_inverse: length mismatch");
    const Frame f = frame(c);
    const Eigen::ArrayXd root = f.speed.array().sqrt();
    const Eigen::MatrixXd dq12 = dq.topRows(2);
    const Eigen::ArrayXd gamma =
        2.0 * dots(dq12, f.tangent).transpose().array() / (p.a * root);
    const Eigen::ArrayXd omega =
        dots(dq12, f.normal).transpose().array() / (p.a * root);
    const Eigen::MatrixXd u_prime =
        (f.tangent.array().rowwise() * (gamma * f.speed.array()).transpose() +
         f.normal.array().rowwise() * (omega * f.speed.array()).transpose())
            .matrix();
    return cumtrapz(u_prime, c.grid);
}

DiscreteCurve r_inverse(const LiftedCurve& q, const Vector2d& basepoint,
                        Vector2d* closure_defect, bool validate) {
    validate_lifted(q);
    const double scale = 1.0 / (2.0 * q.params.a * q.params.b);
    const Eigen::ArrayXd norms = q.values.colwise().norm().transpose();
    const Eigen::MatrixXd integrand =
        scale * (q.values.topRows(2).array().rowwise() * norms.transpose())
                    .matrix();
    DiscreteCurve c;
    c.points = cumtrapz(integrand, q.grid).colwise() + basepoint;
    c.grid = q.grid;
    c.topology = q.topology;
    if (closure_defect) {
        if (q.closed())
            *closure_defect =
                integrate_dtheta(integrand, q.grid, q.topology);
        else
            closure_defect->setZero();
    }
    if (validate) validate_curve(c);
    return c;
}

double elastic_metric(const DiscreteCurve& c, const VectorField2& h,
                      const VectorField2& k, const ElasticParams& p) {
    const Frame f = frame(c);
    const MetricComponents mh = components(c, f, h);
    const MetricComponents mk = components(c, f, k);
    const Eigen::VectorXd integrand =
        (p.a * p.a * mh.omega * mk.omega + p.b * p.b * mh.gamma * mk.gamma)
            .matrix();
    const Eigen::VectorXd w = trapezoid_weights(c.grid, c.topology);
    return (w.array() * f.speed.array() * integrand.array()).sum();
}

VectorField2 elastic_tension(const DiscreteCurve& c, const VectorField2& h,
                             const ElasticParams& p) {
    const Frame f = frame(c);
    const MetricComponents mc = components(c, f, h);
    return f.normal.array().rowwise() * (p.a * p.a * mc.omega).transpose() +
           f.tangent.array().rowwise() * (p.b * p.b * mc.gamma).transpose();
}

VectorField2 elastic_quadratic(const DiscreteCurve& c, const VectorField2& h,
                               const ElasticParams& p) {
    const Frame f = frame(c);
    const MetricComponents mc = components(c, f, h);
    const Eigen::ArrayXd vpart = p.a * p.a * mc.omega.square() +
                                 p.b * p.b * mc.gamma.square();
    const Eigen::ArrayXd npart =
        -2.0 * (p.b * p.b - p.a * p.a) * mc.omega * mc.gamma;
    return f.tangent.array().rowwise() * vpart.transpose() +
           f.normal.array().rowwise() * npart.transpose();
}

Eigen::Matrix2Xd q_transform(const DiscreteCurve& c) {
    const Frame f = frame(c);
    return c.points.array().rowwise() *
           f.speed.array().sqrt().transpose();
}

Eigen::Matrix2Xd q_differential(const DiscreteCurve& c,
                                const VectorField2& h) {
    const Frame f = frame(c);
    const MetricComponents mc = components(c, f, h);
    const Eigen::ArrayXd root = f.speed.array().sqrt();
    return (h + (c.points.array().rowwise() * (0.5 * mc.gamma).transpose())
                    .matrix())
               .array()
               .rowwise() *
           root.transpose();
}

double q_metric(const DiscreteCurve& c, const VectorField2& h,
                const VectorField2& k) {
    const Frame f = frame(c);
    const MetricComponents mh = components(c, f, h);
    const MetricComponents mk = components(c, f, k);
    const Eigen::Matrix2Xd lh =
        h + (c.points.array().rowwise() * (0.5 * mh.gamma).transpose())
                .matrix();
    const Eigen::Matrix2Xd lk =
        k + (c.points.array().rowwise() * (0.5 * mk.gamma).transpose())
                .matrix();
    const Eigen::VectorXd integrand = dots(lh, lk).transpose();
    return integrate_ds(c, integrand);
}

Eigen::Matrix2Xd younes_transform(const DiscreteCurve& c) {
    if (c.closed())
        throw TopologyError(
            "younes_transform: defined for open curves only");
    const Frame f = frame(c);
    const Eigen::ArrayXd root = f.speed.array().sqrt();
    Eigen::Matrix2Xd out(2, c.size());
    out.row(0) = (root * (0.5 * f.angle.array()).cos()).transpose();
    out.row(1) = (root * (0.5 * f.angle.array()).sin()).transpose();
    return out;
}

Eigen::Matrix2Xd younes_differential(const DiscreteCurve& c,
                                     const VectorField2& h) {
    if (c.closed())
        throw TopologyError(
            "younes_differential: defined for open curves only");
    const Frame f = frame(c);
    const MetricComponents mc = components(c, f, h);
    const Eigen::ArrayXd root = f.speed.array().sqrt();
    const Eigen::ArrayXd cos_half = (0.5 * f.angle.array()).cos();
    const Eigen::ArrayXd sin_half = (0.5 * f.angle.array()).sin();
    Eigen::Matrix2Xd out(2, c.size());
    // d alpha = <D_s h, n>; the half-angle splits it between the two rows.
    out.row(0) = (root * (0.5 * mc.gamma * cos_half -
                          0.5 * mc.omega * sin_half))
                     .transpose();
    out.row(1) = (root * (0.5 * mc.gamma * sin_half +
                          0.5 * mc.omega * cos_half))
                     .transpose();
    return out;
}

Eigen::Matrix3Xd k_transform(const DiscreteCurve& c) {
    const Frame f = frame(c);
    const Eigen::ArrayXd root = f.speed.array().sqrt();
    Eigen::Matrix3Xd out(3, c.size());
    out.topRows(2) = f.tangent.array().rowwise() * root.transpose();
    out.row(2) = (root * curvature(c).array()).transpose();
    return out;
}

Eigen::Matrix3Xd k_differential(const DiscreteCurve& c,
                                const VectorField2& h) {
    const Frame f = frame(c);
    const MetricComponents mc = components(c, f, h);
    const FirstVariations var = first_variations(c, h);
    const Eigen::ArrayXd root = f.speed.array().sqrt();
    const Eigen::ArrayXd kappa = curvature(c).array();
    Eigen::Matrix3Xd out(3, c.size());
    out.topRows(2) =
        f.tangent.array().rowwise() * (0.5 * mc.gamma * root).transpose() +
        f.normal.array().rowwise() * (mc.omega * root).transpose();
    out.row(2) = (root * (0.5 * mc.gamma * kappa + var.curvature.array()))
                     .transpose();
    return out;
}

double k_metric(const DiscreteCurve& c, const VectorField2& h,
                const VectorField2& k) {
    const Eigen::Matrix3Xd dh = k_differential(c, h);
    const Eigen::Matrix3Xd dk = k_differential(c, k);
    const Eigen::VectorXd integrand = dots(dh, dk).transpose();
    const Eigen::VectorXd w = trapezoid_weights(c.grid, c.topology);
    return (w.array() * integrand.array()).sum();
}

Eigen::MatrixXd general_transform(const DiscreteCurve& c,
                                  const JetTransform& t) {
    if (t.jet_order < 1 || t.jet_order > 2)
        throw Error("general_transform: jet order must be 1 or 2");
    const Frame f = frame(c);
    const Eigen::ArrayXd root = f.speed.array().sqrt();
    Eigen::MatrixXd out(t.output_dim, c.size());
    Eigen::VectorXd jet(2 * t.jet_order);
    for (Index j = 0; j < c.size(); ++j) {
        jet.head(2) = c.points.col(j);
        if (t.jet_order == 2) jet.tail(2) = f.tangent.col(j);
        out.col(j) = root[j] * t.f(jet);
    }
    return out;
}

Eigen::MatrixXd general_differential(const DiscreteCurve& c,
                                     const JetTransform& t,
                                     const VectorField2& h) {
    const Frame f = frame(c);
    const MetricComponents mc = components(c, f, h);
    const Eigen::ArrayXd root = f.speed.array().sqrt();
    Eigen::MatrixXd out(t.output_dim, c.size());
    Eigen::VectorXd jet(2 * t.jet_order);
    Eigen::VectorXd djet(2 * t.jet_order);
    for (Index j = 0; j < c.size(); ++j) {
        jet.head(2) = c.points.col(j);
        djet.head(2) = h.col(j);
        if (t.jet_order == 2) {
            jet.tail(2) = f.tangent.col(j);
            djet.tail(2) = mc.omega[j] * f.normal.col(j);  // D_{c,h} v
        }
        out.col(j) = 0.5 * mc.gamma[j] * root[j] * t.f(jet) +
                     root[j] * (t.jacobian(jet) * djet);
    }
    return out;
}

double general_pullback(const DiscreteCurve& c, const JetTransform& t,
                        const VectorField2& h, const VectorField2& k) {
    const Eigen::MatrixXd dh = general_differential(c, t, h);
    const Eigen::MatrixXd dk = general_differential(c, t, k);
    const Eigen::VectorXd integrand = dots(dh, dk).transpose();
    const Eigen::VectorXd w = trapezoid_weights(c.grid, c.topology);
    return (w.array() * integrand.array()).sum();
}

}  // namespace elastica
