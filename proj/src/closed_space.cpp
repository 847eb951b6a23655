#include "elastica/closed_space.hpp"

#include <cmath>

namespace elastica {

namespace {

// node radius floor below which a planar lift counts as collapsed
constexpr double kCollapseTol = 1e-10;

Eigen::VectorXd planar_norms(const Eigen::MatrixXd& values) {
    return values.topRows(2).colwise().norm();
}

void require_planar(const LiftedCurve& q, const char* who) {
    if (!q.params.flat_plane())
        throw Error(std::string(who) +
                    ": needs the planar lift (4b^2 == a^2); the cone case "
                    "would add pointwise constraints to the solver");
}

void check_collapse(const Eigen::MatrixXd& values, int step) {
    const Eigen::VectorXd norms = values.colwise().norm();
    const double floor =
        kCollapseTol *
        std::sqrt(norms.squaredNorm() / static_cast<double>(norms.size()));
    for (Index j = 0; j < norms.size(); ++j)
        if (!(norms[j] > floor))
            throw ConeViolation(
                "exp_rattle: node " + std::to_string(j) +
                " collapsed to the origin at step " + std::to_string(step) +
                " (incompleteness event)");
}

// unit cone normal at a single 3-vector on C^{a,b}
Vector3d cone_normal(const Eigen::Vector3d& q, const ElasticParams& p) {
    const double k2 = 4.0 * p.b * p.b - p.a * p.a;
    Vector3d nu(k2 * q[0], k2 * q[1], -p.a * p.a * q[2]);
    return nu.normalized();
}

}  // namespace

Vector2d constraint(const LiftedCurve& q) {
    const Eigen::VectorXd w = trapezoid_weights(q.grid, q.topology);
    const Eigen::VectorXd rho = planar_norms(q.values);
    Vector2d f = Vector2d::Zero();
    for (Index j = 0; j < q.size(); ++j)
        f += w[j] * rho[j] * q.values.col(j).head<2>();
    return f;
}

Eigen::MatrixXd constraint_gradient(const LiftedCurve& q, int component) {
    const Index n = q.size();
    const Eigen::VectorXd rho = planar_norms(q.values);
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(q.dim(), n);
    for (Index j = 0; j < n; ++j) {
        if (!(rho[j] > 0.0))
            throw ConeViolation("constraint_gradient: node at the origin");
        g.col(j).head<2>() =
            q.values(component, j) / rho[j] * q.values.col(j).head<2>();
        g(component, j) += rho[j];
    }
    return g;
}

NormalBasis normal_basis(const LiftedCurve& q) {
    validate_lifted(q);
    NormalBasis basis;
    basis.u1 = constraint_gradient(q, 0);
    basis.u2 = constraint_gradient(q, 1);
    Eigen::MatrixXd g1 = basis.u1;
    Eigen::MatrixXd g2 = basis.u2;
    if (q.dim() == 3) {
        // The e3-shift with lambda_i = 2 q_i sqrt(4b^2-a^2)/a lands the
        // gradients in the cone-tangent bundle, but not perpendicular to
        // the rest of it; the orthonormal pair below therefore starts from
        // the pointwise orthogonal projections of the gradients instead.
        const double factor = 2.0 * q.params.cone_coeff() / q.params.a;
        basis.u1.row(2) += factor * q.values.row(0);
        basis.u2.row(2) += factor * q.values.row(1);
        for (Index j = 0; j < q.size(); ++j) {
            const Vector3d nu = cone_normal(q.values.col(j), q.params);
            g1.col(j) -= nu.dot(g1.col(j)) * nu;
            g2.col(j) -= nu.dot(g2.col(j)) * nu;
        }
    }

    const Eigen::VectorXd w = trapezoid_weights(q.grid, q.topology);
    const double scale = weighted_norm(w, q.values);
    const double n1 = weighted_norm(w, g1);
    if (!(n1 > 1e-10 * scale))
        throw DegenerateBasis("normal_basis: first direction degenerates");
    basis.on1 = g1 / n1;
    basis.on2 = g2 - weighted_inner(w, g2, basis.on1) * basis.on1;
    const double n2 = weighted_norm(w, basis.on2);
    if (!(n2 > 1e-10 * scale))
        throw DegenerateBasis(
            "normal_basis: directions are numerically parallel");
    basis.on2 /= n2;
    return basis;
}

Eigen::MatrixXd project_tangent(const LiftedCurve& q, Eigen::MatrixXd p) {
    if (p.rows() != q.dim() || p.cols() != q.size())
        throw GridMismatch("project_tangent: field shape mismatch");
    if (q.dim() == 3) {
        for (Index j = 0; j < q.size(); ++j) {
            const Vector3d nu = cone_normal(q.values.col(j), q.params);
            p.col(j) -= nu.dot(p.col(j)) * nu;
        }
    }
    const NormalBasis basis = normal_basis(q);
    const Eigen::VectorXd w = trapezoid_weights(q.grid, q.topology);
    p -= weighted_inner(w, p, basis.on1) * basis.on1;
    p -= weighted_inner(w, p, basis.on2) * basis.on2;
    return p;
}

LiftedCurve project_to_constraint(LiftedCurve q, double tol,
                                  int max_newton) {
    require_planar(q, "project_to_constraint");
    const Eigen::VectorXd w = trapezoid_weights(q.grid, q.topology);
    const double scale = std::max(weighted_norm(w, q.values), 1.0);
    Vector2d f = constraint(q);
    int newton = 0;
    while (f.cwiseAbs().maxCoeff() > tol * scale) {
        if (++newton > max_newton)
            throw NewtonDivergence(
                "project_to_constraint: no convergence", 0,
                f.cwiseAbs().maxCoeff());
        const Eigen::MatrixXd g1 = constraint_gradient(q, 0);
        const Eigen::MatrixXd g2 = constraint_gradient(q, 1);
        Eigen::Matrix2d jac;
        jac(0, 0) = weighted_inner(w, g1, g1);
        jac(0, 1) = weighted_inner(w, g1, g2);
        jac(1, 0) = jac(0, 1);
        jac(1, 1) = weighted_inner(w, g2, g2);
        const Vector2d xi = jac.partialPivLu().solve(-f);
        q.values += xi[0] * g1 + xi[1] * g2;
        f = constraint(q);
    }
    return q;
}

GeodesicPath exp_rattle(const LiftedCurve& q, const Eigen::MatrixXd& p,
                        int steps, const RattleOptions& opts) {
    require_planar(q, "exp_rattle");
    validate_lifted(q);
    if (steps < 1) throw Error("exp_rattle: needs at least one step");
    const Eigen::VectorXd w = trapezoid_weights(q.grid, q.topology);
    {
        const Vector2d f0 = constraint(q);
        const double scale = weighted_norm(w, q.values);
        const double admit = std::max(1e3 * opts.tol_f, 1e-12);
        if (f0.cwiseAbs().maxCoeff() > admit * std::max(scale, 1.0))
            throw ConeViolation(
                "exp_rattle: start point violates the closure constraint");
    }

    const double dt = 1.0 / steps;

    GeodesicPath path;
    path.grid = q.grid;
    path.topology = q.topology;
    path.params = q.params;
    path.times = Eigen::VectorXd::LinSpaced(steps + 1, 0.0, 1.0);
    path.states.reserve(steps + 1);
    path.momenta.reserve(steps + 1);
    path.constraint_norm.resize(steps + 1);
    path.energy.resize(steps + 1);
    path.lambda.resize(2, steps);
    path.mu.resize(2, steps);

    Eigen::MatrixXd qi = q.values;
    Eigen::MatrixXd pi = project_tangent(q, p);
    path.states.push_back(qi);
    path.momenta.push_back(pi);
    path.constraint_norm[0] = constraint(q).cwiseAbs().maxCoeff();
    path.energy[0] = 0.5 * weighted_inner(w, pi, pi) ;

    Vector2d lambda = Vector2d::Zero();  // warm start across steps
    for (int i = 0; i < steps; ++i) {
        LiftedCurve cur{qi, q.grid, q.topology, q.params};
        const Eigen::MatrixXd g1 = constraint_gradient(cur, 0);
        const Eigen::MatrixXd g2 = constraint_gradient(cur, 1);
        const Eigen::MatrixXd drift = qi + dt * pi;

        // position half-kick: Newton in lambda so that F(q_{i+1}) = 0
        auto position = [&](const Vector2d& l) {
            return (drift + 0.5 * dt * dt * (l[0] * g1 + l[1] * g2)).eval();
        };
        Eigen::MatrixXd q_next = position(lambda);
        Vector2d f = constraint({q_next, q.grid, q.topology, q.params});
        int newton = 0;
        while (f.cwiseAbs().maxCoeff() > opts.tol_f) {
            if (++newton > opts.max_newton)
                throw NewtonDivergence(
                    "exp_rattle: constraint solve stalled at step " +
                        std::to_string(i),
                    i, f.cwiseAbs().maxCoeff());
            LiftedCurve nxt{q_next, q.grid, q.topology, q.params};
            Eigen::Matrix2d jac;
            for (int r = 0; r < 2; ++r) {
                const Eigen::MatrixXd gr = constraint_gradient(nxt, r);
                jac(r, 0) = 0.5 * dt * dt * weighted_inner(w, gr, g1);
                jac(r, 1) = 0.5 * dt * dt * weighted_inner(w, gr, g2);
            }
            lambda -= jac.partialPivLu().solve(f);
            q_next = position(lambda);
            f = constraint({q_next, q.grid, q.topology, q.params});
        }
        check_collapse(q_next, i + 1);

        const Eigen::MatrixXd p_bar =
            pi + 0.5 * dt * (lambda[0] * g1 + lambda[1] * g2);

        // velocity half-kick: linear solve so that p_{i+1} is tangent
        LiftedCurve nxt{q_next, q.grid, q.topology, q.params};
        const NormalBasis basis = normal_basis(nxt);
        const Eigen::MatrixXd h1 = constraint_gradient(nxt, 0);
        const Eigen::MatrixXd h2 = constraint_gradient(nxt, 1);
        Eigen::Matrix2d m;
        m(0, 0) = 0.5 * dt * weighted_inner(w, h1, basis.on1);
        m(0, 1) = 0.5 * dt * weighted_inner(w, h2, basis.on1);
        m(1, 0) = 0.5 * dt * weighted_inner(w, h1, basis.on2);
        m(1, 1) = 0.5 * dt * weighted_inner(w, h2, basis.on2);
        const Vector2d rhs(-weighted_inner(w, p_bar, basis.on1),
                           -weighted_inner(w, p_bar, basis.on2));
        const Vector2d mu = m.partialPivLu().solve(rhs);
        const Eigen::MatrixXd p_next =
            p_bar + 0.5 * dt * (mu[0] * h1 + mu[1] * h2);

        path.lambda.col(i) = lambda;
        path.mu.col(i) = mu;
        qi = q_next;
        pi = p_next;
        path.states.push_back(qi);
        path.momenta.push_back(pi);
        path.constraint_norm[i + 1] = f.cwiseAbs().maxCoeff();
        path.energy[i + 1] = 0.5 * weighted_inner(w, pi, pi);
    }
    return path;
}

LogResult log_shooting(const LiftedCurve& q0, const LiftedCurve& q1,
                       int steps, const LogOptions& opts) {
    require_planar(q0, "log_shooting");
    if (q0.size() != q1.size() ||
        (q0.grid - q1.grid).cwiseAbs().maxCoeff() > 1e-12)
        throw GridMismatch("log_shooting: lifts must share their grid");
    const Eigen::VectorXd w = trapezoid_weights(q0.grid, q0.topology);
    const double target_scale = weighted_norm(w, q1.values);
    const double eps = opts.eps_rel * target_scale;
    const double dt = 1.0 / steps;

    LogResult result;

    // initial guess: one coarse forward step of the projected difference
    Eigen::MatrixXd p =
        dt * project_tangent(q0, q1.values - q0.values);
    {
        const GeodesicPath probe = exp_rattle(q0, p, 1, opts.rattle);
        p = project_tangent(q0, probe.states.back() - q0.values);
    }

    auto endpoint_gap = [&](const Eigen::MatrixXd& momentum,
                            Eigen::MatrixXd* end) {
        const GeodesicPath path = exp_rattle(q0, momentum, steps, opts.rattle);
        if (end) *end = path.states.back();
        return weighted_norm(w, path.states.back() - q1.values);
    };

    Eigen::MatrixXd q_end;
    double residual = endpoint_gap(p, &q_end);
    result.residuals.push_back(residual);

    double alpha = opts.alpha_init;
    while (residual > eps && result.iterations < opts.max_iter) {
        ++result.iterations;
        const Eigen::MatrixXd direction =
            project_tangent(q0, q1.values - q_end);
        const Eigen::MatrixXd candidate = p + alpha * direction;
        bool ok = true;
        double r_new = 0.0;
        Eigen::MatrixXd q_end_new;
        try {
            r_new = endpoint_gap(candidate, &q_end_new);
        } catch (const ConeViolation&) {
            ok = false;
        } catch (const NewtonDivergence&) {
            ok = false;
        }
        if (ok && r_new < residual) {
            p = candidate;
            residual = r_new;
            q_end = q_end_new;
            result.residuals.push_back(residual);
            alpha *= opts.alpha_grow;
        } else {
            alpha *= 0.5;
            if (alpha < opts.alpha_min) break;
        }
    }
    result.momentum = p;
    result.converged = residual <= eps;
    return result;
}

ClosedGeodesic param_distance(const DiscreteCurve& c0,
                              const DiscreteCurve& c1,
                              const ElasticParams& p, int steps,
                              const LogOptions& opts) {
    if (!c0.closed() || !c1.closed())
        throw TopologyError("param_distance: closed curves only");
    if (c0.size() != c1.size() ||
        (c0.grid - c1.grid).cwiseAbs().maxCoeff() > 1e-12)
        throw GridMismatch("param_distance: resample to a common grid first");
    const LiftedCurve q0 = project_to_constraint(r_transform(c0, p));
    const LiftedCurve q1 = project_to_constraint(r_transform(c1, p));
    ClosedGeodesic out;
    out.log = log_shooting(q0, q1, steps, opts);
    out.path = exp_rattle(q0, out.log.momentum, steps, opts.rattle);
    const Eigen::VectorXd w = trapezoid_weights(c0.grid, c0.topology);
    out.distance = weighted_norm(w, out.log.momentum);
    return out;
}

namespace {

// field maps used by the curvature expressions: orthogonal projection of a
// constant field, either onto the constraint-manifold tangent space or onto
// the pointwise cone-tangent planes
Eigen::MatrixXd closed_field_map(const Eigen::MatrixXd& values,
                                 const LiftedCurve& temp,
                                 const Eigen::MatrixXd& h) {
    return project_tangent({values, temp.grid, temp.topology, temp.params},
                           h);
}

Eigen::MatrixXd cone_field_map(const Eigen::MatrixXd& values,
                               const LiftedCurve& temp,
                               const Eigen::MatrixXd& h) {
    Eigen::MatrixXd out = h;
    for (Index j = 0; j < values.cols(); ++j) {
        const Vector3d nu =
            cone_normal(values.col(j), temp.params);
        out.col(j) -= nu.dot(out.col(j)) * nu;
    }
    return out;
}

template <class FieldMap, class NormalProject>
Eigen::MatrixXd fundamental_form(const LiftedCurve& q,
                                 const Eigen::MatrixXd& h,
                                 const Eigen::MatrixXd& k, double fd_step,
                                 FieldMap&& field, NormalProject&& normal) {
    const Eigen::VectorXd w = trapezoid_weights(q.grid, q.topology);
    const Eigen::MatrixXd xh = field(q.values, q, h);
    const double scale = weighted_norm(w, q.values);
    const double hnorm = weighted_norm(w, xh);
    if (!(hnorm > 0.0)) return Eigen::MatrixXd::Zero(q.dim(), q.size());
    const double eps = fd_step * scale / hnorm;
    const Eigen::MatrixXd deriv =
        (field(q.values + eps * xh, q, k) -
         field(q.values - eps * xh, q, k)) /
        (2.0 * eps);
    return normal(deriv);
}

}  // namespace

Eigen::MatrixXd second_fundamental_form(const LiftedCurve& q,
                                        const Eigen::MatrixXd& h,
                                        const Eigen::MatrixXd& k,
                                        double fd_step) {
    require_planar(q, "second_fundamental_form");
    const Eigen::VectorXd w = trapezoid_weights(q.grid, q.topology);
    const NormalBasis basis = normal_basis(q);
    auto normal = [&](const Eigen::MatrixXd& d) {
        return (weighted_inner(w, d, basis.on1) * basis.on1 +
                weighted_inner(w, d, basis.on2) * basis.on2)
            .eval();
    };
    return fundamental_form(q, h, k, fd_step, closed_field_map, normal);
}

double sectional_curvature_preshape(const LiftedCurve& q,
                                    const Eigen::MatrixXd& h,
                                    const Eigen::MatrixXd& k,
                                    double fd_step) {
    require_planar(q, "sectional_curvature_preshape");
    const Eigen::VectorXd w = trapezoid_weights(q.grid, q.topology);
    // orthonormalize the projected pair; the field maps stay linear in the
    // constant argument, so the combinations below remain valid arguments
    const Eigen::MatrixXd xh = project_tangent(q, h);
    const double nh = weighted_norm(w, xh);
    if (!(nh > 0.0)) throw DegenerateBasis("sectional curvature: X_h = 0");
    const Eigen::MatrixXd e1 = h / nh;
    const Eigen::MatrixXd xe1 = xh / nh;
    Eigen::MatrixXd k2 = k - weighted_inner(w, project_tangent(q, k), xe1) * e1;
    const Eigen::MatrixXd xk2 = project_tangent(q, k2);
    const double nk = weighted_norm(w, xk2);
    if (!(nk > 1e-6 * weighted_norm(w, project_tangent(q, k))))
        throw DegenerateBasis(
            "sectional curvature: directions nearly parallel");
    const Eigen::MatrixXd e2 = k2 / nk;

    const Eigen::MatrixXd s11 = second_fundamental_form(q, e1, e1, fd_step);
    const Eigen::MatrixXd s22 = second_fundamental_form(q, e2, e2, fd_step);
    const Eigen::MatrixXd s12 = second_fundamental_form(q, e1, e2, fd_step);
    return weighted_inner(w, s22, s11) - weighted_inner(w, s12, s12);
}

double sectional_curvature_open(const LiftedCurve& q,
                                const Eigen::MatrixXd& h,
                                const Eigen::MatrixXd& k, double fd_step) {
    if (q.dim() != 3)
        throw Error(
            "sectional_curvature_open: cone lifts only (the planar lift "
            "space is an open subset, trivially flat)");
    const Eigen::VectorXd w = trapezoid_weights(q.grid, q.topology);
    auto normal = [&](const Eigen::MatrixXd& d) {
        Eigen::MatrixXd out = Eigen::MatrixXd::Zero(3, q.size());
        for (Index j = 0; j < q.size(); ++j) {
            const Vector3d nu = cone_normal(q.values.col(j), q.params);
            out.col(j) = nu.dot(d.col(j)) * nu;
        }
        return out;
    };
    auto form = [&](const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
        return fundamental_form(q, a, b, fd_step, cone_field_map, normal);
    };

    const Eigen::MatrixXd xh = cone_field_map(q.values, q, h);
    const double nh = weighted_norm(w, xh);
    if (!(nh > 0.0)) throw DegenerateBasis("sectional curvature: X_h = 0");
    const Eigen::MatrixXd e1 = h / nh;
    const Eigen::MatrixXd xe1 = xh / nh;
    Eigen::MatrixXd k2 =
        k - weighted_inner(w, cone_field_map(q.values, q, k), xe1) * e1;
    const double nk = weighted_norm(w, cone_field_map(q.values, q, k2));
    if (!(nk > 1e-6 * weighted_norm(w, cone_field_map(q.values, q, k))))
        throw DegenerateBasis(
            "sectional curvature: directions nearly parallel");
    k2 /= nk;

    const Eigen::MatrixXd s11 = form(e1, e1);
    const Eigen::MatrixXd s22 = form(k2, k2);
    const Eigen::MatrixXd s12 = form(e1, k2);
    return weighted_inner(w, s22, s11) - weighted_inner(w, s12, s12);
}

}  // namespace elastica
