#include "elastica/reparam.hpp"

#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <numbers>

namespace elastica {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_circle_grid(const Eigen::VectorXd& grid) {
    const Index n = grid.size();
    if (n < 4) throw Error("CircleDiffeo: needs at least 4 nodes");
    for (Index j = 0; j + 1 < n; ++j)
        if (!(grid[j + 1] > grid[j]))
            throw Error("CircleDiffeo: grid must be strictly increasing");
    if (grid[0] < 0.0 || !(grid[n - 1] < kTwoPi))
        throw Error("CircleDiffeo: grid must lie in [0, 2pi)");
}

}  // namespace

CircleDiffeo::CircleDiffeo(Eigen::VectorXd grid, Eigen::VectorXd lift_values)
    : grid_(std::move(grid)), values_(std::move(lift_values)) {
    check_circle_grid(grid_);
    const Index n = grid_.size();
    if (values_.size() != n)
        throw GridMismatch("CircleDiffeo: grid/values mismatch");
    for (Index j = 0; j + 1 < n; ++j)
        if (!(values_[j + 1] > values_[j]))
            throw MonotonicityLost(
                "CircleDiffeo: lift not strictly increasing at node " +
                std::to_string(j));
    if (!(values_[0] + kTwoPi > values_[n - 1]))
        throw MonotonicityLost(
            "CircleDiffeo: wraparound breaks strict monotonicity");

    // Slope estimates from the periodic spline of psi - id, then limited
    // cell by cell so the cubic Hermite interpolant stays monotone.
    Eigen::MatrixXd delta(1, n);
    delta.row(0) = (values_ - grid_).transpose();
    const PeriodicSpline spline(grid_, delta);
    slopes_.resize(n);
    for (Index j = 0; j < n; ++j)
        slopes_[j] = std::max(0.0, 1.0 + spline.derivative(grid_[j])[0]);
    for (Index j = 0; j < n; ++j) {
        const Index jp = (j + 1) % n;
        const double h =
            (j + 1 < n) ? grid_[j + 1] - grid_[j]
                        : kTwoPi - grid_[n - 1] + grid_[0];
        const double secant =
            ((j + 1 < n) ? values_[j + 1] : values_[0] + kTwoPi) -
            values_[j];
        const double slope = secant / h;
        const double a = slopes_[j] / slope;
        const double b = slopes_[jp] / slope;
        const double r2 = a * a + b * b;
        if (r2 > 9.0) {
            const double tau = 3.0 / std::sqrt(r2);
            slopes_[j] = tau * a * slope;
            slopes_[jp] = tau * b * slope;
        }
    }
}

CircleDiffeo CircleDiffeo::identity(const Eigen::VectorXd& grid) {
    return CircleDiffeo(grid, grid);
}

double CircleDiffeo::operator()(double x) const {
    const Index n = grid_.size();
    const double turns = std::floor((x - grid_[0]) / kTwoPi);
    const double xr = x - kTwoPi * turns;
    const auto it = std::upper_bound(grid_.data(), grid_.data() + n, xr);
    const Index j = std::max<Index>(0, it - grid_.data() - 1);
    const Index jp = (j + 1) % n;
    const double h = (j + 1 < n) ? grid_[j + 1] - grid_[j]
                                 : kTwoPi - grid_[n - 1] + grid_[0];
    const double t = (xr - grid_[j]) / h;
    const double y0 = values_[j];
    const double y1 = (j + 1 < n) ? values_[j + 1] : values_[0] + kTwoPi;
    const double t2 = t * t;
    const double t3 = t2 * t;
    const double value = y0 * (2 * t3 - 3 * t2 + 1) +
                         h * slopes_[j] * (t3 - 2 * t2 + t) +
                         y1 * (-2 * t3 + 3 * t2) +
                         h * slopes_[jp] * (t3 - t2);
    return value + kTwoPi * turns;
}

double CircleDiffeo::derivative(double x) const {
    const Index n = grid_.size();
    const double turns = std::floor((x - grid_[0]) / kTwoPi);
    const double xr = x - kTwoPi * turns;
    const auto it = std::upper_bound(grid_.data(), grid_.data() + n, xr);
    const Index j = std::max<Index>(0, it - grid_.data() - 1);
    const Index jp = (j + 1) % n;
    const double h = (j + 1 < n) ? grid_[j + 1] - grid_[j]
                                 : kTwoPi - grid_[n - 1] + grid_[0];
    const double t = (xr - grid_[j]) / h;
    const double y0 = values_[j];
    const double y1 = (j + 1 < n) ? values_[j + 1] : values_[0] + kTwoPi;
    const double t2 = t * t;
    return (y0 * (6 * t2 - 6 * t) / h + slopes_[j] * (3 * t2 - 4 * t + 1) +
            y1 * (6 * t - 6 * t2) / h + slopes_[jp] * (3 * t2 - 2 * t));
}

CircleDiffeo CircleDiffeo::resampled(const Eigen::VectorXd& new_grid) const {
    Eigen::VectorXd vals(new_grid.size());
    for (Index j = 0; j < new_grid.size(); ++j) vals[j] = (*this)(new_grid[j]);
    return CircleDiffeo(new_grid, vals);
}

bool strictly_monotone(const CircleDiffeo& psi, int oversample) {
    const Eigen::VectorXd& grid = psi.grid();
    const Index n = grid.size();
    double prev = psi(grid[0]);
    for (Index j = 0; j < n; ++j) {
        const double x0 = grid[j];
        const double x1 = (j + 1 < n) ? grid[j + 1] : grid[0] + kTwoPi;
        for (int k = 1; k <= oversample; ++k) {
            const double x = x0 + (x1 - x0) * k / oversample;
            const double y = psi(x);
            if (!(y > prev)) return false;
            prev = y;
        }
    }
    return true;
}

CircleDiffeo compose(const CircleDiffeo& psi, const CircleDiffeo& eta) {
    const Eigen::VectorXd& grid = eta.grid();
    Eigen::VectorXd vals(grid.size());
    for (Index j = 0; j < grid.size(); ++j) vals[j] = psi(eta.values()[j]);
    return CircleDiffeo(grid, vals);  // ctor rejects lost monotonicity
}

CircleDiffeo flow(const Eigen::VectorXd& grid, const Eigen::VectorXd& mu,
                  double alpha, int substeps) {
    check_circle_grid(grid);
    const Index n = grid.size();
    if (mu.size() != n) throw GridMismatch("flow: field length mismatch");

    // Smooth periodic interpolation of the field: a merely piecewise-linear
    // field would leave curvature kinks all over the flow map, spoiling the
    // cubic interpolation of the resulting diffeomorphism.
    const PeriodicSpline sp(grid, Eigen::MatrixXd(mu.transpose()));
    auto field = [&](double x) { return sp(x)[0]; };

    if (substeps <= 0) {
        double min_gap = kTwoPi;
        for (Index j = 0; j < n; ++j) {
            const double h = (j + 1 < n) ? grid[j + 1] - grid[j]
                                         : kTwoPi - grid[n - 1] + grid[0];
            min_gap = std::min(min_gap, h);
        }
        // each substep advances at most 1/16 of a cell: the field is only
        // piecewise linear, so the integrator accuracy is kink-limited
        const double speed = mu.cwiseAbs().maxCoeff();
        substeps = std::max(
            8, static_cast<int>(
                   std::ceil(speed * std::abs(alpha) / (min_gap / 16.0))));
        substeps = std::min(substeps, 1000000);
    }

    const double dt = alpha / substeps;
    Eigen::VectorXd x = grid;
    for (int s = 0; s < substeps; ++s) {
        for (Index j = 0; j < n; ++j) {
            const double k1 = field(x[j]);
            const double k2 = field(x[j] + 0.5 * dt * k1);
            const double k3 = field(x[j] + 0.5 * dt * k2);
            const double k4 = field(x[j] + dt * k3);
            x[j] += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
    }
    return CircleDiffeo(grid, x);
}

namespace {

// Galerkin system of the vertical projection at c: the bilinear form is the
// discrete elastic metric restricted to the fields c' * (nodal hat), so the
// Galerkin identities hold exactly against elastic_metric. Open curves pin
// the endpoint values of mu to zero.
struct VerticalSystem {
    Eigen::SparseMatrix<double> stiffness;
    bool closed = true;
    Index nodes = 0;

    Index col_of(Index node) const { return closed ? node : node - 1; }
    bool is_unknown(Index node) const {
        return closed || (node > 0 && node + 1 < nodes);
    }

    /// Solves for mu given the full-length right side (Dirichlet entries
    /// are ignored for open curves).
    Eigen::VectorXd solve(const Eigen::VectorXd& rhs_full) const {
        const Index unknowns = stiffness.rows();
        Eigen::VectorXd rhs(unknowns);
        if (closed) {
            rhs = rhs_full;
        } else {
            rhs = rhs_full.segment(1, unknowns);
        }
        Eigen::VectorXd mu_inner;
        bool ok = false;
        {
            Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(
                stiffness);
            if (solver.info() == Eigen::Success) {
                mu_inner = solver.solve(rhs);
                const double res = (stiffness * mu_inner - rhs).norm();
                ok = mu_inner.allFinite() &&
                     res <= 1e-8 * (rhs.norm() + 1e-30) + 1e-12;
            }
        }
        if (!ok) {
            // rank-guarded dense least-squares fallback
            const Eigen::MatrixXd dense = Eigen::MatrixXd(stiffness);
            Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(
                dense);
            mu_inner = cod.solve(rhs);
            if (!mu_inner.allFinite())
                throw SingularSystem(
                    "vertical_project: stiffness system is singular");
        }
        if (closed) return mu_inner;
        Eigen::VectorXd mu = Eigen::VectorXd::Zero(nodes);
        mu.segment(1, nodes - 2) = mu_inner;
        return mu;
    }
};

std::vector<std::vector<std::pair<Index, double>>> stencil_rows(
    const Eigen::SparseMatrix<double>& d) {
    std::vector<std::vector<std::pair<Index, double>>> rows(d.rows());
    for (Index k = 0; k < d.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(d, k); it; ++it)
            rows[it.row()].emplace_back(it.col(), it.value());
    return rows;
}

VerticalSystem build_vertical_system(const DiscreteCurve& c,
                                     const ElasticParams& p) {
    const Index n = c.size();
    VerticalSystem sys;
    sys.closed = c.closed();
    sys.nodes = n;
    const Index unknowns = sys.closed ? n : n - 2;
    if (unknowns < 1) throw Error("vertical_project: grid too small");

    const Frame f = frame(c);
    const VectorField2 cp = derivative(c);
    const Eigen::VectorXd w = trapezoid_weights(c.grid, c.topology);
    const auto rows = stencil_rows(derivative_matrix(c.grid, c.topology));

    const double a2 = p.a * p.a;
    const double b2 = p.b * p.b;
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(25 * n);
    for (Index m = 0; m < n; ++m) {
        const double wm = w[m];
        const double sm = f.speed[m];
        for (const auto& [i, dmi] : rows[m]) {
            if (!sys.is_unknown(i)) continue;
            const double ni = cp.col(i).dot(f.normal.col(m));
            const double vi = cp.col(i).dot(f.tangent.col(m));
            for (const auto& [j, dmj] : rows[m]) {
                if (!sys.is_unknown(j)) continue;
                const double nj = cp.col(j).dot(f.normal.col(m));
                const double vj = cp.col(j).dot(f.tangent.col(m));
                triplets.emplace_back(
                    sys.col_of(i), sys.col_of(j),
                    wm / sm * dmi * dmj * (a2 * ni * nj + b2 * vi * vj));
            }
        }
    }
    sys.stiffness.resize(unknowns, unknowns);
    sys.stiffness.setFromTriplets(triplets.begin(), triplets.end());
    return sys;
}

// rhs_i = sum_m w_m D_mi [<u_i, n_m> alpha_n_m + <u_i, v_m> alpha_v_m]
// with per-node pairing vectors u_i.
Eigen::VectorXd pairing_rhs(const DiscreteCurve& c, const Frame& f,
                            const Eigen::Matrix2Xd& u,
                            const Eigen::ArrayXd& alpha_n,
                            const Eigen::ArrayXd& alpha_v) {
    const Index n = c.size();
    const Eigen::VectorXd w = trapezoid_weights(c.grid, c.topology);
    const auto rows = stencil_rows(derivative_matrix(c.grid, c.topology));
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    for (Index m = 0; m < n; ++m)
        for (const auto& [i, dmi] : rows[m]) {
            const double ni = u.col(i).dot(f.normal.col(m));
            const double vi = u.col(i).dot(f.tangent.col(m));
            rhs[i] += w[m] * dmi * (alpha_n[m] * ni + alpha_v[m] * vi);
        }
    return rhs;
}

}  // namespace

Eigen::VectorXd vertical_project(const DiscreteCurve& c,
                                 const VectorField2& h,
                                 const ElasticParams& p) {
    if (h.cols() != c.size())
        throw GridMismatch("vertical_project: field length mismatch");
    const Frame f = frame(c);
    const Eigen::MatrixXd dh = grid_derivative(h, c.grid, c.topology);
    const Eigen::ArrayXd omega_h =
        dots(dh, f.normal).transpose().array() / f.speed.array();
    const Eigen::ArrayXd gamma_h =
        dots(dh, f.tangent).transpose().array() / f.speed.array();
    const Eigen::VectorXd rhs =
        pairing_rhs(c, f, derivative(c), p.a * p.a * omega_h,
                    p.b * p.b * gamma_h);
    return build_vertical_system(c, p).solve(rhs);
}

Eigen::VectorXd vertical_project_momentum(const DiscreteCurve& c,
                                          const Eigen::MatrixXd& momentum,
                                          const ElasticParams& p) {
    const Index n = c.size();
    if (momentum.cols() != n || momentum.rows() != p.lift_dim())
        throw GridMismatch("vertical_project_momentum: shape mismatch");
    // Pair the lift-space momentum with the transform differential of the
    // hat fields directly: <dR(zeta), p> expands into the same assembly
    // with alpha_n = a sqrt(s) <p_12, n> / s and
    // alpha_v = (a sqrt(s) <p_12, v> + beta sqrt(s) p_3) / (2 s).
    const Frame f = frame(c);
    const Eigen::ArrayXd root = f.speed.array().sqrt();
    const Eigen::MatrixXd p12 = momentum.topRows(2);
    Eigen::ArrayXd alpha_n =
        p.a * root * dots(p12, f.normal).transpose().array() /
        f.speed.array();
    Eigen::ArrayXd alpha_v =
        p.a * root * dots(p12, f.tangent).transpose().array();
    if (!p.flat_plane())
        alpha_v += p.cone_coeff() * root * momentum.row(2).transpose().array();
    alpha_v /= 2.0 * f.speed.array();
    const Eigen::VectorXd rhs =
        pairing_rhs(c, f, derivative(c), alpha_n, alpha_v);
    return build_vertical_system(c, p).solve(rhs);
}

DiscreteCurve reparameterize(const DiscreteCurve& d, const CircleDiffeo& psi) {
    if (!d.closed())
        throw TopologyError("reparameterize: closed curves only");
    const PeriodicSpline spline(d.grid, Eigen::MatrixXd(d.points));
    const Eigen::VectorXd& grid = psi.grid();
    Eigen::Matrix2Xd pts(2, grid.size());
    for (Index j = 0; j < grid.size(); ++j)
        pts.col(j) = spline(psi.values()[j]);
    return make_curve(std::move(pts), grid, Topology::closed);
}

ReparamGradient reparam_gradient(const DiscreteCurve& c,
                                 const DiscreteCurve& d,
                                 const CircleDiffeo& psi,
                                 const ElasticParams& p, int steps,
                                 const LogOptions& opts) {
    if (c.size() != psi.size() ||
        (c.grid - psi.grid()).cwiseAbs().maxCoeff() > 1e-12)
        throw GridMismatch("reparam_gradient: psi must live on c's grid");
    const DiscreteCurve d_psi = reparameterize(d, psi);
    const LiftedCurve q0 = project_to_constraint(r_transform(c, p));
    const LiftedCurve q1 = project_to_constraint(r_transform(d_psi, p));

    ReparamGradient out;
    out.log = log_shooting(q0, q1, steps, opts);
    const Eigen::VectorXd w = trapezoid_weights(c.grid, c.topology);
    out.distance = weighted_norm(w, out.log.momentum);
    // vertical projection of the boundary-value momentum at c; the lift-side
    // pairing avoids reconstructing the curve-space deformation
    out.mu = vertical_project_momentum(c, out.log.momentum, p);
    return out;
}

std::pair<Eigen::VectorXd, RefinementEvent> refine_grid(
    const Eigen::VectorXd& grid, const CircleDiffeo& psi, Index n0,
    int cap) {
    const Index n = grid.size();
    const double threshold = kTwoPi / static_cast<double>(n0);
    const Index max_nodes = static_cast<Index>(cap) * n0;
    RefinementEvent event;

    Eigen::VectorXd psi_vals(n);
    for (Index j = 0; j < n; ++j) psi_vals[j] = psi(grid[j]);

    auto grid_at = [&](Index j) {
        return (j < n) ? grid[j] : grid[j - n] + kTwoPi;
    };
    auto psi_at = [&](Index j) {
        return (j < n) ? psi_vals[j] : psi_vals[j - n] + kTwoPi;
    };

    // candidate insertions: cells whose psi-image is wider than uniform
    // (with a relative slack so exact ties from roundoff stay untouched)
    std::vector<std::pair<double, double>> candidates;  // (gap, midpoint)
    for (Index j = 0; j < n; ++j) {
        const double gap = psi_at(j + 1) - psi_at(j);
        if (gap > threshold * (1.0 + 1e-9)) {
            double mid = 0.5 * (grid_at(j) + grid_at(j + 1));
            if (mid >= kTwoPi) mid -= kTwoPi;
            candidates.emplace_back(gap, mid);
        }
    }
    std::sort(candidates.begin(), candidates.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });

    // removals: both neighbour spans below the uniform spacing; skip nodes
    // adjacent to an insertion or to an already removed node
    std::vector<bool> insert_left(n, false);   // cell (j, j+1) got a midpoint
    {
        Index budget = std::max<Index>(0, max_nodes - n);
        Index taken = 0;
        for (const auto& [gap, mid] : candidates) {
            if (taken >= budget) {
                event.cap_hit = true;
                break;
            }
            event.inserted.push_back(mid);
            ++taken;
            // find the cell the midpoint falls into
            for (Index j = 0; j < n; ++j) {
                const double x0 = grid_at(j);
                const double x1 = grid_at(j + 1);
                const double m = (mid < grid[0]) ? mid + kTwoPi : mid;
                if (m >= x0 && m < x1) {
                    insert_left[j] = true;
                    break;
                }
            }
        }
    }

    std::vector<bool> removed(n, false);
    if (n > 4) {
        for (Index j = 0; j < n; ++j) {
            const Index jm = (j + n - 1) % n;
            const Index jp = (j + 1) % n;
            if (removed[jm] || removed[jp]) continue;
            if (insert_left[j] || insert_left[jm]) continue;
            // spans across the node, lifted to avoid wrap arithmetic
            const double x_prev = (j == 0) ? grid[n - 1] - kTwoPi : grid[j - 1];
            const double x_next = (j + 1 < n) ? grid[j + 1] : grid[0] + kTwoPi;
            const double p_prev =
                (j == 0) ? psi_vals[n - 1] - kTwoPi : psi_vals[j - 1];
            const double p_next =
                (j + 1 < n) ? psi_vals[j + 1] : psi_vals[0] + kTwoPi;
            if (x_next - x_prev < threshold && p_next - p_prev < threshold) {
                if (n - static_cast<Index>(event.removed.size()) <= 4) break;
                removed[j] = true;
                event.removed.push_back(grid[j]);
            }
        }
    }

    std::vector<double> nodes;
    nodes.reserve(n + event.inserted.size());
    for (Index j = 0; j < n; ++j)
        if (!removed[j]) nodes.push_back(grid[j]);
    nodes.insert(nodes.end(), event.inserted.begin(), event.inserted.end());
    std::sort(nodes.begin(), nodes.end());
    Eigen::VectorXd out(static_cast<Index>(nodes.size()));
    for (size_t j = 0; j < nodes.size(); ++j)
        out[static_cast<Index>(j)] = nodes[j];
    event.size_after = out.size();
    return {out, event};
}

MatchResult solve_bvp_shapes(const DiscreteCurve& c, const DiscreteCurve& d,
                             const MatchOptions& opts) {
    if (!c.closed() || !d.closed())
        throw TopologyError("solve_bvp_shapes: closed curves only");
    const Index n0 = c.size();
    const PeriodicSpline c_spline(c.grid, Eigen::MatrixXd(c.points));

    Eigen::VectorXd grid = c.grid;
    DiscreteCurve c_cur = c;
    MatchResult res{CircleDiffeo::identity(grid), {}, {}, {}, false, "", 0};

    auto objective = [&](const DiscreteCurve& cc, const CircleDiffeo& ps) {
        const DiscreteCurve d_ps = reparameterize(d, ps);
        const LiftedCurve q0 =
            project_to_constraint(r_transform(cc, opts.params));
        const LiftedCurve q1 =
            project_to_constraint(r_transform(d_ps, opts.params));
        const LogResult log = log_shooting(q0, q1, opts.steps, opts.log);
        const Eigen::VectorXd w = trapezoid_weights(cc.grid, cc.topology);
        return weighted_norm(w, log.momentum);
    };

    double lift_scale = 0.0;
    {
        const Eigen::VectorXd w = trapezoid_weights(grid, Topology::closed);
        lift_scale =
            weighted_norm(w, r_transform(c_cur, opts.params).values);
    }

    // One refinement sweep; re-measures the objective when the grid
    // changed (values on different grids are different discretizations of
    // the same functional and are not compared against each other).
    auto sweep_refinement = [&](int outer, double* baseline) {
        auto [new_grid, event] =
            refine_grid(grid, res.psi, n0, opts.refine_cap);
        event.iteration = outer;
        if (event.cap_hit) {
            res.incompleteness_detected = true;
            res.diagnostic =
                "refinement cap reached: a fold keeps expanding from a "
                "shrinking parameter interval";
        }
        if (!event.changed()) return false;
        grid = new_grid;
        res.psi = res.psi.resampled(grid);
        Eigen::Matrix2Xd pts = c_spline(grid);
        c_cur = make_curve(std::move(pts), grid, Topology::closed);
        res.refinement_log.push_back(event);
        if (baseline) *baseline = objective(c_cur, res.psi);
        return true;
    };

    // smallest secant slope of the current map (collapse indicator)
    auto min_slope = [&]() {
        double lo = std::numeric_limits<double>::infinity();
        const Eigen::VectorXd& g = res.psi.grid();
        const Eigen::VectorXd& v = res.psi.values();
        const Index m = g.size();
        for (Index j = 0; j < m; ++j) {
            const double dx =
                (j + 1 < m) ? g[j + 1] - g[j] : g[0] + kTwoPi - g[m - 1];
            const double dv =
                (j + 1 < m) ? v[j + 1] - v[j] : v[0] + kTwoPi - v[m - 1];
            lo = std::min(lo, dv / dx);
        }
        return lo;
    };

    double baseline = objective(c_cur, res.psi);
    res.distance_history.push_back(baseline);

    double alpha = opts.alpha_init;
    for (int outer = 1; outer <= opts.max_outer; ++outer) {
        res.iterations = outer;
        if (baseline <= 1e-9 * lift_scale) break;

        bool grid_changed = false;
        if (opts.refine) {
            try {
                grid_changed = sweep_refinement(outer, &baseline);
            } catch (const Error& e) {
                res.incompleteness_detected = true;
                res.diagnostic = e.what();
                break;
            }
        }

        ReparamGradient grad;
        try {
            grad = reparam_gradient(c_cur, d, res.psi, opts.params,
                                    opts.steps, opts.log);
        } catch (const Error& e) {
            res.incompleteness_detected = true;
            res.diagnostic = e.what();
            break;
        }

        // bound the per-step compression of the flow
        const double mu_slope =
            grid_derivative_scalar(grad.mu, grid, Topology::closed)
                .cwiseAbs()
                .maxCoeff();
        const double alpha_cap =
            mu_slope > 0.0 ? opts.slope_cap / mu_slope : opts.alpha_max;

        bool accepted = false;
        while (alpha >= opts.alpha_min) {
            bool usable = true;
            double trial_dist = 0.0;
            CircleDiffeo trial = res.psi;
            try {
                const CircleDiffeo eta = flow(
                    grid, (-grad.mu).eval(), std::min(alpha, alpha_cap));
                trial = compose(res.psi, eta);
                trial_dist = objective(c_cur, trial);
            } catch (const Error&) {
                usable = false;
            }
            if (usable && trial_dist < baseline) {
                res.psi = trial;
                baseline = trial_dist;
                res.distance_history.push_back(trial_dist);
                alpha = std::min(alpha * opts.alpha_grow, opts.alpha_max);
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) break;

        if (min_slope() < opts.slope_floor) {
            res.incompleteness_detected = true;
            res.diagnostic =
                "parameter interval collapsing to a point (the fold grows "
                "out of a point; no minimizer exists)";
            break;
        }

        const size_t k = res.distance_history.size();
        if (k >= 2 && !grid_changed) {
            const double prev = res.distance_history[k - 2];
            const double cur = res.distance_history[k - 1];
            if (prev > 0.0 && (prev - cur) / prev < opts.tol_rel) break;
        }
    }

    // resolve any remaining stretched cells so the returned map is sampled
    // densely enough along the fold (pure grid work, no objective solves)
    if (opts.refine)
        for (int sweep = 0;
             sweep < 24 && sweep_refinement(res.iterations, nullptr);
             ++sweep) {
        }

    try {
        res.final_geodesic = param_distance(
            c_cur, reparameterize(d, res.psi), opts.params, opts.steps,
            opts.log);
    } catch (const Error& e) {
        res.incompleteness_detected = true;
        if (res.diagnostic.empty()) res.diagnostic = e.what();
        res.final_geodesic.distance = res.distance_history.back();
    }
    return res;
}

}  // namespace elastica
