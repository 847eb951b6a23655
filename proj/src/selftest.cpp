#include "elastica/selftest.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "elastica/closed_space.hpp"
#include "elastica/interpolate.hpp"
#include "elastica/open_space.hpp"
#include "elastica/reparam.hpp"
#include "elastica/testing.hpp"
#include "elastica/transforms.hpp"

namespace elastica {

namespace {

namespace et = elastica::testing;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Ctx {
    SelftestOptions opts;
    std::ostringstream log;

    Index scaled(Index n) const {
        return opts.quick ? std::max<Index>(Index{64}, n / 4) : n;
    }
};

double rel(double x, double ref) {
    return std::abs(x - ref) / (std::abs(ref) > 0 ? std::abs(ref) : 1.0);
}

// 1. first variations against central finite differences
bool check_variations(Ctx& ctx) {
    et::Rng rng(ctx.opts.seed + 1);
    const Index n = ctx.scaled(256);
    const double eps = 1e-5;
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const DiscreteCurve c = et::random_closed_curve(rng).sample(n);
        const VectorField2 h =
            et::random_field(rng, Topology::closed).sample(c.grid);
        const FirstVariations var = first_variations(c, h);
        const auto fd_tangent = et::fd_variation(
            c, h, eps,
            [](const DiscreteCurve& cc) { return frame(cc).tangent; });
        const auto fd_normal = et::fd_variation(
            c, h, eps,
            [](const DiscreteCurve& cc) { return frame(cc).normal; });
        const auto fd_speed =
            et::fd_variation(c, h, eps, [](const DiscreteCurve& cc) {
                return Eigen::MatrixXd(frame(cc).speed.transpose());
            });
        const auto fd_kappa =
            et::fd_variation(c, h, eps, [](const DiscreteCurve& cc) {
                return Eigen::MatrixXd(curvature(cc).transpose());
            });
        worst = std::max(worst, et::rel_error(var.tangent, fd_tangent));
        worst = std::max(worst, et::rel_error(var.normal, fd_normal));
        worst = std::max(
            worst, et::rel_error(Eigen::MatrixXd(var.speed.transpose()),
                                 fd_speed));
        worst = std::max(
            worst,
            et::rel_error(Eigen::MatrixXd(var.curvature.transpose()),
                          fd_kappa));
    }
    ctx.log << "worst relative error " << worst << " (tol 1e-5)";
    return worst <= 1e-5;
}

// 2. pullback identity of the lifting transform
bool check_pullback(Ctx& ctx) {
    et::Rng rng(ctx.opts.seed + 2);
    const Index n = ctx.scaled(512);
    double worst_id = 0.0;
    bool order_ok = true;
    const std::vector<ElasticParams> params = {
        ElasticParams(1.0, 0.5), ElasticParams(1.0, 1.0),
        ElasticParams(2.0, 1.5)};
    for (const auto& p : params) {
        for (int trial = 0; trial < 10; ++trial) {
            const et::AnalyticCurve curve = et::random_closed_curve(rng);
            const et::AnalyticField field =
                et::random_field(rng, Topology::closed);
            auto metric_at = [&](Index nn) {
                const DiscreteCurve c = curve.sample(nn);
                return elastic_metric(c, field.sample(c.grid),
                                      field.sample(c.grid), p);
            };
            const DiscreteCurve c = curve.sample(n);
            const VectorField2 h = field.sample(c.grid);
            const double metric = elastic_metric(c, h, h, p);
            const auto fd = et::fd_variation(
                c, h, 1e-5, [&p](const DiscreteCurve& cc) {
                    return Eigen::MatrixXd(r_transform(cc, p).values);
                });
            const Eigen::VectorXd w =
                trapezoid_weights(c.grid, Topology::closed);
            const double flat =
                (w.array() *
                 fd.colwise().squaredNorm().transpose().array())
                    .sum();
            worst_id = std::max(worst_id, rel(flat, metric));

            if (trial == 0) {
                // discretization error of the metric value decreases at
                // (at least) second order towards the fine-grid limit
                const double ref = metric_at(8 * n);
                const double e1 = std::abs(metric_at(n) - ref);
                const double e2 = std::abs(metric_at(2 * n) - ref);
                if (e1 > 1e-12 && e2 > e1 / 3.0) order_ok = false;
            }
        }
    }
    ctx.log << "worst identity error " << worst_id
            << " (tol 1e-3), second-order decrease "
            << (order_ok ? "yes" : "no");
    return worst_id <= 1e-3 && order_ok;
}

// 3. flatness of the open-curve metric
bool check_flatness(Ctx& ctx) {
    et::Rng rng(ctx.opts.seed + 3);
    const Index n = ctx.scaled(256);
    const ElasticParams cone(1.0, 1.0);
    double worst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        const DiscreteCurve a = et::random_open_curve(rng).sample(n);
        const DiscreteCurve b = et::random_open_curve(rng).sample(n);
        const OpenGeodesic g = open_geodesic(a, b, cone);
        // two routes: chart-coordinate L2 distance vs the pointwise
        // law-of-cosines energy at the chosen branch
        double branch_total = -1.0;
        for (const auto& [k, total] : g.branch_energy)
            if (k == g.branch_k) branch_total = total;
        worst = std::max(
            worst, std::abs(g.distance() - std::sqrt(branch_total)));
    }

    const DiscreteCurve s1 = synth_segment(n);
    DiscreteCurve s2 = s1;
    s2.points *= 2.0;
    const double segment_dist =
        open_distance(s1, s2, ElasticParams(1.0, 0.5));
    const double exact = std::sqrt(kTwoPi) * (std::sqrt(2.0) - 1.0);
    ctx.log << "route disagreement " << worst << " (tol 1e-10), segment case "
            << rel(segment_dist, exact) << " (tol 1e-8)";
    return worst <= 1e-10 && rel(segment_dist, exact) <= 1e-8;
}

// 4. geodesic equation residual of the explicit flat solution
bool check_geodesic_equation(Ctx& ctx) {
    et::Rng rng(ctx.opts.seed + 4);
    auto residual = [&](const ElasticParams& p, Index n, int samples,
                        et::Rng& local) {
        const et::AnalyticCurve curve = et::random_open_curve(local);
        const et::AnalyticField field =
            et::random_field(local, Topology::open);
        const DiscreteCurve c0 = curve.sample(n);
        const VectorField2 u0 = 0.25 * field.sample(c0.grid);
        const double dt = 1.0 / (samples - 1);
        std::vector<DiscreteCurve> path(samples);
        for (int i = 0; i < samples; ++i)
            path[i] = explicit_exp(c0, u0, i * dt, p);

        double sup = 0.0;
        std::vector<VectorField2> tension(samples);
        std::vector<VectorField2> velocity(samples);
        for (int i = 1; i + 1 < samples; ++i) {
            velocity[i] =
                (path[i + 1].points - path[i - 1].points) / (2.0 * dt);
            tension[i] = elastic_tension(path[i], velocity[i], p);
        }
        for (int i = 2; i + 2 < samples; ++i) {
            const VectorField2 tension_dot =
                (tension[i + 1] - tension[i - 1]) / (2.0 * dt);
            const VectorField2 res =
                tension_dot +
                0.5 * elastic_quadratic(path[i], velocity[i], p);
            // interior nodes only
            sup = std::max(
                sup, res.middleCols(1, res.cols() - 2).cwiseAbs().maxCoeff());
        }
        return sup;
    };

    const Index n = ctx.scaled(512);
    const int samples = ctx.opts.quick ? 32 : 64;
    double worst = 0.0;
    for (auto p : {ElasticParams(1.0, 0.5), ElasticParams(1.0, 1.0)}) {
        et::Rng coarse_rng(ctx.opts.seed + 40);
        et::Rng fine_rng(ctx.opts.seed + 40);
        const double fine = residual(p, n, samples, fine_rng);
        const double coarse = residual(p, n / 2, samples / 2, coarse_rng);
        worst = std::max(worst, fine);
        if (fine > coarse) {
            ctx.log << "residual did not decrease under refinement; ";
            return false;
        }
    }
    ctx.log << "sup residual " << worst << " (tol 1e-3), decreasing";
    return worst <= 1e-3;
}

// 5. RATTLE: constraint drift, energy conservation, reversibility
bool check_rattle(Ctx& ctx) {
    const Index n = ctx.opts.quick ? 100 : 300;
    const int steps = ctx.opts.quick ? 10 : 25;
    const ElasticParams p(1.0, 0.5);
    const DiscreteCurve circle = synth_circle(n);
    const LiftedCurve q = r_transform(circle, p);
    const Eigen::VectorXd w = trapezoid_weights(q.grid, q.topology);
    const double scale = weighted_norm(w, q.values);
    RattleOptions ropts;
    ropts.tol_f = ctx.opts.tol_f;

    et::Rng rng(ctx.opts.seed + 5);
    double worst_f = 0.0, worst_e = 0.0, worst_rev = 0.0;
    for (int shot = 0; shot < 5; ++shot) {
        const et::AnalyticField field =
            et::random_field(rng, Topology::closed);
        Eigen::MatrixXd p0(2, n);
        for (Index j = 0; j < n; ++j) p0.col(j) = field.value(q.grid[j]);
        p0 = project_tangent(q, p0);
        p0 *= 0.1 * scale / weighted_norm(w, p0);

        const GeodesicPath path = exp_rattle(q, p0, steps, ropts);
        worst_f = std::max(worst_f, path.constraint_norm.maxCoeff());
        const double e0 = path.energy[0];
        worst_e = std::max(
            worst_e, (path.energy.array() - e0).abs().maxCoeff() / e0);
        const GeodesicPath back = exp_rattle(
            path.end_state(), (-path.momenta.back()).eval(), steps, ropts);
        worst_rev = std::max(
            worst_rev,
            weighted_norm(w, back.states.back() - q.values) / scale);
    }
    ctx.log << "max|F| " << worst_f << " (tol 1e-8), energy drift "
            << worst_e << " (tol 1e-6), reversal " << worst_rev
            << " (tol 1e-8)";
    return worst_f <= 1e-8 && worst_e <= 1e-6 && worst_rev <= 1e-8;
}

// 6. boundary value solver round trip on the ellipse/fold pair
bool check_bvp(Ctx& ctx) {
    const Index n = ctx.opts.quick ? 100 : 300;
    const int steps = ctx.opts.quick ? 10 : 25;
    const ElasticParams p(1.0, 0.5);
    const DiscreteCurve ellipse = synth_ellipse(n);
    const DiscreteCurve fold = synth_ellipse_fold(n);
    LogOptions opts;
    opts.eps_rel = ctx.opts.eps_bvp;
    opts.rattle.tol_f = ctx.opts.tol_f;

    const auto t0 = std::chrono::steady_clock::now();
    const LiftedCurve q0 = r_transform(ellipse, p);
    const LiftedCurve q1 = r_transform(fold, p);
    const LogResult log = log_shooting(q0, q1, steps, opts);
    const GeodesicPath path = exp_rattle(q0, log.momentum, steps, opts.rattle);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();

    const Eigen::VectorXd w = trapezoid_weights(q0.grid, q0.topology);
    const double gap = weighted_norm(w, path.states.back() - q1.values) /
                       weighted_norm(w, q1.values);
    ctx.log << "endpoint gap " << gap << " (tol " << opts.eps_rel << "), "
            << log.iterations << " iterations (cap 500), " << elapsed
            << " s (cap 20 s)";
    return log.converged && gap <= opts.eps_rel && log.iterations <= 500 &&
           elapsed <= 20.0;
}

// 7. symmetry of parameterized distances
bool check_symmetry(Ctx& ctx) {
    const Index n = ctx.opts.quick ? 100 : 300;
    const int steps = ctx.opts.quick ? 10 : 25;
    const ElasticParams p(1.0, 0.5);
    LogOptions opts;
    opts.eps_rel = 1e-5;
    opts.rattle.tol_f = ctx.opts.tol_f;
    const std::vector<std::pair<DiscreteCurve, DiscreteCurve>> pairs = {
        {synth_ellipse(n), synth_ellipse_fold(n)},
        {synth_circle(n), synth_ellipse(n)},
        {synth_star(n), synth_circle(n)},
        {synth_star(n), synth_ellipse_fold(n)}};
    double worst = 0.0;
    for (const auto& [a, b] : pairs) {
        const double fwd = param_distance(a, b, p, steps, opts).distance;
        const double bwd = param_distance(b, a, p, steps, opts).distance;
        worst = std::max(worst, std::abs(fwd - bwd) / fwd);
    }
    ctx.log << "worst asymmetry " << worst << " (tol 1e-3)";
    return worst <= 1e-3;
}

// 8. right-trivialized gradient against finite differences of the energy
bool check_gradient(Ctx& ctx) {
    const Index n = ctx.opts.quick ? 64 : 128;
    const int steps = 15;
    const ElasticParams p(1.0, 0.5);
    const DiscreteCurve c = synth_ellipse(n);
    const DiscreteCurve d = synth_ellipse_fold(n, 0.3);
    LogOptions tight;
    tight.eps_rel = 1e-8;
    tight.max_iter = 4000;
    tight.rattle.tol_f = ctx.opts.tol_f;

    Eigen::VectorXd lift(n);
    for (Index j = 0; j < n; ++j)
        lift[j] = c.grid[j] + 0.1 * std::sin(c.grid[j] + 0.3);
    const CircleDiffeo psi(c.grid, lift);
    const ReparamGradient g = reparam_gradient(c, d, psi, p, steps, tight);

    auto energy = [&](const CircleDiffeo& ps) {
        const ClosedGeodesic geo =
            param_distance(c, reparameterize(d, ps), p, steps, tight);
        return 0.5 * geo.distance * geo.distance;
    };
    const VectorField2 cp = derivative(c);
    et::Rng rng(ctx.opts.seed + 8);
    const double eps = 1e-4;
    double worst = 0.0;
    const int directions = ctx.opts.quick ? 3 : 8;
    for (int trial = 0; trial < directions; ++trial) {
        auto nu_fn = et::random_circle_field(rng, 3, 1.0);
        Eigen::VectorXd nu(n);
        for (Index j = 0; j < n; ++j) nu[j] = nu_fn(c.grid[j]);
        const double fd = (energy(compose(psi, flow(c.grid, nu, eps))) -
                           energy(compose(psi, flow(c.grid, nu, -eps)))) /
                          (2.0 * eps);
        const VectorField2 zmu =
            (cp.array().rowwise() * g.mu.transpose().array()).matrix();
        const VectorField2 znu =
            (cp.array().rowwise() * nu.transpose().array()).matrix();
        const double ip = elastic_metric(c, zmu, znu, p);
        worst = std::max(worst, std::abs(fd - ip) / std::abs(ip));
    }
    ctx.log << "worst relative error " << worst << " (tol 1e-2) over "
            << directions << " directions";
    return worst <= 1e-2;
}

// 9. matching descent: ground truth recovery and the fold experiment
bool check_matching(Ctx& ctx) {
    const Index n = ctx.opts.quick ? 64 : 96;
    MatchOptions opts;
    opts.params = ElasticParams(1.0, 0.5);
    opts.steps = ctx.opts.quick ? 10 : 15;
    opts.log.rattle.tol_f = ctx.opts.tol_f;

    // d is a reparameterization of c: the descent should undo it
    const DiscreteCurve c = synth_ellipse(n);
    Eigen::Matrix2Xd pts(2, n);
    for (Index j = 0; j < n; ++j) {
        const double t = c.grid[j] + 0.25 * std::sin(c.grid[j]);
        pts.col(j) = Vector2d(2.0 * std::cos(t), std::sin(t));
    }
    const DiscreteCurve d = make_curve(pts, c.grid, Topology::closed);
    const MatchResult res = solve_bvp_shapes(c, d, opts);
    const double ratio =
        res.distance_history.front() / res.distance_history.back();
    bool monotone = true;
    for (size_t i = 1; i < res.distance_history.size(); ++i)
        monotone = monotone &&
                   res.distance_history[i] <= res.distance_history[i - 1];

    // fold experiment: matching beats the parameterized distance
    const Index nf = ctx.opts.quick ? 64 : 120;
    MatchOptions fopts = opts;
    const DiscreteCurve ce = synth_ellipse(nf);
    const DiscreteCurve cf = synth_ellipse_fold(nf);
    const double parameterized =
        param_distance(ce, cf, opts.params, fopts.steps).distance;
    const MatchResult fold = solve_bvp_shapes(ce, cf, fopts);
    const double matched = fold.distance_history.back();

    ctx.log << "recovery ratio " << ratio << " (>= 100), history "
            << (monotone ? "non-increasing" : "NOT monotone")
            << "; fold matched " << matched << " < parameterized "
            << parameterized;
    return ratio >= 100.0 && monotone && matched < parameterized;
}

// 10. adaptive refinement keeps the map resolved; without it the map
// stretches far beyond the uniform spacing
bool check_refinement(Ctx& ctx) {
    const Index n0 = ctx.opts.quick ? 64 : 120;
    MatchOptions opts;
    opts.params = ElasticParams(1.0, 0.5);
    opts.steps = ctx.opts.quick ? 10 : 15;
    opts.log.rattle.tol_f = ctx.opts.tol_f;
    const DiscreteCurve c = synth_ellipse(n0);
    const DiscreteCurve d = synth_ellipse_fold(n0);
    const double uniform = kTwoPi / static_cast<double>(n0);

    auto max_gap = [](const CircleDiffeo& psi) {
        const Eigen::VectorXd& g = psi.grid();
        double worst = 0.0;
        for (Index j = 0; j < g.size(); ++j) {
            const double x1 =
                (j + 1 < g.size()) ? g[j + 1] : g[0] + kTwoPi;
            worst = std::max(worst, psi(x1) - psi(g[j]));
        }
        return worst;
    };

    opts.refine = true;
    const MatchResult refined = solve_bvp_shapes(c, d, opts);
    opts.refine = false;
    const MatchResult plain = solve_bvp_shapes(c, d, opts);

    const double gap_refined = max_gap(refined.psi);
    const double gap_plain = max_gap(plain.psi);
    ctx.log << "max psi-gap with refinement " << gap_refined / uniform
            << " x uniform (<= 1), without " << gap_plain / uniform
            << " x uniform (> 2); refinement events "
            << refined.refinement_log.size();
    return gap_refined <= uniform * (1.0 + 1e-9) &&
           gap_plain > 2.0 * uniform &&
           !refined.refinement_log.empty();
}

// 11. curvature signs: the submersion term is a non-negative square and
// the unconstrained open-curve lift space is flat
bool check_curvature(Ctx& ctx) {
    et::Rng rng(ctx.opts.seed + 11);
    const ElasticParams p(1.0, 0.5);
    const Index n = ctx.scaled(128);
    const DiscreteCurve c = et::random_open_curve(rng).sample(n);
    const VectorField2 cp = derivative(c);
    auto horizontal = [&](const VectorField2& raw) {
        const Eigen::VectorXd mu = vertical_project(c, raw, p);
        return (raw -
                (cp.array().rowwise() * mu.transpose().array()).matrix())
            .eval();
    };
    const VectorField2 X =
        horizontal(et::random_field(rng, Topology::open).sample(c.grid));
    const VectorField2 Y =
        horizontal(et::random_field(rng, Topology::open).sample(c.grid));
    const double self_term = oneill_term(c, X, X, p);
    const double cross_term = oneill_term(c, X, Y, p);

    const ElasticParams cone(1.0, 1.0);
    const DiscreteCurve oc = et::random_open_curve(rng).sample(n);
    const LiftedCurve q = r_transform(oc, cone);
    Eigen::MatrixXd h(3, n), k(3, n);
    const et::AnalyticField fh = et::random_field(rng, Topology::open);
    const et::AnalyticField fk = et::random_field(rng, Topology::open);
    for (Index j = 0; j < n; ++j) {
        h.col(j) << fh.value(q.grid[j]), 0.2 * std::cos(q.grid[j]);
        k.col(j) << fk.value(q.grid[j]), -0.1 * std::sin(2.0 * q.grid[j]);
    }
    const double flat_k = sectional_curvature_open(q, h, k);

    ctx.log << "bracket term self " << self_term << " cross " << cross_term
            << " (>= 0), flat-space curvature " << flat_k
            << " (|.| <= 1e-4)";
    return self_term <= 1e-12 && cross_term >= 0.0 &&
           std::abs(flat_k) <= 1e-4;
}

// 12. invariance suite
bool check_invariance(Ctx& ctx) {
    et::Rng rng(ctx.opts.seed + 12);
    const Index n = ctx.scaled(512);
    const et::AnalyticCurve curve = et::random_closed_curve(rng);
    const et::AnalyticField field = et::random_field(rng, Topology::closed);
    const et::AnalyticDiffeo phi =
        et::random_circle_diffeo(rng, 3, 0.4, /*fix_zero=*/true);

    // sample c o phi on the uniform grid and c on the warped grid
    const Eigen::VectorXd grid = uniform_grid(n, Topology::closed);
    Eigen::VectorXd warped(n);
    Eigen::Matrix2Xd pts(2, n);
    for (Index j = 0; j < n; ++j) {
        warped[j] = phi.map(grid[j]);
        pts.col(j) = curve.pos(warped[j]);
    }
    const DiscreteCurve composed = make_curve(pts, grid, Topology::closed);
    const DiscreteCurve plain = make_curve(pts, warped, Topology::closed);
    const VectorField2 h = field.sample(warped);

    double worst = 0.0;
    for (auto p : {ElasticParams(1.0, 0.5), ElasticParams(1.0, 1.0)})
        worst = std::max(worst, rel(elastic_metric(composed, h, h, p),
                                    elastic_metric(plain, h, h, p)));
    worst = std::max(
        worst, rel(q_metric(composed, h, h), q_metric(plain, h, h)));

    // exact translation invariance and the scaling property
    const DiscreteCurve c = curve.sample(n);
    DiscreteCurve shifted = c;
    shifted.points.colwise() += Vector2d(2.5, -1.0);
    DiscreteCurve scaled = c;
    scaled.points *= 4.0;
    double exact = 0.0;
    for (auto p : {ElasticParams(1.0, 0.5), ElasticParams(1.0, 1.0)}) {
        exact = std::max(exact, (r_transform(c, p).values -
                                 r_transform(shifted, p).values)
                                    .cwiseAbs()
                                    .maxCoeff());
        exact = std::max(exact, (r_transform(scaled, p).values -
                                 2.0 * r_transform(c, p).values)
                                    .cwiseAbs()
                                    .maxCoeff());
    }
    {
        et::Rng orng(ctx.opts.seed + 120);
        const DiscreteCurve oc = et::random_open_curve(orng).sample(n);
        DiscreteCurve oshift = oc;
        oshift.points.colwise() += Vector2d(-1.0, 3.0);
        exact = std::max(exact, (younes_transform(oc) -
                                 younes_transform(oshift))
                                    .cwiseAbs()
                                    .maxCoeff());
    }

    ctx.log << "reparameterization invariance " << worst
            << " (tol 1e-3), translation/scaling deviation " << exact
            << " (tol 1e-12)";
    return worst <= 1e-3 && exact <= 1e-12;
}

}  // namespace

std::vector<CheckResult> run_acceptance(const SelftestOptions& opts) {
    using CheckFn = std::function<bool(Ctx&)>;
    const std::vector<std::pair<std::string, CheckFn>> checks = {
        {"first variations vs finite differences", check_variations},
        {"pullback identity of the lifting transform", check_pullback},
        {"flatness of the open-curve metric", check_flatness},
        {"geodesic equation residual", check_geodesic_equation},
        {"RATTLE constraint, energy, reversibility", check_rattle},
        {"boundary value solver round trip", check_bvp},
        {"symmetry of parameterized distances", check_symmetry},
        {"gradient on the reparameterization group", check_gradient},
        {"unparameterized matching descent", check_matching},
        {"adaptive grid refinement", check_refinement},
        {"curvature signs", check_curvature},
        {"invariance suite", check_invariance},
    };

    std::vector<CheckResult> results;
    for (size_t i = 0; i < checks.size(); ++i) {
        Ctx ctx{opts, {}};
        CheckResult r;
        r.id = static_cast<int>(i) + 1;
        r.name = checks[i].first;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            r.pass = checks[i].second(ctx);
            r.details = ctx.log.str();
        } catch (const std::exception& e) {
            r.pass = false;
            r.details = std::string("error: ") + e.what();
        }
        r.seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                          t0)
                .count();
        results.push_back(std::move(r));
    }
    return results;
}

std::string report_to_json(const std::vector<CheckResult>& results) {
    nlohmann::json doc = nlohmann::json::array();
    for (const auto& r : results) {
        nlohmann::json entry;
        entry["criterion"] = r.id;
        entry["name"] = r.name;
        entry["pass"] = r.pass;
        entry["details"] = r.details;
        entry["seconds"] = r.seconds;
        doc.push_back(entry);
    }
    return doc.dump(2);
}

}  // namespace elastica
