#include <doctest.h>

#include <cmath>
#include <numbers>

#include "elastica/io.hpp"
#include "elastica/reparam.hpp"
#include "elastica/testing.hpp"

using namespace elastica;
namespace et = elastica::testing;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

CircleDiffeo rotation(const Eigen::VectorXd& grid, double angle) {
    return CircleDiffeo(grid, grid.array() + angle);
}

CircleDiffeo sampled_diffeo(const et::AnalyticDiffeo& d,
                            const Eigen::VectorXd& grid) {
    Eigen::VectorXd vals(grid.size());
    for (Index j = 0; j < grid.size(); ++j) vals[j] = d.map(grid[j]);
    return CircleDiffeo(grid, vals);
}

}  // namespace

TEST_CASE("CircleDiffeo: identity, rotations, composition") {
    const Eigen::VectorXd grid = uniform_grid(64, Topology::closed);
    const CircleDiffeo id = CircleDiffeo::identity(grid);
    et::Rng rng(3);
    const CircleDiffeo psi =
        sampled_diffeo(et::random_circle_diffeo(rng), grid);

    const CircleDiffeo psi_id = compose(psi, id);
    CHECK((psi_id.values() - psi.values()).cwiseAbs().maxCoeff() <= 1e-14);

    // rotations compose additively (modulo 2pi in the lift)
    const CircleDiffeo r1 = rotation(grid, 0.8);
    const CircleDiffeo r2 = rotation(grid, 1.7);
    const CircleDiffeo both = compose(r1, r2);
    CHECK((both.values().array() - (grid.array() + 2.5)).abs().maxCoeff() <=
          1e-12);

    // composition of monotone maps stays monotone under dense sampling
    const CircleDiffeo eta =
        sampled_diffeo(et::random_circle_diffeo(rng), grid);
    CHECK(strictly_monotone(compose(psi, eta), 10));

    // a non-monotone lift is rejected
    Eigen::VectorXd bad = grid;
    bad[10] = bad[11] + 0.01;
    CHECK_THROWS_AS(CircleDiffeo(grid, bad), MonotonicityLost);
}

TEST_CASE("flow: zero field, constant field, group law") {
    const Eigen::VectorXd grid = uniform_grid(128, Topology::closed);
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(128);
    const CircleDiffeo id_flow = flow(grid, zero, 1.0);
    CHECK((id_flow.values() - grid).cwiseAbs().maxCoeff() <= 1e-15);

    const Eigen::VectorXd constant = Eigen::VectorXd::Constant(128, 0.4);
    const CircleDiffeo rot = flow(grid, constant, 1.5);
    CHECK((rot.values().array() - (grid.array() + 0.6)).abs().maxCoeff() <=
          1e-13);

    et::Rng rng(5);
    auto mu_fn = et::random_circle_field(rng, 3, 1.0);
    Eigen::VectorXd mu(128);
    for (Index j = 0; j < 128; ++j) mu[j] = mu_fn(grid[j]);

    const CircleDiffeo a = flow(grid, mu, 0.45);
    const CircleDiffeo b = flow(grid, mu, 0.30);
    const CircleDiffeo ab = compose(a, b);
    const CircleDiffeo direct = flow(grid, mu, 0.75);
    CHECK((ab.values() - direct.values()).cwiseAbs().maxCoeff() <= 1e-6);

    // refined-time oracle agrees with the default step choice
    const CircleDiffeo fine = flow(grid, mu, 0.75, 4000);
    CHECK((fine.values() - direct.values()).cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("flow rejects steps that destroy monotonicity") {
    const Eigen::VectorXd grid = uniform_grid(64, Topology::closed);
    Eigen::VectorXd mu(64);
    for (Index j = 0; j < 64; ++j) mu[j] = -4.0 * std::sin(grid[j]);
    CHECK_THROWS_AS(flow(grid, mu, 2.0, 1), MonotonicityLost);
}

TEST_CASE("vertical_project: fixes vertical fields, kills horizontal ones") {
    et::Rng rng(7);
    const ElasticParams p(1.0, 0.5);
    const DiscreteCurve c = et::random_closed_curve(rng).sample(Index{96});
    const VectorField2 cp = derivative(c);

    // vertical input c' mu0 comes back as mu0
    auto mu_fn = et::random_circle_field(rng, 3, 1.0);
    Eigen::VectorXd mu0(c.size());
    for (Index j = 0; j < c.size(); ++j) mu0[j] = mu_fn(c.grid[j]);
    const VectorField2 vertical =
        (cp.array().rowwise() * mu0.transpose().array()).matrix();
    const Eigen::VectorXd recovered = vertical_project(c, vertical, p);
    CHECK((recovered - mu0).cwiseAbs().maxCoeff() <=
          1e-8 * (1.0 + mu0.cwiseAbs().maxCoeff()));

    // horizontal input projects to (numerically) zero
    const VectorField2 raw =
        et::random_field(rng, Topology::closed).sample(c.grid);
    const Eigen::VectorXd mu_raw = vertical_project(c, raw, p);
    const VectorField2 horizontal =
        raw - (cp.array().rowwise() * mu_raw.transpose().array()).matrix();
    CHECK(vertical_project(c, horizontal, p).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("vertical_project: Galerkin orthogonality and Pythagoras") {
    et::Rng rng(11);
    const ElasticParams p(1.0, 0.5);
    const DiscreteCurve c = et::random_closed_curve(rng).sample(Index{64});
    const VectorField2 cp = derivative(c);
    const VectorField2 h =
        et::random_field(rng, Topology::closed).sample(c.grid);
    const Eigen::VectorXd mu = vertical_project(c, h, p);
    const VectorField2 vert =
        (cp.array().rowwise() * mu.transpose().array()).matrix();
    const VectorField2 hor = h - vert;

    // residual orthogonal to every hat-function direction
    double worst = 0.0;
    for (Index i = 0; i < c.size(); ++i) {
        VectorField2 zeta = VectorField2::Zero(2, c.size());
        zeta.col(i) = cp.col(i);
        worst = std::max(worst, std::abs(elastic_metric(c, hor, zeta, p)));
    }
    CHECK(worst <= 1e-8);

    const double total = elastic_metric(c, h, h, p);
    const double split = elastic_metric(c, hor, hor, p) +
                         elastic_metric(c, vert, vert, p);
    CHECK(std::abs(total - split) <= 1e-6 * total);

    // same bilinear form for the explicit first-order integrand: the
    // assembled system reproduces it exactly at (a, b) = (1, 1/2)
    const Eigen::VectorXd w = trapezoid_weights(c.grid, c.topology);
    const Eigen::MatrixXd dh = grid_derivative(h, c.grid, c.topology);
    const Eigen::VectorXd speed = derivative(c).colwise().norm();
    Eigen::VectorXd integrand(c.size());
    for (Index j = 0; j < c.size(); ++j) {
        const double dot = dh.col(j).dot(cp.col(j));
        integrand[j] = dh.col(j).squaredNorm() / speed[j] -
                       0.75 * dot * dot / std::pow(speed[j], 3);
    }
    CHECK(std::abs((w.array() * integrand.array()).sum() - total) <=
          1e-10 * total);
}

TEST_CASE("momentum-driven projection agrees with the field version") {
    // <dR(zeta), dR(h)> = G(zeta, h) node for node, so driving the system
    // with the lift momentum dR(h) must reproduce vertical_project(c, h).
    et::Rng rng(29);
    for (auto p : {ElasticParams(1.0, 0.5), ElasticParams(1.0, 1.0)}) {
        const DiscreteCurve c =
            et::random_closed_curve(rng).sample(Index{96});
        const VectorField2 h =
            et::random_field(rng, Topology::closed).sample(c.grid);
        const Eigen::VectorXd via_field = vertical_project(c, h, p);
        const Eigen::VectorXd via_momentum =
            vertical_project_momentum(c, r_differential(c, h, p), p);
        CHECK((via_field - via_momentum).cwiseAbs().maxCoeff() <=
              1e-10 * (1.0 + via_field.cwiseAbs().maxCoeff()));
    }
}

TEST_CASE("reparameterize: identity keeps nodes, rotation shifts them") {
    const DiscreteCurve d = synth_ellipse(256);
    const CircleDiffeo id = CircleDiffeo::identity(d.grid);
    const DiscreteCurve same = reparameterize(d, id);
    CHECK((same.points - d.points).cwiseAbs().maxCoeff() <= 1e-13);

    const CircleDiffeo rot = rotation(d.grid, 0.5);
    const DiscreteCurve shifted = reparameterize(d, rot);
    double err = 0.0;
    for (Index j = 0; j < d.size(); ++j) {
        const double t = d.grid[j] + 0.5;
        err = std::max(err, (shifted.points.col(j) -
                             Vector2d(2.0 * std::cos(t), std::sin(t)))
                                .norm());
    }
    CHECK(err <= 1e-4);
}

TEST_CASE("reparam_gradient: vanishes at the optimum, matches FD") {
    const ElasticParams p(1.0, 0.5);
    const Index n = 96;
    const DiscreteCurve c = synth_ellipse(n);
    const CircleDiffeo id = CircleDiffeo::identity(c.grid);

    // d o psi = c gives a zero gradient up to solver noise
    const ReparamGradient at_opt = reparam_gradient(c, c, id, p, 10);
    CHECK(at_opt.distance <= 1e-10);
    CHECK(at_opt.mu.cwiseAbs().maxCoeff() <= 1e-8);

    // directional derivative of the energy along two random directions
    const DiscreteCurve d = synth_ellipse_fold(n, 0.3);
    LogOptions tight;
    tight.eps_rel = 1e-8;
    tight.max_iter = 2000;
    Eigen::VectorXd lift(n);
    for (Index j = 0; j < n; ++j)
        lift[j] = c.grid[j] + 0.1 * std::sin(c.grid[j] + 0.3);
    const CircleDiffeo psi(c.grid, lift);
    const ReparamGradient g = reparam_gradient(c, d, psi, p, 15, tight);

    auto energy = [&](const CircleDiffeo& ps) {
        const ClosedGeodesic geo =
            param_distance(c, reparameterize(d, ps), p, 15, tight);
        return 0.5 * geo.distance * geo.distance;
    };
    et::Rng rng(13);
    const VectorField2 cp = derivative(c);
    for (int trial = 0; trial < 2; ++trial) {
        auto nu_fn = et::random_circle_field(rng, 3, 1.0);
        Eigen::VectorXd nu(n);
        for (Index j = 0; j < n; ++j) nu[j] = nu_fn(c.grid[j]);
        const double eps = 1e-4;
        const double fd = (energy(compose(psi, flow(c.grid, nu, eps))) -
                           energy(compose(psi, flow(c.grid, nu, -eps)))) /
                          (2.0 * eps);
        const VectorField2 zmu =
            (cp.array().rowwise() * g.mu.transpose().array()).matrix();
        const VectorField2 znu =
            (cp.array().rowwise() * nu.transpose().array()).matrix();
        const double ip = elastic_metric(c, zmu, znu, p);
        CHECK(std::abs(fd - ip) <= 1e-2 * std::abs(ip));
    }
}

TEST_CASE("reparam_gradient transforms as a vector field under Diff(S^1)") {
    // Replacing (c, d, psi) by (c o phi, d, psi o phi) describes the same
    // configuration; the gradient then pulls back as
    // mu~(x) = mu(phi(x)) / phi'(x).
    const ElasticParams p(1.0, 0.5);
    const Index n = 96;
    const Eigen::VectorXd grid = uniform_grid(n, Topology::closed);
    auto phi = [](double x) { return x + 0.2 * std::sin(x); };
    auto dphi = [](double x) { return 1.0 + 0.2 * std::cos(x); };

    Eigen::Matrix2Xd c_pts(2, n), cphi_pts(2, n);
    Eigen::VectorXd phi_vals(n);
    for (Index j = 0; j < n; ++j) {
        c_pts.col(j) =
            Vector2d(2.0 * std::cos(grid[j]), std::sin(grid[j]));
        phi_vals[j] = phi(grid[j]);
        cphi_pts.col(j) =
            Vector2d(2.0 * std::cos(phi_vals[j]), std::sin(phi_vals[j]));
    }
    const DiscreteCurve c = make_curve(c_pts, grid, Topology::closed);
    const DiscreteCurve cphi = make_curve(cphi_pts, grid, Topology::closed);
    const DiscreteCurve d = synth_ellipse_fold(n, 0.5);

    LogOptions tight;
    tight.eps_rel = 1e-8;
    tight.max_iter = 2000;
    const CircleDiffeo id = CircleDiffeo::identity(grid);
    const CircleDiffeo psi_phi(grid, phi_vals);
    const ReparamGradient g = reparam_gradient(c, d, id, p, 15, tight);
    const ReparamGradient gt = reparam_gradient(cphi, d, psi_phi, p, 15, tight);

    const PeriodicSpline mu_spline(
        grid, Eigen::MatrixXd(g.mu.transpose()));
    double worst = 0.0;
    const double scale = g.mu.cwiseAbs().maxCoeff();
    for (Index j = 0; j < n; ++j) {
        const double expected = mu_spline(phi_vals[j])[0] / dphi(grid[j]);
        worst = std::max(worst, std::abs(gt.mu[j] - expected));
    }
    CHECK(worst <= 1e-2 * scale);
}

TEST_CASE("refine_grid: identity stays, stretch bisects, clusters thin out") {
    const Index n0 = 32;
    const Eigen::VectorXd grid = uniform_grid(n0, Topology::closed);
    const CircleDiffeo id = CircleDiffeo::identity(grid);
    const auto [same, event] = refine_grid(grid, id, n0);
    CHECK(!event.changed());
    CHECK(same.size() == n0);

    // one cell stretched to three uniform spacings gets bisected
    const double h = kTwoPi / n0;
    Eigen::VectorXd vals = grid;
    const Index k = 5;
    for (Index j = k + 1; j < n0; ++j)
        vals[j] += 2.0 * h * std::max(0.0, 1.0 - double(j - k - 1) / 8.0);
    const CircleDiffeo stretch(grid, vals);
    const auto [refined, ev2] = refine_grid(grid, stretch, n0);
    CHECK(ev2.inserted.size() >= 1);
    const double mid = 0.5 * (grid[k] + grid[k + 1]);
    bool found = false;
    for (double x : ev2.inserted) found = found || std::abs(x - mid) < 1e-12;
    CHECK(found);

    // clustered nodes under the uniform spacing get removed (never two
    // adjacent ones in a single sweep)
    std::vector<double> nodes(grid.data(), grid.data() + n0);
    nodes.push_back(grid[2] + 0.1 * h);
    nodes.push_back(grid[2] + 0.2 * h);
    std::sort(nodes.begin(), nodes.end());
    Eigen::VectorXd dense =
        Eigen::Map<Eigen::VectorXd>(nodes.data(), nodes.size());
    const CircleDiffeo id_dense = CircleDiffeo::identity(dense);
    const auto [thinned, ev3] = refine_grid(dense, id_dense, n0);
    CHECK(ev3.removed.size() >= 1);
    for (size_t i = 0; i + 1 < ev3.removed.size(); ++i)
        CHECK(ev3.removed[i + 1] - ev3.removed[i] > 0.09 * h);

    // repeated sweeps reach a compliant grid quickly
    Eigen::VectorXd g = grid;
    CircleDiffeo psi = stretch;
    int sweeps = 0;
    for (; sweeps < 4; ++sweeps) {
        auto [next, ev] = refine_grid(g, psi, n0);
        if (!ev.changed()) break;
        g = next;
        psi = psi.resampled(g);
    }
    CHECK(sweeps <= 3);  // stretch factor 3: ceil(log2 3) + 1
    double maxgap = 0.0;
    for (Index j = 0; j < g.size(); ++j) {
        const double x1 = (j + 1 < g.size()) ? g[j + 1] : g[0] + kTwoPi;
        maxgap = std::max(maxgap, psi(x1) - psi(g[j]));
    }
    CHECK(maxgap <= kTwoPi / n0 * (1.0 + 1e-9));
}

TEST_CASE("collapse detector stops the descent with a diagnostic") {
    // matching c to c o phi forces psi toward phi^{-1}, whose slope dips
    // below 1; with the floor raised above that dip the detector must fire
    // and the solver must return its best-so-far state instead of throwing
    const Index n = 64;
    const DiscreteCurve c = synth_ellipse(n);
    Eigen::Matrix2Xd pts(2, n);
    for (Index j = 0; j < n; ++j) {
        const double t = c.grid[j] + 0.3 * std::sin(c.grid[j]);
        pts.col(j) = Vector2d(2.0 * std::cos(t), std::sin(t));
    }
    const DiscreteCurve d = make_curve(pts, c.grid, Topology::closed);
    MatchOptions opts;
    opts.params = ElasticParams(1.0, 0.5);
    opts.steps = 10;
    opts.refine = false;
    opts.slope_floor = 0.95;
    const MatchResult res = solve_bvp_shapes(c, d, opts);
    CHECK(res.incompleteness_detected);
    CHECK(!res.diagnostic.empty());
    CHECK(res.distance_history.back() < res.distance_history.front());
}

TEST_CASE("matching energy is invariant under joint parameter rotation") {
    const ElasticParams p(1.0, 0.5);
    const Index n = 128;
    const double shift = 0.37;  // generic, not a multiple of the spacing
    const Eigen::VectorXd grid = uniform_grid(n, Topology::closed);
    auto fold_pos = [](double t) {
        const Vector2d e(2.0 * std::cos(t), std::sin(t));
        const Vector2d tangent(-2.0 * std::sin(t), std::cos(t));
        const Vector2d outward =
            Vector2d(tangent.y(), -tangent.x()).normalized();
        return Vector2d(e - 0.8 * std::exp((std::cos(t) - 1.0) / 0.16) *
                                outward);
    };
    Eigen::Matrix2Xd ce(2, n), cf(2, n), ce_rot(2, n), cf_rot(2, n);
    for (Index j = 0; j < n; ++j) {
        ce.col(j) = Vector2d(2.0 * std::cos(grid[j]), std::sin(grid[j]));
        cf.col(j) = fold_pos(grid[j]);
        ce_rot.col(j) =
            Vector2d(2.0 * std::cos(grid[j] + shift),
                     std::sin(grid[j] + shift));
        cf_rot.col(j) = fold_pos(grid[j] + shift);
    }
    const double base =
        param_distance(make_curve(ce, grid, Topology::closed),
                       make_curve(cf, grid, Topology::closed), p, 15)
            .distance;
    const double rotated =
        param_distance(make_curve(ce_rot, grid, Topology::closed),
                       make_curve(cf_rot, grid, Topology::closed), p, 15)
            .distance;
    CHECK(std::abs(base - rotated) <= 1e-3 * base);
}

TEST_CASE("solve_bvp_shapes: trivial pair and synthetic ground truth") {
    MatchOptions opts;
    opts.params = ElasticParams(1.0, 0.5);
    opts.steps = 10;

    const DiscreteCurve c = synth_ellipse(64);
    const MatchResult trivial = solve_bvp_shapes(c, c, opts);
    CHECK(trivial.distance_history.back() <= 1e-10);
    CHECK(trivial.iterations <= 1);

    // recoverable reparameterization: distance collapses by >= 100x
    const Index n = 64;
    Eigen::Matrix2Xd pts(2, n);
    for (Index j = 0; j < n; ++j) {
        const double t = c.grid[j] + 0.25 * std::sin(c.grid[j]);
        pts.col(j) = Vector2d(2.0 * std::cos(t), std::sin(t));
    }
    const DiscreteCurve d = make_curve(pts, c.grid, Topology::closed);
    const MatchResult res = solve_bvp_shapes(synth_ellipse(n), d, opts);
    CHECK(res.distance_history.front() >=
          100.0 * res.distance_history.back());
    for (size_t i = 1; i < res.distance_history.size(); ++i)
        CHECK(res.distance_history[i] <= res.distance_history[i - 1]);
    CHECK(strictly_monotone(res.psi));
}
