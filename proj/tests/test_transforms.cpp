#include <doctest.h>

#include <cmath>
#include <numbers>

#include "elastica/testing.hpp"
#include "elastica/transforms.hpp"

using namespace elastica;
namespace et = elastica::testing;

namespace {

constexpr double kPi = std::numbers::pi;

et::AnalyticCurve unit_circle() {
    return {[](double t) { return Vector2d(std::cos(t), std::sin(t)); },
            Topology::closed};
}

et::AnalyticCurve segment() {
    return {[](double t) { return Vector2d(t, 0.0); }, Topology::open};
}

// Samples c at phi(theta_j): the reparameterized curve on the uniform grid
// and the original curve on the warped grid (same nodes, two readings).
struct WarpedPair {
    DiscreteCurve composed;  // c o phi on the uniform grid
    DiscreteCurve warped;    // c on the grid phi(theta_j)
    Eigen::VectorXd phi_deriv;
};

WarpedPair warp(const et::AnalyticCurve& curve, const et::AnalyticDiffeo& phi,
                Index n) {
    const Eigen::VectorXd grid = uniform_grid(n, curve.topology);
    Eigen::VectorXd warped_grid(n);
    Eigen::VectorXd dphi(n);
    Eigen::Matrix2Xd pts(2, n);
    for (Index j = 0; j < n; ++j) {
        warped_grid[j] = phi.map(grid[j]);
        dphi[j] = phi.deriv(grid[j]);
        pts.col(j) = curve.pos(warped_grid[j]);
    }
    WarpedPair out;
    out.composed = make_curve(pts, grid, curve.topology);
    out.warped = make_curve(pts, warped_grid, curve.topology);
    out.phi_deriv = dphi;
    return out;
}

}  // namespace

TEST_CASE("r_transform: circle lifts, scaling, cone identity") {
    const DiscreteCurve c = unit_circle().sample(Index{256});

    const LiftedCurve srvt = r_transform(c, ElasticParams(1.0, 0.5));
    CHECK(srvt.dim() == 2);
    double err = 0.0;
    for (Index j = 0; j < c.size(); ++j)
        err = std::max(err, (srvt.values.col(j) -
                             Vector2d(-std::sin(c.grid[j]),
                                      std::cos(c.grid[j]))).norm());
    CHECK(err <= 1e-3);

    DiscreteCurve c4 = c;
    c4.points *= 4.0;
    const LiftedCurve scaled = r_transform(c4, ElasticParams(1.0, 0.5));
    CHECK(et::rel_error(scaled.values, 2.0 * srvt.values) <= 1e-12);

    const LiftedCurve cone = r_transform(c, ElasticParams(1.0, 1.0));
    CHECK(cone.dim() == 3);
    CHECK((cone.values.row(2).array() - std::sqrt(3.0)).abs().maxCoeff() <=
          1e-6);
    for (Index j = 0; j < c.size(); ++j) {
        const double rho2 = cone.values.col(j).head<2>().squaredNorm();
        const double q3 = cone.values(2, j);
        CHECK(3.0 * rho2 == doctest::Approx(q3 * q3).epsilon(1e-10));
    }
    CHECK_NOTHROW(validate_lifted(cone));
}

TEST_CASE("r_transform: translation invariance is exact") {
    et::Rng rng(21);
    const DiscreteCurve c = et::random_closed_curve(rng).sample(Index{128});
    DiscreteCurve shifted = c;
    shifted.points.colwise() += Vector2d(3.0, -1.5);
    for (auto p : {ElasticParams(1.0, 0.5), ElasticParams(1.0, 1.0)}) {
        const LiftedCurve qa = r_transform(c, p);
        const LiftedCurve qb = r_transform(shifted, p);
        // exact up to the roundoff injected by |shift| * sum|w| * eps
        CHECK((qa.values - qb.values).cwiseAbs().maxCoeff() <= 1e-12);
    }

    const DiscreteCurve open_c =
        et::random_open_curve(rng).sample(Index{128});
    DiscreteCurve open_shifted = open_c;
    open_shifted.points.colwise() += Vector2d(-2.0, 0.5);
    CHECK((younes_transform(open_c) - younes_transform(open_shifted))
              .cwiseAbs()
              .maxCoeff() <= 1e-12);
}

TEST_CASE("r_inverse: round trip, constant lift, closure defect") {
    const DiscreteCurve c = unit_circle().sample(Index{512});
    const ElasticParams p(1.0, 0.5);
    const LiftedCurve q = r_transform(c, p);
    const DiscreteCurve back = r_inverse(q, c.points.col(0));
    CHECK((back.points - c.points).cwiseAbs().maxCoeff() <= 1e-4);

    // constant planar lift integrates to a straight segment
    LiftedCurve flat;
    flat.values = Eigen::MatrixXd::Zero(2, 64);
    flat.values.row(0).setOnes();
    flat.grid = uniform_grid(64, Topology::open);
    flat.topology = Topology::open;
    flat.params = p;
    const DiscreteCurve seg = r_inverse(flat, Vector2d::Zero());
    for (Index j = 0; j < seg.size(); ++j) {
        CHECK(seg.points(0, j) ==
              doctest::Approx(seg.grid[j]).epsilon(1e-12));
        CHECK(seg.points(1, j) == 0.0);
    }

    // closed lift that misses the closure constraint reports its defect
    LiftedCurve open_loop;
    open_loop.values = Eigen::MatrixXd(2, 128);
    const Eigen::VectorXd grid = uniform_grid(128, Topology::closed);
    for (Index j = 0; j < 128; ++j) {
        open_loop.values(0, j) = std::cos(grid[j]) + 0.5;
        open_loop.values(1, j) = std::sin(grid[j]);
    }
    open_loop.grid = grid;
    open_loop.topology = Topology::closed;
    open_loop.params = p;
    Vector2d defect;
    r_inverse(open_loop, Vector2d::Zero(), &defect, /*validate=*/false);
    // defect = 1/(2ab) * oint |q| (q1,q2) dtheta, nonzero here
    const Eigen::ArrayXd norms = open_loop.values.colwise().norm();
    const Eigen::MatrixXd integrand =
        (open_loop.values.array().rowwise() * norms.transpose()).matrix() /
        (2.0 * p.a * p.b);
    const Eigen::VectorXd expected =
        integrate_dtheta(integrand, grid, Topology::closed);
    CHECK((defect - expected).norm() <= 1e-12);
    CHECK(defect.norm() > 1e-3);
}

TEST_CASE("elastic_metric: kernel, analytic circle value, pullback") {
    const DiscreteCurve c = unit_circle().sample(Index{512});
    const ElasticParams p(1.0, 0.5);
    const Frame f = frame(c);

    VectorField2 constant = VectorField2::Zero(2, c.size());
    constant.row(0).setConstant(2.0);
    CHECK(std::abs(elastic_metric(c, constant, constant, p)) <= 1e-20);

    // h = n on the unit circle: integrand reduces to b^2 kappa^2
    const double val = elastic_metric(c, f.normal, f.normal, p);
    CHECK(val == doctest::Approx(kPi / 2.0).epsilon(1e-4));

    // pullback identity against the finite difference of the transform
    et::Rng rng(2);
    for (auto params : {ElasticParams(1.0, 0.5), ElasticParams(1.0, 1.0),
                        ElasticParams(2.0, 1.5)}) {
        const DiscreteCurve rc =
            et::random_closed_curve(rng).sample(Index{512});
        const VectorField2 h =
            et::random_field(rng, Topology::closed).sample(rc.grid);
        const double metric = elastic_metric(rc, h, h, params);
        const auto fd = et::fd_variation(
            rc, h, 1e-5, [&params](const DiscreteCurve& cc) {
                return Eigen::MatrixXd(r_transform(cc, params).values);
            });
        const Eigen::VectorXd w =
            trapezoid_weights(rc.grid, Topology::closed);
        const double flat =
            (w.array() * fd.colwise().squaredNorm().transpose().array())
                .sum();
        CHECK(et::rel_error(flat, metric) <= 1e-3);
    }
}

TEST_CASE("elastic_metric agrees with the integrated-by-parts operator") {
    // G(h,h) = <A_c h, h>|_0^{2pi} - int <D_s A_c h, h> ds on open curves.
    et::Rng rng(23);
    const DiscreteCurve c = et::random_open_curve(rng).sample(Index{512});
    const VectorField2 h =
        et::random_field(rng, Topology::open).sample(c.grid);
    const ElasticParams p(1.0, 1.0);
    const double metric = elastic_metric(c, h, h, p);

    const VectorField2 a = elastic_tension(c, h, p);
    const Eigen::MatrixXd dsa = arc_derivative(c, Eigen::MatrixXd(a));
    const Eigen::VectorXd inner = dots(dsa, h).transpose();
    const double boundary = a.col(c.size() - 1).dot(h.col(c.size() - 1)) -
                            a.col(0).dot(h.col(0));
    const double via_operator = boundary - integrate_ds(c, inner);
    CHECK(et::rel_error(via_operator, metric) <= 1e-3);
}

TEST_CASE("q_transform: circle fixed point, homogeneity, differential") {
    const DiscreteCurve c = unit_circle().sample(Index{256});
    const Eigen::Matrix2Xd q = q_transform(c);
    CHECK(et::rel_error(q, c.points) <= 1e-6);

    DiscreteCurve scaled = c;
    scaled.points *= 3.0;
    CHECK(et::rel_error(q_transform(scaled),
                        std::pow(3.0, 1.5) * q_transform(c)) <= 1e-10);

    et::Rng rng(31);
    const DiscreteCurve rc = et::random_closed_curve(rng).sample(Index{256});
    const VectorField2 h =
        et::random_field(rng, Topology::closed).sample(rc.grid);
    const auto fd = et::fd_variation(rc, h, 1e-5,
                                     [](const DiscreteCurve& cc) {
                                         return Eigen::MatrixXd(
                                             q_transform(cc));
                                     });
    CHECK(et::rel_error(q_differential(rc, h), fd) <= 1e-5);
}

TEST_CASE("q_metric: zero field, reparameterization invariance") {
    const DiscreteCurve c = unit_circle().sample(Index{512});
    const VectorField2 zero = VectorField2::Zero(2, c.size());
    CHECK(q_metric(c, zero, zero) == 0.0);

    et::Rng rng(5);
    const et::AnalyticCurve curve = et::random_closed_curve(rng);
    const et::AnalyticField field = et::random_field(rng, Topology::closed);
    const et::AnalyticDiffeo phi =
        et::random_circle_diffeo(rng, 3, 0.4, /*fix_zero=*/true);
    const WarpedPair wp = warp(curve, phi, 512);
    const VectorField2 h_warped = field.sample(wp.warped.grid);
    const double lhs = q_metric(wp.composed, h_warped, h_warped);
    const double rhs = q_metric(wp.warped, h_warped, h_warped);
    CHECK(et::rel_error(lhs, rhs) <= 1e-3);
}

TEST_CASE("q_metric is not translation invariant") {
    // A tangential stretching field feels the position of the curve; a pure
    // bending field (such as h = v on the circle) would not, since the
    // basepoint enters only through <D_s h, v>.
    const DiscreteCurve c = unit_circle().sample(Index{256});
    const VectorField2 h = c.points;  // scaling field, <D_s h, v> = 1
    DiscreteCurve shifted = c;
    shifted.points.colwise() += Vector2d(1.0, 0.0);
    const double before = q_metric(c, h, h);
    const double after = q_metric(shifted, h, h);
    CHECK(before == doctest::Approx(9.0 * kPi / 2.0).epsilon(1e-4));
    CHECK(std::abs(after - before) > 0.1);
}

TEST_CASE("younes_transform: segment, closed rejection, sign ambiguity") {
    const DiscreteCurve seg = segment().sample(Index{64});
    const Eigen::Matrix2Xd t = younes_transform(seg);
    CHECK((t.row(0).array() - 1.0).abs().maxCoeff() <= 1e-12);
    CHECK(t.row(1).cwiseAbs().maxCoeff() <= 1e-12);

    const DiscreteCurve closed = unit_circle().sample(Index{64});
    CHECK_THROWS_AS(younes_transform(closed), TopologyError);

    // alpha -> alpha + 2pi flips the sign and cancels in the pullback
    et::Rng rng(17);
    const DiscreteCurve c = et::random_open_curve(rng).sample(Index{128});
    const Frame f = frame(c);
    const Eigen::ArrayXd root = f.speed.array().sqrt();
    Eigen::Matrix2Xd flipped(2, c.size());
    flipped.row(0) =
        (root * ((0.5 * (f.angle.array() + 2.0 * kPi)).cos())).transpose();
    flipped.row(1) =
        (root * ((0.5 * (f.angle.array() + 2.0 * kPi)).sin())).transpose();
    CHECK(et::rel_error(flipped, -younes_transform(c)) <= 1e-12);
}

TEST_CASE("younes pullback carries the a=b=1 metric up to the factor 4") {
    // The flat L^2 pullback of sqrt|c'| (cos a/2, sin a/2) is exactly a
    // quarter of the first-order Sobolev metric: the half-angle halves both
    // frame components of the differential.
    et::Rng rng(19);
    for (int trial = 0; trial < 3; ++trial) {
        const DiscreteCurve c =
            et::random_open_curve(rng).sample(Index{512});
        const VectorField2 h =
            et::random_field(rng, Topology::open).sample(c.grid);
        const auto fd = et::fd_variation(
            c, h, 1e-5, [](const DiscreteCurve& cc) {
                return Eigen::MatrixXd(younes_transform(cc));
            });
        const Eigen::VectorXd w = trapezoid_weights(c.grid, Topology::open);
        const double flat =
            (w.array() * fd.colwise().squaredNorm().transpose().array())
                .sum();
        const double sobolev =
            elastic_metric(c, h, h, ElasticParams(1.0, 1.0));
        CHECK(et::rel_error(4.0 * flat, sobolev) <= 1e-3);

        // analytic differential matches the finite difference directly
        CHECK(et::rel_error(younes_differential(c, h), fd) <= 1e-5);
    }
}

TEST_CASE("k_transform: circle, segment, pullback consistency") {
    const DiscreteCurve c = unit_circle().sample(Index{256});
    const Eigen::Matrix3Xd k = k_transform(c);
    CHECK((k.row(2).array() - 1.0).abs().maxCoeff() <= 1e-6);
    const Frame f = frame(c);
    CHECK(et::rel_error(k.topRows(2), f.tangent) <= 1e-6);

    const Eigen::Matrix3Xd ks = k_transform(segment().sample(Index{64}));
    CHECK(ks.row(2).cwiseAbs().maxCoeff() <= 1e-12);

    et::Rng rng(41);
    const DiscreteCurve rc = et::random_closed_curve(rng).sample(Index{256});
    const VectorField2 h =
        et::random_field(rng, Topology::closed).sample(rc.grid);
    const auto fd = et::fd_variation(rc, h, 1e-5,
                                     [](const DiscreteCurve& cc) {
                                         return Eigen::MatrixXd(
                                             k_transform(cc));
                                     });
    CHECK(et::rel_error(k_differential(rc, h), fd) <= 1e-4);

    const Eigen::VectorXd w = trapezoid_weights(rc.grid, Topology::closed);
    const double flat =
        (w.array() * fd.colwise().squaredNorm().transpose().array()).sum();
    CHECK(et::rel_error(k_metric(rc, h, h), flat) <= 1e-4);
}

TEST_CASE("k_metric: constant kernel and analytic circle value") {
    const DiscreteCurve c = unit_circle().sample(Index{512});
    VectorField2 constant = VectorField2::Zero(2, c.size());
    constant.row(1).setConstant(-3.0);
    CHECK(std::abs(k_metric(c, constant, constant)) <= 1e-18);

    // h = v on the unit circle: D_s h = n, D_s^2 h = -v, so only the
    // first-order normal term survives and the metric equals the length.
    const Frame f = frame(c);
    CHECK(et::rel_error(k_metric(c, f.tangent, f.tangent), 2.0 * kPi) <=
          1e-3);
}

TEST_CASE("general transform reproduces the named special cases") {
    JetTransform srvt;
    srvt.jet_order = 2;
    srvt.output_dim = 2;
    srvt.f = [](const Eigen::VectorXd& jet) {
        return Eigen::VectorXd(jet.tail(2));
    };
    srvt.jacobian = [](const Eigen::VectorXd&) {
        Eigen::MatrixXd j = Eigen::MatrixXd::Zero(2, 4);
        j(0, 2) = 1.0;
        j(1, 3) = 1.0;
        return j;
    };

    JetTransform qt;
    qt.jet_order = 1;
    qt.output_dim = 2;
    qt.f = [](const Eigen::VectorXd& jet) { return Eigen::VectorXd(jet); };
    qt.jacobian = [](const Eigen::VectorXd&) {
        return Eigen::MatrixXd(Eigen::MatrixXd::Identity(2, 2));
    };

    et::Rng rng(55);
    const DiscreteCurve c = et::random_closed_curve(rng).sample(Index{128});
    CHECK(et::rel_error(general_transform(c, srvt),
                        r_transform(c, ElasticParams(1.0, 0.5)).values) <=
          1e-12);
    CHECK(et::rel_error(general_transform(c, qt),
                        Eigen::MatrixXd(q_transform(c))) <= 1e-12);

    const VectorField2 h =
        et::random_field(rng, Topology::closed).sample(c.grid);
    CHECK(et::rel_error(
              general_pullback(c, srvt, h, h),
              elastic_metric(c, h, h, ElasticParams(1.0, 0.5))) <= 1e-10);
    CHECK(et::rel_error(general_pullback(c, qt, h, h), q_metric(c, h, h)) <=
          1e-10);
}

TEST_CASE("equivariance under reparameterization for every transform") {
    et::Rng rng(77);
    const et::AnalyticCurve closed_curve = et::random_closed_curve(rng);
    const et::AnalyticCurve open_curve = et::random_open_curve(rng);
    const et::AnalyticDiffeo phi =
        et::random_circle_diffeo(rng, 3, 0.4, /*fix_zero=*/true);

    auto check_equivariance = [&](const et::AnalyticCurve& curve,
                                  auto&& transform, Index n) {
        const WarpedPair wp = warp(curve, phi, n);
        const Eigen::MatrixXd lhs = transform(wp.composed);
        const Eigen::MatrixXd expected =
            transform(wp.warped).array().rowwise() *
            wp.phi_deriv.array().sqrt().transpose();
        return et::rel_error(lhs, expected);
    };

    auto r_fn = [](const DiscreteCurve& cc) {
        return Eigen::MatrixXd(r_transform(cc, ElasticParams(1.0, 1.0)).values);
    };
    auto q_fn = [](const DiscreteCurve& cc) {
        return Eigen::MatrixXd(q_transform(cc));
    };
    auto y_fn = [](const DiscreteCurve& cc) {
        return Eigen::MatrixXd(younes_transform(cc));
    };
    auto k_fn = [](const DiscreteCurve& cc) {
        return Eigen::MatrixXd(k_transform(cc));
    };

    // a generic two-jet transform exercises the general machinery
    JetTransform generic;
    generic.jet_order = 2;
    generic.output_dim = 2;
    generic.f = [](const Eigen::VectorXd& x) {
        Eigen::VectorXd out(2);
        out << x[0] * x[3] - x[1] * x[2], x[2] + 0.5 * x[0];
        return out;
    };
    generic.jacobian = [](const Eigen::VectorXd& x) {
        Eigen::MatrixXd j(2, 4);
        j << x[3], -x[2], -x[1], x[0], 0.5, 0.0, 1.0, 0.0;
        return j;
    };
    auto g_fn = [&generic](const DiscreteCurve& cc) {
        return general_transform(cc, generic);
    };

    CHECK(check_equivariance(closed_curve, r_fn, 512) <= 1e-3);
    CHECK(check_equivariance(closed_curve, q_fn, 512) <= 1e-3);
    CHECK(check_equivariance(open_curve, y_fn, 512) <= 1e-3);
    CHECK(check_equivariance(closed_curve, k_fn, 512) <= 1e-3);
    CHECK(check_equivariance(closed_curve, g_fn, 512) <= 1e-3);

    // errors keep falling at (at least) second order under refinement
    CHECK(check_equivariance(closed_curve, r_fn, 1024) <=
          check_equivariance(closed_curve, r_fn, 512) / 3.0);
    CHECK(check_equivariance(closed_curve, k_fn, 1024) <=
          check_equivariance(closed_curve, k_fn, 512) / 3.0);
}

TEST_CASE("L2 norm of the lift is preserved under reparameterization") {
    et::Rng rng(99);
    const et::AnalyticCurve curve = et::random_closed_curve(rng);
    const et::AnalyticDiffeo phi =
        et::random_circle_diffeo(rng, 2, 0.3, /*fix_zero=*/true);
    const WarpedPair wp = warp(curve, phi, 512);
    const ElasticParams p(1.0, 1.0);
    auto l2sq = [&](const DiscreteCurve& cc) {
        const LiftedCurve q = r_transform(cc, p);
        const Eigen::VectorXd w =
            trapezoid_weights(cc.grid, cc.topology);
        return (w.array() *
                q.values.colwise().squaredNorm().transpose().array())
            .sum();
    };
    CHECK(et::rel_error(l2sq(wp.composed), l2sq(wp.warped)) <= 1e-6);
}

TEST_CASE("metrics are symmetric bilinear forms") {
    et::Rng rng(61);
    const DiscreteCurve c = et::random_closed_curve(rng).sample(Index{64});
    const VectorField2 h =
        et::random_field(rng, Topology::closed).sample(c.grid);
    const VectorField2 k =
        et::random_field(rng, Topology::closed).sample(c.grid);
    const VectorField2 l =
        et::random_field(rng, Topology::closed).sample(c.grid);
    const ElasticParams p(1.3, 0.9);

    CHECK(elastic_metric(c, h, k, p) ==
          doctest::Approx(elastic_metric(c, k, h, p)).epsilon(1e-14));
    CHECK(q_metric(c, h, k) ==
          doctest::Approx(q_metric(c, k, h)).epsilon(1e-14));
    CHECK(k_metric(c, h, k) ==
          doctest::Approx(k_metric(c, k, h)).epsilon(1e-14));

    const VectorField2 combo = 2.0 * h + 0.5 * l;
    CHECK(elastic_metric(c, combo, k, p) ==
          doctest::Approx(2.0 * elastic_metric(c, h, k, p) +
                          0.5 * elastic_metric(c, l, k, p))
              .epsilon(1e-12));
    CHECK(elastic_metric(c, h, h, p) >= 0.0);
    CHECK(q_metric(c, h, h) >= 0.0);
    CHECK(k_metric(c, h, h) >= 0.0);
}

TEST_CASE("metric kernels: constants for lifts, trivial for q_metric") {
    et::Rng rng(3);
    DiscreteCurve c = et::random_closed_curve(rng).sample(Index{16});
    c.points.row(0).array() += 0.3;  // keep the curve away from the origin
    const Index n = c.size();
    const ElasticParams p(1.0, 1.0);

    // Gram matrices over the nodal basis fields
    Eigen::MatrixXd gram_r(2 * n, 2 * n), gram_q(2 * n, 2 * n);
    std::vector<VectorField2> basis;
    basis.reserve(2 * n);
    for (Index j = 0; j < n; ++j)
        for (int axis = 0; axis < 2; ++axis) {
            VectorField2 e = VectorField2::Zero(2, n);
            e(axis, j) = 1.0;
            basis.push_back(e);
        }
    for (size_t i = 0; i < basis.size(); ++i)
        for (size_t j = i; j < basis.size(); ++j) {
            gram_r(i, j) = gram_r(j, i) =
                elastic_metric(c, basis[i], basis[j], p);
            gram_q(i, j) = gram_q(j, i) = q_metric(c, basis[i], basis[j]);
        }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es_r(gram_r);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es_q(gram_q);
    const double scale_r = es_r.eigenvalues().maxCoeff();
    const double scale_q = es_q.eigenvalues().maxCoeff();

    // q_metric: no kernel at all
    CHECK(es_q.eigenvalues().minCoeff() > 1e-10 * scale_q);

    // elastic metric: G(h,h) ~ 0 exactly when D_s h ~ 0 on the nodes
    for (Index k = 0; k < 2 * n; ++k) {
        const Eigen::VectorXd mode = es_r.eigenvectors().col(k);
        VectorField2 h(2, n);
        for (Index j = 0; j < n; ++j) {
            h(0, j) = mode[2 * j];
            h(1, j) = mode[2 * j + 1];
        }
        const double g = es_r.eigenvalues()[k];
        const double dsh =
            arc_derivative(c, Eigen::MatrixXd(h)).cwiseAbs().maxCoeff();
        const bool null_mode = g <= 1e-10 * scale_r;
        const bool constant_like = dsh <= 1e-6;
        CHECK(null_mode == constant_like);
    }
}
