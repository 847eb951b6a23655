#pragma once

// Verification helpers: seeded analytic fixtures and finite-difference
// oracles. Test-only machinery; the oracles are independent of the analytic
// differentials they are used to check.

#include <functional>
#include <random>

#include "elastica/core.hpp"

namespace elastica::testing {

using Rng = std::mt19937_64;

/// A curve given in closed form, samplable at any resolution.
struct AnalyticCurve {
    std::function<Vector2d(double)> pos;
    Topology topology = Topology::closed;

    DiscreteCurve sample(Index n) const;
    DiscreteCurve sample(const Eigen::VectorXd& grid) const;
};

struct AnalyticField {
    std::function<Vector2d(double)> value;

    VectorField2 sample(const Eigen::VectorXd& grid) const;
};

/// Smooth orientation-preserving map of S^1 (or of [0, 2pi] fixing the
/// endpoints), given as a closed-form lift.
struct AnalyticDiffeo {
    std::function<double(double)> map;
    std::function<double(double)> deriv;
};

/// Random trigonometric-polynomial loop around the unit circle; regular by
/// construction (coefficients shrink until the sampled speed clears the
/// floor).
AnalyticCurve random_closed_curve(Rng& rng, int max_freq = 4,
                                  double amplitude = 0.25);

/// Random smooth open arc; endpoints generically distinct.
AnalyticCurve random_open_curve(Rng& rng, int max_freq = 4,
                                double amplitude = 0.3);

/// Random smooth deformation field, periodic when `topology` is closed.
AnalyticField random_field(Rng& rng, Topology topology, int max_freq = 4,
                           double amplitude = 1.0);

/// Random smooth circle diffeomorphism x + sum a_k sin(kx + phi_k) with
/// derivative bounded away from zero. With `fix_zero` the phases vanish, so
/// the map fixes 0 (and hence maps [0, 2pi) onto itself).
AnalyticDiffeo random_circle_diffeo(Rng& rng, int max_freq = 3,
                                    double strength = 0.5,
                                    bool fix_zero = false);

/// Random smooth periodic scalar field on S^1.
std::function<double(double)> random_circle_field(Rng& rng, int max_freq = 3,
                                                  double amplitude = 1.0);

/// Central finite difference of a curve functional in direction h.
template <class F>
auto fd_variation(const DiscreteCurve& c, const VectorField2& h, double eps,
                  F&& func) {
    DiscreteCurve cp = c;
    cp.points += eps * h;
    DiscreteCurve cm = c;
    cm.points -= eps * h;
    return ((func(cp) - func(cm)) / (2.0 * eps)).eval();
}

template <class F>
double fd_scalar(const DiscreteCurve& c, const VectorField2& h, double eps,
                 F&& func) {
    DiscreteCurve cp = c;
    cp.points += eps * h;
    DiscreteCurve cm = c;
    cm.points -= eps * h;
    return (func(cp) - func(cm)) / (2.0 * eps);
}

inline double rel_error(const Eigen::MatrixXd& approx,
                        const Eigen::MatrixXd& ref) {
    const double scale = ref.cwiseAbs().maxCoeff();
    return (approx - ref).cwiseAbs().maxCoeff() /
           (scale > 0.0 ? scale : 1.0);
}

inline double rel_error(double approx, double ref) {
    return std::abs(approx - ref) / (std::abs(ref) > 0.0 ? std::abs(ref) : 1.0);
}

}  // namespace elastica::testing
