#include "elastica/testing.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace elastica::testing {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

DiscreteCurve AnalyticCurve::sample(Index n) const {
    return sample(uniform_grid(n, topology));
}

DiscreteCurve AnalyticCurve::sample(const Eigen::VectorXd& grid) const {
    Eigen::Matrix2Xd pts(2, grid.size());
    for (Index j = 0; j < grid.size(); ++j) pts.col(j) = pos(grid[j]);
    return make_curve(std::move(pts), grid, topology);
}

VectorField2 AnalyticField::sample(const Eigen::VectorXd& grid) const {
    VectorField2 out(2, grid.size());
    for (Index j = 0; j < grid.size(); ++j) out.col(j) = value(grid[j]);
    return out;
}

AnalyticCurve random_closed_curve(Rng& rng, int max_freq, double amplitude) {
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (int attempt = 0; attempt < 32; ++attempt) {
        std::vector<Eigen::Vector4d> coeff(max_freq + 1);
        for (auto& c : coeff) {
            c << unit(rng), unit(rng), unit(rng), unit(rng);
        }
        AnalyticCurve curve;
        curve.topology = Topology::closed;
        const double amp = amplitude * std::pow(0.5, attempt);
        curve.pos = [coeff, amp, max_freq](double t) {
            Vector2d p(std::cos(t), std::sin(t));
            for (int k = 0; k <= max_freq; ++k) {
                const double decay =
                    amp / std::pow(1.0 + k, 2.5);
                p.x() += decay * (coeff[k][0] * std::cos(k * t) +
                                  coeff[k][1] * std::sin(k * t));
                p.y() += decay * (coeff[k][2] * std::cos(k * t) +
                                  coeff[k][3] * std::sin(k * t));
            }
            return p;
        };
        try {
            curve.sample(Index{256});
            return curve;
        } catch (const RegularityError&) {
            // shrink and retry
        }
    }
    throw Error("random_closed_curve: failed to produce a regular curve");
}

AnalyticCurve random_open_curve(Rng& rng, int max_freq, double amplitude) {
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (int attempt = 0; attempt < 32; ++attempt) {
        std::vector<Eigen::Vector4d> coeff(max_freq + 1);
        std::vector<double> phase(max_freq + 1);
        for (int k = 0; k <= max_freq; ++k) {
            coeff[k] << unit(rng), unit(rng), unit(rng), unit(rng);
            phase[k] = unit(rng);
        }
        AnalyticCurve curve;
        curve.topology = Topology::open;
        const double amp = amplitude * std::pow(0.5, attempt);
        curve.pos = [coeff, phase, amp, max_freq](double t) {
            Vector2d p(t, 0.0);
            for (int k = 0; k <= max_freq; ++k) {
                const double w = 0.5 * (k + 1);
                const double decay = amp / std::pow(1.0 + k, 2.0);
                p.x() += decay * coeff[k][0] * std::sin(w * t + phase[k]);
                p.y() += decay * (coeff[k][2] * std::sin(w * t + phase[k]) +
                                  coeff[k][3] * std::cos(w * t));
            }
            return p;
        };
        try {
            curve.sample(Index{256});
            return curve;
        } catch (const RegularityError&) {
        }
    }
    throw Error("random_open_curve: failed to produce a regular curve");
}

AnalyticField random_field(Rng& rng, Topology topology, int max_freq,
                           double amplitude) {
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::vector<Eigen::Vector4d> coeff(max_freq + 1);
    std::vector<double> phase(max_freq + 1);
    for (int k = 0; k <= max_freq; ++k) {
        coeff[k] << unit(rng), unit(rng), unit(rng), unit(rng);
        phase[k] = unit(rng);
    }
    AnalyticField field;
    if (topology == Topology::closed) {
        field.value = [coeff, amplitude, max_freq](double t) {
            Vector2d p = Vector2d::Zero();
            for (int k = 0; k <= max_freq; ++k) {
                const double decay = amplitude / std::pow(1.0 + k, 2.0);
                p.x() += decay * (coeff[k][0] * std::cos(k * t) +
                                  coeff[k][1] * std::sin(k * t));
                p.y() += decay * (coeff[k][2] * std::cos(k * t) +
                                  coeff[k][3] * std::sin(k * t));
            }
            return p;
        };
    } else {
        field.value = [coeff, phase, amplitude, max_freq](double t) {
            Vector2d p = Vector2d::Zero();
            for (int k = 0; k <= max_freq; ++k) {
                const double w = 0.5 * (k + 1);
                const double decay = amplitude / std::pow(1.0 + k, 2.0);
                p.x() += decay * coeff[k][0] * std::sin(w * t + phase[k]);
                p.y() += decay * coeff[k][2] * std::cos(w * t + phase[k]);
            }
            return p;
        };
    }
    return field;
}

AnalyticDiffeo random_circle_diffeo(Rng& rng, int max_freq, double strength,
                                    bool fix_zero) {
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::vector<double> amp(max_freq + 1, 0.0);
    std::vector<double> phase(max_freq + 1, 0.0);
    double budget = 0.0;
    for (int k = 1; k <= max_freq; ++k) {
        amp[k] = unit(rng) / (k * k);
        phase[k] = fix_zero ? 0.0 : std::numbers::pi * unit(rng);
        budget += k * std::abs(amp[k]);
    }
    // scale so that psi' = 1 + sum k a_k cos(...) stays above 1 - strength
    const double scale = budget > 0.0 ? strength / budget : 0.0;
    AnalyticDiffeo d;
    d.map = [amp, phase, scale, max_freq](double x) {
        double y = x;
        for (int k = 1; k <= max_freq; ++k)
            y += scale * amp[k] * std::sin(k * x + phase[k]);
        return y;
    };
    d.deriv = [amp, phase, scale, max_freq](double x) {
        double y = 1.0;
        for (int k = 1; k <= max_freq; ++k)
            y += scale * amp[k] * k * std::cos(k * x + phase[k]);
        return y;
    };
    return d;
}

std::function<double(double)> random_circle_field(Rng& rng, int max_freq,
                                                  double amplitude) {
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::vector<double> a(max_freq + 1), b(max_freq + 1);
    for (int k = 0; k <= max_freq; ++k) {
        a[k] = unit(rng) / std::pow(1.0 + k, 2.0);
        b[k] = unit(rng) / std::pow(1.0 + k, 2.0);
    }
    return [a, b, amplitude, max_freq](double x) {
        double y = 0.0;
        for (int k = 0; k <= max_freq; ++k)
            y += amplitude * (a[k] * std::cos(k * x) + b[k] * std::sin(k * x));
        return y;
    };
}

}  // namespace elastica::testing
