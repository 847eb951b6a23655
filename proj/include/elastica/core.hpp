#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace elastica {

using Eigen::Index;
using Vector2d = Eigen::Vector2d;
using Vector3d = Eigen::Vector3d;

/// A deformation of a plane curve: one 2-vector per curve node.
using VectorField2 = Eigen::Matrix2Xd;

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct RegularityError : Error { using Error::Error; };
struct TopologyError : Error { using Error::Error; };
struct GridMismatch : Error { using Error::Error; };
struct ConeViolation : Error { using Error::Error; };
struct MonotonicityLost : Error { using Error::Error; };
struct SingularSystem : Error { using Error::Error; };
struct DegenerateBasis : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };

struct ExistenceTimeExceeded : Error {
    double t_max;
    ExistenceTimeExceeded(const std::string& what, double t)
        : Error(what), t_max(t) {}
};

/// A node path of a flat geodesic runs into the cone apex at interior time;
/// the metric is incomplete there and the path stops being a curve.
struct DegenerateInterior : Error { using Error::Error; };

struct NewtonDivergence : Error {
    int step;
    double residual;
    NewtonDivergence(const std::string& what, int step_, double residual_)
        : Error(what), step(step_), residual(residual_) {}
};

enum class Topology { open, closed };

/// Coefficients (a, b) of the first-order elastic metric
///   G_c(h,k) = int a^2 <D_s h, n><D_s k, n> + b^2 <D_s h, v><D_s k, v> ds.
/// Requires a > 0, b > 0 and 4b^2 >= a^2. When 4b^2 == a^2 holds exactly the
/// lifted representation is planar (two components), otherwise it lives on a
/// cone in R^3.
struct ElasticParams {
    double a = 1.0;
    double b = 0.5;

    ElasticParams() = default;
    ElasticParams(double a_, double b_) : a(a_), b(b_) {
        if (!(a > 0.0) || !(b > 0.0))
            throw Error("ElasticParams: a and b must be positive");
        if (4.0 * b * b < a * a)
            throw Error("ElasticParams: requires 4b^2 >= a^2");
    }

    bool flat_plane() const { return 4.0 * b * b == a * a; }
    int lift_dim() const { return flat_plane() ? 2 : 3; }
    /// sqrt(4b^2 - a^2); the height coefficient of the cone direction.
    double cone_coeff() const { return std::sqrt(4.0 * b * b - a * a); }
};

/// Sampled plane curve. `grid` holds strictly increasing parameter values in
/// [0, 2pi]; closed curves omit the duplicate endpoint and wrap around,
/// open curves include both 0 and 2pi.
struct DiscreteCurve {
    Eigen::Matrix2Xd points;
    Eigen::VectorXd grid;
    Topology topology = Topology::closed;

    Index size() const { return points.cols(); }
    bool closed() const { return topology == Topology::closed; }
};

/// Relative floor for the node speeds: a curve is regular when
/// min_j |c'(theta_j)| > floor * mean_j |c'(theta_j)|.
inline constexpr double kRegularityFloor = 1e-8;

Eigen::VectorXd uniform_grid(Index n, Topology topology);

/// Validating factory. Throws RegularityError / TopologyError / Error on
/// invalid data.
DiscreteCurve make_curve(Eigen::Matrix2Xd points, Eigen::VectorXd grid,
                         Topology topology,
                         double regularity_floor = kRegularityFloor);

/// Uniform-grid convenience overload.
DiscreteCurve make_curve(Eigen::Matrix2Xd points, Topology topology,
                         double regularity_floor = kRegularityFloor);

void validate_curve(const DiscreteCurve& c,
                    double regularity_floor = kRegularityFloor);

}  // namespace elastica
