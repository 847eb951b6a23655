#pragma once

#include <functional>

#include "elastica/calculus.hpp"
#include "elastica/core.hpp"

namespace elastica {

/// Image of a curve under the lifting transform R^{a,b}. Two rows when
/// 4b^2 == a^2 (values in the punctured plane), three rows otherwise (values
/// on the cone (4b^2-a^2)(q1^2+q2^2) = a^2 q3^2, q3 > 0).
struct LiftedCurve {
    Eigen::MatrixXd values;
    Eigen::VectorXd grid;
    Topology topology = Topology::closed;
    ElasticParams params;

    Index size() const { return values.cols(); }
    int dim() const { return static_cast<int>(values.rows()); }
    bool closed() const { return topology == Topology::closed; }
};

/// Throws ConeViolation when the node values are off the cone (relative
/// tolerance 1e-8) or, in the planar case, too close to the origin.
void validate_lifted(const LiftedCurve& q, double cone_tol = 1e-8);

/// R^{a,b}(c) = |c'|^{1/2} (a v, sqrt(4b^2-a^2)); the third component is
/// dropped when 4b^2 == a^2 (square root velocity transform up to scale).
LiftedCurve r_transform(const DiscreteCurve& c, const ElasticParams& p);

/// Exact differential D_{c,h} R^{a,b} of the discrete transform.
Eigen::MatrixXd r_differential(const DiscreteCurve& c, const VectorField2& h,
                               const ElasticParams& p);

/// Solves D_{c,u} R^{a,b} = dq for the deformation u (basepoint u(0) = 0).
VectorField2 r_differential_inverse(const DiscreteCurve& c,
                                    const Eigen::MatrixXd& dq,
                                    const ElasticParams& p);

/// R^{-1}(q)(theta) = basepoint + 1/(2ab) int_0^theta |q| (q1, q2) dtheta.
/// For closed q the cyclic closure defect 1/(2ab) * oint |q| (q1,q2) dtheta
/// is written to `closure_defect` when given; it vanishes exactly when q
/// satisfies the closure constraint.
DiscreteCurve r_inverse(const LiftedCurve& q, const Vector2d& basepoint,
                        Vector2d* closure_defect = nullptr,
                        bool validate = true);

/// The elastic a-b metric
///   G_c(h,k) = int a^2 <D_s h,n><D_s k,n> + b^2 <D_s h,v><D_s k,v> ds.
double elastic_metric(const DiscreteCurve& c, const VectorField2& h,
                      const VectorField2& k, const ElasticParams& p);

/// A_c h = a^2 <D_s h, n> n + b^2 <D_s h, v> v.
VectorField2 elastic_tension(const DiscreteCurve& c, const VectorField2& h,
                             const ElasticParams& p);

/// B_c(h,h) = (a^2 <D_s h,n>^2 + b^2 <D_s h,v>^2) v
///            - 2 (b^2 - a^2) <D_s h,n><D_s h,v> n.
VectorField2 elastic_quadratic(const DiscreteCurve& c, const VectorField2& h,
                               const ElasticParams& p);

/// Q(c) = sqrt(|c'|) c.
Eigen::Matrix2Xd q_transform(const DiscreteCurve& c);
Eigen::Matrix2Xd q_differential(const DiscreteCurve& c, const VectorField2& h);

/// Pullback of the flat L^2 metric under Q:
///   int <h + 1/2 <D_s h,v> c, k + 1/2 <D_s k,v> c> ds.
/// Depends on the position of c; not translation invariant.
double q_metric(const DiscreteCurve& c, const VectorField2& h,
                const VectorField2& k);

/// sqrt(|c'|) (cos(alpha/2), sin(alpha/2)) with alpha the continuous lift of
/// the turning angle anchored in (-pi, pi]. Open curves only; pulls the flat
/// L^2 metric back to 1/4 of the a=b=1 elastic metric.
Eigen::Matrix2Xd younes_transform(const DiscreteCurve& c);
Eigen::Matrix2Xd younes_differential(const DiscreteCurve& c,
                                     const VectorField2& h);

/// K(c) = sqrt(|c'|) (v, kappa); induces a second-order Sobolev-type metric.
Eigen::Matrix3Xd k_transform(const DiscreteCurve& c);
Eigen::Matrix3Xd k_differential(const DiscreteCurve& c, const VectorField2& h);
double k_metric(const DiscreteCurve& c, const VectorField2& h,
                const VectorField2& k);

/// User-supplied transform F(c) = sqrt(|c'|) f(jet) acting on the jet
/// (c) for order 1 or (c, D_s c) for order 2, with analytic Jacobian.
struct JetTransform {
    int jet_order = 2;
    int output_dim = 2;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> f;
    std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> jacobian;
};

Eigen::MatrixXd general_transform(const DiscreteCurve& c,
                                  const JetTransform& t);
Eigen::MatrixXd general_differential(const DiscreteCurve& c,
                                     const JetTransform& t,
                                     const VectorField2& h);
double general_pullback(const DiscreteCurve& c, const JetTransform& t,
                        const VectorField2& h, const VectorField2& k);

}  // namespace elastica
