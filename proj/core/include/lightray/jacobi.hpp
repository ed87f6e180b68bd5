#pragma once

#include <utility>
#include <vector>

#include "lightray/rays.hpp"

namespace lightray {

/// Jacobi data along a ray at affine parameter t. Jp holds the covariant
/// derivative of J along the geodesic, not the coordinate derivative.
struct JacobiState {
    double t = 0.0;
    Vec J;
    Vec Jp;
};

/// Jacobi class modulo the tangential fields (a t + b) gamma', in the reduced
/// representation with vanishing first frame component. vbar and wbar are the
/// spatial frame components (indices 2..m) of the reduced derivative and
/// value; vbar is Euclidean-orthogonal to the ray direction.
struct TangentRayVector {
    LightRay ray;
    Vec vbar;  // m-1 entries, reduced J'
    Vec wbar;  // m-1 entries, reduced J
};

/// A Jacobi field along a ray as a densely evaluable object on [t_lo, t_hi].
struct JacobiField {
    double t_lo = 0.0, t_hi = 0.0;
    std::function<Vec(double)> gamma;
    std::function<Vec(double)> gamma_prime;
    std::function<JacobiState(double)> at;
};

/// Integrates the Jacobi equation J'' + R(J, gamma') gamma' = 0 jointly with
/// the geodesic gamma(0) = p, gamma'(0) = xi, densely over [t_lo, t_hi].
/// Works along any geodesic, canonicalized or not.
JacobiField jacobi_along_geodesic(const MetricSpec& metric, const Vec& p, const Vec& xi,
                                  const JacobiState& init, double t_lo, double t_hi,
                                  const GeodesicOptions& opts = {});

/// Same, anchored on a canonicalized ray.
JacobiField jacobi_field(const MetricSpec& metric, const LightRay& ray, const JacobiState& init,
                         double t_lo, double t_hi, const GeodesicOptions& opts = {});

/// The state at t1 of the field through `init`.
JacobiState propagate_jacobi(const MetricSpec& metric, const LightRay& ray,
                             const JacobiState& init, double t1, const GeodesicOptions& opts = {});

/// Sky-tangent field: J(tau) = 0, J'(tau) = xi (coordinate components at
/// gamma(tau)). Its contact pairing g(J, gamma') vanishes identically.
JacobiField sky_jacobi(const MetricSpec& metric, const LightRay& ray, double tau, const Vec& xi,
                       double t_lo, double t_hi, const GeodesicOptions& opts = {});

/// Reduces a Jacobi state modulo multiples of gamma' at the state's own
/// parameter; the result is unchanged under J -> J + (a t + b) gamma'.
TangentRayVector reduce_mod_gamma(const MetricSpec& metric, const LightRay& ray,
                                  const JacobiState& state);

/// Orthonormal complement of the unit vector u in R^{m-1}, as matrix columns.
/// For m = 3 this is the quarter-turn of u, continuously in u.
Mat screen_basis(const Vec& u);

/// Chart on the tangent bundle of ray space: propagates the state to the
/// anchor, reduces, and returns (x, u, v, w) of sizes
/// (m-1, m-2, m-2, m-1), 4m-6 in total.
Vec tn_chart(const RayChart& chart, const LightRay& ray, const JacobiState& state);

/// Inverse of tn_chart: the ray and the reduced representative state at t = 0.
std::pair<LightRay, JacobiState> tn_chart_inverse(const RayChart& chart, const Vec& coords);

/// The reduced Jacobi class of a chart velocity (xdot, udot) at (x, u),
/// obtained by differentiating through the anchored tangent construction.
TangentRayVector chart_tangent_class(const RayChart& chart, const Vec& x, const Vec& u,
                                     const Vec& xdot, const Vec& udot);

/// Pushes a velocity (xdot, udot) of a curve of chart coordinates to the
/// (v, w) part of the tn chart.
std::pair<Vec, Vec> coordinate_change(const RayChart& chart, const Vec& x, const Vec& u,
                                      const Vec& xdot, const Vec& udot);

/// The full (2m-3) x (2m-3) matrix of coordinate_change acting on (xdot;
/// udot) and returning (v; w); block structure [[B, I],[A, 0]] with A
/// invertible. Throws NumericalError when A is numerically singular.
Mat coordinate_change_matrix(const RayChart& chart, const Vec& x, const Vec& u);

/// Spacelike screen directions xi_1..xi_{m-2} at gamma(tau), coordinate
/// components, spanning the complement of gamma'(tau) used for sky bases.
std::vector<Vec> sky_basis_directions(const MetricSpec& metric, const LightRay& ray, double tau);

/// Scans [t0, t1] for parameters conjugate to tau along the ray: zeros of the
/// determinant of the propagated sky-basis screen components, refined by
/// bisection. The trivial zero at tau itself is excluded.
std::vector<double> conjugate_scan(const MetricSpec& metric, const LightRay& ray, double tau,
                                   double t0, double t1, int grid = 1000);

}  // namespace lightray
