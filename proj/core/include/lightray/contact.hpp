#pragma once

#include <optional>

#include "lightray/jacobi.hpp"

namespace lightray {

/// Value of the contact pairing g(J, gamma') for a Jacobi class, together
/// with its co-orientation sign. The value is constant along the ray and
/// independent of the representative.
struct ContactValue {
    double value = 0.0;
    int sign = 0;  // -1, 0, +1
};

ContactValue contact_form(const MetricSpec& metric, const LightRay& ray,
                          const TangentRayVector& cls);

/// Basis of the tangent space of the sky of gamma(s0) at the ray: m-2
/// independent reduced classes with J(s0) = 0 mod gamma', all with vanishing
/// contact value.
struct SkyTangentBasis {
    LightRay ray;
    double s0 = 0.0;
    std::vector<TangentRayVector> elements;
};

SkyTangentBasis sky_tangent_basis(const MetricSpec& metric, const LightRay& ray, double s0);

/// Reconstructs the reduced representative Jacobi state (at t = 0) of a
/// class: zero first frame component for both value and derivative.
JacobiState class_representative(const MetricSpec& metric, const TangentRayVector& cls);

/// Tests whether the class points along some sky through the ray: looks for
/// t* with J(t*) proportional to gamma'(t*) in [t0, t1]. Requires the contact
/// value to vanish first (necessary condition), then locates tangential
/// touches of h(t) = g(J(t), J(t)) and confirms proportionality. Returns the
/// smallest witness parameter, or nothing.
std::optional<double> is_celestial(const MetricSpec& metric, const LightRay& ray,
                                   const TangentRayVector& cls, double t0, double t1,
                                   int grid = 512);

}  // namespace lightray
