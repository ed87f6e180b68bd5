#pragma once

#include <utility>
#include <vector>

#include "lightray/geometry.hpp"
#include "lightray/metric.hpp"

namespace lightray {

/// Future null direction at an event, stored as the full spatial unit vector
/// (u^2,...,u^m) on the frame sphere with implicit u^1 = 1; the tangent
/// representative is E_1 + sum_j u^j E_j.
struct NullDirection {
    Event base;
    Vec unit;  // m-1 entries, Euclidean norm 1
};

/// Unparametrized future null geodesic, canonicalized by its crossing of the
/// reference surface C = {x^1 = 0}: the anchor lies on C and the direction is
/// normalized to u^1 = 1.
struct LightRay {
    MetricSpec metric;
    Event anchor;
    Vec direction;  // (u^2,...,u^m), unit
};

/// Chart descriptor: the surface C = {x^1 = 0} inside the metric's declared
/// domain, assumed spacelike and crossed once by every ray.
struct RayChart {
    MetricSpec metric;
};

/// Coordinate components of the anchored tangent E_1 + sum u^j E_j.
Vec direction_to_tangent(const MetricSpec& metric, const Vec& p, const Vec& unit);

/// The ray's anchored tangent at its anchor.
TangentVector ray_tangent(const LightRay& ray);

/// The ray as a parametrized geodesic with gamma(0) = anchor.
CurveSample ray_geodesic(const LightRay& ray, double t_lo, double t_hi,
                         const GeodesicOptions& opts = {});

/// Canonicalizes the null geodesic through p with velocity xi: locates its
/// crossing of C within +-horizon and rescales to u^1 = 1. The result is
/// independent of positive rescaling of xi and of the base point along the
/// same ray.
LightRay ray_from_event_direction(const MetricSpec& metric, const Event& p,
                                  const TangentVector& xi, double horizon = 1e3);

/// Hemisphere chart (u^2 > 0): x = (x^2,...,x^m) of the anchor and
/// u = (u^3,...,u^m). Throws ChartError on or past the equator.
std::pair<Vec, Vec> ray_coords(const RayChart& chart, const LightRay& ray);

/// Inverse of ray_coords; reconstructs u^2 = sqrt(1 - sum u_j^2).
LightRay ray_from_coords(const RayChart& chart, const Vec& x, const Vec& u);

/// Angle chart for m = 3: theta with (u^2, u^3) = (cos theta, sin theta).
double ray_angle(const LightRay& ray);
LightRay ray_from_angle(const RayChart& chart, const Vec& x, double theta);

/// n points on the unit sphere S^{m-2}: equispaced angles for m = 3, a
/// Fibonacci lattice for m = 4.
std::vector<Vec> sphere_directions(int m, int n);

/// The sampled sky of p: canonicalized rays through p in n frame-sphere
/// directions.
std::vector<LightRay> sky_sample(const MetricSpec& metric, const Event& p, int n,
                                 double horizon = 1e3);

/// Minimal Euclidean coordinate distance from the ray to q over t in
/// [t_lo, t_hi] (coarse grid plus parabolic refinement).
double ray_point_distance(const LightRay& ray, const Vec& q, double t_lo, double t_hi);

}  // namespace lightray
