#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lightray/metric.hpp"
#include "lightray/variation.hpp"

namespace lightray {

/// Closed-form metric together with whatever exact oracles its geometry
/// admits; ground truth for the numerical pipelines.
struct CatalogEntry {
    std::string name;
    MetricSpec metric;

    /// Exact geodesic gamma(t) with gamma(0) = p, gamma'(0) = xi, when known.
    std::function<Vec(const Vec& p, const Vec& xi, double t)> geodesic_exact;
    /// Exact value of the contact form on a chart tangent, when known
    /// (three-dimensional flat entry only).
    std::function<double(double theta, const Vec& chart_tangent)> contact_exact;
    /// Affine distance from any sky vertex to its first conjugate point, when
    /// the metric makes that distance direction-independent.
    std::optional<double> first_conjugate;
};

/// Smooth profile f(t) for the one-bump metric deformation, given with its
/// derivative; must vanish for t <= 0.
struct BumpSpec {
    std::function<double(double)> value;
    std::function<double(double)> derivative;

    /// f(t) = exp(-1/t) for t > 0, else 0.
    static BumpSpec default_bump();
};

/// Flat space of dimension m >= 3, signature (-,+,...,+).
CatalogEntry make_minkowski(int m);

/// Three-dimensional deformation of flat space in coordinates (t, x, y):
///   g = -(1+f) dt^2 + 2 f dt dx + (1-f) dx^2 + dy^2,  f = eps * bump(t).
/// Flat for t <= 0; det g = -1 identically.
CatalogEntry make_perturbed_minkowski(double eps, const BumpSpec& f = BumpSpec::default_bump());

/// Product of a time line with a round two-sphere, polar coordinates
/// (t, chi, phi), chi kept away from the poles. Every null geodesic meets its
/// first conjugate point at affine distance pi.
CatalogEntry make_einstein_static();

/// Closed-form family of null lines in flat three-space whose celestial curve
///   mu(s) = f(s, 0),  mu'(s) = s (1, cos s, sin s)
/// is null with a single velocity zero at s = 0. All partials exact.
ClosedFormVariation example_mu_variation();

/// The celestial curve of that variation, with exact velocity.
CurveSample example_mu();

/// Closed-form sign profile of the sky isotopy driven by example_mu():
/// the co-oriented contact pairing at sky angle theta and curve parameter s.
double example_mu_sign_profile(double theta, double s);

/// Contact one-form of the flat three-space ray chart evaluated on a chart
/// tangent (dx, dy, dtheta): cos(theta) dx + sin(theta) dy.
double exact_mink3_contact(double theta, const Vec& chart_tangent);

/// Entries addressable by name: "minkowski3", "minkowski4", "minkowski<m>",
/// "perturbed-minkowski" (eps applies), "einstein-static".
CatalogEntry catalog_lookup(const std::string& name, double eps = 0.05);
std::vector<std::string> catalog_names();

}  // namespace lightray
