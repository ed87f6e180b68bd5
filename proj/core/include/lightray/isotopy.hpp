#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "lightray/contact.hpp"
#include "lightray/variation.hpp"

namespace lightray {

/// Family of skies dragged along a curve mu: null future directions sampled
/// at mu(start) and parallel-transported to every node of an s-grid. The ray
/// induced by sample i at node j passes through mu(s_j).
struct IsotopyField {
    MetricSpec metric;
    CurveSample mu;
    std::vector<double> s_grid;
    Mat base_frame;               // frame at mu(start)
    std::vector<Vec> base_units;  // frame-sphere samples (m-1 comps, unit)
    std::vector<Mat> transports;  // coordinate transport matrices per node

    /// Anchored null tangent of a sphere point at mu(start).
    Vec base_tangent(const Vec& unit) const;
    /// Transported direction of sample i at node j, coordinate components.
    Vec transported(int i, int j) const;
};

IsotopyField isotopy_from_curve(const MetricSpec& metric, const CurveSample& mu, int n,
                                int s_count = 201);

/// Canonicalized ray of sample i at node j; passes through mu(s_j).
LightRay induced_ray(const IsotopyField& field, int i, int j, double horizon = 1e3);

/// Matrix of pairings p(i, j) = g(mu'(s_j), u^i at s_j).
struct IsotopyProfile {
    std::vector<double> s_grid;
    Mat values;  // n x s_count
};

IsotopyProfile sign_profile(const IsotopyField& field);

enum class ProfileClass { NonNegative, NonPositive, Mixed, Degenerate };
enum class CausalVerdict { CausalPast, CausalFuture, NotCausal, ConstantCurve };

const char* to_string(ProfileClass c);
const char* to_string(CausalVerdict v);

/// Classification of a profile, with the s-subintervals of each sign when
/// the class is mixed (entries within the tolerance band count as neutral).
struct CausalClass {
    ProfileClass profile = ProfileClass::Degenerate;
    CausalVerdict verdict = CausalVerdict::ConstantCurve;
    std::vector<std::pair<double, double>> positive_intervals;
    std::vector<std::pair<double, double>> negative_intervals;
};

/// tol is absolute, rescaled internally by the largest profile magnitude.
CausalClass classify_profile(const IsotopyProfile& profile, double tol = 1e-9);

/// Causality of a vector through its pairings with n sampled null future
/// directions: causal past iff all pairings are >= -tol. The pointwise
/// classification is attached as a cross-check.
struct DualCausality {
    bool causal_past = false;
    bool causal_future = false;
    CausalCharacter pointwise = CausalCharacter::Zero;
};

DualCausality vector_dual_causality(const MetricSpec& metric, const Event& p, const Vec& v,
                                    int n, double tol = 1e-9);

/// Null curve recovered from a variation of light rays: the continued root
/// t(s) of g(J_s(t), J_s(t)) = 0 from the seed, the curve mu(s) = f(s, t(s)),
/// and its direction sigma(s) = gamma_s'(t(s)).
struct CelestialRecovery {
    std::vector<double> s_nodes;
    std::vector<double> t_nodes;
    CurveSample mu;
    std::function<Vec(double)> sigma;
    std::vector<double> alternates;  // other roots in t at the seed s, not continued
};

/// The returned curve closures keep references to `metric` and `variation`;
/// both must outlive the recovery.
CelestialRecovery celestial_recover(const MetricSpec& metric, const GeodesicVariation& variation,
                                    double s0, double t0, int s_count = 201);

/// Full pipeline: recover the curve, drag its sky along it, classify.
CausalClass classify_celestial_curve(const MetricSpec& metric, const GeodesicVariation& variation,
                                     double s0, double t0, int n = 64, int s_count = 201);

/// Checks that recoloring the sphere samples by an s-dependent sphere map
/// leaves the classification unchanged. The map takes (s, unit) to a unit
/// vector and must be a diffeomorphism of the sphere for each s.
bool reparam_invariance_check(const IsotopyField& field,
                              const std::function<Vec(double, const Vec&)>& reparam,
                              double tol = 1e-9);

}  // namespace lightray
