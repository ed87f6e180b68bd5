#include "lightray/variation.hpp"

#include <cmath>

namespace lightray {

namespace {

constexpr double kTStep = 1e-5;
constexpr double kSStep = 1e-5;
// Larger step for the mixed partial; a nested first-derivative stencil
// amplifies rounding noise at smaller steps.
constexpr double kMixedStep = 1e-4;

}  // namespace

Vec GeodesicVariation::velocity(double s, double t) const {
    const double h = kTStep;
    return (-position(s, t + 2 * h) + 8.0 * position(s, t + h) - 8.0 * position(s, t - h) +
            position(s, t - 2 * h)) /
           (12.0 * h);
}

Vec GeodesicVariation::jacobi(double s, double t) const {
    const double h = kSStep;
    return (-position(s + 2 * h, t) + 8.0 * position(s + h, t) - 8.0 * position(s - h, t) +
            position(s - 2 * h, t)) /
           (12.0 * h);
}

Vec GeodesicVariation::jacobi_velocity(double s, double t) const {
    const double h = kMixedStep;
    return (velocity(s + h, t) - velocity(s - h, t)) / (2.0 * h);
}

Vec ClosedFormVariation::velocity(double s, double t) const {
    if (vel) return vel(s, t);
    return GeodesicVariation::velocity(s, t);
}

Vec ClosedFormVariation::jacobi(double s, double t) const {
    if (jac) return jac(s, t);
    return GeodesicVariation::jacobi(s, t);
}

Vec ClosedFormVariation::jacobi_velocity(double s, double t) const {
    if (jac_vel) return jac_vel(s, t);
    return GeodesicVariation::jacobi_velocity(s, t);
}

LiftedCurveVariation::LiftedCurveVariation(MetricSpec metric, CurveSample nu, double t_low,
                                           double t_high)
    : metric_(std::move(metric)), nu_(std::move(nu)) {
    s_lo = nu_.a;
    s_hi = nu_.b;
    t_lo = t_low;
    t_hi = t_high;
    // The lift needs a regular null curve: nonzero null velocity throughout.
    for (int i = 0; i <= 4; ++i) {
        const double s = nu_.a + (nu_.b - nu_.a) * i / 4.0;
        const Vec x = nu_.position(s);
        const Vec v = nu_.velocity(s);
        const double nrm = frame_norm_sq(metric_, x, v);
        if (nrm < 1e-12) throw DomainError("lifted curve has vanishing velocity at a probe");
        if (std::abs(inner(metric_, x, v, v)) > 1e-6 * std::max(1.0, nrm))
            throw DomainError("lifted curve is not null at a probe");
    }
}

const CurveSample& LiftedCurveVariation::geodesic_at(double s) const {
    auto it = cache_.find(s);
    if (it == cache_.end()) {
        auto geo = std::make_shared<CurveSample>(geodesic_flow(
            metric_, Event(nu_.position(s)), TangentVector(Event(nu_.position(s)), nu_.velocity(s)),
            t_lo, t_hi));
        it = cache_.emplace(s, std::move(geo)).first;
    }
    return *it->second;
}

Vec LiftedCurveVariation::position(double s, double t) const { return geodesic_at(s).position(t); }

Vec LiftedCurveVariation::velocity(double s, double t) const { return geodesic_at(s).velocity(t); }

// s-derivatives of integrated positions: a wider stencil keeps the ode
// tolerance from dominating after division by the step.
Vec LiftedCurveVariation::jacobi(double s, double t) const {
    const double h = 1e-3;
    return (-position(s + 2 * h, t) + 8.0 * position(s + h, t) - 8.0 * position(s - h, t) +
            position(s - 2 * h, t)) /
           (12.0 * h);
}

Vec LiftedCurveVariation::jacobi_velocity(double s, double t) const {
    const double h = 1e-3;
    return (-velocity(s + 2 * h, t) + 8.0 * velocity(s + h, t) - 8.0 * velocity(s - h, t) +
            velocity(s - 2 * h, t)) /
           (12.0 * h);
}

}  // namespace lightray
