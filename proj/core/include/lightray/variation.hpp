#pragma once

#include <map>
#include <memory>

#include "lightray/geometry.hpp"
#include "lightray/metric.hpp"

namespace lightray {

/// One-parameter family of null geodesics f(s, t): for each fixed s the map
/// t -> f(s, t) is a null geodesic, and d f / d s is the associated Jacobi
/// field. Derivative accessors fall back to central differences of position.
class GeodesicVariation {
  public:
    virtual ~GeodesicVariation() = default;

    virtual int dim() const = 0;
    virtual Vec position(double s, double t) const = 0;

    /// d f / d t, the geodesic velocity.
    virtual Vec velocity(double s, double t) const;
    /// d f / d s, the Jacobi field along the geodesic at parameter s.
    virtual Vec jacobi(double s, double t) const;
    /// d^2 f / ds dt, the coordinate partial of the Jacobi field along t.
    virtual Vec jacobi_velocity(double s, double t) const;

    double s_lo = -1.0, s_hi = 1.0;
    double t_lo = -1.0, t_hi = 1.0;
};

/// Variation given by explicit formulas; missing partials fall back to the
/// finite-difference defaults.
class ClosedFormVariation final : public GeodesicVariation {
  public:
    int m = 0;
    std::function<Vec(double, double)> pos;
    std::function<Vec(double, double)> vel;      // optional
    std::function<Vec(double, double)> jac;      // optional
    std::function<Vec(double, double)> jac_vel;  // optional

    int dim() const override { return m; }
    Vec position(double s, double t) const override { return pos(s, t); }
    Vec velocity(double s, double t) const override;
    Vec jacobi(double s, double t) const override;
    Vec jacobi_velocity(double s, double t) const override;
};

/// Tautological lift of a regular null curve nu: f(s, t) is the geodesic with
/// f(s, 0) = nu(s) and d f / d t (s, 0) = nu'(s). Geodesics are integrated on
/// demand and cached per s.
class LiftedCurveVariation final : public GeodesicVariation {
  public:
    LiftedCurveVariation(MetricSpec metric, CurveSample nu, double t_low, double t_high);

    int dim() const override { return metric_.dim; }
    Vec position(double s, double t) const override;
    Vec velocity(double s, double t) const override;
    Vec jacobi(double s, double t) const override;
    Vec jacobi_velocity(double s, double t) const override;

  private:
    const CurveSample& geodesic_at(double s) const;

    MetricSpec metric_;
    CurveSample nu_;
    mutable std::map<double, std::shared_ptr<const CurveSample>> cache_;
};

}  // namespace lightray
