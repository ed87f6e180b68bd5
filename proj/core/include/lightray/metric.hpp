#pragma once

#include <functional>
#include <optional>
#include <string>

#include "lightray/types.hpp"

namespace lightray {

/// An analytic Lorentzian metric of dimension m with signature (-,+,...,+).
///
/// `components` is the only mandatory map. Christoffel symbols and Riemann
/// curvature fall back to central finite differences when the closed-form
/// suppliers are absent. `frame` returns an orthonormal frame as matrix
/// columns E_1..E_m with E_1 future timelike; the default builds one by
/// Gram-Schmidt from the coordinate basis.
struct MetricSpec {
    std::string name;
    int dim = 0;
    std::function<Mat(const Vec&)> components;
    std::function<Tensor3(const Vec&)> christoffel_exact;  // optional
    std::function<Tensor4(const Vec&)> riemann_exact;      // optional
    std::function<Mat(const Vec&)> frame;                  // optional, columns E_i
    std::function<bool(const Vec&)> in_domain;             // optional

    Mat g(const Vec& p) const { return components(p); }
    bool inside(const Vec& p) const { return !in_domain || in_domain(p); }
};

/// Parametrized curve on [a,b] with position and velocity maps.
struct CurveSample {
    double a = 0.0, b = 1.0;
    std::function<Vec(double)> position;
    std::function<Vec(double)> velocity;

    /// Builds the velocity map by 4th-order central differences of `pos`.
    static CurveSample from_position(double a, double b, std::function<Vec(double)> pos,
                                     double h = 1e-4);
};

inline CurveSample CurveSample::from_position(double a, double b, std::function<Vec(double)> pos,
                                              double h) {
    CurveSample c;
    c.a = a;
    c.b = b;
    c.position = pos;
    c.velocity = [pos, h](double s) -> Vec {
        return (-pos(s + 2 * h) + 8.0 * pos(s + h) - 8.0 * pos(s - h) + pos(s - 2 * h)) / (12.0 * h);
    };
    return c;
}

}  // namespace lightray
