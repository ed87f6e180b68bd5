#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "lightray/types.hpp"

namespace lightray {

using OdeRhs = std::function<Vec(double, const Vec&)>;

struct OdeOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    double max_step = std::numeric_limits<double>::infinity();
    double init_step = 1e-3;
    long max_steps = 2'000'000;
};

struct OdeStep {
    double t;
    Vec y;
    Vec dy;
};

/// Accepted steps of an adaptive integration, evaluable in between by cubic
/// Hermite interpolation. Callers that need dense accuracy below ~1e-9 should
/// cap `max_step` (the interpolation error scales as h^4).
struct OdeSolution {
    std::vector<OdeStep> steps;  // ordered by time of integration (t may decrease)

    double t0() const { return steps.front().t; }
    double t1() const { return steps.back().t; }
    const Vec& y1() const { return steps.back().y; }

    Vec eval(double t) const;
    Vec eval_derivative(double t) const;
};

/// Adaptive embedded Runge-Kutta of order 4(5) (Dormand-Prince). Integrates
/// from t0 to t1 in either direction and lands exactly on t1.
OdeSolution integrate(const OdeRhs& rhs, double t0, double t1, const Vec& y0,
                      const OdeOptions& opts = {});

/// Locates the first zero of `event(t, y(t))` strictly inside the solution's
/// span (sign change between accepted steps, refined by bisection on the
/// interpolant). Returns nullopt if no sign change occurs.
std::optional<double> find_event(const OdeSolution& sol,
                                 const std::function<double(double, const Vec&)>& event);

}  // namespace lightray
