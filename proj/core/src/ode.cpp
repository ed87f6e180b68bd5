#include "lightray/ode.hpp"

#include <algorithm>
#include <cmath>

namespace lightray {

namespace {

// Dormand-Prince 5(4) coefficients.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// Embedded 4th-order weights.
constexpr double e1 = 5179.0 / 57600, e3 = 7571.0 / 16695, e4 = 393.0 / 640,
                 e5 = -92097.0 / 339200, e6 = 187.0 / 2100, e7 = 1.0 / 40;

Vec hermite(const OdeStep& s0, const OdeStep& s1, double t) {
    const double h = s1.t - s0.t;
    const double u = (t - s0.t) / h;
    const double u2 = u * u, u3 = u2 * u;
    const double h00 = 2 * u3 - 3 * u2 + 1;
    const double h10 = u3 - 2 * u2 + u;
    const double h01 = -2 * u3 + 3 * u2;
    const double h11 = u3 - u2;
    return h00 * s0.y + (h10 * h) * s0.dy + h01 * s1.y + (h11 * h) * s1.dy;
}

Vec hermite_derivative(const OdeStep& s0, const OdeStep& s1, double t) {
    const double h = s1.t - s0.t;
    const double u = (t - s0.t) / h;
    const double u2 = u * u;
    const double d00 = (6 * u2 - 6 * u) / h;
    const double d10 = 3 * u2 - 4 * u + 1;
    const double d01 = (-6 * u2 + 6 * u) / h;
    const double d11 = 3 * u2 - 2 * u;
    return d00 * s0.y + d10 * s0.dy + d01 * s1.y + d11 * s1.dy;
}

// Returns the index of the segment [steps[i], steps[i+1]] containing t.
size_t locate(const std::vector<OdeStep>& steps, double t) {
    const bool fwd = steps.back().t >= steps.front().t;
    size_t lo = 0, hi = steps.size() - 1;
    while (hi - lo > 1) {
        size_t mid = (lo + hi) / 2;
        if (fwd ? (steps[mid].t <= t) : (steps[mid].t >= t))
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

}  // namespace

Vec OdeSolution::eval(double t) const {
    if (steps.size() == 1) return steps.front().y;
    size_t i = locate(steps, t);
    return hermite(steps[i], steps[i + 1], t);
}

Vec OdeSolution::eval_derivative(double t) const {
    if (steps.size() == 1) return steps.front().dy;
    size_t i = locate(steps, t);
    return hermite_derivative(steps[i], steps[i + 1], t);
}

OdeSolution integrate(const OdeRhs& rhs, double t0, double t1, const Vec& y0,
                      const OdeOptions& opts) {
    OdeSolution sol;
    Vec y = y0;
    Vec k1 = rhs(t0, y);
    sol.steps.push_back({t0, y, k1});
    if (t1 == t0) return sol;

    const double dir = (t1 > t0) ? 1.0 : -1.0;
    const double span = std::abs(t1 - t0);
    double h = std::min({opts.init_step, opts.max_step, span});
    double t = t0;
    long n = 0;

    while (dir * (t1 - t) > 0) {
        if (++n > opts.max_steps) throw NumericalError("ode integrator exceeded max_steps");
        h = std::min(h, std::abs(t1 - t));
        const double hs = dir * h;

        Vec k2 = rhs(t + c2 * hs, y + hs * (a21 * k1));
        Vec k3 = rhs(t + c3 * hs, y + hs * (a31 * k1 + a32 * k2));
        Vec k4 = rhs(t + c4 * hs, y + hs * (a41 * k1 + a42 * k2 + a43 * k3));
        Vec k5 = rhs(t + c5 * hs, y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        Vec k6 = rhs(t + hs, y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        Vec y5 = y + hs * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        Vec k7 = rhs(t + hs, y5);
        Vec y4 = y + hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        double err = 0.0;
        for (long i = 0; i < y.size(); ++i) {
            double sc = opts.abs_tol + opts.rel_tol * std::max(std::abs(y[i]), std::abs(y5[i]));
            err = std::max(err, std::abs(y5[i] - y4[i]) / sc);
        }

        if (err <= 1.0) {
            t += hs;
            y = std::move(y5);
            k1 = std::move(k7);  // FSAL
            sol.steps.push_back({t, y, k1});
            if (dir * (t1 - t) <= 0) break;
        }
        double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
        h *= std::clamp(fac, 0.2, 5.0);
        h = std::min(h, opts.max_step);
        if (h < 1e-14 * std::max(1.0, std::abs(t)))
            throw NumericalError("ode integrator step size underflow");
    }
    return sol;
}

std::optional<double> find_event(const OdeSolution& sol,
                                 const std::function<double(double, const Vec&)>& event) {
    const auto& st = sol.steps;
    double prev = event(st.front().t, st.front().y);
    for (size_t i = 1; i < st.size(); ++i) {
        double cur = event(st[i].t, st[i].y);
        if (prev == 0.0) return st[i - 1].t;
        if (prev * cur <= 0.0) {
            double lo = st[i - 1].t, hi = st[i].t;
            double flo = prev;
            for (int it = 0; it < 200; ++it) {
                double mid = 0.5 * (lo + hi);
                double fm = event(mid, sol.eval(mid));
                if (flo * fm <= 0.0)
                    hi = mid;
                else {
                    lo = mid;
                    flo = fm;
                }
                if (std::abs(hi - lo) < 1e-14 * std::max(1.0, std::abs(mid))) break;
            }
            return 0.5 * (lo + hi);
        }
        prev = cur;
    }
    return std::nullopt;
}

}  // namespace lightray
