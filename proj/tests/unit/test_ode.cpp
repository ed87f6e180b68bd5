#include <cmath>

#include <doctest.h>

#include "lightray/ode.hpp"

using namespace lightray;

TEST_SUITE("ode") {

TEST_CASE("exponential growth hits e at t = 1") {
    auto rhs = [](double, const Vec& y) -> Vec { return y; };
    Vec y0(1);
    y0 << 1.0;
    const OdeSolution sol = integrate(rhs, 0.0, 1.0, y0);
    CHECK(sol.t1() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(sol.y1()[0] - std::exp(1.0)) < 1e-9);
}

TEST_CASE("harmonic oscillator dense output") {
    auto rhs = [](double, const Vec& y) -> Vec {
        Vec d(2);
        d << y[1], -y[0];
        return d;
    };
    Vec y0(2);
    y0 << 1.0, 0.0;
    OdeOptions opts;
    opts.max_step = 0.02;
    const OdeSolution sol = integrate(rhs, 0.0, 10.0, y0, opts);
    double worst_pos = 0.0, worst_der = 0.0;
    for (int i = 0; i <= 500; ++i) {
        const double t = 10.0 * i / 500.0;
        worst_pos = std::max(worst_pos, std::abs(sol.eval(t)[0] - std::cos(t)));
        worst_der = std::max(worst_der, std::abs(sol.eval_derivative(t)[0] + std::sin(t)));
    }
    CHECK(worst_pos < 1e-8);
    // The interpolant's derivative is one order less accurate than its value.
    CHECK(worst_der < 1e-6);
}

TEST_CASE("backward integration") {
    auto rhs = [](double t, const Vec&) -> Vec {
        Vec d(1);
        d << std::cos(t);
        return d;
    };
    Vec y0(1);
    y0 << 0.0;
    const OdeSolution sol = integrate(rhs, 0.0, -2.0, y0);
    CHECK(std::abs(sol.y1()[0] - std::sin(-2.0)) < 1e-9);
}

TEST_CASE("event location finds the first zero crossing") {
    auto rhs = [](double t, const Vec&) -> Vec {
        Vec d(1);
        d << -std::sin(t);
        return d;
    };
    Vec y0(1);
    y0 << 1.0;
    OdeOptions opts;
    opts.max_step = 0.05;
    const OdeSolution sol = integrate(rhs, 0.0, 6.0, y0, opts);
    const auto root = find_event(sol, [](double, const Vec& y) { return y[0]; });
    REQUIRE(root.has_value());
    CHECK(std::abs(*root - std::acos(0.0)) < 1e-8);
}

}  // TEST_SUITE
