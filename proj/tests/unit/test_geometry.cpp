#include <cmath>
#include <random>

#include <doctest.h>

#include "lightray/catalog.hpp"
#include "lightray/geometry.hpp"

using namespace lightray;

namespace {

double tensor3_diff(const Tensor3& a, const Tensor3& b) {
    double m = 0.0;
    for (size_t i = 0; i < a.a.size(); ++i) m = std::max(m, std::abs(a.a[i] - b.a[i]));
    return m;
}

double tensor4_diff(const Tensor4& a, const Tensor4& b) {
    double m = 0.0;
    for (size_t i = 0; i < a.a.size(); ++i) m = std::max(m, std::abs(a.a[i] - b.a[i]));
    return m;
}

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("frames are orthonormal for the curved entries") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (const char* name : {"perturbed-minkowski", "einstein-static"}) {
        const CatalogEntry cat = catalog_lookup(name);
        for (int k = 0; k < 20; ++k) {
            Vec p(3);
            p << U(rng), U(rng), U(rng);
            if (!cat.metric.inside(p)) p[1] = 1.5;
            REQUIRE(cat.metric.inside(p));
            const Mat E = frame_at(cat.metric, p);
            Mat gram = E.transpose() * cat.metric.g(p) * E;
            gram(0, 0) += 2.0;  // should be -1
            CHECK((gram - Mat::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-10);
        }
    }
}

TEST_CASE("closed-form connection matches finite differences") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(0.2, 1.4);
    for (const char* name : {"perturbed-minkowski", "einstein-static"}) {
        const CatalogEntry cat = catalog_lookup(name);
        REQUIRE(cat.metric.christoffel_exact);
        double worst = 0.0;
        for (int k = 0; k < 10; ++k) {
            Vec p(3);
            p << U(rng), U(rng), U(rng);
            worst = std::max(worst, tensor3_diff(cat.metric.christoffel_exact(p),
                                                 christoffel_fd(cat.metric, p)));
        }
        CHECK(worst < 1e-6);
    }
}

TEST_CASE("closed-form curvature matches finite differences") {
    const CatalogEntry cat = catalog_lookup("einstein-static");
    REQUIRE(cat.metric.riemann_exact);
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> U(0.4, 1.4);
    double worst = 0.0;
    for (int k = 0; k < 6; ++k) {
        Vec p(3);
        p << U(rng), U(rng), U(rng);
        const Tensor4 fd =
            riemann_fd(cat.metric, p, [&](const Vec& q) { return christoffel(cat.metric, q); });
        worst = std::max(worst, tensor4_diff(cat.metric.riemann_exact(p), fd));
    }
    CHECK(worst < 1e-5);
}

TEST_CASE("scalar curvature of the static cylinder is two") {
    const CatalogEntry cat = catalog_lookup("einstein-static");
    Vec p(3);
    p << 0.3, 1.1, 0.7;
    CHECK(std::abs(scalar_curvature(cat.metric, p) - 2.0) < 1e-6);
}

TEST_CASE("null geodesics stay null over long spans") {
    const CatalogEntry cat = catalog_lookup("perturbed-minkowski");
    Vec p(3), xi(3);
    p << -0.5, 0.2, 0.1;
    xi << 1.0, 0.8, 0.6;
    // Close the cone exactly at p.
    const Mat g = cat.metric.g(p);
    const double a = g(0, 0);
    const double b = 2.0 * (g(0, 1) * xi[1] + g(0, 2) * xi[2]);
    const double c = xi.tail(2).transpose() * g.bottomRightCorner(2, 2) * xi.tail(2);
    xi[0] = (-b + std::sqrt(b * b - 4 * a * c)) / (2 * a);
    if (xi[0] < 0) xi[0] = (-b - std::sqrt(b * b - 4 * a * c)) / (2 * a);
    REQUIRE(std::abs(inner(cat.metric, p, xi, xi)) < 1e-12);

    const CurveSample gamma = geodesic_flow(cat.metric, Event(p), {Event(p), xi}, -10.0, 10.0);
    double worst = 0.0;
    for (int i = 0; i <= 100; ++i) {
        const double t = -10.0 + 0.2 * i;
        const Vec x = gamma.position(t);
        const Vec v = gamma.velocity(t);
        worst = std::max(worst, std::abs(inner(cat.metric, x, v, v)) / v.squaredNorm());
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("parallel transport preserves inner products") {
    const CatalogEntry cat = catalog_lookup("perturbed-minkowski");
    CurveSample mu;
    mu.a = 0.0;
    mu.b = 2.0;
    mu.position = [](double s) -> Vec {
        Vec p(3);
        p << s, 0.4 * std::sin(s), 0.3 * s;
        return p;
    };
    mu.velocity = [](double s) -> Vec {
        Vec v(3);
        v << 1.0, 0.4 * std::cos(s), 0.3;
        return v;
    };
    Vec u0(3), w0(3);
    u0 << 1.0, 0.2, -0.1;
    w0 << 0.0, 1.0, 0.5;
    const double before = inner(cat.metric, mu.position(0.0), u0, w0);
    for (double s : {0.7, 1.5, 2.0}) {
        const TangentVector u = parallel_transport(cat.metric, mu, {Event(mu.position(0.0)), u0}, s);
        const TangentVector w = parallel_transport(cat.metric, mu, {Event(mu.position(0.0)), w0}, s);
        CHECK(std::abs(inner(cat.metric, mu.position(s), u.comps, w.comps) - before) < 1e-8);
    }
}

TEST_CASE("causal classification and time reversal") {
    const CatalogEntry cat = catalog_lookup("minkowski3");
    const Event p{0.0, 0.0, 0.0};
    Vec tl(3), nl(3), sp(3);
    tl << 1.0, 0.2, 0.1;
    nl << 1.0, 1.0, 0.0;
    sp << 0.1, 1.0, 0.3;
    CHECK(causal_character(cat.metric, {p, tl}) == CausalCharacter::TimelikeFuture);
    CHECK(causal_character(cat.metric, {p, Vec(-tl)}) == CausalCharacter::TimelikePast);
    CHECK(causal_character(cat.metric, {p, nl}) == CausalCharacter::NullFuture);
    CHECK(causal_character(cat.metric, {p, Vec(-nl)}) == CausalCharacter::NullPast);
    CHECK(causal_character(cat.metric, {p, sp}) == CausalCharacter::Spacelike);
    CHECK(causal_character(cat.metric, {p, Vec(Vec::Zero(3))}) == CausalCharacter::Zero);
}

TEST_CASE("conformal obstruction vanishes on flat space") {
    const CatalogEntry cat = catalog_lookup("minkowski3");
    Vec p(3);
    p << 0.2, -0.4, 0.9;
    CHECK(cotton_tensor(cat.metric, p).max_abs() < 1e-8);
}

TEST_CASE("obstruction tensor agrees with the difference-quotient oracle") {
    const CatalogEntry cat = catalog_lookup("perturbed-minkowski", 0.05);
    Vec p(3);
    p << 0.6, 0.1, -0.2;
    const Tensor3 prod = cotton_tensor(cat.metric, p);
    const Tensor3 oracle = cotton_tensor_fd_oracle(cat.metric, p);
    double rel = 0.0;
    for (size_t i = 0; i < prod.a.size(); ++i)
        if (std::abs(prod.a[i]) > 1e-6)
            rel = std::max(rel, std::abs(prod.a[i] - oracle.a[i]) / std::abs(prod.a[i]));
    CHECK(prod.max_abs() > 1e-6);  // the deformation is actually non-flat here
    CHECK(rel < 1e-4);
}

}  // TEST_SUITE
