#include <cmath>
#include <random>

#include <doctest.h>

#include "lightray/catalog.hpp"
#include "lightray/geometry.hpp"

using namespace lightray;

TEST_SUITE("catalog") {

TEST_CASE("lookup knows its names and rejects others") {
    const auto names = catalog_names();
    for (const char* n : {"minkowski3", "minkowski4", "perturbed-minkowski", "einstein-static"})
        CHECK(std::find(names.begin(), names.end(), n) != names.end());
    CHECK_THROWS_AS(catalog_lookup("no-such-metric"), DomainError);
    CHECK(catalog_lookup("minkowski5").metric.dim == 5);
}

TEST_CASE("flat geodesics are straight lines") {
    const CatalogEntry cat = catalog_lookup("minkowski4");
    REQUIRE(cat.geodesic_exact);
    Vec p(4), xi(4);
    p << 0.1, -0.3, 0.2, 0.5;
    xi << 1.0, 0.4, -0.2, 0.3;
    const CurveSample num = geodesic_flow(cat.metric, Event(p), {Event(p), xi}, -3.0, 3.0);
    for (double t : {-2.5, 0.0, 1.7, 3.0}) {
        CHECK((num.position(t) - cat.geodesic_exact(p, xi, t)).norm() < 1e-9);
        CHECK((cat.geodesic_exact(p, xi, t) - (p + t * xi)).norm() < 1e-14);
    }
}

TEST_CASE("deformed metric keeps unit volume and flattens for t <= 0") {
    const CatalogEntry cat = catalog_lookup("perturbed-minkowski", 0.08);
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> U(-2.0, 2.0);
    for (int k = 0; k < 20; ++k) {
        Vec p(3);
        p << U(rng), U(rng), U(rng);
        const Mat g = cat.metric.g(p);
        CHECK((g - g.transpose()).cwiseAbs().maxCoeff() == 0.0);
        CHECK(std::abs(g.determinant() + 1.0) < 1e-12);
        if (p[0] <= 0.0) {
            Mat eta = Mat::Identity(3, 3);
            eta(0, 0) = -1.0;
            CHECK((g - eta).cwiseAbs().maxCoeff() == 0.0);
        }
    }
}

TEST_CASE("bump profile is smooth at the gluing point") {
    const BumpSpec bump = BumpSpec::default_bump();
    CHECK(bump.value(-1.0) == 0.0);
    CHECK(bump.value(0.0) == 0.0);
    CHECK(bump.derivative(0.0) == 0.0);
    CHECK(bump.value(0.1) > 0.0);
    for (double t : {0.2, 0.7, 1.5}) {
        const double fd = (bump.value(t + 1e-6) - bump.value(t - 1e-6)) / 2e-6;
        CHECK(std::abs(fd - bump.derivative(t)) < 1e-7);
    }
}

TEST_CASE("static cylinder oracles") {
    const CatalogEntry cat = catalog_lookup("einstein-static");
    REQUIRE(cat.first_conjugate.has_value());
    CHECK(*cat.first_conjugate == doctest::Approx(std::acos(-1.0)));
    Vec p(3);
    p << 0.2, 0.9, 2.0;
    CHECK(std::abs(scalar_curvature(cat.metric, p) - 2.0) < 1e-6);
    CHECK(!cat.metric.inside(Vec(Vec::Zero(3))));  // chi = 0 is outside the band
}

TEST_CASE("example family is a variation through null lines") {
    const ClosedFormVariation var = example_mu_variation();
    const CatalogEntry cat = catalog_lookup("minkowski3");
    const CurveSample mu = example_mu();

    for (double s : {-1.0, -0.3, 0.0, 0.6, 1.0}) {
        CHECK((var.position(s, 0.0) - mu.position(s)).norm() < 1e-12);
        // Null curve: the closed-form velocity s (1, cos s, sin s).
        Vec v(3);
        v << s, s * std::cos(s), s * std::sin(s);
        CHECK((mu.velocity(s) - v).norm() < 1e-12);
        CHECK(std::abs(inner(cat.metric, mu.position(s), mu.velocity(s), mu.velocity(s))) <
              1e-12);
        // Each t-line is a null geodesic of flat space.
        const Vec d = var.position(s, 1.0) - var.position(s, 0.0);
        CHECK(std::abs(inner(cat.metric, mu.position(s), d, d)) < 1e-12);
        CHECK((var.position(s, 0.5) - 0.5 * (var.position(s, 0.0) + var.position(s, 1.0))).norm() <
              1e-12);
        // Closed-form partials agree with difference quotients of position.
        const Vec jfd =
            (var.position(s + 1e-5, 0.3) - var.position(s - 1e-5, 0.3)) / 2e-5;
        CHECK((var.jacobi(s, 0.3) - jfd).norm() < 1e-8);
        const Vec vfd =
            (var.position(s, 0.3 + 1e-5) - var.position(s, 0.3 - 1e-5)) / 2e-5;
        CHECK((var.velocity(s, 0.3) - vfd).norm() < 1e-8);
    }
}

TEST_CASE("closed-form sign profile matches its formula") {
    // s (cos(s - theta) - 1): zero when theta = s, nonpositive factor.
    for (double s : {-1.2, -0.4, 0.5, 1.1}) {
        CHECK(std::abs(example_mu_sign_profile(s, s)) < 1e-14);
        const double v = example_mu_sign_profile(s + 1.0, s);
        CHECK(std::abs(v - s * (std::cos(1.0) - 1.0)) < 1e-12);
    }
}

}  // TEST_SUITE
