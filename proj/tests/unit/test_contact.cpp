#include <cmath>
#include <random>

#include <doctest.h>

#include "lightray/catalog.hpp"
#include "lightray/contact.hpp"

using namespace lightray;

TEST_SUITE("contact") {

TEST_CASE("contact value is constant along the ray") {
    const CatalogEntry cat = catalog_lookup("perturbed-minkowski");
    const RayChart chart{cat.metric};
    Vec x(2), u(1);
    x << 0.2, -0.4;
    u << 0.3;
    const LightRay ray = ray_from_coords(chart, x, u);

    JacobiState init;
    init.t = 0.0;
    init.J = Vec(3);
    init.J << 0.4, -0.2, 0.7;
    init.Jp = Vec(3);
    init.Jp << 0.1, 0.3, -0.5;
    // Constancy needs g(J', gamma') = 0 (fields tangent to ray space); cancel
    // the pairing with a timelike frame leg, which pairs to -1 with gamma'.
    const Vec p = ray.anchor.coords;
    const Vec T = ray_tangent(ray).comps;
    const Vec E1 = frame_at(cat.metric, p).col(0);
    init.Jp += inner(cat.metric, p, init.Jp, T) * E1;
    REQUIRE(std::abs(inner(cat.metric, p, init.Jp, T)) < 1e-12);
    const JacobiField f = jacobi_field(cat.metric, ray, init, -1.5, 1.5);

    const double base = inner(cat.metric, p, init.J, T);
    // The anchored reduced formula agrees with the direct pairing.
    CHECK(std::abs(contact_form(cat.metric, ray, reduce_mod_gamma(cat.metric, ray, init)).value -
                   base) < 1e-10);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(-1.5, 1.5);
    for (int k = 0; k < 10; ++k) {
        const double t = U(rng);
        const double v = inner(cat.metric, f.gamma(t), f.at(t).J, f.gamma_prime(t));
        CHECK(std::abs(v - base) < 1e-8);
    }
}

TEST_CASE("flat chart pairing matches the closed form") {
    const CatalogEntry cat = catalog_lookup("minkowski3");
    REQUIRE(cat.contact_exact);
    const RayChart chart{cat.metric};
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    double worst = 0.0;
    for (int k = 0; k < 200; ++k) {
        const double theta = 1.3 * U(rng);
        Vec x(2), u(1), ct(3), xdot(2), udot(1);
        x << U(rng), U(rng);
        u << std::sin(theta);
        ct << U(rng), U(rng), U(rng);
        xdot << ct[0], ct[1];
        udot << std::cos(theta) * ct[2];
        const TangentRayVector cls = chart_tangent_class(chart, x, u, xdot, udot);
        const double val = contact_form(cat.metric, cls.ray, cls).value;
        worst = std::max(worst, std::abs(val - cat.contact_exact(theta, ct)));
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("sky tangents sit inside the contact hyperplane") {
    for (const char* name : {"minkowski3", "perturbed-minkowski"}) {
        const CatalogEntry cat = catalog_lookup(name);
        const RayChart chart{cat.metric};
        Vec x(2), u(1);
        x << 0.1, 0.5;
        u << -0.2;
        const LightRay ray = ray_from_coords(chart, x, u);
        const SkyTangentBasis basis = sky_tangent_basis(cat.metric, ray, 0.4);
        REQUIRE(basis.elements.size() == 1);
        for (const TangentRayVector& e : basis.elements)
            CHECK(std::abs(contact_form(cat.metric, ray, e).value) < 1e-8);
    }
}

TEST_CASE("sky directions are celestial and translations are not") {
    const CatalogEntry cat = catalog_lookup("minkowski3");
    const RayChart chart{cat.metric};
    const Vec x = Vec::Zero(2);
    const Vec u = Vec::Zero(1);  // theta = 0, ray through the origin

    // Rotating the direction while holding the origin fixed stays on the
    // origin's sky: the touch parameter must come out at zero.
    const TangentRayVector sky =
        chart_tangent_class(chart, x, u, Vec(Vec::Zero(2)), Vec(Vec::Ones(1)));
    const auto t_sky = is_celestial(cat.metric, sky.ray, sky, -2.0, 2.0);
    REQUIRE(t_sky.has_value());
    CHECK(std::abs(*t_sky) < 1e-6);

    // A sideways translation of the ray lies in no sky at all.
    Vec xdot(2);
    xdot << 0.0, -1.0;
    const TangentRayVector trans = chart_tangent_class(chart, x, u, xdot, Vec(Vec::Zero(1)));
    CHECK(!is_celestial(cat.metric, trans.ray, trans, -2.0, 2.0).has_value());
}

}  // TEST_SUITE
