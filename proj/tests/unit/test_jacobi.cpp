#include <cmath>
#include <random>

#include <doctest.h>

#include "lightray/catalog.hpp"
#include "lightray/jacobi.hpp"

using namespace lightray;

TEST_SUITE("jacobi") {

TEST_CASE("propagation is linear in the initial data") {
    const CatalogEntry cat = catalog_lookup("perturbed-minkowski");
    const RayChart chart{cat.metric};
    Vec x(2), u(1);
    x << 0.2, 0.1;
    u << -0.3;
    const LightRay ray = ray_from_coords(chart, x, u);

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    JacobiState a, b;
    a.t = b.t = 0.0;
    a.J = Vec(3);
    a.Jp = Vec(3);
    b.J = Vec(3);
    b.Jp = Vec(3);
    for (int i = 0; i < 3; ++i) {
        a.J[i] = U(rng);
        a.Jp[i] = U(rng);
        b.J[i] = U(rng);
        b.Jp[i] = U(rng);
    }
    JacobiState comb;
    comb.t = 0.0;
    comb.J = 2.0 * a.J - 0.7 * b.J;
    comb.Jp = 2.0 * a.Jp - 0.7 * b.Jp;

    const JacobiState ra = propagate_jacobi(cat.metric, ray, a, 1.7);
    const JacobiState rb = propagate_jacobi(cat.metric, ray, b, 1.7);
    const JacobiState rc = propagate_jacobi(cat.metric, ray, comb, 1.7);
    CHECK((rc.J - (2.0 * ra.J - 0.7 * rb.J)).norm() < 1e-8);
    CHECK((rc.Jp - (2.0 * ra.Jp - 0.7 * rb.Jp)).norm() < 1e-8);
}

TEST_CASE("flat fields are affine in the parameter") {
    const CatalogEntry cat = catalog_lookup("minkowski3");
    const RayChart chart{cat.metric};
    const LightRay ray = ray_from_coords(chart, Vec::Zero(2), Vec::Zero(1));
    JacobiState init;
    init.t = 0.0;
    init.J = Vec(3);
    init.J << 0.3, -0.1, 0.7;
    init.Jp = Vec(3);
    init.Jp << 0.2, 0.5, -0.4;
    const JacobiField f = jacobi_field(cat.metric, ray, init, -2.0, 2.0);
    for (double t : {-1.7, -0.4, 0.9, 2.0}) {
        const JacobiState s = f.at(t);
        CHECK((s.J - (init.J + t * init.Jp)).norm() < 1e-9);
        CHECK((s.Jp - init.Jp).norm() < 1e-9);
    }
}

TEST_CASE("reduction kills tangential additions") {
    const CatalogEntry cat = catalog_lookup("perturbed-minkowski");
    const RayChart chart{cat.metric};
    Vec x(2), u(1);
    x << -0.1, 0.4;
    u << 0.2;
    const LightRay ray = ray_from_coords(chart, x, u);
    const CurveSample gamma = ray_geodesic(ray, -1.0, 1.0);

    JacobiState st;
    st.t = 0.6;
    st.J = Vec(3);
    st.J << 0.5, 0.1, -0.3;
    st.Jp = Vec(3);
    st.Jp << -0.2, 0.4, 0.6;
    const TangentRayVector base = reduce_mod_gamma(cat.metric, ray, st);

    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> U(-3.0, 3.0);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
        const double a = U(rng), b = U(rng);
        JacobiState shifted = st;
        shifted.J += (a * st.t + b) * gamma.velocity(st.t);
        shifted.Jp += a * gamma.velocity(st.t);
        const TangentRayVector red = reduce_mod_gamma(cat.metric, ray, shifted);
        worst = std::max(worst, (red.wbar - base.wbar).norm() + (red.vbar - base.vbar).norm());
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("tangent bundle chart round trip") {
    const CatalogEntry cat = catalog_lookup("perturbed-minkowski");
    const RayChart chart{cat.metric};
    Vec x(2), u(1);
    x << 0.3, -0.5;
    u << 0.1;
    const LightRay ray = ray_from_coords(chart, x, u);
    JacobiState st;
    st.t = 0.0;
    st.J = Vec(3);
    st.J << 0.0, 0.2, -0.6;
    st.Jp = Vec(3);
    st.Jp << 0.0, 0.15, 0.35;
    // Force a reduced representative with g(J', gamma') = 0; only those are
    // tangent to ray space and representable in the chart.
    const TangentRayVector red = reduce_mod_gamma(cat.metric, ray, st);
    const Vec vbar = red.vbar - red.vbar.dot(ray.direction) * ray.direction;
    const JacobiState rep = [&] {
        JacobiState s;
        s.t = 0.0;
        const Mat E = frame_at(cat.metric, ray.anchor.coords);
        Vec w(3), v(3);
        w << 0.0, red.wbar[0], red.wbar[1];
        v << 0.0, vbar[0], vbar[1];
        s.J = E * w;
        s.Jp = E * v;
        return s;
    }();

    const Vec coords = tn_chart(chart, ray, rep);
    CHECK(coords.size() == 6);
    const auto [ray2, rep2] = tn_chart_inverse(chart, coords);
    CHECK((ray2.anchor.coords - ray.anchor.coords).norm() < 1e-8);
    CHECK((ray2.direction - ray.direction).norm() < 1e-8);
    CHECK((rep2.J - rep.J).norm() < 1e-7);
    CHECK((rep2.Jp - rep.Jp).norm() < 1e-7);
}

TEST_CASE("flat coordinate-change matrix has the expected block form") {
    const CatalogEntry cat = catalog_lookup("minkowski3");
    const RayChart chart{cat.metric};
    Vec x(2), u(1);
    x << 0.2, 0.4;
    u << 0.3;
    const Mat M = coordinate_change_matrix(chart, x, u);
    Mat expect = Mat::Zero(3, 3);
    expect(0, 2) = 1.0;  // w_ind = udot
    expect(1, 0) = 1.0;  // v = xdot block A = identity
    expect(2, 1) = 1.0;
    CHECK((M - expect).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("coordinate-change anchor block stays regular off the flat case") {
    const CatalogEntry cat = catalog_lookup("perturbed-minkowski");
    const RayChart chart{cat.metric};
    Vec x(2), u(1);
    x << 0.6, -0.2;
    u << -0.4;
    CHECK_NOTHROW(coordinate_change_matrix(chart, x, u));
}

TEST_CASE("flat space has no conjugate points") {
    const CatalogEntry cat = catalog_lookup("minkowski3");
    const RayChart chart{cat.metric};
    const LightRay ray = ray_from_coords(chart, Vec::Zero(2), Vec::Zero(1));
    CHECK(conjugate_scan(cat.metric, ray, 0.0, 0.3, 5.0, 200).empty());
}

TEST_CASE("static cylinder rays refocus at affine distance pi") {
    const CatalogEntry cat = catalog_lookup("einstein-static");
    LightRay ray;
    ray.metric = cat.metric;
    ray.anchor = Event{0.0, std::acos(-1.0) / 2, 0.0};
    ray.direction = Vec(2);
    ray.direction << 0.0, 1.0;  // along the equator, which stays inside the chi band
    const auto roots = conjugate_scan(cat.metric, ray, 0.0, 0.5, 4.0, 300);
    REQUIRE(!roots.empty());
    CHECK(std::abs(roots.front() - std::acos(-1.0)) < 1e-3);
}

}  // TEST_SUITE
