#include <benchmark/benchmark.h>

#include "lightray/catalog.hpp"
#include "lightray/isotopy.hpp"
#include "lightray/jacobi.hpp"

using namespace lightray;

static void BM_geodesic_flow(benchmark::State& state) {
    const CatalogEntry cat = catalog_lookup("perturbed-minkowski");
    Vec p(3), xi(3);
    p << -0.5, 0.2, 0.1;
    xi << 1.0, 0.8, 0.6;
    for (auto _ : state) {
        const CurveSample gamma = geodesic_flow(cat.metric, Event(p), {Event(p), xi}, 0.0, 5.0);
        benchmark::DoNotOptimize(gamma.position(3.7));
    }
}
BENCHMARK(BM_geodesic_flow);

static void BM_propagate_jacobi(benchmark::State& state) {
    const CatalogEntry cat = catalog_lookup("perturbed-minkowski");
    const RayChart chart{cat.metric};
    Vec x(2), u(1);
    x << 0.2, 0.1;
    u << -0.3;
    const LightRay ray = ray_from_coords(chart, x, u);
    JacobiState init;
    init.t = 0.0;
    init.J = Vec(3);
    init.J << 0.3, -0.1, 0.7;
    init.Jp = Vec(3);
    init.Jp << 0.2, 0.5, -0.4;
    for (auto _ : state) {
        const JacobiState out = propagate_jacobi(cat.metric, ray, init, 2.0);
        benchmark::DoNotOptimize(out.J);
    }
}
BENCHMARK(BM_propagate_jacobi);

static void BM_sign_profile(benchmark::State& state) {
    const CatalogEntry cat = catalog_lookup("minkowski3");
    const CurveSample mu = example_mu();
    const IsotopyField field = isotopy_from_curve(cat.metric, mu, 32, 51);
    for (auto _ : state) {
        const IsotopyProfile prof = sign_profile(field);
        benchmark::DoNotOptimize(prof.values);
    }
}
BENCHMARK(BM_sign_profile);

BENCHMARK_MAIN();
