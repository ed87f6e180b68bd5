#include "lightray/rays.hpp"

#include <cmath>
#include <limits>
#include <optional>

namespace lightray {

Vec direction_to_tangent(const MetricSpec& metric, const Vec& p, const Vec& unit) {
    if (unit.size() != metric.dim - 1) throw DomainError("direction has wrong dimension");
    const Mat E = frame_at(metric, p);
    Vec a(metric.dim);
    a[0] = 1.0;
    a.tail(metric.dim - 1) = unit;
    return E * a;
}

TangentVector ray_tangent(const LightRay& ray) {
    return {ray.anchor, direction_to_tangent(ray.metric, ray.anchor.coords, ray.direction)};
}

CurveSample ray_geodesic(const LightRay& ray, double t_lo, double t_hi,
                         const GeodesicOptions& opts) {
    return geodesic_flow(ray.metric, ray.anchor, ray_tangent(ray), t_lo, t_hi, opts);
}

namespace {

// Coarse crossing of {x^1 = 0} in one time direction, expanding the searched
// span geometrically up to the horizon.
std::optional<double> coarse_crossing(const MetricSpec& metric, const Vec& p, const Vec& xi,
                                      double dir, double horizon) {
    GeodesicOptions go;
    go.abs_tol = 1e-8;
    go.rel_tol = 1e-8;
    go.dense_max_step = 0.5;
    double span = 8.0;
    for (;;) {
        span = std::min(span, horizon);
        try {
            OdeSolution sol = geodesic_solution(metric, p, xi, dir * span, go);
            auto t = find_event(sol, [](double, const Vec& y) { return y[0]; });
            if (t) return t;
        } catch (const DomainError&) {
            return std::nullopt;  // left the declared domain before crossing
        }
        if (span >= horizon) return std::nullopt;
        span *= 4.0;
    }
}

}  // namespace

LightRay ray_from_event_direction(const MetricSpec& metric, const Event& p,
                                  const TangentVector& xi, double horizon) {
    const int m = metric.dim;
    if (causal_character(metric, {p, xi.comps}) != CausalCharacter::NullFuture)
        throw DomainError("direction is not null future at the base event");

    double tc = 0.0;
    if (std::abs(p.coords[0]) > 1e-13) {
        const double v0 = xi.comps[0];
        const double primary = (v0 != 0.0 && -p.coords[0] / v0 >= 0.0) ? 1.0 : -1.0;
        auto t = coarse_crossing(metric, p.coords, xi.comps, primary, horizon);
        if (!t) t = coarse_crossing(metric, p.coords, xi.comps, -primary, horizon);
        if (!t) throw DomainError("ray does not cross the reference surface within the horizon");
        tc = *t;
    }

    // Newton correction on x^1(t) with an accurate endpoint integration.
    GeodesicOptions acc;
    acc.dense_max_step = std::numeric_limits<double>::infinity();
    Vec y;
    for (int it = 0; it < 6; ++it) {
        y = geodesic_solution(metric, p.coords, xi.comps, tc, acc).y1();
        if (std::abs(y[0]) < 1e-13) break;
        if (y[m] == 0.0) throw NumericalError("tangent grazes the reference surface");
        tc -= y[0] / y[m];
    }
    Vec q = y.head(m);
    const Vec vq = y.tail(m);
    q[0] = 0.0;

    Vec a = frame_components(metric, q, vq);
    if (a[0] <= 0.0) throw NumericalError("lost future orientation during canonicalization");
    Vec u = a.tail(m - 1) / a[0];
    u /= u.norm();
    return {metric, Event(q), u};
}

std::pair<Vec, Vec> ray_coords(const RayChart& chart, const LightRay& ray) {
    const int m = chart.metric.dim;
    if (!chart.metric.inside(ray.anchor.coords))
        throw ChartError("ray anchor outside the chart domain");
    if (ray.direction[0] <= 0.0)
        throw ChartError("direction outside the hemisphere chart (u^2 <= 0)");
    return {ray.anchor.coords.tail(m - 1), ray.direction.tail(m - 2)};
}

LightRay ray_from_coords(const RayChart& chart, const Vec& x, const Vec& u) {
    const int m = chart.metric.dim;
    if (x.size() != m - 1 || u.size() != m - 2) throw ChartError("chart input has wrong dimension");
    const double s2 = 1.0 - u.squaredNorm();
    if (s2 <= 0.0) throw ChartError("direction outside the hemisphere chart (u^2 <= 0)");
    Vec dir(m - 1);
    dir[0] = std::sqrt(s2);
    dir.tail(m - 2) = u;
    Vec anchor = Vec::Zero(m);
    anchor.tail(m - 1) = x;
    if (!chart.metric.inside(anchor)) throw ChartError("anchor outside the chart domain");
    return {chart.metric, Event(anchor), dir};
}

double ray_angle(const LightRay& ray) {
    if (ray.direction.size() != 2) throw ChartError("angle chart needs dimension 3");
    return std::atan2(ray.direction[1], ray.direction[0]);
}

LightRay ray_from_angle(const RayChart& chart, const Vec& x, double theta) {
    if (chart.metric.dim != 3) throw ChartError("angle chart needs dimension 3");
    if (x.size() != 2) throw ChartError("chart input has wrong dimension");
    Vec dir(2);
    dir << std::cos(theta), std::sin(theta);
    Vec anchor = Vec::Zero(3);
    anchor.tail(2) = x;
    return {chart.metric, Event(anchor), dir};
}

std::vector<Vec> sphere_directions(int m, int n) {
    if (n < 1) throw DomainError("need at least one sphere sample");
    std::vector<Vec> out;
    out.reserve(static_cast<size_t>(n));
    if (m == 3) {
        for (int i = 0; i < n; ++i) {
            const double th = 2.0 * M_PI * i / n;
            Vec d(2);
            d << std::cos(th), std::sin(th);
            out.push_back(d);
        }
    } else if (m == 4) {
        const double ga = M_PI * (3.0 - std::sqrt(5.0));
        for (int i = 0; i < n; ++i) {
            const double z = 1.0 - 2.0 * (i + 0.5) / n;
            const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
            Vec d(3);
            d << r * std::cos(ga * i), r * std::sin(ga * i), z;
            out.push_back(d);
        }
    } else {
        throw DomainError("sphere sampling implemented for dimensions 3 and 4");
    }
    return out;
}

std::vector<LightRay> sky_sample(const MetricSpec& metric, const Event& p, int n, double horizon) {
    if (n < 1) throw DomainError("need at least one sky sample");
    const Mat E = frame_at(metric, p.coords);
    std::vector<LightRay> out;
    out.reserve(static_cast<size_t>(n));
    for (const Vec& d : sphere_directions(metric.dim, n)) {
        Vec a(metric.dim);
        a[0] = 1.0;
        a.tail(metric.dim - 1) = d;
        out.push_back(ray_from_event_direction(metric, p, {p, E * a}, horizon));
    }
    return out;
}

double ray_point_distance(const LightRay& ray, const Vec& q, double t_lo, double t_hi) {
    CurveSample c = ray_geodesic(ray, t_lo, t_hi);
    auto d2 = [&](double t) { return (c.position(t) - q).squaredNorm(); };
    const int n = 256;
    int best = 0;
    double bestv = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= n; ++i) {
        const double v = d2(t_lo + (t_hi - t_lo) * i / n);
        if (v < bestv) {
            bestv = v;
            best = i;
        }
    }
    const double h = (t_hi - t_lo) / n;
    double lo = t_lo + h * std::max(0, best - 1);
    double hi = t_lo + h * std::min(n, best + 1);
    // Golden-section refinement.
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = d2(x1), f2 = d2(x2);
    for (int it = 0; it < 80 && hi - lo > 1e-13; ++it) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = d2(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = d2(x2);
        }
    }
    return std::sqrt(std::min(f1, f2));
}

}  // namespace lightray
