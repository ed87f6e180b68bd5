#include "lightray/isotopy.hpp"

#include <algorithm>
#include <cmath>

namespace lightray {

Vec IsotopyField::base_tangent(const Vec& unit) const {
    Vec a(metric.dim);
    a[0] = 1.0;
    a.tail(metric.dim - 1) = unit;
    return base_frame * a;
}

Vec IsotopyField::transported(int i, int j) const {
    return transports[static_cast<size_t>(j)] * base_tangent(base_units[static_cast<size_t>(i)]);
}

IsotopyField isotopy_from_curve(const MetricSpec& metric, const CurveSample& mu, int n,
                                int s_count) {
    if (n < 4) throw DomainError("sky sampling needs at least four directions");
    if (s_count < 2) throw DomainError("need at least two curve nodes");
    IsotopyField f;
    f.metric = metric;
    f.mu = mu;
    f.s_grid.resize(static_cast<size_t>(s_count));
    for (int j = 0; j < s_count; ++j)
        f.s_grid[static_cast<size_t>(j)] = mu.a + (mu.b - mu.a) * j / (s_count - 1);
    f.base_frame = frame_at(metric, mu.position(mu.a));
    f.base_units = sphere_directions(metric.dim, n);
    f.transports = transport_matrices(metric, mu, f.s_grid);
    return f;
}

LightRay induced_ray(const IsotopyField& field, int i, int j, double horizon) {
    const Vec p = field.mu.position(field.s_grid[static_cast<size_t>(j)]);
    return ray_from_event_direction(field.metric, Event(p), {Event(p), field.transported(i, j)},
                                    horizon);
}

IsotopyProfile sign_profile(const IsotopyField& field) {
    const int n = static_cast<int>(field.base_units.size());
    const int ns = static_cast<int>(field.s_grid.size());
    IsotopyProfile prof;
    prof.s_grid = field.s_grid;
    prof.values.resize(n, ns);
    for (int j = 0; j < ns; ++j) {
        const double s = field.s_grid[static_cast<size_t>(j)];
        const Vec x = field.mu.position(s);
        const Vec mup = field.mu.velocity(s);
        const Mat g = field.metric.g(x);
        for (int i = 0; i < n; ++i) prof.values(i, j) = mup.dot(g * field.transported(i, j));
    }
    return prof;
}

const char* to_string(ProfileClass c) {
    switch (c) {
        case ProfileClass::NonNegative: return "non-negative";
        case ProfileClass::NonPositive: return "non-positive";
        case ProfileClass::Mixed: return "mixed";
        case ProfileClass::Degenerate: return "degenerate";
    }
    return "?";
}

const char* to_string(CausalVerdict v) {
    switch (v) {
        case CausalVerdict::CausalPast: return "causal-past";
        case CausalVerdict::CausalFuture: return "causal-future";
        case CausalVerdict::NotCausal: return "not-causal";
        case CausalVerdict::ConstantCurve: return "constant-curve";
    }
    return "?";
}

CausalClass classify_profile(const IsotopyProfile& profile, double tol) {
    const double maxabs = profile.values.cwiseAbs().maxCoeff();
    const double eff = tol * std::max(1.0, maxabs);
    const double lo = profile.values.minCoeff();
    const double hi = profile.values.maxCoeff();

    CausalClass out;
    if (maxabs <= eff) {
        out.profile = ProfileClass::Degenerate;
        out.verdict = CausalVerdict::ConstantCurve;
        return out;
    }
    if (lo >= -eff) {
        out.profile = ProfileClass::NonNegative;
        out.verdict = CausalVerdict::CausalPast;
    } else if (hi <= eff) {
        out.profile = ProfileClass::NonPositive;
        out.verdict = CausalVerdict::CausalFuture;
    } else {
        out.profile = ProfileClass::Mixed;
        out.verdict = CausalVerdict::NotCausal;
    }

    // Sign sweep over s: a column counts positive when every entry clears
    // -eff and at least one exceeds +eff, symmetrically for negative.
    const int ns = static_cast<int>(profile.s_grid.size());
    auto column_sign = [&](int j) -> int {
        const auto col = profile.values.col(j);
        const double cmin = col.minCoeff(), cmax = col.maxCoeff();
        if (cmin >= -eff && cmax > eff) return 1;
        if (cmax <= eff && cmin < -eff) return -1;
        return 0;
    };
    int run_sign = 0;
    double run_start = 0.0;
    for (int j = 0; j <= ns; ++j) {
        const int sgn = (j < ns) ? column_sign(j) : 2;  // sentinel flush
        if (sgn == run_sign && j < ns) continue;
        if (run_sign == 1)
            out.positive_intervals.emplace_back(run_start, profile.s_grid[static_cast<size_t>(j - 1)]);
        else if (run_sign == -1)
            out.negative_intervals.emplace_back(run_start, profile.s_grid[static_cast<size_t>(j - 1)]);
        if (j < ns) {
            run_sign = sgn;
            run_start = profile.s_grid[static_cast<size_t>(j)];
        }
    }
    return out;
}

DualCausality vector_dual_causality(const MetricSpec& metric, const Event& p, const Vec& v, int n,
                                    double tol) {
    if (v.norm() == 0.0) throw DomainError("cannot classify the zero vector");
    const Mat E = frame_at(metric, p.coords);
    const Mat g = metric.g(p.coords);
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const Vec& d : sphere_directions(metric.dim, n)) {
        Vec a(metric.dim);
        a[0] = 1.0;
        a.tail(metric.dim - 1) = d;
        const double val = v.dot(g * (E * a));
        lo = std::min(lo, val);
        hi = std::max(hi, val);
    }
    const double eff = tol * std::max(1.0, std::sqrt(frame_norm_sq(metric, p.coords, v)));
    DualCausality out;
    out.causal_past = lo >= -eff;
    out.causal_future = hi <= eff;
    out.pointwise = causal_character(metric, {p, v});
    return out;
}

namespace {

struct RootSolver {
    const MetricSpec* metric;
    const GeodesicVariation* var;

    double h(double s, double t) const {
        const Vec x = var->position(s, t);
        const Vec J = var->jacobi(s, t);
        return J.dot(metric->g(x) * J);
    }

    // dh/dt through the covariant derivative of J along the geodesic.
    double hp(double s, double t) const {
        const Vec x = var->position(s, t);
        const Vec J = var->jacobi(s, t);
        const Vec gp = var->velocity(s, t);
        Vec Jc = var->jacobi_velocity(s, t);
        const Tensor3 G = christoffel(*metric, x);
        const int m = metric->dim;
        for (int a = 0; a < m; ++a)
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j) Jc[a] += G(a, i, j) * gp[i] * J[j];
        return 2.0 * Jc.dot(metric->g(x) * J);
    }

    double hpp(double s, double t) const {
        const double dh = 1e-4;
        return (hp(s, t + dh) - hp(s, t - dh)) / (2.0 * dh);
    }

    // Newton on dh/dt: the squared norm touches its zeros tangentially, so
    // the zero itself is located through the derivative, and regularity is
    // measured by the second derivative.
    double solve(double s, double t_seed, bool check_regular) const {
        double t = t_seed;
        const double span = var->t_hi - var->t_lo;
        for (int it = 0; it < 60; ++it) {
            const double d2 = hpp(s, t);
            if (check_regular && std::abs(d2) < 1e-6)
                throw DomainError(
                    "celestial root is degenerate: the recovered curve would not be regular");
            const double step = hp(s, t) / d2;
            t -= step;
            if (t < var->t_lo - span || t > var->t_hi + span)
                throw NumericalError("root continuation lost the branch");
            if (std::abs(step) < 1e-12) {
                const double scale = std::max(1.0, var->jacobi(s, t).squaredNorm());
                if (h(s, t) > 1e-7 * scale)
                    throw NumericalError("root continuation converged off the zero set");
                return t;
            }
        }
        throw NumericalError("root continuation failed to converge");
    }
};

}  // namespace

CelestialRecovery celestial_recover(const MetricSpec& metric, const GeodesicVariation& variation,
                                    double s0, double t0, int s_count) {
    if (s_count < 2) throw DomainError("need at least two curve nodes");
    RootSolver rs{&metric, &variation};
    const double seed_scale = std::max(1.0, variation.jacobi(s0, t0).squaredNorm());
    if (rs.h(s0, t0) > 1e-6 * seed_scale)
        throw DomainError("seed is not on a zero of the squared Jacobi norm");

    CelestialRecovery rec;
    rec.s_nodes.resize(static_cast<size_t>(s_count));
    rec.t_nodes.assign(static_cast<size_t>(s_count), 0.0);
    const double s_lo = variation.s_lo, s_hi = variation.s_hi;
    for (int j = 0; j < s_count; ++j)
        rec.s_nodes[static_cast<size_t>(j)] = s_lo + (s_hi - s_lo) * j / (s_count - 1);

    int j0 = 0;
    for (int j = 1; j < s_count; ++j)
        if (std::abs(rec.s_nodes[static_cast<size_t>(j)] - s0) <
            std::abs(rec.s_nodes[static_cast<size_t>(j0)] - s0))
            j0 = j;

    rec.t_nodes[static_cast<size_t>(j0)] =
        rs.solve(rec.s_nodes[static_cast<size_t>(j0)], rs.solve(s0, t0, true), true);
    for (int j = j0 + 1; j < s_count; ++j) {
        double pred = rec.t_nodes[static_cast<size_t>(j - 1)];
        if (j - 2 >= j0) pred += pred - rec.t_nodes[static_cast<size_t>(j - 2)];
        rec.t_nodes[static_cast<size_t>(j)] =
            rs.solve(rec.s_nodes[static_cast<size_t>(j)], pred, true);
    }
    for (int j = j0 - 1; j >= 0; --j) {
        double pred = rec.t_nodes[static_cast<size_t>(j + 1)];
        if (j + 2 <= j0) pred += pred - rec.t_nodes[static_cast<size_t>(j + 2)];
        rec.t_nodes[static_cast<size_t>(j)] =
            rs.solve(rec.s_nodes[static_cast<size_t>(j)], pred, true);
    }

    // Other zeros of h at the seed parameter: reported, not continued.
    {
        const double tb = rec.t_nodes[static_cast<size_t>(j0)];
        const double sb = rec.s_nodes[static_cast<size_t>(j0)];
        const int ng = 512;
        for (int i = 1; i < ng; ++i) {
            const double t = variation.t_lo + (variation.t_hi - variation.t_lo) * i / ng;
            const double hm = rs.h(sb, t);
            if (hm > 1e-6 * seed_scale) continue;
            if (hm <= rs.h(sb, t - (variation.t_hi - variation.t_lo) / ng) &&
                hm <= rs.h(sb, t + (variation.t_hi - variation.t_lo) / ng)) {
                double r;
                try {
                    r = rs.solve(sb, t, false);
                } catch (const NumericalError&) {
                    continue;
                }
                if (std::abs(r - tb) < 1e-3) continue;
                bool dup = false;
                for (double a : rec.alternates) dup = dup || std::abs(a - r) < 1e-3;
                if (!dup) rec.alternates.push_back(r);
            }
        }
    }

    // Dense curve: interpolate the node table for a predictor, then re-solve.
    auto nodes_s = rec.s_nodes;
    auto nodes_t = rec.t_nodes;
    auto t_at = [rs, nodes_s, nodes_t](double s) -> double {
        const int ns = static_cast<int>(nodes_s.size());
        const double ds = nodes_s[1] - nodes_s[0];
        int j = static_cast<int>(std::floor((s - nodes_s[0]) / ds));
        j = std::clamp(j, 0, ns - 2);
        const double w = (s - nodes_s[static_cast<size_t>(j)]) / ds;
        const double pred = (1.0 - w) * nodes_t[static_cast<size_t>(j)] +
                            w * nodes_t[static_cast<size_t>(j + 1)];
        return rs.solve(s, pred, false);
    };
    const GeodesicVariation* vp = &variation;
    rec.mu = CurveSample::from_position(
        s_lo, s_hi, [vp, t_at](double s) -> Vec { return vp->position(s, t_at(s)); });
    rec.sigma = [vp, t_at](double s) -> Vec { return vp->velocity(s, t_at(s)); };
    return rec;
}

CausalClass classify_celestial_curve(const MetricSpec& metric, const GeodesicVariation& variation,
                                     double s0, double t0, int n, int s_count) {
    CelestialRecovery rec = celestial_recover(metric, variation, s0, t0, s_count);
    IsotopyField field = isotopy_from_curve(metric, rec.mu, n, s_count);
    return classify_profile(sign_profile(field));
}

bool reparam_invariance_check(const IsotopyField& field,
                              const std::function<Vec(double, const Vec&)>& reparam, double tol) {
    const int n = static_cast<int>(field.base_units.size());
    const int ns = static_cast<int>(field.s_grid.size());
    IsotopyProfile orig = sign_profile(field);

    IsotopyProfile re;
    re.s_grid = field.s_grid;
    re.values.resize(n, ns);
    for (int j = 0; j < ns; ++j) {
        const double s = field.s_grid[static_cast<size_t>(j)];
        const Vec x = field.mu.position(s);
        const Vec mup = field.mu.velocity(s);
        const Mat g = field.metric.g(x);
        for (int i = 0; i < n; ++i) {
            Vec unit = reparam(s, field.base_units[static_cast<size_t>(i)]);
            if (std::abs(unit.norm() - 1.0) > 1e-9)
                throw DomainError("sphere map returned a non-unit vector");
            const Vec dir = field.transports[static_cast<size_t>(j)] * field.base_tangent(unit);
            re.values(i, j) = mup.dot(g * dir);
        }
    }
    const CausalClass a = classify_profile(orig, tol);
    const CausalClass b = classify_profile(re, tol);
    return a.profile == b.profile && a.verdict == b.verdict;
}

}  // namespace lightray
