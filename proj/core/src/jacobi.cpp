#include "lightray/jacobi.hpp"

#include <cmath>
#include <memory>

namespace lightray {

namespace {

// Joint first-order system for a geodesic and k Jacobi fields along it:
// state (x, v, J_1, P_1, ..., J_k, P_k) with P the covariant derivative.
OdeRhs joint_rhs(const MetricSpec& metric, int k) {
    const int m = metric.dim;
    return [&metric, m, k](double, const Vec& y) -> Vec {
        const Vec x = y.head(m);
        const Vec v = y.segment(m, m);
        if (!metric.inside(x)) throw DomainError("geodesic left the declared chart domain");
        const Tensor3 G = christoffel(metric, x);
        const Tensor4 R = riemann(metric, x);
        Vec dy(y.size());
        dy.head(m) = v;
        for (int a = 0; a < m; ++a) {
            double s = 0.0;
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j) s += G(a, i, j) * v[i] * v[j];
            dy[m + a] = -s;
        }
        for (int f = 0; f < k; ++f) {
            const int oJ = 2 * m + 2 * m * f;
            const int oP = oJ + m;
            const Vec J = y.segment(oJ, m);
            const Vec P = y.segment(oP, m);
            for (int a = 0; a < m; ++a) {
                double cJ = 0.0, cP = 0.0, curv = 0.0;
                for (int i = 0; i < m; ++i) {
                    for (int j = 0; j < m; ++j) {
                        cJ += G(a, i, j) * v[i] * J[j];
                        cP += G(a, i, j) * v[i] * P[j];
                        for (int l = 0; l < m; ++l) curv += R(a, l, i, j) * v[l] * J[i] * v[j];
                    }
                }
                dy[oJ + a] = P[a] - cJ;
                dy[oP + a] = -curv - cP;
            }
        }
        return dy;
    };
}

struct JointDense {
    int m = 0;
    double t_anchor = 0.0;
    std::shared_ptr<const OdeSolution> fwd, bwd;

    Vec eval(double t) const {
        const OdeSolution& s = (t >= t_anchor) ? *fwd : *bwd;
        return s.eval(t);
    }
};

// Integrates the joint system from a state anchored at t_anchor over
// [t_lo, t_hi] (which must contain t_anchor after clamping).
JointDense joint_integrate(const MetricSpec& metric, int k, const Vec& y0, double t_anchor,
                           double t_lo, double t_hi, const GeodesicOptions& opts) {
    OdeOptions oo;
    oo.abs_tol = opts.abs_tol;
    oo.rel_tol = opts.rel_tol;
    oo.max_step = opts.dense_max_step;
    OdeRhs rhs = joint_rhs(metric, k);
    JointDense d;
    d.m = metric.dim;
    d.t_anchor = t_anchor;
    d.fwd = std::make_shared<OdeSolution>(
        integrate(rhs, t_anchor, std::max(t_hi, t_anchor), y0, oo));
    d.bwd = std::make_shared<OdeSolution>(
        integrate(rhs, t_anchor, std::min(t_lo, t_anchor), y0, oo));
    return d;
}

// (x, v) of the ray geodesic at parameter t.
std::pair<Vec, Vec> ray_state_at(const MetricSpec& metric, const LightRay& ray, double t,
                                 const GeodesicOptions& opts) {
    const Vec xi = ray_tangent(ray).comps;
    if (t == 0.0) return {ray.anchor.coords, xi};
    const Vec y = geodesic_solution(metric, ray.anchor.coords, xi, t, opts).y1();
    return {y.head(metric.dim), y.tail(metric.dim)};
}

}  // namespace

JacobiField jacobi_along_geodesic(const MetricSpec& metric, const Vec& p, const Vec& xi,
                                  const JacobiState& init, double t_lo, double t_hi,
                                  const GeodesicOptions& opts) {
    const int m = metric.dim;
    if (init.J.size() != m || init.Jp.size() != m)
        throw DomainError("jacobi state has wrong dimension");
    Vec x = p, v = xi;
    if (init.t != 0.0) {
        const Vec y = geodesic_solution(metric, p, xi, init.t, opts).y1();
        x = y.head(m);
        v = y.tail(m);
    }
    Vec y0(4 * m);
    y0 << x, v, init.J, init.Jp;
    auto d = std::make_shared<JointDense>(
        joint_integrate(metric, 1, y0, init.t, t_lo, t_hi, opts));

    JacobiField f;
    f.t_lo = std::min(t_lo, init.t);
    f.t_hi = std::max(t_hi, init.t);
    f.gamma = [d, m](double t) -> Vec { return d->eval(t).head(m); };
    f.gamma_prime = [d, m](double t) -> Vec { return d->eval(t).segment(m, m); };
    f.at = [d, m](double t) -> JacobiState {
        const Vec y = d->eval(t);
        return {t, y.segment(2 * m, m), y.segment(3 * m, m)};
    };
    return f;
}

JacobiField jacobi_field(const MetricSpec& metric, const LightRay& ray, const JacobiState& init,
                         double t_lo, double t_hi, const GeodesicOptions& opts) {
    return jacobi_along_geodesic(metric, ray.anchor.coords, ray_tangent(ray).comps, init, t_lo,
                                 t_hi, opts);
}

JacobiState propagate_jacobi(const MetricSpec& metric, const LightRay& ray,
                             const JacobiState& init, double t1, const GeodesicOptions& opts) {
    return jacobi_field(metric, ray, init, std::min(init.t, t1), std::max(init.t, t1), opts)
        .at(t1);
}

JacobiField sky_jacobi(const MetricSpec& metric, const LightRay& ray, double tau, const Vec& xi,
                       double t_lo, double t_hi, const GeodesicOptions& opts) {
    if (xi.size() != metric.dim) throw DomainError("sky direction has wrong dimension");
    JacobiState init{tau, Vec::Zero(metric.dim), xi};
    return jacobi_field(metric, ray, init, t_lo, t_hi, opts);
}

TangentRayVector reduce_mod_gamma(const MetricSpec& metric, const LightRay& ray,
                                  const JacobiState& state) {
    const int m = metric.dim;
    Vec x, gp;
    if (state.t == 0.0) {
        x = ray.anchor.coords;
        gp = ray_tangent(ray).comps;
    } else {
        std::tie(x, gp) = ray_state_at(metric, ray, state.t, {});
    }
    const Vec ag = frame_components(metric, x, gp);
    if (ag[0] <= 0.0) throw NumericalError("ray tangent lost future orientation");
    const Vec u = ag.tail(m - 1) / ag[0];
    const Vec aJ = frame_components(metric, x, state.J);
    const Vec aP = frame_components(metric, x, state.Jp);
    TangentRayVector out;
    out.ray = ray;
    out.wbar = aJ.tail(m - 1) - aJ[0] * u;
    out.vbar = aP.tail(m - 1) - aP[0] * u;
    return out;
}

Mat screen_basis(const Vec& u) {
    const int n = static_cast<int>(u.size());
    if (n == 2) {
        Mat s(2, 1);
        s << -u[1], u[0];
        return s;
    }
    const Mat ucol = u;
    Eigen::HouseholderQR<Mat> qr(ucol);
    Mat Q = qr.householderQ();
    return Q.rightCols(n - 1);
}

Vec tn_chart(const RayChart& chart, const LightRay& ray, const JacobiState& state) {
    const int m = chart.metric.dim;
    JacobiState at0 = (state.t == 0.0) ? state : propagate_jacobi(chart.metric, ray, state, 0.0);
    TangentRayVector red = reduce_mod_gamma(chart.metric, ray, at0);
    auto [x, u] = ray_coords(chart, ray);
    Vec out(4 * m - 6);
    out.head(m - 1) = x;
    out.segment(m - 1, m - 2) = u;
    out.segment(2 * m - 3, m - 2) = red.vbar.tail(m - 2);
    out.tail(m - 1) = red.wbar;
    return out;
}

std::pair<LightRay, JacobiState> tn_chart_inverse(const RayChart& chart, const Vec& coords) {
    const int m = chart.metric.dim;
    if (coords.size() != 4 * m - 6) throw ChartError("chart input has wrong dimension");
    const Vec x = coords.head(m - 1);
    const Vec u = coords.segment(m - 1, m - 2);
    const Vec v_ind = coords.segment(2 * m - 3, m - 2);
    const Vec wbar = coords.tail(m - 1);
    LightRay ray = ray_from_coords(chart, x, u);
    // The suppressed entry of vbar follows from orthogonality to the
    // direction: u . vbar = 0.
    Vec vbar(m - 1);
    vbar[0] = -u.dot(v_ind) / ray.direction[0];
    vbar.tail(m - 2) = v_ind;
    const Mat E = frame_at(chart.metric, ray.anchor.coords);
    Vec aJ = Vec::Zero(m), aP = Vec::Zero(m);
    aJ.tail(m - 1) = wbar;
    aP.tail(m - 1) = vbar;
    JacobiState st{0.0, E * aJ, E * aP};
    return {std::move(ray), std::move(st)};
}

TangentRayVector chart_tangent_class(const RayChart& chart, const Vec& x, const Vec& u,
                                     const Vec& xdot, const Vec& udot) {
    const MetricSpec& metric = chart.metric;
    const int m = metric.dim;
    LightRay ray = ray_from_coords(chart, x, u);

    // Anchored tangent along the chart curve eps -> (x + eps xdot, u + eps udot).
    auto tangent_at = [&](double eps) -> Vec {
        LightRay r = ray_from_coords(chart, x + eps * xdot, u + eps * udot);
        return direction_to_tangent(metric, r.anchor.coords, r.direction);
    };
    const double h = 1e-6;
    const Vec T0 = tangent_at(0.0);
    const Vec dT = (tangent_at(h) - tangent_at(-h)) / (2.0 * h);

    Vec J0 = Vec::Zero(m);
    J0.tail(m - 1) = xdot;
    const Tensor3 G = christoffel(metric, ray.anchor.coords);
    Vec Jp0 = dT;
    for (int a = 0; a < m; ++a)
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) Jp0[a] += G(a, i, j) * J0[i] * T0[j];

    return reduce_mod_gamma(metric, ray, {0.0, J0, Jp0});
}

std::pair<Vec, Vec> coordinate_change(const RayChart& chart, const Vec& x, const Vec& u,
                                      const Vec& xdot, const Vec& udot) {
    const int m = chart.metric.dim;
    TangentRayVector red = chart_tangent_class(chart, x, u, xdot, udot);
    return {red.vbar.tail(m - 2), red.wbar};
}

Mat coordinate_change_matrix(const RayChart& chart, const Vec& x, const Vec& u) {
    const int m = chart.metric.dim;
    const int n = 2 * m - 3;
    Mat M(n, n);
    for (int c = 0; c < n; ++c) {
        Vec xdot = Vec::Zero(m - 1), udot = Vec::Zero(m - 2);
        if (c < m - 1)
            xdot[c] = 1.0;
        else
            udot[c - (m - 1)] = 1.0;
        auto [v, w] = coordinate_change(chart, x, u, xdot, udot);
        M.block(0, c, m - 2, 1) = v;
        M.block(m - 2, c, m - 1, 1) = w;
    }
    const Mat A = M.block(m - 2, 0, m - 1, m - 1);
    Eigen::FullPivLU<Mat> lu(A);
    if (!lu.isInvertible())
        throw NumericalError("chart regularity violation: anchor block is singular");
    return M;
}

std::vector<Vec> sky_basis_directions(const MetricSpec& metric, const LightRay& ray, double tau) {
    const int m = metric.dim;
    auto [x, gp] = ray_state_at(metric, ray, tau, {});
    const Mat E = frame_at(metric, x);
    const Vec a = frame_components(metric, x, gp);
    const Vec u = a.tail(m - 1) / a[0];
    const Mat S = screen_basis(u / u.norm());
    std::vector<Vec> out;
    for (int i = 0; i < m - 2; ++i) {
        Vec fr = Vec::Zero(m);
        fr.tail(m - 1) = S.col(i);
        out.push_back(E * fr);
    }
    return out;
}

std::vector<double> conjugate_scan(const MetricSpec& metric, const LightRay& ray, double tau,
                                   double t0, double t1, int grid) {
    if (grid < 2) throw DomainError("conjugate scan needs at least two grid nodes");
    const int m = metric.dim;
    const int k = m - 2;
    const std::vector<Vec> dirs = sky_basis_directions(metric, ray, tau);

    auto [x, v] = ray_state_at(metric, ray, tau, {});
    Vec y0(2 * m + 2 * m * k);
    y0.head(m) = x;
    y0.segment(m, m) = v;
    for (int f = 0; f < k; ++f) {
        y0.segment(2 * m + 2 * m * f, m).setZero();
        y0.segment(3 * m + 2 * m * f, m) = dirs[static_cast<size_t>(f)];
    }
    JointDense d = joint_integrate(metric, k, y0, tau, std::min(t0, tau), std::max(t1, tau), {});

    auto det_at = [&](double t) -> double {
        const Vec y = d.eval(t);
        const Vec xt = y.head(m);
        const Vec vt = y.segment(m, m);
        const Vec a = frame_components(metric, xt, vt);
        const Vec u = a.tail(m - 1) / a[0];
        const Mat S = screen_basis(u / u.norm());
        Mat M(k, k);
        for (int f = 0; f < k; ++f) {
            const Vec aJ = frame_components(metric, xt, y.segment(2 * m + 2 * m * f, m));
            // Screen columns are orthogonal to u, so the reduction term drops.
            M.col(f) = S.transpose() * aJ.tail(m - 1);
        }
        return M.determinant();
    };

    std::vector<double> roots;
    double prev = det_at(t0);
    for (int i = 1; i <= grid; ++i) {
        const double t = t0 + (t1 - t0) * i / grid;
        const double cur = det_at(t);
        if (prev == 0.0 || prev * cur < 0.0) {
            double lo = t0 + (t1 - t0) * (i - 1) / grid, hi = t;
            double flo = prev;
            while (hi - lo > 1e-10) {
                const double mid = 0.5 * (lo + hi);
                const double fm = det_at(mid);
                if (flo * fm <= 0.0)
                    hi = mid;
                else {
                    lo = mid;
                    flo = fm;
                }
            }
            const double r = 0.5 * (lo + hi);
            if (std::abs(r - tau) > 1e-6) roots.push_back(r);
        }
        prev = cur;
    }
    return roots;
}

}  // namespace lightray
