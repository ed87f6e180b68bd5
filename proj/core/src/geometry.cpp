#include "lightray/geometry.hpp"

#include <cmath>
#include <memory>

namespace lightray {

const char* to_string(CausalCharacter c) {
    switch (c) {
        case CausalCharacter::Zero: return "zero";
        case CausalCharacter::Spacelike: return "spacelike";
        case CausalCharacter::NullFuture: return "null-future";
        case CausalCharacter::NullPast: return "null-past";
        case CausalCharacter::TimelikeFuture: return "timelike-future";
        case CausalCharacter::TimelikePast: return "timelike-past";
    }
    return "?";
}

double inner(const MetricSpec& metric, const Vec& p, const Vec& a, const Vec& b) {
    return a.dot(metric.g(p) * b);
}

Mat frame_at(const MetricSpec& metric, const Vec& p) {
    if (metric.frame) return metric.frame(p);
    const int m = metric.dim;
    const Mat g = metric.g(p);
    Mat E(m, m);
    // Metric Gram-Schmidt of the coordinate basis, timelike leg first.
    for (int j = 0; j < m; ++j) {
        Vec w = Vec::Zero(m);
        w[j] = 1.0;
        for (int i = 0; i < j; ++i) {
            const Vec Ei = E.col(i);
            const double c = Ei.dot(g * w);
            w -= (i == 0 ? -c : c) * Ei;  // g(E_1,E_1) = -1
        }
        double q = w.dot(g * w);
        if (j == 0) {
            if (q >= 0.0) throw DomainError("coordinate basis has no timelike first leg at probe");
            w /= std::sqrt(-q);
        } else {
            if (q <= 0.0) throw DomainError("degenerate metric during frame construction");
            w /= std::sqrt(q);
        }
        E.col(j) = w;
    }
    return E;
}

Vec frame_components(const MetricSpec& metric, const Vec& p, const Vec& v) {
    const Mat E = frame_at(metric, p);
    const Mat g = metric.g(p);
    const int m = metric.dim;
    Vec a(m);
    for (int i = 0; i < m; ++i) {
        const double c = v.dot(g * E.col(i));
        a[i] = (i == 0) ? -c : c;
    }
    return a;
}

double frame_norm_sq(const MetricSpec& metric, const Vec& p, const Vec& v) {
    return frame_components(metric, p, v).squaredNorm();
}

namespace {

Mat inverse_metric(const MetricSpec& metric, const Vec& p) {
    const Mat g = metric.g(p);
    Eigen::FullPivLU<Mat> lu(g);
    if (!lu.isInvertible()) throw DomainError("singular metric matrix at probe point");
    return lu.inverse();
}

Tensor3 christoffel_from_dg(const Mat& ginv, const std::vector<Mat>& dg, int m) {
    Tensor3 gamma(m);
    for (int k = 0; k < m; ++k)
        for (int i = 0; i < m; ++i)
            for (int j = i; j < m; ++j) {
                double s = 0.0;
                for (int l = 0; l < m; ++l)
                    s += ginv(k, l) * (dg[i](l, j) + dg[j](l, i) - dg[l](i, j));
                gamma(k, i, j) = 0.5 * s;
                gamma(k, j, i) = gamma(k, i, j);
            }
    return gamma;
}

}  // namespace

Tensor3 christoffel_from_metric_derivatives(const Mat& ginv, const std::vector<Mat>& dg) {
    return christoffel_from_dg(ginv, dg, static_cast<int>(ginv.rows()));
}

Tensor3 christoffel_fd(const MetricSpec& metric, const Vec& p, double h) {
    const int m = metric.dim;
    std::vector<Mat> dg(m);
    for (int l = 0; l < m; ++l) {
        Vec pp = p, pm = p;
        pp[l] += h;
        pm[l] -= h;
        dg[l] = (metric.g(pp) - metric.g(pm)) / (2.0 * h);
    }
    return christoffel_from_dg(inverse_metric(metric, p), dg, m);
}

Tensor3 christoffel(const MetricSpec& metric, const Vec& p) {
    if (metric.christoffel_exact) return metric.christoffel_exact(p);
    return christoffel_fd(metric, p, kChristoffelStep);
}

Tensor4 riemann_fd(const MetricSpec& metric, const Vec& p,
                   const std::function<Tensor3(const Vec&)>& gamma, double h) {
    const int m = metric.dim;
    std::vector<Tensor3> dG;
    dG.reserve(m);
    for (int i = 0; i < m; ++i) {
        Vec pp = p, pm = p;
        pp[i] += h;
        pm[i] -= h;
        Tensor3 gp = gamma(pp), gm = gamma(pm);
        Tensor3 d(m);
        for (size_t a = 0; a < d.a.size(); ++a) d.a[a] = (gp.a[a] - gm.a[a]) / (2.0 * h);
        dG.push_back(std::move(d));
    }
    const Tensor3 G = gamma(p);
    Tensor4 R(m);
    for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l)
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j) {
                    double s = dG[i](k, j, l) - dG[j](k, i, l);
                    for (int n = 0; n < m; ++n)
                        s += G(k, i, n) * G(n, j, l) - G(k, j, n) * G(n, i, l);
                    R(k, l, i, j) = s;
                }
    return R;
}

Tensor4 riemann(const MetricSpec& metric, const Vec& p) {
    if (metric.riemann_exact) return metric.riemann_exact(p);
    return riemann_fd(
        metric, p, [&metric](const Vec& q) { return christoffel(metric, q); }, kRiemannStep);
}

Mat ricci(const MetricSpec& metric, const Vec& p) {
    const int m = metric.dim;
    const Tensor4 R = riemann(metric, p);
    Mat ric(m, m);
    for (int l = 0; l < m; ++l)
        for (int j = 0; j < m; ++j) {
            double s = 0.0;
            for (int k = 0; k < m; ++k) s += R(k, l, k, j);
            ric(l, j) = s;
        }
    return ric;
}

double scalar_curvature(const MetricSpec& metric, const Vec& p) {
    return (inverse_metric(metric, p) * ricci(metric, p)).trace();
}

namespace {

// Cotton tensor with explicit derivative step for the Ricci gradient; shared
// by the production path and the oracle pipeline.
Tensor3 cotton_with_step(const MetricSpec& metric, const Vec& p, double h_out) {
    if (metric.dim != 3) throw DomainError("cotton tensor requires metric dimension 3");
    const int m = 3;
    const Mat g = metric.g(p);
    const Tensor3 G = christoffel(metric, p);

    std::vector<Mat> dric(m);
    Vec dscal(m);
    for (int k = 0; k < m; ++k) {
        Vec pp = p, pm = p;
        pp[k] += h_out;
        pm[k] -= h_out;
        dric[k] = (ricci(metric, pp) - ricci(metric, pm)) / (2.0 * h_out);
        dscal[k] = (scalar_curvature(metric, pp) - scalar_curvature(metric, pm)) / (2.0 * h_out);
    }
    const Mat ric = ricci(metric, p);

    // nabla_k R_ij = d_k R_ij - Gamma^l_{ki} R_lj - Gamma^l_{kj} R_il
    auto cov = [&](int k, int i, int j) {
        double s = dric[k](i, j);
        for (int l = 0; l < m; ++l) s -= G(l, k, i) * ric(l, j) + G(l, k, j) * ric(i, l);
        return s;
    };

    Tensor3 C(m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k)
                C(i, j, k) = cov(k, i, j) - cov(j, i, k) +
                             0.25 * (dscal[j] * g(i, k) - dscal[k] * g(i, j));
    return C;
}

}  // namespace

Tensor3 cotton_tensor(const MetricSpec& metric, const Vec& p) {
    return cotton_with_step(metric, p, 1e-3);
}

Tensor3 cotton_tensor_fd_oracle(const MetricSpec& metric, const Vec& p, double h) {
    // Strip closed-form suppliers so every derivative comes from g alone.
    MetricSpec fd;
    fd.name = metric.name;
    fd.dim = metric.dim;
    fd.components = metric.components;

    auto pipeline = [&fd, &p](double step) {
        MetricSpec tier = fd;
        tier.christoffel_exact = [&fd, step](const Vec& q) { return christoffel_fd(fd, q, step); };
        // riemann() -> riemann_fd over that Christoffel at kRiemannStep; force
        // the same step instead for a clean h^2 expansion.
        MetricSpec tier2 = tier;
        tier2.riemann_exact = [tier, step](const Vec& q) {
            return riemann_fd(
                tier, q, [&tier](const Vec& r) { return tier.christoffel_exact(r); }, step);
        };
        return cotton_with_step(tier2, p, step);
    };

    Tensor3 ch = pipeline(h), ch2 = pipeline(h / 2);
    Tensor3 out(metric.dim);
    for (size_t a = 0; a < out.a.size(); ++a) out.a[a] = (4.0 * ch2.a[a] - ch.a[a]) / 3.0;
    return out;
}

OdeSolution geodesic_solution(const MetricSpec& metric, const Vec& p, const Vec& xi, double t_end,
                              const GeodesicOptions& opts) {
    const int m = metric.dim;
    auto rhs = [&metric, m](double, const Vec& y) -> Vec {
        const Vec x = y.head(m);
        const Vec v = y.tail(m);
        if (!metric.inside(x)) throw DomainError("geodesic left the declared chart domain");
        const Tensor3 G = christoffel(metric, x);
        Vec dy(2 * m);
        dy.head(m) = v;
        for (int k = 0; k < m; ++k) {
            double s = 0.0;
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j) s += G(k, i, j) * v[i] * v[j];
            dy[m + k] = -s;
        }
        return dy;
    };
    Vec y0(2 * m);
    y0.head(m) = p;
    y0.tail(m) = xi;
    OdeOptions oo;
    oo.abs_tol = opts.abs_tol;
    oo.rel_tol = opts.rel_tol;
    oo.max_step = opts.dense_max_step;
    return integrate(rhs, 0.0, t_end, y0, oo);
}

CurveSample geodesic_flow(const MetricSpec& metric, const Event& p, const TangentVector& xi,
                          double a, double b, const GeodesicOptions& opts) {
    if (xi.comps.norm() == 0.0) throw DomainError("geodesic_flow requires a nonzero direction");
    const int m = metric.dim;
    auto fwd = std::make_shared<OdeSolution>(
        geodesic_solution(metric, p.coords, xi.comps, std::max(b, 0.0), opts));
    auto bwd = std::make_shared<OdeSolution>(
        geodesic_solution(metric, p.coords, xi.comps, std::min(a, 0.0), opts));
    CurveSample c;
    c.a = a;
    c.b = b;
    c.position = [fwd, bwd, m](double t) -> Vec {
        const OdeSolution& s = (t >= 0.0) ? *fwd : *bwd;
        return s.eval(t).head(m);
    };
    c.velocity = [fwd, bwd, m](double t) -> Vec {
        const OdeSolution& s = (t >= 0.0) ? *fwd : *bwd;
        return s.eval(t).tail(m);
    };
    return c;
}

namespace {

OdeRhs transport_rhs(const MetricSpec& metric, const CurveSample& mu, int cols) {
    const int m = metric.dim;
    return [&metric, &mu, m, cols](double s, const Vec& y) -> Vec {
        const Vec x = mu.position(s);
        const Vec v = mu.velocity(s);
        const Tensor3 G = christoffel(metric, x);
        Vec dy(m * cols);
        for (int c = 0; c < cols; ++c)
            for (int k = 0; k < m; ++k) {
                double t = 0.0;
                for (int i = 0; i < m; ++i)
                    for (int j = 0; j < m; ++j) t += G(k, i, j) * v[i] * y[c * m + j];
                dy[c * m + k] = -t;
            }
        return dy;
    };
}

}  // namespace

TangentVector parallel_transport(const MetricSpec& metric, const CurveSample& mu,
                                 const TangentVector& u0, double s, const GeodesicOptions& opts) {
    OdeOptions oo;
    oo.abs_tol = opts.abs_tol;
    oo.rel_tol = opts.rel_tol;
    oo.max_step = 0.1;
    OdeSolution sol = integrate(transport_rhs(metric, mu, 1), mu.a, s, u0.comps, oo);
    return {Event(mu.position(s)), sol.y1()};
}

std::vector<Mat> transport_matrices(const MetricSpec& metric, const CurveSample& mu,
                                    const std::vector<double>& s_grid,
                                    const GeodesicOptions& opts) {
    const int m = metric.dim;
    OdeOptions oo;
    oo.abs_tol = opts.abs_tol;
    oo.rel_tol = opts.rel_tol;
    oo.max_step = 0.1;
    OdeRhs rhs = transport_rhs(metric, mu, m);
    Vec y = Vec::Zero(m * m);
    for (int i = 0; i < m; ++i) y[i * m + i] = 1.0;  // columns = coordinate basis

    std::vector<Mat> out;
    out.reserve(s_grid.size());
    double cur = mu.a;
    for (double s : s_grid) {
        if (s != cur) {
            y = integrate(rhs, cur, s, y, oo).y1();
            cur = s;
        }
        Mat P(m, m);
        for (int c = 0; c < m; ++c) P.col(c) = y.segment(c * m, m);
        out.push_back(P);
    }
    return out;
}

CausalCharacter causal_character(const MetricSpec& metric, const TangentVector& v, double tol) {
    const Vec& p = v.base.coords;
    const Vec a = frame_components(metric, p, v.comps);
    const double fr = a.squaredNorm();
    if (fr < tol) return CausalCharacter::Zero;
    const double q = inner(metric, p, v.comps, v.comps);
    const double time = -a[0];  // g(v, E_1)
    if (std::abs(q) < tol * std::max(1.0, fr)) {
        return (time < 0.0) ? CausalCharacter::NullFuture : CausalCharacter::NullPast;
    }
    if (q < 0.0) return (time < 0.0) ? CausalCharacter::TimelikeFuture : CausalCharacter::TimelikePast;
    return CausalCharacter::Spacelike;
}

}  // namespace lightray
