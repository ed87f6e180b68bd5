#include "lightray/catalog.hpp"

#include <cmath>

#include "lightray/geometry.hpp"

namespace lightray {

BumpSpec BumpSpec::default_bump() {
    BumpSpec b;
    b.value = [](double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; };
    b.derivative = [](double t) { return t > 0.0 ? std::exp(-1.0 / t) / (t * t) : 0.0; };
    return b;
}

CatalogEntry make_minkowski(int m) {
    if (m < 3) throw DomainError("flat entry needs dimension >= 3");
    CatalogEntry e;
    e.name = "minkowski" + std::to_string(m);
    e.metric.name = e.name;
    e.metric.dim = m;
    Mat g = Mat::Identity(m, m);
    g(0, 0) = -1.0;
    e.metric.components = [g](const Vec&) { return g; };
    e.metric.christoffel_exact = [m](const Vec&) { return Tensor3(m); };
    e.metric.riemann_exact = [m](const Vec&) { return Tensor4(m); };
    e.metric.frame = [m](const Vec&) { return Mat::Identity(m, m); };
    e.geodesic_exact = [](const Vec& p, const Vec& xi, double t) -> Vec { return p + t * xi; };
    if (m == 3) {
        e.contact_exact = [](double theta, const Vec& ct) {
            return exact_mink3_contact(theta, ct);
        };
    }
    return e;
}

CatalogEntry make_perturbed_minkowski(double eps, const BumpSpec& f) {
    if (eps <= 0.0) throw DomainError("deformation size must be positive");
    if (!f.value || !f.derivative) throw DomainError("bump profile needs value and derivative");
    for (double t : {0.0, -0.5, -1.0, -3.0}) {
        if (f.value(t) != 0.0) throw DomainError("bump profile must vanish for t <= 0");
    }
    auto fval = [eps, fv = f.value](double t) { return eps * fv(t); };
    auto fder = [eps, fd = f.derivative](double t) { return eps * fd(t); };

    CatalogEntry e;
    e.name = "perturbed-minkowski";
    e.metric.name = e.name;
    e.metric.dim = 3;
    e.metric.components = [fval](const Vec& p) {
        const double ft = fval(p[0]);
        Mat g(3, 3);
        g << -(1.0 + ft), ft, 0.0, ft, 1.0 - ft, 0.0, 0.0, 0.0, 1.0;
        return g;
    };
    e.metric.christoffel_exact = [fval, fder](const Vec& p) {
        const double ft = fval(p[0]);
        const double fp = fder(p[0]);
        // det g = -1 identically, so the inverse is closed form.
        Mat ginv(3, 3);
        ginv << ft - 1.0, ft, 0.0, ft, 1.0 + ft, 0.0, 0.0, 0.0, 1.0;
        Mat dgdt(3, 3);
        dgdt << -fp, fp, 0.0, fp, -fp, 0.0, 0.0, 0.0, 0.0;
        std::vector<Mat> dg{dgdt, Mat::Zero(3, 3), Mat::Zero(3, 3)};
        return christoffel_from_metric_derivatives(ginv, dg);
    };
    return e;
}

CatalogEntry make_einstein_static() {
    CatalogEntry e;
    e.name = "einstein-static";
    e.metric.name = e.name;
    e.metric.dim = 3;
    e.metric.in_domain = [](const Vec& p) { return p[1] > 0.1 && p[1] < M_PI - 0.1; };
    e.metric.components = [](const Vec& p) {
        const double s = std::sin(p[1]);
        Mat g = Mat::Zero(3, 3);
        g(0, 0) = -1.0;
        g(1, 1) = 1.0;
        g(2, 2) = s * s;
        return g;
    };
    e.metric.frame = [](const Vec& p) {
        Mat E = Mat::Identity(3, 3);
        E(2, 2) = 1.0 / std::sin(p[1]);
        return E;
    };
    e.metric.christoffel_exact = [](const Vec& p) {
        const double chi = p[1];
        Tensor3 G(3);
        G(1, 2, 2) = -std::sin(chi) * std::cos(chi);
        G(2, 1, 2) = G(2, 2, 1) = std::cos(chi) / std::sin(chi);
        return G;
    };
    e.metric.riemann_exact = [](const Vec& p) {
        // Unit-sphere block: R^k_{lij} = d^k_i h_{lj} - d^k_j h_{li} on the
        // spatial indices, zero whenever the time index enters.
        const double s2 = std::sin(p[1]) * std::sin(p[1]);
        double h[3] = {0.0, 1.0, s2};
        Tensor4 R(3);
        for (int k = 1; k <= 2; ++k)
            for (int l = 1; l <= 2; ++l)
                for (int i = 1; i <= 2; ++i)
                    for (int j = 1; j <= 2; ++j)
                        R(k, l, i, j) = (k == i ? h[l] * (l == j) : 0.0) -
                                        (k == j ? h[l] * (l == i) : 0.0);
        return R;
    };
    e.first_conjugate = M_PI;
    return e;
}

ClosedFormVariation example_mu_variation() {
    ClosedFormVariation v;
    v.m = 3;
    v.s_lo = -2.0;
    v.s_hi = 2.0;
    v.t_lo = -3.0;
    v.t_hi = 3.0;
    v.pos = [](double s, double tau) -> Vec {
        Vec p(3);
        p << tau + 0.5 * s * s, s * std::sin(s) + (1.0 + tau) * std::cos(s),
            -s * std::cos(s) + (1.0 + tau) * std::sin(s);
        return p;
    };
    v.vel = [](double s, double) -> Vec {
        Vec p(3);
        p << 1.0, std::cos(s), std::sin(s);
        return p;
    };
    v.jac = [](double s, double tau) -> Vec {
        Vec p(3);
        p << s, std::sin(s) + s * std::cos(s) - (1.0 + tau) * std::sin(s),
            -std::cos(s) + s * std::sin(s) + (1.0 + tau) * std::cos(s);
        return p;
    };
    v.jac_vel = [](double s, double) -> Vec {
        Vec p(3);
        p << 0.0, -std::sin(s), std::cos(s);
        return p;
    };
    return v;
}

CurveSample example_mu() {
    CurveSample c;
    c.a = -2.0;
    c.b = 2.0;
    c.position = [](double s) -> Vec {
        Vec p(3);
        p << 0.5 * s * s, s * std::sin(s) + std::cos(s), -s * std::cos(s) + std::sin(s);
        return p;
    };
    c.velocity = [](double s) -> Vec {
        Vec p(3);
        p << s, s * std::cos(s), s * std::sin(s);
        return p;
    };
    return c;
}

double example_mu_sign_profile(double theta, double s) {
    return s * (std::cos(s - theta) - 1.0);
}

double exact_mink3_contact(double theta, const Vec& chart_tangent) {
    if (chart_tangent.size() != 3) throw DomainError("chart tangent must have three components");
    return std::cos(theta) * chart_tangent[0] + std::sin(theta) * chart_tangent[1];
}

CatalogEntry catalog_lookup(const std::string& name, double eps) {
    if (name.rfind("minkowski", 0) == 0) {
        const std::string tail = name.substr(9);
        const int m = tail.empty() ? 3 : std::stoi(tail);
        return make_minkowski(m);
    }
    if (name == "perturbed-minkowski") return make_perturbed_minkowski(eps);
    if (name == "einstein-static") return make_einstein_static();
    throw DomainError("unknown catalog entry: " + name);
}

std::vector<std::string> catalog_names() {
    return {"minkowski3", "minkowski4", "perturbed-minkowski", "einstein-static"};
}

}  // namespace lightray
