#include "lightray/contact.hpp"

#include <algorithm>
#include <cmath>

namespace lightray {

ContactValue contact_form(const MetricSpec&, const LightRay& ray, const TangentRayVector& cls) {
    // The anchored tangent has frame components (1, u), so the pairing with
    // the reduced representative (first frame component zero) collapses to a
    // Euclidean dot product; constancy along the ray is automatic.
    ContactValue cv;
    cv.value = cls.wbar.dot(ray.direction);
    cv.sign = (cv.value > 0.0) - (cv.value < 0.0);
    return cv;
}

JacobiState class_representative(const MetricSpec& metric, const TangentRayVector& cls) {
    const int m = metric.dim;
    const Mat E = frame_at(metric, cls.ray.anchor.coords);
    Vec aJ = Vec::Zero(m), aP = Vec::Zero(m);
    aJ.tail(m - 1) = cls.wbar;
    aP.tail(m - 1) = cls.vbar;
    return {0.0, E * aJ, E * aP};
}

SkyTangentBasis sky_tangent_basis(const MetricSpec& metric, const LightRay& ray, double s0) {
    const int m = metric.dim;
    SkyTangentBasis basis;
    basis.ray = ray;
    basis.s0 = s0;
    for (const Vec& xi : sky_basis_directions(metric, ray, s0)) {
        JacobiField f = sky_jacobi(metric, ray, s0, xi, std::min(0.0, s0), std::max(0.0, s0));
        basis.elements.push_back(reduce_mod_gamma(metric, ray, f.at(0.0)));
    }
    Mat M(2 * (m - 1), m - 2);
    for (int i = 0; i < m - 2; ++i) {
        M.col(i).head(m - 1) = basis.elements[static_cast<size_t>(i)].vbar;
        M.col(i).tail(m - 1) = basis.elements[static_cast<size_t>(i)].wbar;
    }
    Eigen::JacobiSVD<Mat> svd(M);
    if (svd.singularValues().minCoeff() < 1e-8)
        throw NumericalError("degenerate sky tangent basis");
    return basis;
}

std::optional<double> is_celestial(const MetricSpec& metric, const LightRay& ray,
                                   const TangentRayVector& cls, double t0, double t1, int grid) {
    if (grid < 8) throw DomainError("celestial search needs a finer grid");
    const double size2 = std::max(1.0, cls.vbar.squaredNorm() + cls.wbar.squaredNorm());
    if (std::abs(contact_form(metric, ray, cls).value) > 1e-8 * std::sqrt(size2))
        return std::nullopt;

    JacobiField f = jacobi_field(metric, ray, class_representative(metric, cls), t0, t1);
    auto h = [&](double t) {
        const JacobiState st = f.at(t);
        return inner(metric, f.gamma(t), st.J, st.J);
    };
    auto hp = [&](double t) {
        const JacobiState st = f.at(t);
        return 2.0 * inner(metric, f.gamma(t), st.Jp, st.J);
    };

    const double tol_h = 1e-7 * size2;
    auto accept = [&](double t) -> bool {
        if (h(t) > tol_h) return false;
        // Proportionality to gamma': the reduced value must vanish.
        const TangentRayVector red = reduce_mod_gamma(metric, ray, f.at(t));
        return red.wbar.norm() < 1e-7 * std::sqrt(size2);
    };

    if (accept(t0)) return t0;
    double prev = hp(t0);
    for (int i = 1; i <= grid; ++i) {
        const double t = t0 + (t1 - t0) * i / grid;
        const double cur = hp(t);
        // h >= 0 touches its zeros tangentially, so look for minima: the
        // derivative crossing from non-positive to non-negative.
        if (prev <= 0.0 && cur >= 0.0 && (prev != 0.0 || cur != 0.0)) {
            double lo = t0 + (t1 - t0) * (i - 1) / grid, hi = t;
            for (int it = 0; it < 100 && hi - lo > 1e-12; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (hp(mid) >= 0.0)
                    hi = mid;
                else
                    lo = mid;
            }
            const double r = 0.5 * (lo + hi);
            if (accept(r)) return r;
        }
        prev = cur;
    }
    if (accept(t1)) return t1;
    return std::nullopt;
}

}  // namespace lightray
