#pragma once

#include "lightray/metric.hpp"
#include "lightray/ode.hpp"
#include "lightray/types.hpp"

namespace lightray {

enum class CausalCharacter {
    Zero,
    Spacelike,
    NullFuture,
    NullPast,
    TimelikeFuture,
    TimelikePast,
};

const char* to_string(CausalCharacter c);

// Finite-difference steps for metric derivatives (first / second order).
inline constexpr double kChristoffelStep = 1e-5;
inline constexpr double kRiemannStep = 1e-4;

/// g(a,b) at p.
double inner(const MetricSpec& metric, const Vec& p, const Vec& a, const Vec& b);

/// Orthonormal frame at p as matrix columns E_1..E_m (E_1 future timelike).
/// Uses the metric's own frame when supplied, else metric Gram-Schmidt of the
/// coordinate basis.
Mat frame_at(const MetricSpec& metric, const Vec& p);

/// Frame components a^i of v, i.e. v = sum a^i E_i: a^1 = -g(v,E_1), a^j = g(v,E_j).
Vec frame_components(const MetricSpec& metric, const Vec& p, const Vec& v);

/// Euclidean norm squared of the frame components; the scale-free size of v.
double frame_norm_sq(const MetricSpec& metric, const Vec& p, const Vec& v);

/// Christoffel symbols Gamma^k_{ij}; closed form when supplied, else central
/// differences of g_ij.
Tensor3 christoffel(const MetricSpec& metric, const Vec& p);

/// Finite-difference route ignoring any closed-form supplier (oracle path).
Tensor3 christoffel_fd(const MetricSpec& metric, const Vec& p, double h = kChristoffelStep);

/// Christoffel symbols assembled from an inverse metric and the coordinate
/// derivatives dg[l] = d g / d x^l; used by catalog entries with analytic
/// metric derivatives.
Tensor3 christoffel_from_metric_derivatives(const Mat& ginv, const std::vector<Mat>& dg);

/// Riemann tensor R^k_{lij} with (R(X,Y)Z)^k = R^k_{lij} Z^l X^i Y^j.
Tensor4 riemann(const MetricSpec& metric, const Vec& p);

/// Riemann from central differences of a Christoffel supplier.
Tensor4 riemann_fd(const MetricSpec& metric, const Vec& p,
                   const std::function<Tensor3(const Vec&)>& gamma, double h = kRiemannStep);

/// Ricci tensor R_{lj} = R^k_{lkj}.
Mat ricci(const MetricSpec& metric, const Vec& p);

/// Scalar curvature g^{lj} R_{lj}.
double scalar_curvature(const MetricSpec& metric, const Vec& p);

/// Cotton tensor C_{ijk} (m = 3 only).
Tensor3 cotton_tensor(const MetricSpec& metric, const Vec& p);

/// All-finite-difference Cotton oracle with Richardson extrapolation over the
/// base step; touches only metric.components.
Tensor3 cotton_tensor_fd_oracle(const MetricSpec& metric, const Vec& p, double h = 1e-2);

struct GeodesicOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    double dense_max_step = 0.02;  // keeps Hermite dense output below ~1e-9
};

/// Solves the geodesic equation with gamma(0) = p, gamma'(0) = xi from t = 0
/// to t_end (either sign); the state vector is (x, v) of size 2m.
OdeSolution geodesic_solution(const MetricSpec& metric, const Vec& p, const Vec& xi, double t_end,
                              const GeodesicOptions& opts = {});

/// Geodesic with gamma(0) = p, gamma'(0) = xi as a densely evaluable curve on
/// [a, b] (the interval may lie on either side of 0).
CurveSample geodesic_flow(const MetricSpec& metric, const Event& p, const TangentVector& xi,
                          double a, double b, const GeodesicOptions& opts = {});

/// Parallel transport of u0 from mu(mu.a) to mu(s) along mu.
TangentVector parallel_transport(const MetricSpec& metric, const CurveSample& mu,
                                 const TangentVector& u0, double s,
                                 const GeodesicOptions& opts = {});

/// Transport matrices P(s_j) mapping coordinate components at mu(mu.a) to
/// parallel-transported components at mu(s_j), for every node of s_grid.
std::vector<Mat> transport_matrices(const MetricSpec& metric, const CurveSample& mu,
                                    const std::vector<double>& s_grid,
                                    const GeodesicOptions& opts = {});

/// Pointwise causal classification of v against the frame time orientation.
CausalCharacter causal_character(const MetricSpec& metric, const TangentVector& v,
                                 double tol = 1e-9);

}  // namespace lightray
