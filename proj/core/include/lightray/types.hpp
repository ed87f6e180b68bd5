#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

namespace lightray {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Thrown when an input or intermediate value leaves the domain where an
// operation is defined (singular metric, chart boundary, missing crossing).
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when an iterative numerical procedure fails to converge.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Chart-specific domain failure (e.g. hemisphere condition u^2 <= 0).
struct ChartError : DomainError {
    using DomainError::DomainError;
};

struct Event {
    Vec coords;

    Event() = default;
    explicit Event(Vec c) : coords(std::move(c)) {}
    Event(std::initializer_list<double> c) : coords(Eigen::Map<const Vec>(c.begin(), static_cast<long>(c.size()))) {}

    int dim() const { return static_cast<int>(coords.size()); }
};

struct TangentVector {
    Event base;
    Vec comps;  // coordinate-basis components

    TangentVector() = default;
    TangentVector(Event b, Vec c) : base(std::move(b)), comps(std::move(c)) {}

    int dim() const { return static_cast<int>(comps.size()); }
};

// Rank-3 array T^k_{ij}, stored dense; n is the common dimension.
struct Tensor3 {
    int n = 0;
    std::vector<double> a;

    Tensor3() = default;
    explicit Tensor3(int dim) : n(dim), a(static_cast<size_t>(dim) * dim * dim, 0.0) {}

    double& operator()(int k, int i, int j) { return a[static_cast<size_t>((k * n + i) * n + j)]; }
    double operator()(int k, int i, int j) const { return a[static_cast<size_t>((k * n + i) * n + j)]; }

    double max_abs() const {
        double m = 0.0;
        for (double x : a) m = std::max(m, std::abs(x));
        return m;
    }
};

// Rank-4 array T^k_{lij}.
struct Tensor4 {
    int n = 0;
    std::vector<double> a;

    Tensor4() = default;
    explicit Tensor4(int dim) : n(dim), a(static_cast<size_t>(dim) * dim * dim * dim, 0.0) {}

    double& operator()(int k, int l, int i, int j) {
        return a[static_cast<size_t>(((k * n + l) * n + i) * n + j)];
    }
    double operator()(int k, int l, int i, int j) const {
        return a[static_cast<size_t>(((k * n + l) * n + i) * n + j)];
    }

    double max_abs() const {
        double m = 0.0;
        for (double x : a) m = std::max(m, std::abs(x));
        return m;
    }
};

}  // namespace lightray
