#pragma once

#include "geoext/tensor.hpp"

#include <functional>

namespace geoext {

using PointFn = std::function<Vec(const Vec&)>;
using MatrixFn = std::function<Mat(const Vec&)>;
using RealFn = std::function<double(const Vec&)>;

// Step for first derivatives by central differences.
double fd_step(const Vec& q);

// Fourth-order central-difference jacobian (columns = d/dq^j).
Mat fd_jacobian(const PointFn& f, const Vec& q);

Vec fd_gradient(const RealFn& f, const Vec& q);

struct VectorField {
    PointFn components;
    MatrixFn jacobian;  // empty -> finite differences

    Vec operator()(const Vec& q) const { return components(q); }
    Mat jac(const Vec& q) const;
    bool analytic_jacobian() const { return static_cast<bool>(jacobian); }
};

struct ScalarField {
    RealFn value;
    PointFn gradient;  // empty -> finite differences

    double operator()(const Vec& q) const { return value(q); }
    Vec grad(const Vec& q) const;

    static ScalarField constant(double c);
};

// X(f)(q) for f returning a scalar, vector or matrix, by central differences
// along the straight line q + t X(q).
template <class F>
auto directional(F&& f, const Vec& q, const Vec& dir) -> decltype(f(q)) {
    const double h = fd_step(q);
    return (f(q + h * dir) - f(q - h * dir)) / (2.0 * h);
}

inline double directional_scalar(const RealFn& f, const Vec& q, const Vec& dir) {
    const double h = fd_step(q);
    return (f(q + h * dir) - f(q - h * dir)) / (2.0 * h);
}

void require_finite(const Vec& v, const char* what);
void require_finite(const Mat& v, const char* what);

}  // namespace geoext
