#pragma once

// Test-side oracles: plain coordinate formulas, independent of the frame machinery.

#include "geoext/geometry.hpp"

#include <random>

namespace oracle {

using geoext::Mat;
using geoext::Vec;

// Christoffel symbols of the first kind from a 5-point stencil on g, then raised.
inline std::vector<Mat> christoffel(const geoext::MatrixFn& g, const Vec& q, double h = 1e-3) {
    const int n = static_cast<int>(q.size());
    std::vector<Mat> dg(n);
    for (int c = 0; c < n; ++c) {
        Vec e = Vec::Zero(n);
        e(c) = h;
        dg[c] = (-g(q + 2 * e) + 8 * g(q + e) - 8 * g(q - e) + g(q - 2 * e)) / (12 * h);
    }
    Mat ginv = g(q).inverse();
    std::vector<Mat> G(n, Mat::Zero(n, n));  // G[l](a,b)
    for (int l = 0; l < n; ++l)
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                double s = 0;
                for (int d = 0; d < n; ++d)
                    s += ginv(l, d) * (dg[a](d, b) + dg[b](d, a) - dg[d](a, b));
                G[l](a, b) = 0.5 * s;
            }
    return G;
}

inline Vec quad(const std::vector<Mat>& G, const Vec& v) {
    Vec out(G.size());
    for (size_t l = 0; l < G.size(); ++l) out(l) = v.dot(G[l] * v);
    return out;
}

// jacobian of a vector function by 5-point stencil
inline Mat jacobian(const std::function<Vec(const Vec&)>& f, const Vec& q, double h = 1e-3) {
    Vec f0 = f(q);
    Mat J(f0.size(), q.size());
    for (int c = 0; c < q.size(); ++c) {
        Vec e = Vec::Zero(q.size());
        e(c) = h;
        J.col(c) = (-f(q + 2 * e) + 8 * f(q + e) - 8 * f(q - e) + f(q - 2 * e)) / (12 * h);
    }
    return J;
}

inline Vec uniform(std::mt19937_64& rng, const Vec& lo, const Vec& hi) {
    std::uniform_real_distribution<double> u(0, 1);
    Vec q(lo.size());
    for (int i = 0; i < q.size(); ++i) q(i) = lo(i) + u(rng) * (hi(i) - lo(i));
    return q;
}

// Solve rho sqrt(1+rho^2) + asinh(rho) = 2 s for rho (Newton).
inline double rho_from_arclength(double s) {
    double r = s;
    for (int it = 0; it < 60; ++it) {
        double f = r * std::sqrt(1 + r * r) + std::asinh(r) - 2 * s;
        double df = 2 * std::sqrt(1 + r * r);
        double dr = f / df;
        r -= dr;
        if (std::abs(dr) < 1e-15 * std::max(1.0, std::abs(r))) break;
    }
    return r;
}

}  // namespace oracle
