#include "geoext/fields.hpp"

#include "geoext/errors.hpp"

#include <string>

namespace geoext {

const char* errc_name(Errc c) {
    switch (c) {
        case Errc::numeric_domain: return "numeric_domain";
        case Errc::degenerate_frame: return "degenerate_frame";
        case Errc::degenerate_metric: return "degenerate_metric";
        case Errc::not_chaplygin: return "not_chaplygin";
        case Errc::non_integrable: return "non_integrable";
        case Errc::unsupported: return "unsupported";
        case Errc::completion_failed: return "completion_failed";
        case Errc::positivity: return "positivity";
        case Errc::integration_failed: return "integration_failed";
        case Errc::syntax: return "syntax";
        case Errc::expr_domain: return "expr_domain";
        case Errc::unknown_symbol: return "unknown_symbol";
        case Errc::config_malformed: return "config_malformed";
        case Errc::config_dependent_constraints: return "config_dependent_constraints";
        case Errc::config_non_pd_metric: return "config_non_pd_metric";
        case Errc::unknown_builtin: return "unknown_builtin";
        case Errc::unknown_parameter: return "unknown_parameter";
        case Errc::empty_grid: return "empty_grid";
        case Errc::zero_length: return "zero_length";
    }
    return "unknown";
}

double fd_step(const Vec& q) {
    double s = q.size() ? q.cwiseAbs().maxCoeff() : 0.0;
    return 1e-6 * std::max(1.0, s);
}

Mat fd_jacobian(const PointFn& f, const Vec& q) {
    // larger step than fd_step: the 5-point stencil is O(h^4)
    const double h = 1e-3 * std::max(1.0, q.size() ? q.cwiseAbs().maxCoeff() : 0.0);
    const int n = static_cast<int>(q.size());
    Vec f0 = f(q);
    Mat J(f0.size(), n);
    for (int j = 0; j < n; ++j) {
        Vec e = Vec::Zero(n);
        e(j) = h;
        J.col(j) = (-f(q + 2 * e) + 8 * f(q + e) - 8 * f(q - e) + f(q - 2 * e)) / (12 * h);
    }
    return J;
}

Vec fd_gradient(const RealFn& f, const Vec& q) {
    const double h = 1e-3 * std::max(1.0, q.size() ? q.cwiseAbs().maxCoeff() : 0.0);
    const int n = static_cast<int>(q.size());
    Vec g(n);
    for (int j = 0; j < n; ++j) {
        Vec e = Vec::Zero(n);
        e(j) = h;
        g(j) = (-f(q + 2 * e) + 8 * f(q + e) - 8 * f(q - e) + f(q - 2 * e)) / (12 * h);
    }
    return g;
}

Mat VectorField::jac(const Vec& q) const {
    Mat J = jacobian ? jacobian(q) : fd_jacobian(components, q);
    require_finite(J, "vector field jacobian");
    return J;
}

Vec ScalarField::grad(const Vec& q) const {
    return gradient ? gradient(q) : fd_gradient(value, q);
}

ScalarField ScalarField::constant(double c) {
    ScalarField f;
    f.value = [c](const Vec&) { return c; };
    f.gradient = [](const Vec& q) { return Vec::Zero(q.size()); };
    return f;
}

void require_finite(const Vec& v, const char* what) {
    if (!v.allFinite()) throw Error(Errc::numeric_domain, std::string("non-finite ") + what);
}

void require_finite(const Mat& v, const char* what) {
    if (!v.allFinite()) throw Error(Errc::numeric_domain, std::string("non-finite ") + what);
}

}  // namespace geoext
