#include "geoext/geometry.hpp"

#include "geoext/errors.hpp"

#include <limits>

namespace geoext {

Vec lie_bracket(const VectorField& X, const VectorField& Y, const Vec& q) {
    Vec x = X(q), y = Y(q);
    require_finite(x, "vector field");
    require_finite(y, "vector field");
    Vec out = Y.jac(q) * x - X.jac(q) * y;
    require_finite(out, "bracket");
    return out;
}

Vec frame_decompose(const Mat& P, const Vec& v) {
    Eigen::PartialPivLU<Mat> lu(P);
    if (!(lu.rcond() > 1e-13)) throw Error(Errc::degenerate_frame, "frame matrix is singular");
    Vec c = lu.solve(v);
    double res = (P * c - v).norm();
    if (!(res <= 1e-10 * std::max(1.0, v.norm())))
        throw Error(Errc::degenerate_frame, "frame decomposition residual too large");
    return c;
}

Vec frame_decompose(const Frame& frame, const Vec& v, const Vec& q) {
    return frame_decompose(frame.matrix(q), v);
}

Tensor3d bracket_coefficients(const Frame& frame, const Vec& q) {
    const int n = frame.n();
    Mat P = frame.matrix(q);
    Eigen::PartialPivLU<Mat> lu(P);
    if (!(lu.rcond() > 1e-13)) throw Error(Errc::degenerate_frame, "frame matrix is singular");
    std::vector<Mat> J(n);
    for (int a = 0; a < n; ++a) J[a] = frame.fields[a].jac(q);
    Tensor3d R(n, n, n);
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            Vec br = J[b] * P.col(a) - J[a] * P.col(b);
            require_finite(br, "bracket");
            Vec c = lu.solve(br);
            for (int g = 0; g < n; ++g) {
                R(g, a, b) = c(g);
                R(g, b, a) = -c(g);
            }
        }
    return R;
}

FramedMetric metric_in_frame(const MatrixFn& g, const Frame& frame, const Vec& q) {
    Mat P = frame.matrix(q);
    Mat G = P.transpose() * g(q) * P;
    const int m = frame.m, k = frame.k();
    return {G.topLeftCorner(m, m), G.bottomRightCorner(k, k), G.topRightCorner(m, k)};
}

FrameData frame_data(const MatrixFn& g, const Frame& frame, const Vec& q) {
    FrameData fd;
    fd.q = q;
    fd.m = frame.m;
    fd.phi = frame.matrix(q);
    Mat gq = g(q);
    require_finite(gq, "metric");
    fd.G = fd.phi.transpose() * gq * fd.phi;
    fd.R = bracket_coefficients(frame, q);
    auto Gof = [&](const Vec& p) -> Mat {
        Mat P = frame.matrix(p);
        return P.transpose() * g(p) * P;
    };
    fd.dG.resize(frame.n());
    for (int a = 0; a < frame.n(); ++a) fd.dG[a] = directional(Gof, q, Vec(fd.phi.col(a)));
    return fd;
}

Vec koszul_lowered(const FrameData& fd, const Vec& v) {
    const int n = static_cast<int>(fd.G.rows());
    Vec out = Vec::Zero(n);
    for (int al = 0; al < n; ++al) {
        double s = 0;
        for (int b = 0; b < n; ++b) {
            if (v(b) == 0.0) continue;
            for (int c = 0; c < n; ++c) {
                if (v(c) == 0.0) continue;
                double t = 2 * fd.dG[b](c, al) - fd.dG[al](b, c);
                for (int d = 0; d < n; ++d) t -= 2 * fd.G(d, c) * fd.R(d, b, al);
                s += t * v(b) * v(c);
            }
        }
        out(al) = 0.5 * s;
    }
    return out;
}

Vec solve_block(const Mat& A, const Vec& b) {
    Eigen::PartialPivLU<Mat> lu(A);
    if (!(lu.rcond() > 1e-14)) throw Error(Errc::degenerate_metric, "metric block is singular");
    return lu.solve(b);
}

Contraction christoffel_contraction(const FrameData& fd, const Vec& v) {
    const int n = static_cast<int>(fd.G.rows()), m = fd.m, k = n - m;
    Vec full = Vec::Zero(n);
    full.head(m) = v;
    Vec low = koszul_lowered(fd, full);
    Contraction c;
    c.a = solve_block(fd.G.topLeftCorner(m, m), low.head(m));
    c.lowered_i = low.tail(k);
    Eigen::PartialPivLU<Mat> lu(fd.G.bottomRightCorner(k, k));
    if (k > 0 && lu.rcond() > 1e-14)
        c.i = lu.solve(c.lowered_i);
    else
        c.i = Vec::Constant(k, std::numeric_limits<double>::quiet_NaN());
    return c;
}

Contraction christoffel_contraction(const FramedSystem& sys, const Vec& q, const Vec& v) {
    return christoffel_contraction(frame_data(sys.metric, sys.frame, q), v);
}

ChristoffelArrays christoffel_arrays(const FrameData& fd) {
    const int n = static_cast<int>(fd.G.rows()), m = fd.m, k = n - m;
    Eigen::PartialPivLU<Mat> lu(fd.G.topLeftCorner(m, m));
    if (!(lu.rcond() > 1e-14)) throw Error(Errc::degenerate_metric, "g_ab is singular");
    auto Q = [&](const Vec& v) -> Vec {
        Vec full = Vec::Zero(n);
        full.head(m) = v;
        Vec low = koszul_lowered(fd, full);
        Vec out(n);
        out.head(m) = lu.solve(Vec(low.head(m)));
        out.tail(k) = low.tail(k);
        return out;
    };
    Tensor3d all = polarize<double>(Q, n, m);
    ChristoffelArrays ca{Tensor3d(m, m, m), Tensor3d(k, m, m)};
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
            for (int d = 0; d < m; ++d) ca.upper_a(d, a, b) = all(d, a, b);
            for (int i = 0; i < k; ++i) ca.lowered_i(i, a, b) = all(m + i, a, b);
        }
    return ca;
}

Tensor3d coordinate_christoffel(const MatrixFn& g, const Vec& q) {
    const int n = static_cast<int>(q.size());
    std::vector<Mat> dg(n);
    const double h = 1e-3 * std::max(1.0, q.cwiseAbs().maxCoeff());
    for (int mu = 0; mu < n; ++mu) {
        Vec e = Vec::Zero(n);
        e(mu) = h;
        dg[mu] = (-g(q + 2 * e) + 8 * g(q + e) - 8 * g(q - e) + g(q - 2 * e)) / (12 * h);
    }
    Mat ginv = g(q).inverse();
    Tensor3d Gam(n, n, n);
    for (int l = 0; l < n; ++l)
        for (int mu = 0; mu < n; ++mu)
            for (int nu = 0; nu < n; ++nu) {
                double s = 0;
                for (int sg = 0; sg < n; ++sg)
                    s += ginv(l, sg) * (dg[mu](sg, nu) + dg[nu](sg, mu) - dg[sg](mu, nu));
                Gam(l, mu, nu) = 0.5 * s;
            }
    return Gam;
}

bool is_positive_definite(const Mat& A, double margin) {
    Eigen::LLT<Mat> llt(A);
    if (llt.info() != Eigen::Success) return false;
    return margin <= 0.0 || min_eigenvalue(A) > margin;
}

double min_eigenvalue(const Mat& A) {
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (A + A.transpose()), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

}  // namespace geoext
