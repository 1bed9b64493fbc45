#include "geoext/extensions.hpp"

#include "geoext/errors.hpp"

#include <cmath>

namespace geoext {

Candidate zero_candidate(const FramedSystem& sys) {
    const int m = sys.m(), k = sys.k();
    Candidate c;
    c.gbar_ai = [m, k](const Vec&) { return Mat(Mat::Zero(m, k)); };
    c.F = ScalarField::constant(0.0);
    return c;
}

PointGeometry point_geometry(const FramedSystem& sys, const Vec& q) {
    PointGeometry pg;
    pg.fd = frame_data(sys.metric, sys.frame, q);
    pg.ca = christoffel_arrays(pg.fd);
    return pg;
}

namespace {

// X_alpha(F) for all frame fields
Vec frame_derivatives(const FrameData& fd, const ScalarField& F) {
    return fd.phi.transpose() * F.grad(fd.q);
}

}  // namespace

Tensor3d condition_A_residual(const PointGeometry& pg, const Candidate& cand) {
    const FrameData& fd = pg.fd;
    const int m = fd.m, k = static_cast<int>(fd.G.rows()) - m;
    Mat gbar = cand.gbar_ai(fd.q);
    Vec XF = frame_derivatives(fd, cand.F);
    Tensor3d T(m, m, m);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            for (int c = 0; c < m; ++c) {
                double s = 0;
                for (int i = 0; i < k; ++i)
                    s += gbar(b, i) * fd.R(m + i, a, c) + gbar(a, i) * fd.R(m + i, b, c);
                s += -fd.G(b, c) * XF(a) - fd.G(a, c) * XF(b) + 2 * fd.G(a, b) * XF(c);
                T(a, b, c) = s;
            }
    return T;
}

Tensor3d condition_A_residual(const FramedSystem& sys, const Candidate& cand, const Vec& q) {
    PointGeometry pg;
    pg.fd = frame_data(sys.metric, sys.frame, q);
    return condition_A_residual(pg, cand);
}

Tensor3d condition_B_residual(const PointGeometry& pg, const Candidate& cand) {
    const FrameData& fd = pg.fd;
    const int m = fd.m, k = static_cast<int>(fd.G.rows()) - m;
    Mat gbar = cand.gbar_ai(fd.q);
    Vec XF = frame_derivatives(fd, cand.F);
    std::vector<Mat> dgbar(m);
    for (int a = 0; a < m; ++a) dgbar[a] = directional(cand.gbar_ai, fd.q, Vec(fd.phi.col(a)));

    Tensor3d U(k, m, m);
    for (int i = 0; i < k; ++i)
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) {
                // Gamma^nh(theta_i)
                double s = dgbar[a](b, i);
                for (int d = 0; d < m; ++d) s -= gbar(d, i) * pg.ca.upper_a(d, a, b);
                // lambda_i
                s += pg.ca.lowered_i(i, a, b);
                // theta_k (R^k_ia + delta^k_i X_a F) v^a
                for (int kk = 0; kk < k; ++kk) s += gbar(b, kk) * fd.R(m + kk, m + i, a);
                s += gbar(b, i) * XF(a);
                s -= fd.G(a, b) * XF(m + i);
                U(i, a, b) = s;
            }
    Tensor3d S(k, m, m);
    for (int i = 0; i < k; ++i)
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) S(i, a, b) = 0.5 * (U(i, a, b) + U(i, b, a));
    return S;
}

Tensor3d condition_B_residual(const FramedSystem& sys, const Candidate& cand, const Vec& q) {
    return condition_B_residual(point_geometry(sys, q), cand);
}

ResidualReport grid_report(const std::string& name, const std::vector<Vec>& points,
                           const std::function<Tensor3d(const Vec&)>& eval, double tol) {
    if (points.empty()) throw Error(Errc::empty_grid, "no sample points");
    ResidualReport r;
    r.name = name;
    r.tolerance = tol;
    r.max_abs = -1;
    for (const Vec& q : points) {
        Tensor3d T = eval(q);
        double v = T.max_abs();
        r.per_point.emplace_back(q, v);
        if (v > r.max_abs) {
            r.max_abs = v;
            r.worst_point = q;
            auto ix = T.argmax_abs();
            r.worst_indices = {ix[0], ix[1], ix[2]};
        }
    }
    r.pass = r.max_abs <= tol;
    return r;
}

ResidualReport condition_A_report(const FramedSystem& sys, const Candidate& cand,
                                  const std::vector<Vec>& points, double tol) {
    return grid_report("A'", points,
                       [&](const Vec& q) { return condition_A_residual(sys, cand, q); }, tol);
}

ResidualReport condition_B_report(const FramedSystem& sys, const Candidate& cand,
                                  const std::vector<Vec>& points, double tol) {
    return grid_report("B'", points,
                       [&](const Vec& q) { return condition_B_residual(sys, cand, q); }, tol);
}

nlohmann::json to_json(const ResidualReport& r) {
    nlohmann::json j;
    j["name"] = r.name;
    j["max_abs"] = r.max_abs;
    j["tolerance"] = r.tolerance;
    j["pass"] = r.pass;
    j["worst_point"] = std::vector<double>(r.worst_point.data(), r.worst_point.data() + r.worst_point.size());
    j["worst_indices"] = r.worst_indices;
    return j;
}

Mat chaplygin_B_residual(const FramedSystem& sys, const Candidate& cand, const Trajectory& tr) {
    if (!sys.action) throw Error(Errc::unsupported, "chaplygin_B_residual needs a Chaplygin system");
    const auto& V = sys.action->generators;
    const int m = sys.m(), k = sys.k();
    const size_t N = tr.size();
    if (N < 5) throw Error(Errc::unsupported, "trajectory too short for the 5-point stencil");
    std::vector<Vec> C(N);
    std::vector<double> F(N);
    for (size_t j = 0; j < N; ++j) {
        const State& s = tr.states[j];
        Mat P = sys.frame.matrix(s.q).leftCols(m);
        Mat g = sys.metric(s.q);
        Mat Gai(m, k);
        for (int i = 0; i < k; ++i) Gai.col(i) = P.transpose() * g * V[i](s.q);
        C[j] = (cand.gbar_ai(s.q) + Gai).transpose() * s.v;
        F[j] = cand.F(s.q);
    }
    Mat out(N - 4, k);
    for (size_t j = 2; j + 2 < N; ++j) {
        // uniform sampling assumed (RK4 output)
        double h = (tr.t[j + 2] - tr.t[j - 2]) / 4.0;
        Vec dC = (-C[j + 2] + 8 * C[j + 1] - 8 * C[j - 1] + C[j - 2]) / (12 * h);
        double dF = (-F[j + 2] + 8 * F[j + 1] - 8 * F[j - 1] + F[j - 2]) / (12 * h);
        out.row(j - 2) = (dC + dF * C[j]).transpose();
    }
    return out;
}

CompletedMetric complete_metric(const FramedSystem& sys, const Candidate& cand,
                                const std::vector<Vec>& grid) {
    if (grid.empty()) throw Error(Errc::empty_grid, "no grid points for completion");
    const int m = sys.m(), k = sys.k();
    CompletedMetric out;
    const bool supplied = static_cast<bool>(cand.gbar_ij);

    if (!supplied) {
        for (const Vec& q : grid) {
            FramedMetric fm = metric_in_frame(sys.metric, sys.frame, q);
            if (!is_positive_definite(fm.gij)) out.identity_block = true;
        }
        double worst = -1e300;
        bool ok = false;
        for (double s = 1; s <= 1024; s *= 2) {
            double lo = 1e300;
            for (const Vec& q : grid) {
                FramedMetric fm = metric_in_frame(sys.metric, sys.frame, q);
                Mat B = out.identity_block ? Mat(Mat::Identity(k, k)) : fm.gij;
                lo = std::min(lo, min_eigenvalue(s * B));
            }
            worst = std::max(worst, lo);
            if (lo > 1e-6) {
                out.s = s;
                ok = true;
                break;
            }
        }
        if (!ok)
            throw Error(Errc::completion_failed,
                        "no s <= 2^10 makes the Schur complement positive (worst eigenvalue " +
                            std::to_string(worst) + ")");
    } else {
        out.s = 0;
    }

    auto sysp = std::make_shared<FramedSystem>(sys);
    auto candp = std::make_shared<Candidate>(cand);
    const double s = out.s;
    const bool ident = out.identity_block;
    out.frame_block = [sysp, candp, s, ident, m, k](const Vec& q) {
        FramedMetric fm = metric_in_frame(sysp->metric, sysp->frame, q);
        Mat gb = candp->gbar_ai(q);
        Mat gij;
        if (candp->gbar_ij) {
            gij = candp->gbar_ij(q);
        } else {
            Mat B = ident ? Mat(Mat::Identity(k, k)) : fm.gij;
            gij = gb.transpose() * fm.gab.ldlt().solve(gb) + s * B;
        }
        Mat H(m + k, m + k);
        H << fm.gab, gb, gb.transpose(), gij;
        return Mat(std::exp(2 * candp->F(q)) * H);
    };
    auto block = out.frame_block;
    out.metric = [sysp, block](const Vec& q) {
        Mat P = sysp->frame.matrix(q);
        Mat Pinv = P.inverse();
        return Mat(Pinv.transpose() * block(q) * Pinv);
    };

    out.min_eigenvalue = 1e300;
    for (const Vec& q : grid) {
        Mat H = out.frame_block(q);
        double lo = min_eigenvalue(H);
        out.min_eigenvalue = std::min(out.min_eigenvalue, lo);
        if (!is_positive_definite(H))
            throw Error(Errc::completion_failed,
                        "completed metric fails Cholesky (worst eigenvalue " + std::to_string(lo) + ")");
    }
    return out;
}

Pregeodesic pregeodesic_residual(const FramedSystem& sys, const MatrixFn& ghat, const ScalarField& F,
                                 const State& s) {
    const int m = sys.m(), k = sys.k();
    StateRate nh = nonholonomic_field(sys, s);
    StateRate geo = geodesic_field(ghat, sys.frame, s);
    Mat P = sys.frame.matrix(s.q);
    Vec XF = P.leftCols(m).transpose() * F.grad(s.q);
    Pregeodesic r;
    r.a_part = nh.vdot - (geo.vdot.head(m) + XF.dot(s.v) * s.v);
    r.i_part = -geo.vdot.tail(k);
    return r;
}

double combined_residual(const FramedSystem& sys, const Candidate& cand,
                         const std::vector<Vec>& points) {
    double r = 0;
    for (const Vec& q : points) {
        PointGeometry pg = point_geometry(sys, q);
        r = std::max(r, condition_A_residual(pg, cand).max_abs());
        r = std::max(r, condition_B_residual(pg, cand).max_abs());
    }
    return r;
}

ScanResult scan_preserving_extension(const FramedSystem& sys, const Ansatz& ansatz,
                                     const std::vector<Vec>& points, double beta_lo,
                                     double beta_hi, int grid) {
    if (points.empty() || grid < 2) throw Error(Errc::empty_grid, "empty scan grid");
    // geometry does not depend on the candidate
    std::vector<PointGeometry> geo;
    geo.reserve(points.size());
    for (const Vec& q : points) geo.push_back(point_geometry(sys, q));
    auto residual = [&](double beta) {
        Candidate c = ansatz(beta);
        double r = 0;
        for (const auto& pg : geo) {
            r = std::max(r, condition_A_residual(pg, c).max_abs());
            r = std::max(r, condition_B_residual(pg, c).max_abs());
        }
        return r;
    };
    ScanResult out;
    int best = 0;
    for (int j = 0; j < grid; ++j) {
        double b = beta_lo + (beta_hi - beta_lo) * j / (grid - 1);
        out.curve.emplace_back(b, residual(b));
        if (out.curve[j].second < out.curve[best].second) best = j;
    }
    // golden-section refinement on the bracketing cells
    double lo = out.curve[std::max(0, best - 1)].first;
    double hi = out.curve[std::min(grid - 1, best + 1)].first;
    const double gr = (std::sqrt(5.0) - 1) / 2;
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = residual(x1), f2 = residual(x2);
    for (int it = 0; it < 80 && hi - lo > 1e-13 * std::max(1.0, std::abs(hi)); ++it) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = residual(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = residual(x2);
        }
    }
    out.best_beta = f1 < f2 ? x1 : x2;
    out.min_residual = std::min(f1, f2);
    if (out.curve[best].second < out.min_residual) {
        out.best_beta = out.curve[best].first;
        out.min_residual = out.curve[best].second;
    }
    return out;
}

}  // namespace geoext
