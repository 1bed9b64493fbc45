#include "geoext/chaplygin.hpp"

#include "geoext/errors.hpp"
#include "geoext/parallel.hpp"

#include <cmath>
#include <sstream>

namespace geoext {

namespace {

Mat d_matrix(const FramedSystem& sys, const Vec& q) {
    Mat X(q.size(), sys.m());
    for (int a = 0; a < sys.m(); ++a) X.col(a) = sys.frame.fields[a](q);
    return X;
}

Mat gab_at(const FramedSystem& sys, const Vec& q) {
    Mat X = d_matrix(sys, q);
    return X.transpose() * sys.metric(q) * X;
}

// R(gamma, a, b) for a, b in D only; cheaper than the full table
Tensor3d brackets_D(const FramedSystem& sys, const Vec& q) {
    const int n = sys.frame.n(), m = sys.m();
    Mat P = sys.frame.matrix(q);
    Tensor3d R(n, m, m);
    for (int a = 0; a < m; ++a)
        for (int b = a + 1; b < m; ++b) {
            Vec c = frame_decompose(P, lie_bracket(sys.frame.fields[a], sys.frame.fields[b], q));
            for (int g = 0; g < n; ++g) {
                R(g, a, b) = c(g);
                R(g, b, a) = -c(g);
            }
        }
    return R;
}

Vec beta_at(const ChaplyginStructure& st, const Vec& r) {
    const int m = st.m();
    Tensor3d R = brackets_D(st.sys, st.section(r));
    Vec beta = Vec::Zero(m);
    for (int b = 0; b < m; ++b)
        for (int a = 0; a < m; ++a) beta(b) += R(a, a, b);
    return beta;
}

// GR(a,b,c) = G_ak R^k_bc
Tensor3d gr_tensor(const Mat& Gai, const Tensor3d& R, int m) {
    const int k = static_cast<int>(Gai.cols());
    Tensor3d GR(m, m, m);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            for (int c = 0; c < m; ++c) {
                double s = 0;
                for (int j = 0; j < k; ++j) s += Gai(a, j) * R(m + j, b, c);
                GR(a, b, c) = s;
            }
    return GR;
}

// follow sum_i V_i for time t
Vec group_shift(const std::vector<VectorField>& V, const Vec& q0, double t, int steps = 64) {
    auto f = [&V](const Vec& q) {
        Vec d = Vec::Zero(q.size());
        for (const auto& v : V) d += v(q);
        return d;
    };
    Vec q = q0;
    const double h = t / steps;
    for (int s = 0; s < steps; ++s) {
        Vec k1 = f(q), k2 = f(q + 0.5 * h * k1), k3 = f(q + 0.5 * h * k2), k4 = f(q + h * k3);
        q += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    }
    return q;
}

struct GaussRule {
    std::vector<double> x, w;  // on [0,1]
};

const GaussRule& gauss64() {
    static const GaussRule rule = [] {
        const int N = 64;
        GaussRule g;
        g.x.resize(N);
        g.w.resize(N);
        for (int i = 0; i < N; ++i) {
            double z = std::cos(M_PI * (i + 0.75) / (N + 0.5));
            double dp = 0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1, p1 = z;
                for (int j = 2; j <= N; ++j) {
                    double p2 = ((2 * j - 1) * z * p1 - (j - 1) * p0) / j;
                    p0 = p1;
                    p1 = p2;
                }
                dp = N * (z * p1 - p0) / (z * z - 1);
                double dz = p1 / dp;
                z -= dz;
                if (std::abs(dz) < 1e-16) break;
            }
            g.x[i] = 0.5 * (1 - z);
            g.w[i] = 1.0 / ((1 - z * z) * dp * dp);  // 2/((1-z^2)p'^2), halved for [0,1]
        }
        return g;
    }();
    return rule;
}

double line_integral(const ChaplyginStructure& st, const std::vector<Vec>& pts, double& dbeta_max,
                     int check_every) {
    const GaussRule& g = gauss64();
    double total = 0;
    for (size_t s = 0; s + 1 < pts.size(); ++s) {
        Vec d = pts[s + 1] - pts[s];
        if (d.norm() == 0) continue;
        for (size_t j = 0; j < g.x.size(); ++j) {
            Vec r = pts[s] + g.x[j] * d;
            total += g.w[j] * beta_at(st, r).dot(d);
            if (check_every > 0 && j % check_every == 0)
                dbeta_max = std::max(dbeta_max, dbeta(st, r).cwiseAbs().maxCoeff());
        }
    }
    return total;
}

}  // namespace

Vec ChaplyginStructure::project(const Vec& q) const {
    Vec r(reduced.size());
    for (size_t j = 0; j < reduced.size(); ++j) r(j) = q(reduced[j]);
    return r;
}

ChaplyginBlocks ChaplyginStructure::blocks(const Vec& q) const {
    const int k = static_cast<int>(verticals.size());
    Mat X = d_matrix(sys, q);
    Mat V(q.size(), k);
    for (int i = 0; i < k; ++i) V.col(i) = verticals[i](q);
    Mat g = sys.metric(q);
    ChaplyginBlocks b;
    b.Gab = X.transpose() * g * X;
    b.Gai = X.transpose() * g * V;
    b.Gij = V.transpose() * g * V;
    Eigen::CompleteOrthogonalDecomposition<Mat> cod(b.Gab.rows(), b.Gab.cols());
    cod.setThreshold(1e-10);
    cod.compute(b.Gab);
    b.K = -cod.solve(b.Gai);
    return b;
}

ChaplyginStructure build_structure(const FramedSystem& sys, double tol) {
    if (!sys.action) throw Error(Errc::not_chaplygin, sys.name + ": no symmetry group attached");
    const Action& act = *sys.action;
    const int m = sys.m(), k = sys.k(), n = sys.n();
    if (static_cast<int>(act.generators.size()) != k)
        throw Error(Errc::not_chaplygin, "number of generators must equal the rank of D^perp");
    if (static_cast<int>(act.reduced.size()) != m)
        throw Error(Errc::not_chaplygin, "number of reduced coordinates must equal rank D");

    ChaplyginStructure st;
    st.sys = sys;
    st.verticals = act.generators;
    st.reduced = act.reduced;
    st.section = act.section;

    Box probe = sys.domain;
    probe.points = std::min(probe.points, 3);
    double worst = 0;
    for (const Vec& q : lattice(probe)) {
        Mat X = d_matrix(sys, q);
        Mat V(n, k);
        for (int i = 0; i < k; ++i) V.col(i) = st.verticals[i](q);
        Mat all(n, n);
        all << X, V;
        Eigen::FullPivLU<Mat> lu(all);
        if (lu.rank() < n)
            throw Error(Errc::not_chaplygin, "generators are not transverse to D");

        double scale = 1;
        for (int a = 0; a < m; ++a)
            for (int i = 0; i < k; ++i) {
                double r = lie_bracket(sys.frame.fields[a], st.verticals[i], q).cwiseAbs().maxCoeff();
                worst = std::max(worst, r);
                if (r > tol * scale) {
                    std::ostringstream os;
                    os << "[X_" << a << ", V_" << i << "] = " << r << " is not zero: D is not invariant";
                    throw Error(Errc::not_chaplygin, os.str());
                }
            }
        for (int i = 0; i < k; ++i) {
            Mat dG = directional([&](const Vec& p) { return gab_at(sys, p); }, q, st.verticals[i](q));
            double r = dG.cwiseAbs().maxCoeff();
            worst = std::max(worst, r);
            if (r > tol * std::max(1.0, gab_at(sys, q).cwiseAbs().maxCoeff()))
                throw Error(Errc::not_chaplygin, "metric block g_ab is not group invariant");
        }
        // horizontal lifts of the coordinate fields on Q/G
        for (int a = 0; a < m; ++a)
            for (int e = 0; e < m; ++e)
                if (std::abs(X(st.reduced[e], a) - (a == e ? 1.0 : 0.0)) > tol)
                    throw Error(Errc::not_chaplygin, "D fields are not horizontal lifts of the reduced chart");
        // complement fields must be V_i + K^b_i X_b
        ChaplyginBlocks bl = st.blocks(q);
        for (int i = 0; i < k; ++i) {
            Vec expect = V.col(i) + X * bl.K.col(i);
            double r = (sys.frame.fields[m + i](q) - expect).cwiseAbs().maxCoeff();
            if (r > 1e-8 * std::max(1.0, expect.cwiseAbs().maxCoeff()))
                throw Error(Errc::not_chaplygin, "complement frame does not match the projected generators");
        }
    }
    st.invariance_residual = worst;
    return st;
}

ScalarField lift_reduced(const ChaplyginStructure& st, const ScalarField& f) {
    std::vector<int> idx = st.reduced;
    ScalarField F;
    F.value = [f, idx](const Vec& q) {
        Vec r(idx.size());
        for (size_t j = 0; j < idx.size(); ++j) r(j) = q(idx[j]);
        return f(r);
    };
    F.gradient = [f, idx](const Vec& q) {
        Vec r(idx.size());
        for (size_t j = 0; j < idx.size(); ++j) r(j) = q(idx[j]);
        Vec gr = f.grad(r);
        Vec out = Vec::Zero(q.size());
        for (size_t j = 0; j < idx.size(); ++j) out(idx[j]) = gr(j);
        return out;
    };
    return F;
}

GyroData gyro_data(const ChaplyginStructure& st, const Vec& r) {
    const int m = st.m();
    auto at = [&](const Vec& q, Tensor3d& T, Tensor3d& GR) {
        Tensor3d R = bracket_coefficients(st.sys.frame, q);
        T = Tensor3d(m, m, m);
        for (int d = 0; d < m; ++d)
            for (int a = 0; a < m; ++a)
                for (int b = 0; b < m; ++b) T(d, a, b) = R(d, a, b);
        GR = gr_tensor(st.blocks(q).Gai, R, m);
    };

    GyroData g;
    Vec q = st.section(r);
    at(q, g.T, g.GR);
    g.beta = Vec::Zero(m);
    for (int b = 0; b < m; ++b)
        for (int a = 0; a < m; ++a) g.beta(b) += g.T(a, a, b);

    g.XiG = Tensor3d(m, m, m);
    g.gammaG = Tensor3d(m, m, m);
    g.ThetaG = Tensor3d(m, m, m);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            for (int c = 0; c < m; ++c) {
                g.XiG(b, c, a) = -0.5 * g.GR(a, b, c);
                g.gammaG(b, c, a) = (-g.GR(b, a, c) + g.GR(c, a, b) - 2 * g.GR(a, b, c)) / 6.0;
                g.ThetaG(a, b, c) = g.GR(b, c, a) + g.GR(c, a, b) + g.GR(a, b, c);
            }

    if (!st.verticals.empty()) {
        Tensor3d T2, GR2;
        at(group_shift(st.verticals, q, 0.37), T2, GR2);
        T2 -= g.T;
        GR2 -= g.GR;
        g.invariance = std::max(T2.max_abs(), GR2.max_abs());
    }
    return g;
}

Tensor3d phi_simplicity_residual(const ChaplyginStructure& st, const ScalarField& phi, const Vec& r) {
    const int m = st.m();
    Tensor3d R = brackets_D(st.sys, st.section(r));
    Vec dphi = phi.grad(r);
    Tensor3d out(m, m, m);
    for (int d = 0; d < m; ++d)
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b)
                out(d, a, b) = R(d, a, b) + dphi(a) * (d == b) - dphi(b) * (d == a);
    return out;
}

Tensor3d conditionAG_residual(const ChaplyginStructure& st, const ScalarField& f, const Vec& r) {
    const int m = st.m();
    Vec q = st.section(r);
    Tensor3d GR = gr_tensor(st.blocks(q).Gai, brackets_D(st.sys, q), m);
    Mat g = gab_at(st.sys, q);
    Vec df = f.grad(r);
    Tensor3d out(m, m, m);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            for (int c = 0; c < m; ++c)
                out(a, b, c) = GR(b, a, c) + GR(a, b, c) + g(b, c) * df(a) + g(a, c) * df(b) -
                               2 * g(a, b) * df(c);
    return out;
}

Mat dbeta(const ChaplyginStructure& st, const Vec& r) {
    Mat J = fd_jacobian([&st](const Vec& p) { return beta_at(st, p); }, r);  // J(f,e) = d_e beta_f
    return J.transpose() - J;  // (e,f): d_e beta_f - d_f beta_e
}

RecoveredF recover_f(const ChaplyginStructure& st, const Vec& base, const Vec& target,
                     const std::vector<Vec>& path, double tol) {
    const int m = st.m();
    if (m < 2) throw Error(Errc::unsupported, "recovering f needs rank D >= 2 (divides by m-1)");
    std::vector<Vec> p1{base};
    for (const Vec& p : path) p1.push_back(p);
    p1.push_back(target);
    std::vector<Vec> p2{base};
    Vec cur = base;
    for (int e = 0; e < m; ++e) {
        cur(e) = target(e);
        p2.push_back(cur);
    }
    double db = 0;
    RecoveredF out;
    out.value = line_integral(st, p1, db, 16) / (m - 1);
    out.alternate = line_integral(st, p2, db, 16) / (m - 1);
    out.discrepancy = std::abs(out.value - out.alternate);
    if (db > tol) {
        std::ostringstream os;
        os << "d beta = " << db << " along the paths: beta is not closed";
        throw Error(Errc::non_integrable, os.str());
    }
    return out;
}

const char* level_name(Level l) {
    switch (l) {
        case Level::GEODESIC_EXT_F0: return "GEODESIC_EXT_F0";
        case Level::PHI_SIMPLE: return "PHI_SIMPLE";
        case Level::ORTHO_PROJECTIVE_EXT: return "ORTHO_PROJECTIVE_EXT";
        case Level::INVARIANT_MEASURE_ONLY: return "INVARIANT_MEASURE_ONLY";
        case Level::NONE: return "NONE";
    }
    return "NONE";
}

ClassificationReport classify(const ChaplyginStructure& st, const std::vector<Vec>& grid, double tol,
                              int jobs) {
    if (grid.empty()) throw Error(Errc::empty_grid, "classification grid is empty");
    const int m = st.m();
    ClassificationReport rep;
    rep.tolerance = tol;
    // per point: beta, dbeta, wedge/Xi, wedge/gamma, Theta, Xi, gamma
    std::vector<std::array<double, 7>> per(grid.size());
    parallel_for(grid.size(), jobs, [&](size_t j) {
        const Vec& r = grid[j];
        GyroData g = gyro_data(st, r);
        Mat gab = gab_at(st.sys, st.section(r));
        std::array<double, 7> v{};
        v[0] = g.beta.cwiseAbs().maxCoeff();
        if (m >= 2) v[1] = dbeta(st, r).cwiseAbs().maxCoeff();
        v[4] = g.ThetaG.max_abs();
        v[5] = g.XiG.max_abs();
        v[6] = g.gammaG.max_abs();
        if (m >= 2)
            for (int a = 0; a < m; ++a)
                for (int b = 0; b < m; ++b)
                    for (int c = 0; c < m; ++c) {
                        double w = (g.beta(b) * gab(a, c) - g.beta(c) * gab(a, b)) / (m - 1);
                        v[2] = std::max(v[2], std::abs(w - 2 * g.XiG(b, c, a)));
                        v[3] = std::max(v[3], std::abs(w - 2 * g.gammaG(b, c, a)));
                    }
        per[j] = v;
    });
    std::array<double, 7> mx{};
    for (const auto& v : per)
        for (int i = 0; i < 7; ++i) mx[i] = std::max(mx[i], v[i]);
    const double beta_n = mx[0], dbeta_n = mx[1], wx = mx[2], wg = mx[3], th = mx[4], xi = mx[5],
                 ga = mx[6];
    rep.residuals = {{"beta_norm", beta_n},    {"dbeta_norm", dbeta_n}, {"wedge_vs_XiG", wx},
                     {"wedge_vs_gammaG", wg}, {"ThetaG_norm", th},     {"XiG_norm", xi},
                     {"gammaG_norm", ga}};
    for (const auto& [name, v] : rep.residuals)
        if (v > tol / 2 && v <= 2 * tol) rep.marginal.push_back(name);

    auto ok = [tol](double v) { return v <= tol; };
    rep.tiers["iv"] = ok(dbeta_n);
    rep.tiers["iii"] = ok(dbeta_n) && ok(wg);
    rep.tiers["ii"] = ok(dbeta_n) && ok(wx);
    rep.tiers["i"] = ok(beta_n) && ok(xi);
    if (rep.tiers["i"]) rep.level = Level::GEODESIC_EXT_F0;
    else if (rep.tiers["ii"]) rep.level = Level::PHI_SIMPLE;
    else if (rep.tiers["iii"]) rep.level = Level::ORTHO_PROJECTIVE_EXT;
    else if (rep.tiers["iv"]) rep.level = Level::INVARIANT_MEASURE_ONLY;

    if (rep.tiers["iv"] && m >= 2) {
        std::vector<double> f(grid.size());
        try {
            parallel_for(grid.size(), jobs, [&](size_t j) {
                f[j] = recover_f(st, grid.front(), grid[j], {}, tol).value;
            });
            for (size_t j = 0; j < grid.size(); ++j) rep.f_recovered.emplace_back(grid[j], f[j]);
        } catch (const Error&) {
            rep.f_recovered.clear();
        }
    }
    return rep;
}

nlohmann::json to_json(const ClassificationReport& r) {
    nlohmann::json j;
    j["level"] = level_name(r.level);
    j["tolerance"] = r.tolerance;
    j["residuals"] = r.residuals;
    j["marginal"] = r.marginal;
    j["tiers"] = r.tiers;
    if (!r.f_recovered.empty()) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& [p, v] : r.f_recovered)
            arr.push_back({{"point", std::vector<double>(p.data(), p.data() + p.size())}, {"f", v}});
        j["f_recovered"] = arr;
    }
    return j;
}

std::string to_markdown(const ClassificationReport& r) {
    std::ostringstream os;
    os << "**Level:** " << level_name(r.level) << " (tol " << r.tolerance << ")\n\n";
    os << "| tier | condition | holds |\n|---|---|---|\n";
    static const std::pair<const char*, const char*> rows[] = {
        {"i", "beta = 0, Xi^G = 0"},
        {"ii", "d beta = 0, beta/(m-1) ^ theta = Xi^G"},
        {"iii", "d beta = 0, beta/(m-1) ^ theta = gamma^G"},
        {"iv", "d beta = 0"}};
    for (const auto& [t, c] : rows) os << "| " << t << " | " << c << " | " << (r.tiers.at(t) ? "yes" : "no") << " |\n";
    os << "\n| residual | value |\n|---|---|\n";
    for (const auto& [k, v] : r.residuals) os << "| " << k << " | " << v << " |\n";
    if (!r.marginal.empty()) {
        os << "\nmarginal:";
        for (const auto& m : r.marginal) os << ' ' << m;
        os << '\n';
    }
    return os.str();
}

Mat reduced_metric(const ChaplyginStructure& st, const Vec& r) {
    return gab_at(st.sys, st.section(r));
}

Vec gyroscopic_alpha(const ChaplyginStructure& st, const Vec& r, const Vec& rdot) {
    const int m = st.m();
    Vec q = st.section(r);
    Tensor3d R = brackets_D(st.sys, q);
    Mat g = gab_at(st.sys, q);
    Vec alpha = Vec::Zero(m);
    for (int c = 0; c < m; ++c)
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b)
                for (int d = 0; d < m; ++d) alpha(c) -= g(d, b) * R(d, a, c) * rdot(a) * rdot(b);
    return alpha;
}

Vec reduced_field(const ChaplyginStructure& st, const Vec& r, const Vec& rdot) {
    Mat g = reduced_metric(st, r);
    Tensor3d Gam = coordinate_christoffel([&st](const Vec& p) { return reduced_metric(st, p); }, r);
    Vec acc = -contract_quadratic(Gam, rdot);
    // g_cd (q'' + Gamma q' q') = g_db R^d_ac q'^a q'^b = -alpha_c
    return acc + solve_block(g, -gyroscopic_alpha(st, r, rdot));
}

Vec contract_two_form(const Tensor3d& W, const Vec& rdot) {
    const int m = W.dim(0);
    Vec out = Vec::Zero(m);
    for (int c = 0; c < m; ++c)
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) out(c) += 2 * W(b, c, a) * rdot(a) * rdot(b);
    return out;
}

double invariant_measure_residual(const ChaplyginStructure& st, const ScalarField& f, const Vec& r,
                                  const Vec& rdot) {
    const int m = st.m();
    auto mu = [&](const Vec& p) { return std::exp((m - 1) * f(p)) * reduced_metric(st, p).determinant(); };
    double div = fd_gradient(mu, r).dot(rdot);
    const double h = 1e-3 * std::max(1.0, rdot.cwiseAbs().maxCoeff());
    double trace = 0;
    for (int a = 0; a < m; ++a) {
        Vec e = Vec::Zero(m);
        e(a) = h;
        trace += (reduced_field(st, r, rdot + e)(a) - reduced_field(st, r, rdot - e)(a)) / (2 * h);
    }
    return div + mu(r) * trace;
}

namespace {

Vec spray_k(const ChaplyginStructure& st, const ScalarField& f, const Vec& r, const Vec& rdot) {
    MatrixFn k = [&st, &f](const Vec& p) { return Mat(std::exp(2 * f(p)) * reduced_metric(st, p)); };
    return -contract_quadratic(coordinate_christoffel(k, r), rdot);
}

}  // namespace

Vec hamiltonization_residual(const ChaplyginStructure& st, const ScalarField& f, const Vec& r,
                             const Vec& rdot) {
    Vec red = reduced_field(st, r, rdot);
    // minus sign: the reparametrized spray picks up -(df.q')q'
    return spray_k(st, f, r, rdot) - (red - f.grad(r).dot(rdot) * rdot);
}

Vec psi_relatedness_residual(const ChaplyginStructure& st, const ScalarField& f, const Vec& r,
                             const Vec& rdot) {
    const double ef = std::exp(-f(r));
    // tangent of e^{-f} Gamma^red at x = (r, rdot)
    Vec dq = ef * rdot;
    Vec dv = ef * reduced_field(st, r, rdot);
    // dpsi(dq, dv), velocity part: e^{-f} dv - e^{-f} (df.dq) rdot
    Vec pushed = ef * dv - ef * f.grad(r).dot(dq) * rdot;
    return pushed - spray_k(st, f, r, ef * rdot);
}

double first_integral_residual(const ChaplyginStructure& st, const CovectorField& nu, const State& s) {
    const int m = st.m();
    Vec r = st.project(s.q);
    Vec n = nu.value(r);
    Mat J = nu.jacobian ? nu.jacobian(r) : fd_jacobian(nu.value, r);
    Mat X = d_matrix(st.sys, s.q);
    Mat Xr(m, m);  // reduced components of X_b
    for (int e = 0; e < m; ++e) Xr.row(e) = X.row(st.reduced[e]);
    Vec vdot = nonholonomic_field(st.sys, s).vdot;
    // X_b(nu_a) v^b v^a + nu_a vdot^a
    return s.v.dot(J * (Xr * s.v)) + n.dot(vdot);
}

Candidate candidate_from_first_integral(const ChaplyginStructure& st, const CovectorField& nu,
                                        const ScalarField& F, int pinned,
                                        const std::vector<Vec>& grid) {
    const int k = static_cast<int>(st.verticals.size());
    if (pinned < 0 || pinned >= k) throw Error(Errc::unsupported, "pinned index out of range");
    for (const Vec& r : grid)
        if (!(nu.value(r).norm() > 1e-12))
            throw Error(Errc::positivity, "first integral vanishes on the working domain");
    auto stp = std::make_shared<ChaplyginStructure>(st);
    Candidate c;
    c.gbar_ai = [stp, nu, F, pinned](const Vec& q) {
        Mat g = -stp->blocks(q).Gai;
        g.col(pinned) += std::exp(-F(q)) * nu.value(stp->project(q));
        return g;
    };
    c.F = F;
    return c;
}

Candidate orthogonal_candidate(const ChaplyginStructure& st, const ScalarField& f) {
    auto stp = std::make_shared<ChaplyginStructure>(st);
    Candidate c;
    c.gbar_ai = [stp](const Vec& q) { return Mat(-stp->blocks(q).Gai); };
    c.F = lift_reduced(st, f);
    return c;
}

}  // namespace geoext
