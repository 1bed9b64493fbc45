#include "doctest.h"
#include "oracles.hpp"

#include "geoext/builtins.hpp"
#include "geoext/chaplygin.hpp"
#include "geoext/errors.hpp"

using namespace geoext;

namespace {

std::vector<FramedSystem> zoo() {
    return {particle("y"), particle("sin(x)+y^2"), carriage(), r4math(1.0), flat()};
}

}  // namespace

TEST_CASE("lie bracket of coordinate-affine fields") {
    // X = y d/dx, Y = x d/dy, [X,Y] = -x d/dx + y d/dy
    VectorField X{[](const Vec& q) { return Vec((Vec(2) << q(1), 0).finished()); }, {}};
    VectorField Y{[](const Vec& q) { return Vec((Vec(2) << 0, q(0)).finished()); }, {}};
    Vec q(2);
    q << 0.3, -0.7;
    Vec b = lie_bracket(X, Y, q);
    CHECK(b(0) == doctest::Approx(-0.3).epsilon(1e-10));
    CHECK(b(1) == doctest::Approx(-0.7).epsilon(1e-10));
}

TEST_CASE("frame decomposition round trip and singular frame") {
    Mat P(2, 2);
    P << 2, 1, 0, 3;
    Vec v(2);
    v << 1, -1;
    CHECK((P * frame_decompose(P, v) - v).norm() < 1e-14);
    Mat S(2, 2);
    S << 1, 2, 2, 4;
    CHECK_THROWS_AS(frame_decompose(S, v), Error);
}

TEST_CASE("particle bracket table at (0,1,0)") {
    FramedSystem p = particle("y");
    Vec q(3);
    q << 0, 1, 0;
    Tensor3d R = bracket_coefficients(p.frame, q);
    CHECK(R(2, 0, 1) == doctest::Approx(-1).epsilon(1e-10));
    CHECK(R(0, 0, 1) == doctest::Approx(-0.5).epsilon(1e-10));
    CHECK(R(2, 2, 1) == doctest::Approx(0.5).epsilon(1e-10));
    // [X_y, X_z] = -rho'/(1+rho^2)^2 X_x - rho rho'/(1+rho^2) X_z
    CHECK(R(0, 1, 2) == doctest::Approx(-0.25).epsilon(1e-10));
    CHECK(R(2, 1, 2) == doctest::Approx(-0.5).epsilon(1e-10));
}

TEST_CASE("bracket antisymmetry and Jacobi identity") {
    std::mt19937_64 rng(7);
    for (const auto& sys : zoo()) {
        for (int t = 0; t < 4; ++t) {
            Vec q = oracle::uniform(rng, sys.domain.lo * 0.8, sys.domain.hi * 0.8);
            Tensor3d R = bracket_coefficients(sys.frame, q);
            const int n = sys.n();
            for (int g = 0; g < n; ++g)
                for (int a = 0; a < n; ++a)
                    for (int b = 0; b < n; ++b) CHECK(std::abs(R(g, a, b) + R(g, b, a)) < 1e-12);
            // sum_cyc R^d_ab R^e_dc - X_c(R^e_ab) = 0
            Mat P = sys.frame.matrix(q);
            std::vector<Tensor3d> dR(n);
            for (int c = 0; c < n; ++c) {
                const double h = 1e-5;
                Tensor3d Rp = bracket_coefficients(sys.frame, q + h * P.col(c));
                Tensor3d Rm = bracket_coefficients(sys.frame, q - h * P.col(c));
                dR[c] = Tensor3d(n, n, n);
                for (int e = 0; e < n; ++e)
                    for (int a = 0; a < n; ++a)
                        for (int b = 0; b < n; ++b) dR[c](e, a, b) = (Rp(e, a, b) - Rm(e, a, b)) / (2 * h);
            }
            double worst = 0;
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b)
                    for (int c = 0; c < n; ++c)
                        for (int e = 0; e < n; ++e) {
                            auto term = [&](int x, int y, int z) {
                                double s = -dR[z](e, x, y);
                                for (int d = 0; d < n; ++d) s += R(d, x, y) * R(e, d, z);
                                return s;
                            };
                            worst = std::max(worst, std::abs(term(a, b, c) + term(b, c, a) + term(c, a, b)));
                        }
            CHECK_MESSAGE(worst < 1e-6, sys.name << " Jacobi defect " << worst);
        }
    }
}

TEST_CASE("geodesic spray in a frame matches coordinate Christoffel symbols") {
    std::mt19937_64 rng(11);
    for (const auto& sys : {particle("sin(x)+y^2"), r4math(1.0), flat()}) {
        for (int t = 0; t < 5; ++t) {
            Vec q = oracle::uniform(rng, sys.domain.lo * 0.8, sys.domain.hi * 0.8);
            Vec v = oracle::uniform(rng, Vec::Constant(sys.n(), -1), Vec::Constant(sys.n(), 1));
            StateRate r = geodesic_field(sys.metric, sys.frame, {q, v});
            // qddot = d/dt (P v) = (dP . qdot) v + P vdot
            Mat P = sys.frame.matrix(q);
            Vec qd = P * v;
            Mat dP = oracle::jacobian([&](const Vec& p) {
                Mat M = sys.frame.matrix(p);
                return Vec(Eigen::Map<Vec>(M.data(), M.size()));
            }, q);
            Vec dPv = dP * qd;
            Mat dPm = Eigen::Map<Mat>(dPv.data(), sys.n(), sys.n());
            Vec qdd = dPm * v + P * r.vdot;
            Vec expect = -oracle::quad(oracle::christoffel(sys.metric, q), qd);
            CHECK_MESSAGE((qdd - expect).cwiseAbs().maxCoeff() < 1e-6, sys.name);
        }
    }
}

TEST_CASE("nonholonomic field matches the coordinate KKT system") {
    std::mt19937_64 rng(5);
    for (const auto& sys : {particle("y"), particle("sin(x)+y^2"), carriage(), r4math(1.0)}) {
        for (int t = 0; t < 5; ++t) {
            Vec q = oracle::uniform(rng, sys.domain.lo * 0.8, sys.domain.hi * 0.8);
            Vec v = oracle::uniform(rng, Vec::Constant(sys.m(), -1), Vec::Constant(sys.m(), 1));
            StateRate r = nonholonomic_field(sys, {q, v});
            Mat P = sys.frame.matrix(q);
            Vec qd = P.leftCols(sys.m()) * v;
            // coordinate acceleration of the frame solution
            Mat dP = oracle::jacobian([&](const Vec& p) {
                Mat M = sys.frame.matrix(p).leftCols(sys.m());
                return Vec(Eigen::Map<Vec>(M.data(), M.size()));
            }, q);
            Vec dPv = dP * qd;
            Mat dPm = Eigen::Map<Mat>(dPv.data(), sys.n(), sys.m());
            Vec qdd = dPm * v + P.leftCols(sys.m()) * r.vdot;
            // KKT: g qdd + g Gamma(qd,qd) = mu^T lambda, mu qdd + (dmu . qd) qd = 0
            Mat g = sys.metric(q);
            Mat mu = sys.constraint_forms(q);
            const int k = static_cast<int>(mu.rows()), n = sys.n();
            Mat dmu = oracle::jacobian([&](const Vec& p) {
                Mat M = sys.constraint_forms(p);
                return Vec(Eigen::Map<Vec>(M.data(), M.size()));
            }, q);
            Vec dmuv = dmu * qd;
            Mat dmum = Eigen::Map<Mat>(dmuv.data(), k, n);
            Mat K = Mat::Zero(n + k, n + k);
            K.topLeftCorner(n, n) = g;
            K.topRightCorner(n, k) = -mu.transpose();
            K.bottomLeftCorner(k, n) = mu;
            Vec rhs(n + k);
            rhs << -g * oracle::quad(oracle::christoffel(sys.metric, q), qd), -dmum * qd;
            Vec sol = K.fullPivLu().solve(rhs);
            CHECK_MESSAGE((qdd - sol.head(n)).cwiseAbs().maxCoeff() < 1e-6, sys.name);
        }
    }
}

TEST_CASE("multipliers equal g(X_i, nabla_V V) for V = v^a X_a") {
    std::mt19937_64 rng(3);
    for (const auto& sys : {particle("y"), particle("sin(x)+y^2"), carriage(), r4math(1.0)}) {
        for (int t = 0; t < 4; ++t) {
            Vec q = oracle::uniform(rng, sys.domain.lo * 0.8, sys.domain.hi * 0.8);
            Vec v = oracle::uniform(rng, Vec::Constant(sys.m(), -1), Vec::Constant(sys.m(), 1));
            Vec lam = lagrange_multipliers(sys, {q, v});
            auto V = [&](const Vec& p) { return Vec(sys.frame.matrix(p).leftCols(sys.m()) * v); };
            Vec Vq = V(q);
            Vec cov = oracle::jacobian(V, q) * Vq + oracle::quad(oracle::christoffel(sys.metric, q), Vq);
            Mat P = sys.frame.matrix(q);
            Vec expect = P.rightCols(sys.k()).transpose() * sys.metric(q) * cov;
            CHECK_MESSAGE((lam - expect).cwiseAbs().maxCoeff() < 1e-6, sys.name);
        }
    }
}

TEST_CASE("christoffel arrays reproduce the contraction") {
    FramedSystem sys = carriage();
    Vec q(5);
    q << 0.1, -0.2, 0.4, 0.3, -0.5;
    Vec v(2);
    v << 0.7, -1.1;
    FrameData fd = frame_data(sys.metric, sys.frame, q);
    ChristoffelArrays ca = christoffel_arrays(fd);
    Contraction c = christoffel_contraction(fd, v);
    CHECK((contract_quadratic(ca.upper_a, v) - c.a).norm() < 1e-12);
    CHECK((contract_quadratic(ca.lowered_i, v) - c.lowered_i).norm() < 1e-12);
}

TEST_CASE("g_ce R^c_ab = G_ej R^j_ab on Chaplygin systems") {
    std::mt19937_64 rng(13);
    for (const auto& sys : {particle("y"), carriage(), r4math(0.0), r4math(1.0)}) {
        ChaplyginStructure st = build_structure(sys);
        const int m = sys.m();
        for (int t = 0; t < 4; ++t) {
            Vec q = oracle::uniform(rng, sys.domain.lo, sys.domain.hi);
            Tensor3d R = bracket_coefficients(sys.frame, q);
            ChaplyginBlocks bl = st.blocks(q);
            for (int e = 0; e < m; ++e)
                for (int a = 0; a < m; ++a)
                    for (int b = 0; b < m; ++b) {
                        double lhs = 0, rhs = 0;
                        for (int c = 0; c < m; ++c) lhs += bl.Gab(c, e) * R(c, a, b);
                        for (int j = 0; j < sys.k(); ++j) rhs += bl.Gai(e, j) * R(m + j, a, b);
                        CHECK(std::abs(lhs - rhs) < 1e-8);
                    }
        }
    }
}

TEST_CASE("polarize recovers symmetric coefficients") {
    Tensor3d S(2, 3, 3);
    std::mt19937_64 rng(1);
    std::normal_distribution<double> nd;
    for (int r = 0; r < 2; ++r)
        for (int a = 0; a < 3; ++a)
            for (int b = a; b < 3; ++b) S(r, a, b) = S(r, b, a) = nd(rng);
    auto Q = [&](const Vec& v) { return contract_quadratic(S, v); };
    Tensor3d P = polarize<double>(Q, 2, 3);
    P -= S;
    CHECK(P.max_abs() < 1e-14);
}

TEST_CASE("positive definiteness helpers") {
    Mat A(2, 2);
    A << 2, 1, 1, 2;
    CHECK(is_positive_definite(A));
    CHECK(min_eigenvalue(A) == doctest::Approx(1.0));
    A(1, 1) = 0.4;
    CHECK_FALSE(is_positive_definite(A));
}

TEST_CASE("lattice and sub_box") {
    Box b{Vec::Constant(2, -1), Vec::Constant(2, 1), 3};
    auto pts = lattice(b);
    CHECK(pts.size() == 9);
    CHECK(pts.front()(0) == -1);
    CHECK(pts.back()(1) == 1);
    Box s = sub_box(Box{Vec::LinSpaced(3, 0, 2), Vec::LinSpaced(3, 1, 3), 4}, {2});
    CHECK(s.lo(0) == 2);
    CHECK(s.points == 4);
    CHECK_THROWS_AS(lattice(Box{Vec(), Vec(), 3}), Error);
}
