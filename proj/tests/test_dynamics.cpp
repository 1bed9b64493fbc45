#include "doctest.h"
#include "oracles.hpp"

#include "geoext/builtins.hpp"
#include "geoext/dynamics.hpp"

#include <sstream>

using namespace geoext;

TEST_CASE("nonholonomic particle keeps its known integrals") {
    // y' is constant and x' sqrt(1 + y^2) is conserved
    FramedSystem p = particle("y");
    State s0{Vec::Zero(3), Vec(2)};
    s0.v << 0.8, 0.5;
    Trajectory tr = integrate_nonholonomic(p, s0, 4.0);
    REQUIRE(tr.size() > 100);
    for (size_t j = 0; j < tr.size(); j += 97) {
        const State& s = tr.states[j];
        CHECK(std::abs(s.v(1) - 0.5) < 1e-10);
        CHECK(std::abs(s.v(0) * std::sqrt(1 + s.q(1) * s.q(1)) - 0.8) < 1e-9);
        CHECK(std::abs(s.q(1) - 0.5 * tr.t[j]) < 1e-10);
    }
}

TEST_CASE("energy and constraints are preserved") {
    std::mt19937_64 rng(21);
    for (const auto& sys : {particle("sin(x)+y^2"), carriage(), r4math(1.0)}) {
        Vec q = oracle::uniform(rng, sys.domain.lo * 0.5, sys.domain.hi * 0.5);
        Vec v = oracle::uniform(rng, Vec::Constant(sys.m(), -0.5), Vec::Constant(sys.m(), 0.5));
        const double T = 2.0;
        Trajectory tr = integrate_nonholonomic(sys, {q, v}, T);
        CHECK_MESSAGE(tr.energy_drift() / T <= 1e-8, sys.name << " drift " << tr.energy_drift());
        CHECK_MESSAGE(tr.max_constraint_viol() / T <= 1e-8, sys.name);
    }
}

TEST_CASE("adaptive and fixed-step integrators agree") {
    FramedSystem sys = carriage();
    State s0{Vec::Zero(5), Vec(2)};
    s0.v << 0.6, -0.3;
    IntegratorOptions rk4;
    IntegratorOptions rk45;
    rk45.method = IntegratorOptions::Method::RK45;
    Trajectory a = integrate_nonholonomic(sys, s0, 3.0, rk4);
    Trajectory b = integrate_nonholonomic(sys, s0, 3.0, rk45);
    CHECK(std::abs(b.t.back() - 3.0) < 1e-12);
    CHECK((a.states.back().q - b.states.back().q).norm() < 1e-7);
    CHECK((a.states.back().v - b.states.back().v).norm() < 1e-7);
    CHECK(b.size() < a.size());
}

TEST_CASE("record_every thins the output but keeps the endpoint") {
    FramedSystem sys = particle("y");
    State s0{Vec::Zero(3), Vec::Ones(2)};
    IntegratorOptions o;
    o.record_every = 10;
    Trajectory tr = integrate_nonholonomic(sys, s0, 1.0, o);
    CHECK(tr.size() == 101);
    CHECK(tr.t.back() == doctest::Approx(1.0));
}

TEST_CASE("geodesics of a flat metric are straight lines") {
    FramedSystem f = flat();
    State s0{Vec::Zero(3), Vec(3)};
    s0.v << 1, -2, 0.5;
    Trajectory tr = integrate_geodesic(f.metric, f.frame, s0, 1.5);
    Vec qend = tr.states.back().q;
    CHECK((qend - 1.5 * s0.v).norm() < 1e-12);
}

TEST_CASE("a projective change only reparametrizes geodesics") {
    // upper half plane g = I / y^2 in the coordinate frame
    MatrixFn g = [](const Vec& q) { return Mat(Mat::Identity(2, 2) / (q(1) * q(1))); };
    Frame fr;
    fr.m = 2;
    for (int i = 0; i < 2; ++i)
        fr.fields.push_back(VectorField{[i](const Vec&) { return Vec(Vec::Unit(2, i)); },
                                        [](const Vec&) { return Mat(Mat::Zero(2, 2)); }});
    State s0{Vec(2), Vec(2)};
    s0.q << 0, 1;
    s0.v << 1, 0.3;
    PointFn P = [](const Vec& q) { return Vec((Vec(2) << 0.4, 0.2 * q(0)).finished()); };
    Trajectory geo = integrate_geodesic(g, fr, s0, 1.2);
    Field pf = [&](const State& s) { return projective_field(g, fr, P, s); };
    Trajectory proj = integrate(pf, s0, 1.2, {});
    CHECK((geo.states.back().q - proj.states.back().q).norm() > 1e-2);
    CHECK(compare_as_point_sets(geo, proj, g) < 1e-6);
    // geodesics here are circles centred on the x axis
    auto centre = [](const Vec& q, const Vec& v) { return q(0) + q(1) * v(1) / v(0); };
    const double c0 = centre(s0.q, s0.v);
    for (size_t j = 0; j < proj.size(); j += 53) {
        Vec c = proj.states[j].q;
        double r0 = std::hypot(s0.q(0) - c0, s0.q(1));
        CHECK(std::abs(std::hypot(c(0) - c0, c(1)) - r0) < 1e-9);
    }
}

TEST_CASE("blow-up is reported with the partial trajectory") {
    Field f = [](const State& s) {
        return StateRate{Vec(s.v), Vec(s.v.cwiseProduct(s.v) * 10.0)};
    };
    State s0{Vec::Zero(1), Vec::Ones(1)};
    try {
        integrate(f, s0, 5.0, {});
        FAIL("expected integration failure");
    } catch (const IntegrationError& e) {
        CHECK(e.code() == Errc::integration_failed);
        CHECK(e.partial().size() > 1);
        CHECK(e.partial().t.back() < 0.2);
    }
}

TEST_CASE("point-set comparison rejects empty curves") {
    Trajectory a, b;
    MatrixFn g = [](const Vec&) { return Mat(Mat::Identity(1, 1)); };
    CHECK_THROWS_AS(compare_as_point_sets(a, b, g), Error);
}

TEST_CASE("csv layout") {
    FramedSystem sys = particle("y");
    Trajectory tr = integrate_nonholonomic(sys, {Vec::Zero(3), Vec::Ones(2)}, 0.01);
    std::ostringstream os;
    write_csv(os, tr, sys.coords, {"v_x", "v_y"});
    std::istringstream is(os.str());
    std::string header, row;
    std::getline(is, header);
    CHECK(header == "t,x,y,z,v_x,v_y,E,constraint_viol");
    std::getline(is, row);
    CHECK(std::count(row.begin(), row.end(), ',') == 7);
}
