#include "geoext/dynamics.hpp"

#include "geoext/errors.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace geoext {

StateRate nonholonomic_field(const FramedSystem& sys, const State& s) {
    FrameData fd = frame_data(sys.metric, sys.frame, s.q);
    Contraction c = christoffel_contraction(fd, s.v);
    return {fd.phi.leftCols(sys.m()) * s.v, -c.a};
}

Vec lagrange_multipliers(const FramedSystem& sys, const State& s) {
    return christoffel_contraction(sys, s.q, s.v).lowered_i;
}

StateRate geodesic_field(const MatrixFn& metric, const Frame& frame, const State& s) {
    FrameData fd = frame_data(metric, frame, s.q);
    Eigen::LLT<Mat> llt(fd.G);
    if (llt.info() != Eigen::Success)
        throw Error(Errc::degenerate_metric, "geodesic field needs a positive definite metric");
    Vec v = s.v;
    if (v.size() < frame.n()) {
        v = Vec::Zero(frame.n());
        v.head(s.v.size()) = s.v;
    }
    Vec low = koszul_lowered(fd, v);
    return {fd.phi * v, -llt.solve(low)};
}

StateRate projective_field(const MatrixFn& metric, const Frame& frame, const PointFn& P,
                           const State& s) {
    StateRate r = geodesic_field(metric, frame, s);
    Vec v = s.v;
    if (v.size() < frame.n()) {
        v = Vec::Zero(frame.n());
        v.head(s.v.size()) = s.v;
    }
    r.vdot += P(s.q).dot(v) * v;
    return r;
}

double kinetic_energy(const MatrixFn& metric, const Frame& frame, const State& s) {
    Mat P = frame.matrix(s.q).leftCols(s.v.size());
    Vec qd = P * s.v;
    return 0.5 * qd.dot(metric(s.q) * qd);
}

double constraint_violation(const FramedSystem& sys, const State& s) {
    Mat P = sys.frame.matrix(s.q);
    Vec qd = P.leftCols(s.v.size()) * s.v;
    if (sys.constraint_forms) return (sys.constraint_forms(s.q) * qd).cwiseAbs().maxCoeff();
    Vec c = frame_decompose(P, qd);
    return sys.k() ? c.tail(sys.k()).cwiseAbs().maxCoeff() : 0.0;
}

double Trajectory::energy_drift() const {
    double d = 0;
    for (double e : energy) d = std::max(d, std::abs(e - energy.front()));
    return d;
}

double Trajectory::max_constraint_viol() const {
    double d = 0;
    for (double c : constraint_viol) d = std::max(d, c);
    return d;
}

Trajectory integrate_nonholonomic(const FramedSystem& sys, const State& s0, double t_end,
                                  const IntegratorOptions& opts) {
    Field f = [&sys](const State& s) { return nonholonomic_field(sys, s); };
    Monitor mon = [&sys](const State& s) {
        return std::make_pair(kinetic_energy(sys.metric, sys.frame, s), constraint_violation(sys, s));
    };
    return integrate(f, s0, t_end, opts, mon);
}

Trajectory integrate_geodesic(const MatrixFn& metric, const Frame& frame, const State& s0,
                              double t_end, const IntegratorOptions& opts) {
    State start = s0;
    if (start.v.size() < frame.n()) {
        start.v = Vec::Zero(frame.n());
        start.v.head(s0.v.size()) = s0.v;
    }
    Field f = [&metric, &frame](const State& s) { return geodesic_field(metric, frame, s); };
    Monitor mon = [&metric, &frame](const State& s) {
        double viol = frame.k() ? s.v.tail(frame.k()).cwiseAbs().maxCoeff() : 0.0;
        return std::make_pair(kinetic_energy(metric, frame, s), viol);
    };
    return integrate(f, start, t_end, opts, mon);
}

double compare_as_point_sets(const Trajectory& a, const Trajectory& b, const MatrixFn& metric,
                             int samples) {
    if (a.size() == 0 || b.size() == 0) throw Error(Errc::zero_length, "empty trajectory");
    auto arclength = [&](const Trajectory& tr) {
        std::vector<double> s(tr.size(), 0.0);
        for (size_t j = 1; j < tr.size(); ++j) {
            Vec dq = tr.states[j].q - tr.states[j - 1].q;
            Vec mid = 0.5 * (tr.states[j].q + tr.states[j - 1].q);
            s[j] = s[j - 1] + std::sqrt(std::max(0.0, dq.dot(metric(mid) * dq)));
        }
        return s;
    };
    std::vector<double> sa = arclength(a), sb = arclength(b);
    double L = std::min(sa.back(), sb.back());
    if (!(L > 0)) throw Error(Errc::zero_length, "zero-length curve");
    auto at = [](const Trajectory& tr, const std::vector<double>& s, double x, size_t& hint) {
        while (hint + 1 < s.size() && s[hint + 1] < x) ++hint;
        if (hint + 1 >= s.size()) return Vec(tr.states.back().q);
        double w = s[hint + 1] > s[hint] ? (x - s[hint]) / (s[hint + 1] - s[hint]) : 0.0;
        w = std::clamp(w, 0.0, 1.0);
        return Vec((1 - w) * tr.states[hint].q + w * tr.states[hint + 1].q);
    };
    double dist = 0;
    size_t ha = 0, hb = 0;
    for (int k = 0; k < samples; ++k) {
        double x = L * k / (samples - 1);
        dist = std::max(dist, (at(a, sa, x, ha) - at(b, sb, x, hb)).norm());
    }
    return dist;
}

void write_csv(std::ostream& os, const Trajectory& tr, const std::vector<std::string>& coords,
               const std::vector<std::string>& vel_names) {
    os << "t";
    for (const auto& c : coords) os << ',' << c;
    for (const auto& v : vel_names) os << ',' << v;
    os << ",E,constraint_viol\n";
    char buf[40];
    auto put = [&](double x) {
        std::snprintf(buf, sizeof buf, "%.17g", x);
        os << buf;
    };
    for (size_t j = 0; j < tr.size(); ++j) {
        put(tr.t[j]);
        for (int i = 0; i < tr.states[j].q.size(); ++i) os << ',', put(tr.states[j].q(i));
        for (int i = 0; i < tr.states[j].v.size(); ++i) os << ',', put(tr.states[j].v(i));
        os << ',';
        put(j < tr.energy.size() ? tr.energy[j] : 0.0);
        os << ',';
        put(j < tr.constraint_viol.size() ? tr.constraint_viol[j] : 0.0);
        os << '\n';
    }
}

}  // namespace geoext
