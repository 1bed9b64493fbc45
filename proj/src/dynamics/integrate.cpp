#include "geoext/dynamics.hpp"

#include "geoext/errors.hpp"

#include <cmath>

namespace geoext {

namespace {

struct Packed {
    int nq, nv;
    Vec pack(const State& s) const {
        Vec y(nq + nv);
        y << s.q, s.v;
        return y;
    }
    State unpack(const Vec& y) const { return {y.head(nq), y.tail(nv)}; }
    Vec rate(const Field& f, const Vec& y) const {
        StateRate r = f(unpack(y));
        Vec d(nq + nv);
        d << r.qdot, r.vdot;
        if (!d.allFinite()) throw Error(Errc::integration_failed, "non-finite rate");
        return d;
    }
};

void record(Trajectory& tr, double t, const State& s, const Monitor& mon) {
    tr.t.push_back(t);
    tr.states.push_back(s);
    if (mon) {
        auto [e, c] = mon(s);
        tr.energy.push_back(e);
        tr.constraint_viol.push_back(c);
    }
}

}  // namespace

Trajectory integrate(const Field& field, const State& s0, double t_end,
                     const IntegratorOptions& opts, const Monitor& monitor) {
    if (!(t_end > 0)) throw Error(Errc::integration_failed, "t_end must be positive");
    Packed pk{static_cast<int>(s0.q.size()), static_cast<int>(s0.v.size())};
    Trajectory tr;
    Vec y = pk.pack(s0);
    double t = 0;
    record(tr, t, s0, monitor);

    try {
        if (opts.method == IntegratorOptions::Method::RK4) {
            const long steps = std::max(1L, std::lround(std::ceil(t_end / opts.dt - 1e-9)));
            for (long j = 1; j <= steps; ++j) {
                double h = std::min(opts.dt, t_end - t);
                Vec k1 = pk.rate(field, y);
                Vec k2 = pk.rate(field, y + 0.5 * h * k1);
                Vec k3 = pk.rate(field, y + 0.5 * h * k2);
                Vec k4 = pk.rate(field, y + h * k3);
                y += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
                t = j == steps ? t_end : t + h;
                if (!y.allFinite()) throw Error(Errc::integration_failed, "state became non-finite");
                if (j % opts.record_every == 0 || j == steps) record(tr, t, pk.unpack(y), monitor);
            }
            return tr;
        }

        // Dormand-Prince 5(4)
        static const double a21 = 1. / 5;
        static const double a31 = 3. / 40, a32 = 9. / 40;
        static const double a41 = 44. / 45, a42 = -56. / 15, a43 = 32. / 9;
        static const double a51 = 19372. / 6561, a52 = -25360. / 2187, a53 = 64448. / 6561,
                            a54 = -212. / 729;
        static const double a61 = 9017. / 3168, a62 = -355. / 33, a63 = 46732. / 5247,
                            a64 = 49. / 176, a65 = -5103. / 18656;
        static const double b1 = 35. / 384, b3 = 500. / 1113, b4 = 125. / 192, b5 = -2187. / 6784,
                            b6 = 11. / 84;
        static const double e1 = 71. / 57600, e3 = -71. / 16695, e4 = 71. / 1920,
                            e5 = -17253. / 339200, e6 = 22. / 525, e7 = -1. / 40;
        double h = std::min(opts.dt, t_end);
        Vec k1 = pk.rate(field, y);
        size_t steps = 0;
        while (t < t_end) {
            if (++steps > opts.max_steps) throw Error(Errc::integration_failed, "too many steps");
            h = std::min(h, t_end - t);
            Vec k2 = pk.rate(field, y + h * a21 * k1);
            Vec k3 = pk.rate(field, y + h * (a31 * k1 + a32 * k2));
            Vec k4 = pk.rate(field, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
            Vec k5 = pk.rate(field, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
            Vec k6 = pk.rate(field, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
            Vec yn = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
            Vec k7 = pk.rate(field, yn);
            Vec err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
            double en = 0;
            for (int i = 0; i < y.size(); ++i) {
                double sc = opts.atol + opts.rtol * std::max(std::abs(y(i)), std::abs(yn(i)));
                en = std::max(en, std::abs(err(i)) / sc);
            }
            if (!std::isfinite(en)) throw Error(Errc::integration_failed, "non-finite error estimate");
            if (en <= 1.0) {
                t = (t_end - t - h) < 1e-14 * t_end ? t_end : t + h;
                y = yn;
                k1 = k7;
                record(tr, t, pk.unpack(y), monitor);
            }
            double fac = en == 0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
            h *= fac;
            if (t < t_end && h < 1e-14 * std::max(1.0, t_end))
                throw Error(Errc::integration_failed, "step size underflow");
        }
        return tr;
    } catch (const Error& e) {
        throw IntegrationError(e.what(), std::move(tr));
    }
}

}  // namespace geoext
