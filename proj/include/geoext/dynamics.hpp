#pragma once

#include "geoext/errors.hpp"
#include "geoext/geometry.hpp"

#include <iosfwd>
#include <map>

namespace geoext {

struct State {
    Vec q;
    Vec v;  // m entries when constrained, n when not
};

struct StateRate {
    Vec qdot;
    Vec vdot;
};

StateRate nonholonomic_field(const FramedSystem& sys, const State& s);

// lambda_i = g_ki Gamma^k_ab v^a v^b
Vec lagrange_multipliers(const FramedSystem& sys, const State& s);

// Geodesic spray of `metric` in the quasi-velocities of `frame`.
StateRate geodesic_field(const MatrixFn& metric, const Frame& frame, const State& s);

// Gamma_hat + P Delta, with P(q) the covector P_beta.
StateRate projective_field(const MatrixFn& metric, const Frame& frame, const PointFn& P,
                           const State& s);

struct Trajectory {
    std::vector<double> t;
    std::vector<State> states;
    std::vector<double> energy;
    std::vector<double> constraint_viol;
    std::map<std::string, std::vector<double>> residuals;

    size_t size() const { return t.size(); }
    double energy_drift() const;
    double max_constraint_viol() const;
};

struct IntegratorOptions {
    enum class Method { RK4, RK45 } method = Method::RK4;
    double dt = 1e-3;
    double rtol = 1e-10;
    double atol = 1e-12;
    size_t max_steps = 10'000'000;
    int record_every = 1;  // RK4 only
};

using Field = std::function<StateRate(const State&)>;
// energy, constraint violation
using Monitor = std::function<std::pair<double, double>(const State&)>;

class IntegrationError : public Error {
public:
    IntegrationError(const std::string& what, Trajectory partial)
        : Error(Errc::integration_failed, what), partial_(std::move(partial)) {}
    const Trajectory& partial() const { return partial_; }

private:
    Trajectory partial_;
};

Trajectory integrate(const Field& field, const State& s0, double t_end,
                     const IntegratorOptions& opts, const Monitor& monitor = {});

// Convenience wrappers with the standard monitors.
Trajectory integrate_nonholonomic(const FramedSystem& sys, const State& s0, double t_end,
                                  const IntegratorOptions& opts = {});
Trajectory integrate_geodesic(const MatrixFn& metric, const Frame& frame, const State& s0,
                              double t_end, const IntegratorOptions& opts = {});

double kinetic_energy(const MatrixFn& metric, const Frame& frame, const State& s);

// max |mu^i(qdot)| if forms are present, else max |v^i| of the unconstrained embedding
double constraint_violation(const FramedSystem& sys, const State& s);

// Max coordinate distance after resampling both curves by metric arclength.
double compare_as_point_sets(const Trajectory& a, const Trajectory& b, const MatrixFn& metric,
                             int samples = 512);

void write_csv(std::ostream& os, const Trajectory& tr, const std::vector<std::string>& coords,
               const std::vector<std::string>& vel_names);

}  // namespace geoext
