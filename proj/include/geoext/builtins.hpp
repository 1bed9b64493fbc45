#pragma once

#include "geoext/extensions.hpp"
#include "geoext/model.hpp"

namespace geoext {

// Particle in R^3 with constraint z' = rho x'.
SystemModel particle_model(const std::string& rho = "y");
FramedSystem particle(const std::string& rho = "y");
// rho as a numerical field (e.g. the solution of an ODE), gradient required
FramedSystem particle(const ScalarField& rho);

struct CarriageParams {
    double R = 1, c = 1, m = 2, m0 = 1, J = 1, J2 = 1, ell = 1;
};

// coordinates (x, y, theta, psi1, psi2)
SystemModel carriage_model(const CarriageParams& p = {});
FramedSystem carriage(const CarriageParams& p = {});

// the nonzero ell admitting an F = 0 extension
double carriage_ell1(const CarriageParams& p);
// R^3 m0 / (4 c^2 (P+Q)), so that R^psi1_psi1psi2 = -kappa ell
double carriage_kappa(const CarriageParams& p);
CarriageParams carriage_params(const std::map<std::string, double>& params);

// gbar_{a x} = beta cos theta, gbar_{a y} = beta sin theta, gbar_{a theta} = -G_{a theta}, F = 0
Ansatz carriage_scan_ansatz(const FramedSystem& carriage);

// coordinates (x, y, z, u); eps regularizes the singular g_ab block
SystemModel r4math_model(double eps = 0);
FramedSystem r4math(double eps = 0);

// Euclidean R^3, z' = 0, translations in z; every bracket vanishes
SystemModel flat_model();
FramedSystem flat();

std::vector<std::string> builtin_names();
// default parameter values as strings
std::map<std::string, std::string> builtin_defaults(const std::string& name);
FramedSystem builtin(const std::string& name, const std::map<std::string, std::string>& params = {});

}  // namespace geoext
