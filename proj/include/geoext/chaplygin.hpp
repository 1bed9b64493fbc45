#pragma once

#include "geoext/extensions.hpp"

#include <optional>

namespace geoext {

// Blocks of g in the frame {X_a, V_i}.
struct ChaplyginBlocks {
    Mat Gab, Gai, Gij, K;  // K(b,i) = K^b_i = -G^{ab} G_ai
};

struct ChaplyginStructure {
    FramedSystem sys;
    std::vector<VectorField> verticals;
    std::vector<int> reduced;  // indices of reduced coordinates in q
    PointFn section;
    double invariance_residual = 0;  // max |[X_a,V_i]| and |V_i(G_ab)| seen while building

    int m() const { return sys.m(); }
    Vec lift(const Vec& r) const { return section(r); }
    Vec project(const Vec& q) const;
    ChaplyginBlocks blocks(const Vec& q) const;
};

// Validates D-invariance and the horizontal-lift property on the system's sample grid.
ChaplyginStructure build_structure(const FramedSystem& sys, double tol = 1e-8);

// Reduced scalar field lifted to Q: F = f o pi.
ScalarField lift_reduced(const ChaplyginStructure& st, const ScalarField& f);

struct GyroData {
    Tensor3d T;       // R^d_ab
    Vec beta;         // sum_a R^a_ab
    Tensor3d XiG;     // (b,c,a): -1/2 R^j_bc G_ja, coefficient of q'^a dq^b ^ dq^c
    Tensor3d gammaG;  // (b,c,a)
    Tensor3d ThetaG;  // (a,b,c): G_bk R^k_ca + G_ck R^k_ab + G_ak R^k_bc
    Tensor3d GR;      // (a,b,c): G_ak R^k_bc
    double invariance = 0;  // discrepancy against a group-shifted representative
};

GyroData gyro_data(const ChaplyginStructure& st, const Vec& r);

Tensor3d phi_simplicity_residual(const ChaplyginStructure& st, const ScalarField& phi, const Vec& r);

// G_bk R^k_ac + G_ak R^k_bc + g_bc f_a + g_ac f_b - 2 g_ab f_c
Tensor3d conditionAG_residual(const ChaplyginStructure& st, const ScalarField& f, const Vec& r);

// d beta in reduced coordinates, antisymmetric m x m
Mat dbeta(const ChaplyginStructure& st, const Vec& r);

struct RecoveredF {
    double value = 0;      // along the primary path
    double alternate = 0;  // along the second path
    double discrepancy = 0;
};

// f(target) - f(base) by integrating beta/(m-1); path = polyline of reduced points
// (empty -> straight segment); second path goes coordinate by coordinate.
RecoveredF recover_f(const ChaplyginStructure& st, const Vec& base, const Vec& target,
                     const std::vector<Vec>& path = {}, double tol = 1e-6);

enum class Level { GEODESIC_EXT_F0, PHI_SIMPLE, ORTHO_PROJECTIVE_EXT, INVARIANT_MEASURE_ONLY, NONE };
const char* level_name(Level l);

struct ClassificationReport {
    Level level = Level::NONE;
    std::map<std::string, double> residuals;
    std::vector<std::string> marginal;
    std::map<std::string, bool> tiers;  // "i".."iv"
    double tolerance = 1e-6;
    std::vector<std::pair<Vec, double>> f_recovered;
};

ClassificationReport classify(const ChaplyginStructure& st, const std::vector<Vec>& grid,
                              double tol = 1e-6, int jobs = 1);

nlohmann::json to_json(const ClassificationReport& r);
std::string to_markdown(const ClassificationReport& r);

// reduced metric and its coordinate Christoffel symbols
Mat reduced_metric(const ChaplyginStructure& st, const Vec& r);
Vec reduced_field(const ChaplyginStructure& st, const Vec& r, const Vec& rdot);

Vec gyroscopic_alpha(const ChaplyginStructure& st, const Vec& r, const Vec& rdot);
// i_Gamma of a 2-form with coefficients W(b,c,a) q'^a dq^b ^ dq^c
Vec contract_two_form(const Tensor3d& W, const Vec& rdot);

double invariant_measure_residual(const ChaplyginStructure& st, const ScalarField& f, const Vec& r,
                                  const Vec& rdot);

// Gamma^k - (Gamma^red - Gamma^red(f) Delta), acceleration components
Vec hamiltonization_residual(const ChaplyginStructure& st, const ScalarField& f, const Vec& r,
                             const Vec& rdot);

// dpsi(e^{-f} Gamma^red) - Gamma^k o psi, velocity components
Vec psi_relatedness_residual(const ChaplyginStructure& st, const ScalarField& f, const Vec& r,
                             const Vec& rdot);

// Gamma^nh(nu_a v^a); nu is a covector field on Q/G with optional jacobian
struct CovectorField {
    PointFn value;      // reduced point -> m components
    MatrixFn jacobian;  // optional (m x m), d nu_a / d r^b
};
double first_integral_residual(const ChaplyginStructure& st, const CovectorField& nu, const State& s);

Candidate candidate_from_first_integral(const ChaplyginStructure& st, const CovectorField& nu,
                                        const ScalarField& F, int pinned,
                                        const std::vector<Vec>& grid);

// The (V pi, D)-orthogonal candidate gbar_ai = -G_ai with F = f o pi.
Candidate orthogonal_candidate(const ChaplyginStructure& st, const ScalarField& f);

}  // namespace geoext
