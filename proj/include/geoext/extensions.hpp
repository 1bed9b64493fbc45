#pragma once

#include "geoext/dynamics.hpp"

#include "json.hpp"

namespace geoext {

struct Candidate {
    MatrixFn gbar_ai;   // m x k
    ScalarField F;
    MatrixFn gbar_ij;   // optional k x k
};

Candidate zero_candidate(const FramedSystem& sys);

struct ResidualReport {
    std::string name;
    double max_abs = 0;
    double tolerance = 1e-6;
    bool pass = true;
    Vec worst_point;
    std::vector<int> worst_indices;
    std::vector<std::pair<Vec, double>> per_point;
};

nlohmann::json to_json(const ResidualReport& r);

// Candidate-independent data at one point, reusable across candidates.
struct PointGeometry {
    FrameData fd;
    ChristoffelArrays ca;
};
PointGeometry point_geometry(const FramedSystem& sys, const Vec& q);

// T_abc = gbar_bk R^k_ac + gbar_ak R^k_bc - g_bc X_a(F) - g_ac X_b(F) + 2 g_ab X_c(F)
Tensor3d condition_A_residual(const FramedSystem& sys, const Candidate& cand, const Vec& q);
Tensor3d condition_A_residual(const PointGeometry& pg, const Candidate& cand);

// S(i,a,b): symmetric coefficients with residual_i = S(i,a,b) v^a v^b
Tensor3d condition_B_residual(const FramedSystem& sys, const Candidate& cand, const Vec& q);
Tensor3d condition_B_residual(const PointGeometry& pg, const Candidate& cand);

// Residual tensor at q -> report over a set of points.
ResidualReport grid_report(const std::string& name, const std::vector<Vec>& points,
                           const std::function<Tensor3d(const Vec&)>& eval, double tol);

ResidualReport condition_A_report(const FramedSystem& sys, const Candidate& cand,
                                  const std::vector<Vec>& points, double tol = 1e-6);
ResidualReport condition_B_report(const FramedSystem& sys, const Candidate& cand,
                                  const std::vector<Vec>& points, double tol = 1e-6);

// Gamma^nh(C_i) + Gamma^nh(F) C_i along a trajectory, C_i = (gbar_ai + G_ai) v^a.
// Rows follow trajectory samples (interior ones only), columns i.
Mat chaplygin_B_residual(const FramedSystem& sys, const Candidate& cand, const Trajectory& tr);

struct CompletedMetric {
    MatrixFn metric;         // coordinate basis
    MatrixFn frame_block;    // hat g in the frame {X_a, X_i}
    double s = 1;
    bool identity_block = false;  // s*I used instead of s*g_ij
    double min_eigenvalue = 0;    // over the grid, of hat g in the frame
};

// gbar_ij = gbar_ia g^ab gbar_bj + s g_ij with the smallest admissible power of two s.
CompletedMetric complete_metric(const FramedSystem& sys, const Candidate& cand,
                                const std::vector<Vec>& grid);

struct Pregeodesic {
    Vec a_part;
    Vec i_part;
};

Pregeodesic pregeodesic_residual(const FramedSystem& sys, const MatrixFn& ghat, const ScalarField& F,
                                 const State& s);

struct ScanResult {
    double best_beta = 0;
    double min_residual = 0;
    std::vector<std::pair<double, double>> curve;
};

using Ansatz = std::function<Candidate(double)>;

// combined max of (A) and (B) residuals over points
double combined_residual(const FramedSystem& sys, const Candidate& cand,
                         const std::vector<Vec>& points);

ScanResult scan_preserving_extension(const FramedSystem& sys, const Ansatz& ansatz,
                                     const std::vector<Vec>& points, double beta_lo,
                                     double beta_hi, int grid = 41);

}  // namespace geoext
