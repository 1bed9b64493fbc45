#pragma once

#include "geoext/system.hpp"

namespace geoext {

Vec lie_bracket(const VectorField& X, const VectorField& Y, const Vec& q);

// c with sum c^alpha X_alpha(q) = v
Vec frame_decompose(const Mat& frame_matrix, const Vec& v);
Vec frame_decompose(const Frame& frame, const Vec& v, const Vec& q);

// R(gamma, alpha, beta): [X_alpha, X_beta] = R^gamma_{alpha beta} X_gamma
Tensor3d bracket_coefficients(const Frame& frame, const Vec& q);

FramedMetric metric_in_frame(const MatrixFn& g, const Frame& frame, const Vec& q);

// Everything the Koszul formula needs at one point.
struct FrameData {
    Vec q;
    Mat phi;                // frame matrix
    Mat G;                  // metric in the frame, n x n
    Tensor3d R;             // bracket table
    std::vector<Mat> dG;    // dG[alpha] = X_alpha(G)
    int m = 0;
};

FrameData frame_data(const MatrixFn& g, const Frame& frame, const Vec& q);

// Lowered Koszul contraction: out_alpha = G_{alpha delta} Gamma^delta_{beta gamma} v^beta v^gamma,
// from 2 X_b(G_{c alpha}) - X_alpha(G_{bc}) - 2 G_{dc} R^d_{b alpha}, halved.
Vec koszul_lowered(const FrameData& fd, const Vec& v);

struct Contraction {
    Vec a;        // Gamma^d_ab v^a v^b
    Vec i;        // Gamma^k_ab v^a v^b
    Vec lowered_i;  // g_ki Gamma^k_ab v^a v^b
};

// Nonholonomic Christoffel contraction for v in D (m components).
Contraction christoffel_contraction(const FrameData& fd, const Vec& v);
Contraction christoffel_contraction(const FramedSystem& sys, const Vec& q, const Vec& v);

// Symmetric arrays Gamma^d_(ab) (m x m x m) and g_ki Gamma^k_(ab) (k x m x m).
struct ChristoffelArrays {
    Tensor3d upper_a;
    Tensor3d lowered_i;
};
ChristoffelArrays christoffel_arrays(const FrameData& fd);

// Solve with a symmetric block; throws degenerate_metric when singular.
Vec solve_block(const Mat& A, const Vec& b);

// Coordinate Christoffel symbols of g: Gamma(l, mu, nu).
Tensor3d coordinate_christoffel(const MatrixFn& g, const Vec& q);

bool is_positive_definite(const Mat& A, double margin = 0.0);
double min_eigenvalue(const Mat& A);

}  // namespace geoext
