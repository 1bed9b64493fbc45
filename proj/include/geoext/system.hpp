#pragma once

#include "geoext/fields.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace geoext {

// Axis-aligned sampling box.
struct Box {
    Vec lo, hi;
    int points = 5;
};

std::vector<Vec> lattice(const Box& box);
Box sub_box(const Box& box, const std::vector<int>& axes);

// {X_a} spans D (first m), {X_i} its g-orthogonal complement.
struct Frame {
    std::vector<VectorField> fields;
    int m = 0;

    int n() const { return static_cast<int>(fields.size()); }
    int k() const { return n() - m; }
    Mat matrix(const Vec& q) const;  // columns X_alpha(q)
};

// Symmetry data attached to a system: vertical generators and a reduced chart.
struct Action {
    std::vector<VectorField> generators;
    std::vector<int> reduced;  // indices of reduced coordinates inside q
    PointFn section;           // reduced point -> representative q
};

struct FramedSystem {
    std::string name;
    std::vector<std::string> coords;
    std::vector<std::string> labels;  // one per frame field
    MatrixFn metric;                  // coordinate basis
    Frame frame;
    MatrixFn constraint_forms;        // k x n rows mu^i (optional)
    std::optional<Action> action;
    Box domain;
    std::map<std::string, double> params;
    bool possibly_degenerate = false;
    double regularization = 0.0;

    int n() const { return static_cast<int>(coords.size()); }
    int m() const { return frame.m; }
    int k() const { return frame.k(); }
};

struct FramedMetric {
    Mat gab, gij, gai;
};

// Projection of seed fields off D with the metric: seed - X_a g^{ab} g(X_b, seed).
// Pseudo-inverse is used when g_ab is singular.
VectorField project_off_distribution(const MatrixFn& metric,
                                     const std::vector<VectorField>& d_fields,
                                     const VectorField& seed);

}  // namespace geoext
