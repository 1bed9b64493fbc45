#pragma once

#include "geoext/expr.hpp"
#include "geoext/system.hpp"

namespace geoext {

// Expression-level description shared by the config loader and the builtins.
struct SystemModel {
    std::string name;
    std::vector<std::string> coords;
    std::vector<expr::Expr> metric;  // n*n, row-major, symmetric

    // D basis: either explicit fields, or the kernel of the constraint forms.
    std::vector<std::vector<expr::Expr>> d_fields;
    std::vector<std::string> d_labels;
    std::vector<std::vector<expr::Expr>> forms;  // k rows of n

    // explicit complement (must already be g-orthogonal); empty -> projection
    std::vector<std::vector<expr::Expr>> perp_fields;
    std::vector<std::string> perp_labels;

    struct Group {
        std::vector<std::vector<expr::Expr>> generators;
        std::vector<std::string> names;
        std::vector<std::string> reduced;
        std::map<std::string, expr::Expr> section;  // non-reduced coord -> expr in reduced coords
    };
    std::optional<Group> group;

    std::map<std::string, double> params;
    Box domain;
    bool possibly_degenerate = false;
    double regularization = 0.0;
};

// Builds frames and validates: independent forms, symmetric metric, positive
// definite on the domain lattice unless flagged.
FramedSystem assemble(const SystemModel& model);

}  // namespace geoext
