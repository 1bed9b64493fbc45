#pragma once

#include "geoext/errors.hpp"
#include "geoext/fields.hpp"

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace geoext::expr {

enum class Kind { Num, Var, Neg, Add, Sub, Mul, Div, Pow, Call };
enum class Fn { Sin, Cos, Tan, Exp, Ln, Sqrt };

struct Node;
using Expr = std::shared_ptr<const Node>;

struct Node {
    Kind kind;
    double value = 0.0;   // Num
    std::string name;     // Var
    Fn fn = Fn::Sin;      // Call
    Expr lhs, rhs;        // operands (unary ops and calls use lhs)
};

class SyntaxError : public Error {
public:
    SyntaxError(size_t offset, std::vector<std::string> expected, const std::string& msg);
    size_t offset() const { return offset_; }
    const std::vector<std::string>& expected() const { return expected_; }

private:
    size_t offset_;
    std::vector<std::string> expected_;
};

Expr num(double v);
Expr var(std::string name);
Expr neg(Expr a);
Expr add(Expr a, Expr b);
Expr sub(Expr a, Expr b);
Expr mul(Expr a, Expr b);
Expr div(Expr a, Expr b);
Expr pow(Expr a, Expr b);
Expr call(Fn f, Expr a);

Expr parse(std::string_view text);
std::string to_string(const Expr& e);
bool equal(const Expr& a, const Expr& b);

// Exact derivative; folds constants, nothing more.
Expr differentiate(const Expr& e, const std::string& var);

// Free variable names, sorted.
std::vector<std::string> variables(const Expr& e);

// Replace variables by expressions.
Expr substitute(const Expr& e, const std::map<std::string, Expr>& repl);

double evaluate(const Expr& e, const std::map<std::string, double>& env);

// Stack-machine form with variables bound to slots of an input vector.
class Compiled {
public:
    Compiled() = default;
    Compiled(const Expr& e, const std::vector<std::string>& slots,
             const std::map<std::string, double>& constants);
    double operator()(const Vec& x) const;
    double operator()(const double* x) const;
    bool is_constant() const;

private:
    enum class Op : unsigned char { Const, Load, Neg, Add, Sub, Mul, Div, Pow, Call };
    struct Instr {
        Op op;
        Fn fn;
        int slot;
        double value;
    };
    std::vector<Instr> code_;
    int depth_ = 0;
};

// Scalar field on R^n with analytic gradient.
ScalarField scalar_field(const Expr& e, const std::vector<std::string>& coords,
                         const std::map<std::string, double>& params);

// Vector field from n component expressions, analytic jacobian.
VectorField vector_field(const std::vector<Expr>& comps, const std::vector<std::string>& coords,
                         const std::map<std::string, double>& params);

// Symmetric matrix field from expressions (row-major n x n).
MatrixFn matrix_field(const std::vector<Expr>& entries, int rows, int cols,
                      const std::vector<std::string>& coords,
                      const std::map<std::string, double>& params);

}  // namespace geoext::expr
