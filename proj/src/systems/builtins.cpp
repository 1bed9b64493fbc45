#include "geoext/builtins.hpp"

#include "geoext/errors.hpp"

#include <cmath>

namespace geoext {

namespace {

using expr::Expr;
using expr::parse;

std::vector<Expr> row(std::initializer_list<const char*> items) {
    std::vector<Expr> out;
    for (const char* s : items) out.push_back(parse(s));
    return out;
}

Box cube(int n, double lo, double hi, int points) {
    return {Vec::Constant(n, lo), Vec::Constant(n, hi), points};
}

}  // namespace

SystemModel particle_model(const std::string& rho_text) {
    Expr rho = parse(rho_text);
    Expr one = expr::num(1), zero = expr::num(0);
    Expr den = expr::add(one, expr::pow(rho, expr::num(2)));
    SystemModel md;
    md.name = "particle";
    md.coords = {"x", "y", "z"};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) md.metric.push_back(expr::num(i == j));
    md.d_fields = {{one, zero, rho}, {zero, one, zero}};
    md.d_labels = {"x", "y"};
    md.perp_fields = {{expr::neg(expr::div(rho, den)), zero, expr::div(one, den)}};
    md.perp_labels = {"z"};
    md.forms = {{expr::neg(rho), zero, one}};
    SystemModel::Group g;
    g.generators = {{zero, zero, one}};
    g.names = {"z"};
    g.reduced = {"x", "y"};
    g.section = {{"z", zero}};
    md.group = g;
    md.domain = cube(3, -1, 1, 5);
    return md;
}

FramedSystem particle(const std::string& rho) { return assemble(particle_model(rho)); }

FramedSystem particle(const ScalarField& rho) {
    FramedSystem sys = particle("y");  // same metric, group and domain; frames replaced below
    sys.name = "particle";
    VectorField Xx, Xz;
    Xx.components = [rho](const Vec& q) { return Vec((Vec(3) << 1, 0, rho(q)).finished()); };
    Xx.jacobian = [rho](const Vec& q) {
        Mat J = Mat::Zero(3, 3);
        J.row(2) = rho.grad(q).transpose();
        return J;
    };
    Xz.components = [rho](const Vec& q) {
        double r = rho(q);
        return Vec((Vec(3) << -r, 0, 1).finished() / (1 + r * r));
    };
    Xz.jacobian = [rho](const Vec& q) {
        double r = rho(q), d = (1 + r * r) * (1 + r * r);
        Vec dr = rho.grad(q);
        Mat J = Mat::Zero(3, 3);
        J.row(0) = (r * r - 1) / d * dr.transpose();
        J.row(2) = -2 * r / d * dr.transpose();
        return J;
    };
    sys.frame.fields[0] = Xx;
    sys.frame.fields[2] = Xz;
    sys.constraint_forms = [rho](const Vec& q) { return Mat((Mat(1, 3) << -rho(q), 0, 1).finished()); };
    return sys;
}

SystemModel carriage_model(const CarriageParams& p) {
    SystemModel md;
    md.name = "carriage";
    md.coords = {"x", "y", "theta", "psi1", "psi2"};
    md.params = {{"R", p.R}, {"c", p.c}, {"m", p.m}, {"m0", p.m0}, {"J", p.J}, {"J2", p.J2}, {"ell", p.ell}};
    const char* g[5][5] = {
        {"m", "0", "-m0*ell*sin(theta)", "0", "0"},
        {"0", "m", "m0*ell*cos(theta)", "0", "0"},
        {"-m0*ell*sin(theta)", "m0*ell*cos(theta)", "J", "0", "0"},
        {"0", "0", "0", "J2", "0"},
        {"0", "0", "0", "0", "J2"}};
    for (auto& r : g)
        for (const char* e : r) md.metric.push_back(parse(e));
    md.d_fields = {row({"-R/2*cos(theta)", "-R/2*sin(theta)", "-R/(2*c)", "1", "0"}),
                   row({"-R/2*cos(theta)", "-R/2*sin(theta)", "R/(2*c)", "0", "1"})};
    md.d_labels = {"psi1", "psi2"};
    md.forms = {row({"1", "0", "0", "R/2*cos(theta)", "R/2*cos(theta)"}),
                row({"0", "1", "0", "R/2*sin(theta)", "R/2*sin(theta)"}),
                row({"0", "0", "1", "R/(2*c)", "-R/(2*c)"})};
    SystemModel::Group grp;
    grp.generators = {row({"1", "0", "0", "0", "0"}), row({"0", "1", "0", "0", "0"}),
                      row({"-y", "x", "1", "0", "0"})};
    grp.names = {"x", "y", "theta"};
    grp.reduced = {"psi1", "psi2"};
    grp.section = {{"x", expr::num(0)}, {"y", expr::num(0)}, {"theta", expr::num(0)}};
    md.group = grp;
    md.domain = {(Vec(5) << -1, -1, -1.5, -1, -1).finished(), (Vec(5) << 1, 1, 1.5, 1, 1).finished(), 3};
    // the coordinate metric loses positivity once m0^2 ell^2 >= m J
    md.possibly_degenerate = p.m0 * p.m0 * p.ell * p.ell >= p.m * p.J;
    return md;
}

FramedSystem carriage(const CarriageParams& p) { return assemble(carriage_model(p)); }

namespace {

struct CarriageConsts {
    double P, g12, W, r;
};

CarriageConsts carriage_consts(const CarriageParams& p) {
    CarriageConsts k;
    k.P = p.J2 + p.R * p.R * p.m / 4 + p.R * p.R * p.J / (4 * p.c * p.c);
    k.g12 = p.R * p.R * p.m / 4 - p.R * p.R * p.J / (4 * p.c * p.c);
    k.W = k.P - k.g12;
    k.r = p.R / (2 * p.c);
    return k;
}

}  // namespace

double carriage_ell1(const CarriageParams& p) {
    CarriageConsts k = carriage_consts(p);
    return std::sqrt(k.W * (k.P + k.g12) / (k.r * k.r * p.R * p.R * p.m0 * p.m0));
}

double carriage_kappa(const CarriageParams& p) {
    return p.R * p.R * p.R * p.m0 / (4 * p.c * p.c * carriage_consts(p).W);
}

CarriageParams carriage_params(const std::map<std::string, double>& params) {
    CarriageParams p;
    auto get = [&](const char* k, double& v) {
        auto it = params.find(k);
        if (it != params.end()) v = it->second;
    };
    get("R", p.R), get("c", p.c), get("m", p.m), get("m0", p.m0);
    get("J", p.J), get("J2", p.J2), get("ell", p.ell);
    return p;
}

Ansatz carriage_scan_ansatz(const FramedSystem& sys) {
    auto sp = std::make_shared<FramedSystem>(sys);
    return [sp](double beta) {
        Candidate c;
        c.gbar_ai = [sp, beta](const Vec& q) {
            const double th = q(2);
            Vec Vth(5);
            Vth << -q(1), q(0), 1, 0, 0;
            Mat g = sp->metric(q);
            Mat out(2, 3);
            for (int a = 0; a < 2; ++a) {
                out(a, 0) = beta * std::cos(th);
                out(a, 1) = beta * std::sin(th);
                out(a, 2) = -sp->frame.fields[a](q).dot(g * Vth);
            }
            return out;
        };
        c.F = ScalarField::constant(0.0);
        return c;
    };
}

SystemModel r4math_model(double eps) {
    SystemModel md;
    md.name = "r4math";
    md.coords = {"x", "y", "z", "u"};
    md.params = {{"eps", eps}};
    // quasi-velocity block [[ones + eps I, 1], [1, 4]] in {X_a, d/du}, pulled back with
    // w = (y-z, z-x, x-y)
    const char* w[3] = {"(y-z)", "(z-x)", "(x-y)"};
    md.metric.assign(16, nullptr);
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
            std::string s = std::string("1+") + w[a] + "+" + w[b] + "+4*" + w[a] + "*" + w[b];
            if (a == b) s += "+eps";
            md.metric[a * 4 + b] = parse(s);
        }
        md.metric[a * 4 + 3] = md.metric[3 * 4 + a] = parse(std::string("1+4*") + w[a]);
    }
    md.metric[15] = parse("4");
    md.d_fields = {row({"1", "0", "0", "-(y-z)"}), row({"0", "1", "0", "-(z-x)"}),
                   row({"0", "0", "1", "-(x-y)"})};
    md.d_labels = {"x", "y", "z"};
    // d/du - (X_x+X_y+X_z)/(3+eps); the u-terms of the sum cancel
    md.perp_fields = {row({"-1/(3+eps)", "-1/(3+eps)", "-1/(3+eps)", "1"})};
    md.perp_labels = {"u"};
    md.forms = {row({"y-z", "z-x", "x-y", "1"})};
    SystemModel::Group grp;
    grp.generators = {row({"0", "0", "0", "1"})};
    grp.names = {"u"};
    grp.reduced = {"x", "y", "z"};
    grp.section = {{"u", expr::num(0)}};
    md.group = grp;
    md.domain = cube(4, -1, 1, 3);
    md.possibly_degenerate = eps == 0;
    md.regularization = eps;
    return md;
}

FramedSystem r4math(double eps) { return assemble(r4math_model(eps)); }

SystemModel flat_model() {
    SystemModel md;
    md.name = "flat";
    md.coords = {"x", "y", "z"};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) md.metric.push_back(expr::num(i == j));
    md.forms = {row({"0", "0", "1"})};
    SystemModel::Group grp;
    grp.generators = {row({"0", "0", "1"})};
    grp.names = {"z"};
    grp.reduced = {"x", "y"};
    grp.section = {{"z", expr::num(0)}};
    md.group = grp;
    md.domain = cube(3, -1, 1, 5);
    return md;
}

FramedSystem flat() { return assemble(flat_model()); }

std::vector<std::string> builtin_names() { return {"carriage", "flat", "particle", "r4math"}; }

std::map<std::string, std::string> builtin_defaults(const std::string& name) {
    if (name == "particle") return {{"rho", "y"}};
    if (name == "carriage")
        return {{"R", "1"}, {"c", "1"}, {"m", "2"}, {"m0", "1"}, {"J", "1"}, {"J2", "1"}, {"ell", "1"}};
    if (name == "r4math") return {{"eps", "0"}};
    if (name == "flat") return {};
    throw Error(Errc::unknown_builtin, "unknown builtin '" + name + "' (known: carriage, flat, particle, r4math)");
}

FramedSystem builtin(const std::string& name, const std::map<std::string, std::string>& params) {
    std::map<std::string, std::string> vals = builtin_defaults(name);
    for (const auto& [k, v] : params) {
        if (!vals.count(k))
            throw Error(Errc::unknown_parameter, "builtin '" + name + "' has no parameter '" + k + "'");
        vals[k] = v;
    }
    if (name == "particle") return particle(vals["rho"]);
    if (name == "flat") return flat();

    // numeric parameters may be expressions in the other parameters
    std::map<std::string, double> env;
    for (const auto& [k, v] : vals)
        if (k != "ell") env[k] = expr::evaluate(parse(v), env);
    if (name == "r4math") return r4math(env["eps"]);
    env["ell1"] = carriage_ell1(carriage_params(env));
    env["ell"] = expr::evaluate(parse(vals["ell"]), env);
    return carriage(carriage_params(env));
}

}  // namespace geoext
