// geoext: classify, check, integrate and sweep nonholonomic systems from the shell.

#include "geoext/builtins.hpp"
#include "geoext/chaplygin.hpp"
#include "geoext/config.hpp"
#include "geoext/errors.hpp"
#include "geoext/parallel.hpp"
#include "json_out.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

using namespace geoext;
using nlohmann::json;

namespace {

enum Exit { OK = 0, INTERNAL = 1, USAGE = 2, RESIDUAL = 3, INTEGRATION = 4 };

struct Common {
    std::string builtin_name, config_path;
    std::vector<std::string> params;
    double tol = 1e-6;
    int grid = 0;  // 0: the system's own lattice density
    unsigned long seed = 1;
    int random_points = 0;
    int jobs = default_jobs();
    std::string out;
    bool as_json = false, as_markdown = false;
};

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

Overrides parse_params(const std::vector<std::string>& items) {
    Overrides o;
    for (const auto& it : items) {
        auto eq = it.find('=');
        if (eq == std::string::npos || eq == 0)
            throw Error(Errc::config_malformed, "--param expects K=V, got '" + it + "'");
        o[it.substr(0, eq)] = it.substr(eq + 1);
    }
    return o;
}

FramedSystem make_system(const Common& c, const Overrides& extra = {}) {
    Overrides o = parse_params(c.params);
    for (const auto& [k, v] : extra) o[k] = v;
    if (!c.builtin_name.empty() == !c.config_path.empty())
        throw Error(Errc::config_malformed, "give exactly one of --builtin or --config");
    FramedSystem sys = c.builtin_name.empty() ? load_system_file(c.config_path, o) : builtin(c.builtin_name, o);
    spdlog::info("system '{}' with n={}, m={}", sys.name, sys.n(), sys.m());
    return sys;
}

json system_json(const Common& c, const FramedSystem& sys) {
    json j;
    j["name"] = sys.name;
    j["source"] = c.builtin_name.empty() ? "config:" + c.config_path : "builtin:" + c.builtin_name;
    j["params"] = sys.params;
    j["coords"] = sys.coords;
    j["possibly_degenerate"] = sys.possibly_degenerate;
    j["regularized"] = sys.regularization > 0;
    if (sys.regularization > 0) j["regularization"] = sys.regularization;
    return j;
}

Box sized(Box b, int grid) {
    if (grid > 0) b.points = grid;
    return b;
}

void add_random(std::vector<Vec>& pts, const Box& box, const Common& c) {
    std::mt19937_64 rng(c.seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int j = 0; j < c.random_points; ++j) {
        Vec q(box.lo.size());
        for (int d = 0; d < q.size(); ++d) q(d) = box.lo(d) + u(rng) * (box.hi(d) - box.lo(d));
        pts.push_back(q);
    }
}

void emit(const Common& c, const std::string& file, const std::string& text) {
    if (c.out.empty()) {
        std::cout << text;
        return;
    }
    std::filesystem::create_directories(c.out);
    std::string path = (std::filesystem::path(c.out) / file).string();
    std::ofstream f(path);
    if (!f) throw Error(Errc::config_malformed, "cannot write '" + path + "'");
    f << text;
    spdlog::info("wrote {}", path);
}

Vec parse_vec(const std::string& s, const char* what) {
    std::vector<double> v;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            v.push_back(expr::evaluate(expr::parse(item), {}));
        } catch (const Error&) {
            throw Error(Errc::config_malformed, std::string(what) + ": cannot read '" + item + "'");
        }
    }
    return Eigen::Map<Vec>(v.data(), v.size());
}

Vec centre(const Box& b) { return 0.5 * (b.lo + b.hi); }

int exit_for(const Error& e) {
    switch (e.code()) {
        case Errc::integration_failed: return INTEGRATION;
        case Errc::completion_failed: return RESIDUAL;
        default: return USAGE;
    }
}

void add_common(CLI::App* app, Common& c) {
    auto* src = app->add_option_group("system");
    src->add_option("--builtin", c.builtin_name, "builtin system: carriage, flat, particle, r4math");
    src->add_option("--config", c.config_path, "TOML system file");
    src->require_option(1);
    app->add_option("--param", c.params, "override a parameter, K=V (repeatable)");
    app->add_option("--tol", c.tol, "residual tolerance")->check(CLI::PositiveNumber);
    app->add_option("--grid", c.grid, "lattice points per axis")->check(CLI::PositiveNumber);
    app->add_option("--seed", c.seed, "seed for --random sample points");
    app->add_option("--random", c.random_points, "extra random sample points")->check(CLI::NonNegativeNumber);
    app->add_option("--jobs", c.jobs, "worker threads")->check(CLI::PositiveNumber);
    app->add_option("--out", c.out, "output directory (default: stdout)");
    auto* fmt = app->add_option_group("format");
    fmt->add_flag("--json", c.as_json, "JSON report (default)");
    fmt->add_flag("--markdown", c.as_markdown, "markdown report");
    fmt->require_option(0, 1);
}

// ---------------------------------------------------------------- classify

int cmd_classify(const Common& c) {
    FramedSystem sys = make_system(c);
    ChaplyginStructure st = build_structure(sys);
    Box rb = sized(sub_box(sys.domain, st.reduced), c.grid);
    std::vector<Vec> grid = lattice(rb);
    add_random(grid, rb, c);
    ClassificationReport rep = classify(st, grid, c.tol, c.jobs);
    spdlog::info("level {}", level_name(rep.level));

    if (c.as_markdown) {
        std::string md = "# " + sys.name + "\n\n" + to_markdown(rep);
        if (sys.regularization > 0) md += "\n(regularized, eps = " + fmt17(sys.regularization) + ")\n";
        emit(c, "classification.md", md);
    } else {
        json j = to_json(rep);
        j["schema"] = 1;
        j["command"] = "classify";
        j["system"] = system_json(c, sys);
        j["grid_points"] = grid.size();
        j["invariance_residual"] = st.invariance_residual;
        emit(c, "classification.json", dump_json(j));
    }
    return rep.level == Level::NONE ? RESIDUAL : OK;
}

// ---------------------------------------------------------------- check

struct CheckOpts {
    std::string F = "0";
    std::vector<std::string> gbar;
    std::string scan;
    std::string beta_range = "-5:5";
    std::string q, v;
    double t_end = 2.0;
};

// candidate from expressions; labels follow the system frame
Candidate candidate_from_text(const FramedSystem& sys, const std::string& F,
                              const std::vector<std::string>& gbar) {
    const int m = sys.m(), k = sys.k();
    std::vector<std::vector<expr::Expr>> ent(m, std::vector<expr::Expr>(k, expr::num(0)));
    for (const auto& item : gbar) {
        auto eq = item.find('='), comma = item.find(',');
        if (eq == std::string::npos || comma == std::string::npos || comma > eq)
            throw Error(Errc::config_malformed, "--gbar expects \"a,i=expr\", got '" + item + "'");
        std::string a = item.substr(0, comma), i = item.substr(comma + 1, eq - comma - 1);
        auto ia = std::find(sys.labels.begin(), sys.labels.begin() + m, a) - sys.labels.begin();
        auto ii = std::find(sys.labels.begin() + m, sys.labels.end(), i) - sys.labels.begin();
        if (ia >= m || ii >= sys.n())
            throw Error(Errc::config_malformed, "--gbar: '" + a + "," + i + "' is not a (D, complement) label pair");
        ent[ia][ii - m] = expr::parse(item.substr(eq + 1));
    }
    std::vector<expr::Expr> flat;
    for (const auto& r : ent) flat.insert(flat.end(), r.begin(), r.end());
    Candidate cand;
    cand.gbar_ai = expr::matrix_field(flat, m, k, sys.coords, sys.params);
    cand.F = expr::scalar_field(expr::parse(F), sys.coords, sys.params);
    return cand;
}

// rebuilds the candidate recorded by `check --out`
Candidate candidate_from_json(const FramedSystem& sys, const json& j) {
    if (j.value("ansatz", "") == "carriage_scan") {
        if (sys.name != "carriage") throw Error(Errc::config_malformed, "scan candidate needs the carriage");
        return carriage_scan_ansatz(sys)(j.at("beta").get<double>());
    }
    std::vector<std::string> gbar;
    for (const auto& [k, v] : j.at("gbar").items()) gbar.push_back(k + "=" + v.get<std::string>());
    return candidate_from_text(sys, j.at("F").get<std::string>(), gbar);
}

std::pair<double, double> parse_range2(const std::string& s) {
    auto colon = s.find(':');
    if (colon == std::string::npos) throw Error(Errc::config_malformed, "range expects lo:hi");
    double lo = std::stod(s.substr(0, colon)), hi = std::stod(s.substr(colon + 1));
    if (!(hi > lo)) throw Error(Errc::empty_grid, "empty range '" + s + "'");
    return {lo, hi};
}

int cmd_check(const Common& c, const CheckOpts& o) {
    FramedSystem sys = make_system(c);
    Box box = sized(sys.domain, c.grid);
    std::vector<Vec> grid = lattice(box);
    add_random(grid, box, c);

    json rec;  // enough to rebuild the candidate later
    Candidate cand;
    json scan_json;
    if (!o.scan.empty()) {
        if (o.scan != "beta") throw Error(Errc::config_malformed, "--scan supports only 'beta'");
        if (sys.name != "carriage") throw Error(Errc::unsupported, "--scan beta is defined for the carriage");
        auto [lo, hi] = parse_range2(o.beta_range);
        ScanResult sr = scan_preserving_extension(sys, carriage_scan_ansatz(sys), grid, lo, hi);
        cand = carriage_scan_ansatz(sys)(sr.best_beta);
        scan_json = {{"beta", sr.best_beta}, {"min_residual", sr.min_residual}, {"range", {lo, hi}}};
        rec = {{"ansatz", "carriage_scan"}, {"beta", sr.best_beta}};
    } else {
        cand = candidate_from_text(sys, o.F, o.gbar);
        json g = json::object();
        for (const auto& item : o.gbar) {
            auto eq = item.find('=');
            g[item.substr(0, eq)] = item.substr(eq + 1);
        }
        rec = {{"F", o.F}, {"gbar", g}};
    }

    // (A') and (B') on the grid, geometry computed in parallel
    std::vector<Tensor3d> TA(grid.size()), TB(grid.size());
    parallel_for(grid.size(), c.jobs, [&](size_t j) {
        PointGeometry pg = point_geometry(sys, grid[j]);
        TA[j] = condition_A_residual(pg, cand);
        TB[j] = condition_B_residual(pg, cand);
    });
    auto lookup = [&grid](const std::vector<Tensor3d>& T) {
        return [&grid, &T](const Vec& q) {
            for (size_t j = 0; j < grid.size(); ++j)
                if (grid[j] == q) return T[j];
            throw Error(Errc::unsupported, "point not on grid");
        };
    };
    ResidualReport A = grid_report("(A')", grid, lookup(TA), c.tol);
    ResidualReport B = grid_report("(B')", grid, lookup(TB), c.tol);

    json comp;
    std::optional<CompletedMetric> cm;
    try {
        cm = complete_metric(sys, cand, grid);
        comp = {{"pass", true}, {"s", cm->s}, {"identity_block", cm->identity_block},
                {"min_eigenvalue", cm->min_eigenvalue}};
    } catch (const Error& e) {
        if (e.code() != Errc::completion_failed) throw;
        comp = {{"pass", false}, {"error", e.what()}};
    }

    json pre = {{"pass", false}};
    if (cm) {
        State s0{o.q.empty() ? centre(sys.domain) : parse_vec(o.q, "--q"),
                 o.v.empty() ? Vec(Vec::Ones(sys.m())) : parse_vec(o.v, "--v")};
        if (s0.q.size() != sys.n() || s0.v.size() != sys.m())
            throw Error(Errc::config_malformed, "--q needs n entries and --v needs m entries");
        IntegratorOptions io;
        io.dt = 1e-3;
        io.record_every = 10;
        Trajectory tr = integrate_nonholonomic(sys, s0, o.t_end, io);
        double wa = 0, wi = 0;
        for (const State& s : tr.states) {
            Pregeodesic p = pregeodesic_residual(sys, cm->metric, cand.F, s);
            wa = std::max(wa, p.a_part.cwiseAbs().maxCoeff());
            if (p.i_part.size()) wi = std::max(wi, p.i_part.cwiseAbs().maxCoeff());
        }
        pre = {{"pass", std::max(wa, wi) <= c.tol}, {"max_a_part", wa}, {"max_i_part", wi},
               {"t_end", o.t_end}, {"samples", tr.size()}};
    }

    std::vector<std::string> violated;
    if (!A.pass) violated.push_back("(A')");
    if (!B.pass) violated.push_back("(B')");
    if (!comp["pass"].get<bool>()) violated.push_back("completion");
    if (!pre["pass"].get<bool>()) violated.push_back("pregeodesic");
    const bool ok = violated.empty();

    if (cm && !c.out.empty()) {
        json cj = rec;
        cj["schema"] = 1;
        cj["system"] = system_json(c, sys);
        cj["s"] = cm->s;
        cj["identity_block"] = cm->identity_block;
        emit(c, "completed.json", dump_json(cj));
    }

    if (c.as_markdown) {
        std::ostringstream md;
        md << "# check: " << sys.name << "\n\n| condition | max residual | pass |\n|---|---|---|\n";
        md << "| (A') | " << A.max_abs << " | " << (A.pass ? "yes" : "no") << " |\n";
        md << "| (B') | " << B.max_abs << " | " << (B.pass ? "yes" : "no") << " |\n";
        md << "| completion | " << (cm ? cm->min_eigenvalue : 0.0) << " (min eigenvalue) | "
           << (cm ? "yes" : "no") << " |\n";
        md << "| pregeodesic | "
           << (cm ? std::max(pre["max_a_part"].get<double>(), pre["max_i_part"].get<double>()) : 0.0)
           << " | " << (pre["pass"].get<bool>() ? "yes" : "no") << " |\n";
        if (!scan_json.is_null()) md << "\nrecovered beta = " << fmt17(scan_json["beta"].get<double>()) << "\n";
        emit(c, "check.md", md.str());
    } else {
        json j;
        j["schema"] = 1;
        j["command"] = "check";
        j["system"] = system_json(c, sys);
        j["tolerance"] = c.tol;
        j["grid_points"] = grid.size();
        j["candidate"] = rec;
        j["conditions"] = {{"A_prime", to_json(A)}, {"B_prime", to_json(B)}, {"completion", comp},
                           {"pregeodesic", pre}};
        if (!scan_json.is_null()) j["scan"] = scan_json;
        j["violated"] = violated;
        j["pass"] = ok;
        emit(c, "check.json", dump_json(j));
    }
    for (const auto& v : violated) spdlog::warn("violated: {}", v);
    return ok ? OK : RESIDUAL;
}

// ---------------------------------------------------------------- integrate

struct IntegrateOpts {
    std::string what = "nh";
    std::string q, v, metric, method = "rk4";
    double t_end = 2.0, dt = 1e-3;
    int record_every = 1;
};

int cmd_integrate(const Common& c, const IntegrateOpts& o) {
    FramedSystem sys = make_system(c);
    IntegratorOptions io;
    io.dt = o.dt;
    io.record_every = o.record_every;
    if (o.method == "rk45") io.method = IntegratorOptions::Method::RK45;
    else if (o.method != "rk4") throw Error(Errc::config_malformed, "--method is rk4 or rk45");

    std::vector<std::string> coords, vel;
    Trajectory tr;
    auto run = [&](auto&& f) {
        try {
            tr = f();
        } catch (const IntegrationError& e) {
            tr = e.partial();
            std::ostringstream os;
            write_csv(os, tr, coords, vel);
            emit(c, "trajectory.csv", os.str());
            throw;
        }
    };

    if (o.what == "nh" || o.what == "geodesic") {
        State s0{o.q.empty() ? centre(sys.domain) : parse_vec(o.q, "--q"),
                 o.v.empty() ? Vec(Vec::Ones(sys.m())) : parse_vec(o.v, "--v")};
        if (s0.q.size() != sys.n() || s0.v.size() != sys.m())
            throw Error(Errc::config_malformed, "--q needs n entries and --v needs m entries");
        coords = sys.coords;
        for (int a = 0; a < (o.what == "nh" ? sys.m() : sys.n()); ++a) vel.push_back("v_" + sys.labels[a]);
        if (o.what == "nh") {
            run([&] { return integrate_nonholonomic(sys, s0, o.t_end, io); });
        } else {
            MatrixFn metric = sys.metric;
            if (!o.metric.empty()) {
                std::ifstream in(o.metric);
                if (!in) throw Error(Errc::config_malformed, "cannot read '" + o.metric + "'");
                json j;
                try {
                    j = json::parse(in);
                } catch (const json::exception& e) {
                    throw Error(Errc::config_malformed, std::string("metric file: ") + e.what());
                }
                Candidate cand = candidate_from_json(sys, j);
                metric = complete_metric(sys, cand, lattice(sized(sys.domain, c.grid))).metric;
            }
            run([&] { return integrate_geodesic(metric, sys.frame, s0, o.t_end, io); });
        }
    } else if (o.what == "reduced") {
        ChaplyginStructure st = build_structure(sys);
        Box rb = sub_box(sys.domain, st.reduced);
        State s0{o.q.empty() ? centre(rb) : parse_vec(o.q, "--q"),
                 o.v.empty() ? Vec(Vec::Ones(sys.m())) : parse_vec(o.v, "--v")};
        if (s0.q.size() != sys.m() || s0.v.size() != sys.m())
            throw Error(Errc::config_malformed, "reduced runs need m entries in --q and --v");
        for (int r : st.reduced) coords.push_back(sys.coords[r]), vel.push_back("d" + sys.coords[r]);
        Field f = [&st](const State& s) { return StateRate{s.v, reduced_field(st, s.q, s.v)}; };
        Monitor mon = [&st](const State& s) {
            return std::make_pair(0.5 * s.v.dot(reduced_metric(st, s.q) * s.v), 0.0);
        };
        run([&] { return integrate(f, s0, o.t_end, io, mon); });
    } else {
        throw Error(Errc::config_malformed, "--what is nh, geodesic or reduced");
    }
    std::ostringstream os;
    write_csv(os, tr, coords, vel);
    emit(c, "trajectory.csv", os.str());
    spdlog::info("energy drift {:.3e}, max constraint violation {:.3e}", tr.energy_drift(), tr.max_constraint_viol());
    return OK;
}

// ---------------------------------------------------------------- sweep

struct SweepOpts {
    std::string sweep;
    std::string check = "classify";
    std::string beta_range = "-5:5";
};

std::pair<std::string, std::vector<double>> parse_sweep(const std::string& s) {
    auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) throw Error(Errc::config_malformed, "--sweep expects NAME=range");
    std::string name = s.substr(0, eq), spec = s.substr(eq + 1);
    std::vector<double> vals;
    auto num = [](const std::string& t) { return expr::evaluate(expr::parse(t), {}); };
    if (spec.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(spec);
        std::string p;
        while (std::getline(ss, p, ':')) parts.push_back(p);
        if (parts.size() != 3) throw Error(Errc::config_malformed, "range expects lo:hi:step");
        double lo = num(parts[0]), hi = num(parts[1]), step = num(parts[2]);
        if (!(step > 0) || hi < lo) throw Error(Errc::empty_grid, "empty sweep range '" + spec + "'");
        const long count = std::lround(std::floor((hi - lo) / step + 1e-9)) + 1;
        for (long j = 0; j < count; ++j) vals.push_back(lo + j * step);
    } else {
        std::stringstream ss(spec);
        std::string p;
        while (std::getline(ss, p, ','))
            if (!p.empty()) vals.push_back(num(p));
    }
    if (vals.empty()) throw Error(Errc::empty_grid, "empty sweep range '" + spec + "'");
    return {name, vals};
}

int cmd_sweep(const Common& c, const SweepOpts& o) {
    auto [name, vals] = parse_sweep(o.sweep);
    if (o.check != "classify" && o.check != "f0-scan")
        throw Error(Errc::config_malformed, "--check is classify or f0-scan");
    // validates the parameter name before any work is queued
    FramedSystem probe = make_system(c, {{name, fmt17(vals.front())}});
    if (o.check == "f0-scan" && probe.name != "carriage")
        throw Error(Errc::unsupported, "f0-scan is defined for the carriage family");
    auto [blo, bhi] = parse_range2(o.beta_range);

    std::vector<std::string> rows(vals.size());
    parallel_for(vals.size(), c.jobs, [&](size_t j) {
        FramedSystem sys = make_system(c, {{name, fmt17(vals[j])}});
        std::ostringstream r;
        r << fmt17(vals[j]);
        if (o.check == "classify") {
            ChaplyginStructure st = build_structure(sys);
            ClassificationReport rep =
                classify(st, lattice(sized(sub_box(sys.domain, st.reduced), c.grid)), c.tol, 1);
            r << ',' << level_name(rep.level);
            for (const char* k : {"beta_norm", "dbeta_norm", "wedge_vs_XiG", "wedge_vs_gammaG", "ThetaG_norm"})
                r << ',' << fmt17(rep.residuals.at(k));
        } else {
            ScanResult sr = scan_preserving_extension(sys, carriage_scan_ansatz(sys),
                                                      lattice(sized(sys.domain, c.grid)), blo, bhi);
            r << ',' << fmt17(sr.best_beta) << ',' << fmt17(sr.min_residual);
        }
        rows[j] = r.str();
    });
    std::ostringstream os;
    os << name;
    if (o.check == "classify") os << ",level,beta_norm,dbeta_norm,wedge_vs_XiG,wedge_vs_gammaG,ThetaG_norm\n";
    else os << ",best_beta,min_residual\n";
    for (const auto& r : rows) os << r << '\n';
    emit(c, "sweep.csv", os.str());
    return OK;
}

void setup_logging() {
    auto logger = spdlog::stderr_color_mt("geoext");
    spdlog::set_default_logger(logger);
    spdlog::set_pattern("[%l] %v");
    spdlog::set_level(spdlog::level::warn);
    if (const char* env = std::getenv("GEOEXT_LOG")) {
        std::string s = env;
        if (s == "error") spdlog::set_level(spdlog::level::err);
        else if (s == "warn") spdlog::set_level(spdlog::level::warn);
        else if (s == "info") spdlog::set_level(spdlog::level::info);
        else if (s == "debug") spdlog::set_level(spdlog::level::debug);
        else spdlog::warn("GEOEXT_LOG='{}' not one of error, warn, info, debug", s);
    }
}

}  // namespace

int main(int argc, char** argv) {
    setup_logging();
    CLI::App app{"geoext: geodesic extensions of nonholonomic systems"};
    app.require_subcommand(1);

    Common cc, ck, ci, cs;
    CheckOpts co;
    IntegrateOpts io;
    SweepOpts so;

    auto* classify_cmd = app.add_subcommand("classify", "tier classification of a Chaplygin system");
    add_common(classify_cmd, cc);

    auto* check = app.add_subcommand("check", "verify a candidate extension (gbar, F)");
    add_common(check, ck);
    check->add_option("--F", co.F, "conformal factor F (expression)");
    check->add_option("--gbar", co.gbar, "gbar entry \"a,i=expr\" (repeatable)");
    check->add_option("--scan", co.scan, "scan a one-parameter ansatz (beta)");
    check->add_option("--beta-range", co.beta_range, "scan interval lo:hi");
    check->add_option("--q", co.q, "start point for the pregeodesic test");
    check->add_option("--v", co.v, "start D-velocity for the pregeodesic test");
    check->add_option("--t-end", co.t_end, "trajectory length")->check(CLI::PositiveNumber);

    auto* integ = app.add_subcommand("integrate", "integrate a trajectory to CSV");
    add_common(integ, ci);
    integ->add_option("--what", io.what, "nh | geodesic | reduced");
    integ->add_option("--q", io.q, "initial point");
    integ->add_option("--v", io.v, "initial quasi-velocity");
    integ->add_option("--t-end", io.t_end, "final time")->check(CLI::PositiveNumber);
    integ->add_option("--dt", io.dt, "step (rk4) or initial step (rk45)")->check(CLI::PositiveNumber);
    integ->add_option("--method", io.method, "rk4 | rk45");
    integ->add_option("--record-every", io.record_every, "keep every k-th rk4 step")->check(CLI::PositiveNumber);
    integ->add_option("--metric", io.metric, "completed.json written by check --out");

    auto* sweep = app.add_subcommand("sweep", "residuals over a parameter range");
    add_common(sweep, cs);
    sweep->add_option("--sweep", so.sweep, "NAME=lo:hi:step or NAME=v1,v2,...")->required();
    sweep->add_option("--check", so.check, "classify | f0-scan");
    sweep->add_option("--beta-range", so.beta_range, "scan interval lo:hi for f0-scan");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? OK : USAGE;
    }

    try {
        if (*classify_cmd) return cmd_classify(cc);
        if (*check) return cmd_check(ck, co);
        if (*integ) return cmd_integrate(ci, io);
        if (*sweep) return cmd_sweep(cs, so);
    } catch (const Error& e) {
        spdlog::error("{}: {}", errc_name(e.code()), e.what());
        return exit_for(e);
    } catch (const std::exception& e) {
        spdlog::error("internal: {}", e.what());
        return INTERNAL;
    }
    return USAGE;
}
