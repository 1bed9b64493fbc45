#include "geoext/config.hpp"

#include "geoext/errors.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "toml.hpp"

namespace geoext {

namespace {

using expr::Expr;

[[noreturn]] void malformed(const std::string& msg) { throw Error(Errc::config_malformed, msg); }

std::string as_text(const toml::node& n, const std::string& where) {
    if (auto s = n.value<std::string>()) return *s;
    if (auto d = n.value<double>()) {
        std::ostringstream os;
        os.precision(17);
        os << *d;
        return os.str();
    }
    malformed(where + ": expected a string or a number");
}

std::vector<std::string> string_list(const toml::node_view<const toml::node>& v, const std::string& where) {
    const toml::array* arr = v.as_array();
    if (!arr) malformed(where + ": expected an array");
    std::vector<std::string> out;
    for (const auto& e : *arr) out.push_back(as_text(e, where));
    return out;
}

std::vector<std::vector<std::string>> string_rows(const toml::node_view<const toml::node>& v,
                                                  const std::string& where) {
    const toml::array* arr = v.as_array();
    if (!arr) malformed(where + ": expected an array of arrays");
    std::vector<std::vector<std::string>> out;
    for (const auto& r : *arr) {
        const toml::array* ra = r.as_array();
        if (!ra) malformed(where + ": expected an array of arrays");
        std::vector<std::string> row;
        for (const auto& e : *ra) row.push_back(as_text(e, where));
        out.push_back(row);
    }
    return out;
}

Vec number_list(const toml::node_view<const toml::node>& v, const std::string& where) {
    const toml::array* arr = v.as_array();
    if (!arr) malformed(where + ": expected an array of numbers");
    Vec out(arr->size());
    for (size_t i = 0; i < arr->size(); ++i) {
        auto d = (*arr)[i].value<double>();
        if (!d) malformed(where + ": expected numbers");
        out(i) = *d;
    }
    return out;
}

Expr parse_at(const std::string& text, const std::string& where) {
    try {
        return expr::parse(text);
    } catch (const expr::SyntaxError& e) {
        throw expr::SyntaxError(e.offset(), e.expected(), where + ": " + e.what());
    }
}

}  // namespace

SystemModel parse_config(const std::string& text, const Overrides& overrides) {
    toml::table tbl;
    try {
        tbl = toml::parse(text);
    } catch (const toml::parse_error& e) {
        std::ostringstream os;
        os << "TOML error at line " << e.source().begin.line << ": " << e.description();
        malformed(os.str());
    }
    const toml::node_view<const toml::node> root{tbl};

    auto fmt = root["format"].value<int64_t>();
    if (!fmt) malformed("missing 'format = 1'");
    if (*fmt != 1) malformed("unsupported format version " + std::to_string(*fmt));

    static const std::set<std::string> known = {"format", "name", "space", "params", "define",
                                                "metric", "constraints", "group", "domain"};
    for (const auto& [k, v] : tbl)
        if (!known.count(std::string(k.str()))) malformed("unknown key '" + std::string(k.str()) + "'");

    SystemModel md;
    md.name = root["name"].value_or(std::string("config"));
    md.coords = string_list(root["space"]["coords"], "space.coords");
    const int n = static_cast<int>(md.coords.size());
    if (n == 0) malformed("space.coords is empty");
    std::set<std::string> coordset(md.coords.begin(), md.coords.end());
    if (static_cast<int>(coordset.size()) != n) malformed("duplicate coordinate names");

    // params: numbers or expressions in earlier-resolved params
    std::map<std::string, std::string> raw_params;
    if (const toml::table* pt = root["params"].as_table())
        for (const auto& [k, v] : *pt) raw_params[std::string(k.str())] = as_text(v, "params." + std::string(k.str()));
    std::map<std::string, std::string> raw_defs;
    if (const toml::table* dt = root["define"].as_table())
        for (const auto& [k, v] : *dt) raw_defs[std::string(k.str())] = as_text(v, "define." + std::string(k.str()));
    for (const auto& [k, v] : overrides) {
        if (raw_params.count(k)) raw_params[k] = v;
        else if (raw_defs.count(k)) raw_defs[k] = v;
        else throw Error(Errc::unknown_parameter, "config has no parameter '" + k + "'");
    }
    for (const auto& [k, v] : raw_params)
        if (coordset.count(k)) malformed("parameter '" + k + "' shadows a coordinate");

    std::map<std::string, Expr> pexpr;
    for (const auto& [k, v] : raw_params) pexpr[k] = parse_at(v, "params." + k);
    while (md.params.size() < pexpr.size()) {
        bool progress = false;
        for (const auto& [k, e] : pexpr) {
            if (md.params.count(k)) continue;
            bool ready = true;
            for (const auto& v : expr::variables(e))
                if (!md.params.count(v)) {
                    if (!pexpr.count(v)) throw Error(Errc::unknown_symbol, "params." + k + ": unknown symbol '" + v + "'");
                    ready = false;
                }
            if (!ready) continue;
            md.params[k] = expr::evaluate(e, md.params);
            progress = true;
        }
        if (!progress) malformed("params contain a dependency cycle");
    }

    // defines are macros over coordinates, params and earlier defines
    std::map<std::string, Expr> defs;
    for (const auto& [k, v] : raw_defs) {
        if (coordset.count(k) || md.params.count(k)) malformed("define '" + k + "' shadows another name");
        defs[k] = parse_at(v, "define." + k);
    }
    for (size_t pass = 0; pass <= defs.size(); ++pass)
        for (auto& [k, e] : defs) e = expr::substitute(e, defs);
    for (const auto& [k, e] : defs)
        for (const auto& v : expr::variables(e))
            if (defs.count(v)) malformed("define contains a cycle through '" + v + "'");

    auto compile_text = [&](const std::string& text, const std::string& where) {
        Expr e = expr::substitute(parse_at(text, where), defs);
        for (const auto& v : expr::variables(e))
            if (!coordset.count(v) && !md.params.count(v))
                throw Error(Errc::unknown_symbol, where + ": unknown symbol '" + v + "'");
        return e;
    };
    auto rows_of = [&](const std::vector<std::vector<std::string>>& rows, const std::string& where) {
        std::vector<std::vector<Expr>> out;
        for (size_t r = 0; r < rows.size(); ++r) {
            if (static_cast<int>(rows[r].size()) != n)
                malformed(where + "[" + std::to_string(r) + "] needs " + std::to_string(n) + " entries");
            std::vector<Expr> row;
            for (const auto& s : rows[r]) row.push_back(compile_text(s, where));
            out.push_back(row);
        }
        return out;
    };

    // metric: either entries = [[...]] or "a,b" = "expr" pairs (unlisted pairs are 0)
    const toml::table* mt = root["metric"].as_table();
    if (!mt) malformed("missing [metric]");
    md.possibly_degenerate = (*mt)["possibly_degenerate"].value_or(false);
    md.metric.assign(n * n, expr::num(0));
    if (mt->contains("entries")) {
        auto rows = rows_of(string_rows(root["metric"]["entries"], "metric.entries"), "metric.entries");
        if (static_cast<int>(rows.size()) != n) malformed("metric.entries needs n rows");
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) md.metric[i * n + j] = rows[i][j];
    }
    for (const auto& [k, v] : *mt) {
        std::string key(k.str());
        if (key == "entries" || key == "possibly_degenerate") continue;
        auto comma = key.find(',');
        if (comma == std::string::npos) malformed("metric key '" + key + "' is not of the form \"a,b\"");
        auto trim = [](std::string s) {
            s.erase(0, s.find_first_not_of(' '));
            s.erase(s.find_last_not_of(' ') + 1);
            return s;
        };
        std::string a = trim(key.substr(0, comma)), b = trim(key.substr(comma + 1));
        auto ia = std::find(md.coords.begin(), md.coords.end(), a) - md.coords.begin();
        auto ib = std::find(md.coords.begin(), md.coords.end(), b) - md.coords.begin();
        if (ia == n || ib == n) malformed("metric key '" + key + "' names an unknown coordinate");
        Expr e = compile_text(as_text(v, "metric." + key), "metric." + key);
        md.metric[ia * n + ib] = e;
        md.metric[ib * n + ia] = e;
    }

    const toml::table* ct = root["constraints"].as_table();
    if (!ct) malformed("missing [constraints]");
    if (ct->contains("forms")) md.forms = rows_of(string_rows(root["constraints"]["forms"], "constraints.forms"), "constraints.forms");
    if (ct->contains("fields")) {
        md.d_fields = rows_of(string_rows(root["constraints"]["fields"], "constraints.fields"), "constraints.fields");
        if (ct->contains("labels")) md.d_labels = string_list(root["constraints"]["labels"], "constraints.labels");
    }
    if (md.forms.empty() && md.d_fields.empty()) malformed("[constraints] needs 'forms' or 'fields'");

    if (const toml::table* gt = root["group"].as_table()) {
        SystemModel::Group g;
        g.generators = rows_of(string_rows(root["group"]["generators"], "group.generators"), "group.generators");
        g.reduced = string_list(root["group"]["reduced"], "group.reduced");
        for (const auto& r : g.reduced)
            if (!coordset.count(r)) malformed("group.reduced: unknown coordinate '" + r + "'");
        if (gt->contains("names")) g.names = string_list(root["group"]["names"], "group.names");
        else
            for (const auto& c : md.coords)
                if (std::find(g.reduced.begin(), g.reduced.end(), c) == g.reduced.end()) g.names.push_back(c);
        if (const toml::table* st = (*gt)["section"].as_table()) {
            for (const auto& [k, v] : *st) {
                std::string key(k.str());
                if (!coordset.count(key)) malformed("group.section: unknown coordinate '" + key + "'");
                Expr e = compile_text(as_text(v, "group.section." + key), "group.section." + key);
                for (const auto& var : expr::variables(e))
                    if (std::find(g.reduced.begin(), g.reduced.end(), var) == g.reduced.end())
                        malformed("group.section." + key + " may only use reduced coordinates");
                g.section[key] = e;
            }
        }
        md.group = g;
    }

    const toml::table* dm = root["domain"].as_table();
    if (!dm) malformed("missing [domain]");
    md.domain.lo = number_list(root["domain"]["lo"], "domain.lo");
    md.domain.hi = number_list(root["domain"]["hi"], "domain.hi");
    md.domain.points = static_cast<int>((*dm)["points"].value_or(int64_t{5}));
    if (md.domain.lo.size() != n || md.domain.hi.size() != n) malformed("domain box needs n bounds");
    if ((md.domain.hi.array() < md.domain.lo.array()).any()) malformed("domain box has hi < lo");
    if (md.domain.points < 1) malformed("domain.points must be positive");
    return md;
}

SystemModel parse_config_file(const std::string& path, const Overrides& overrides) {
    std::ifstream in(path);
    if (!in) malformed("cannot read '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), overrides);
}

FramedSystem load_system(const std::string& text, const Overrides& overrides) {
    return assemble(parse_config(text, overrides));
}

FramedSystem load_system_file(const std::string& path, const Overrides& overrides) {
    return assemble(parse_config_file(path, overrides));
}

}  // namespace geoext
