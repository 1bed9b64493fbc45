#include "geoext/expr.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

namespace geoext::expr {

SyntaxError::SyntaxError(size_t offset, std::vector<std::string> expected, const std::string& msg)
    : Error(Errc::syntax, msg), offset_(offset), expected_(std::move(expected)) {}

namespace {

const char* fn_name(Fn f) {
    switch (f) {
        case Fn::Sin: return "sin";
        case Fn::Cos: return "cos";
        case Fn::Tan: return "tan";
        case Fn::Exp: return "exp";
        case Fn::Ln: return "ln";
        case Fn::Sqrt: return "sqrt";
    }
    return "?";
}

bool fn_from_name(std::string_view s, Fn& out) {
    static const std::pair<const char*, Fn> table[] = {{"sin", Fn::Sin}, {"cos", Fn::Cos},
                                                       {"tan", Fn::Tan}, {"exp", Fn::Exp},
                                                       {"ln", Fn::Ln},   {"sqrt", Fn::Sqrt}};
    for (auto& [n, f] : table)
        if (s == n) {
            out = f;
            return true;
        }
    return false;
}

Expr make(Kind k, Expr a = nullptr, Expr b = nullptr) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->lhs = std::move(a);
    n->rhs = std::move(b);
    return n;
}

bool is_num(const Expr& e, double v) { return e->kind == Kind::Num && e->value == v; }
bool is_num(const Expr& e) { return e->kind == Kind::Num; }

double apply_fn(Fn f, double x) {
    switch (f) {
        case Fn::Sin: return std::sin(x);
        case Fn::Cos: return std::cos(x);
        case Fn::Tan: return std::tan(x);
        case Fn::Exp: return std::exp(x);
        case Fn::Ln:
            if (!(x > 0)) throw Error(Errc::expr_domain, "ln of a non-positive value");
            return std::log(x);
        case Fn::Sqrt:
            if (!(x >= 0)) throw Error(Errc::expr_domain, "sqrt of a negative value");
            return std::sqrt(x);
    }
    return 0;
}

double apply_pow(double a, double b) {
    if (b != std::floor(b) && !(a > 0))
        throw Error(Errc::expr_domain, "non-integer power of a non-positive base");
    if (a == 0 && b < 0) throw Error(Errc::expr_domain, "negative power of zero");
    return std::pow(a, b);
}

double apply_div(double a, double b) {
    if (b == 0) throw Error(Errc::expr_domain, "division by zero");
    return a / b;
}

double checked(double v) {
    if (!std::isfinite(v)) throw Error(Errc::expr_domain, "non-finite intermediate value");
    return v;
}

// ---------------------------------------------------------------- parser

class Parser {
public:
    explicit Parser(std::string_view s) : s_(s) {}

    Expr run() {
        skip();
        if (pos_ >= s_.size()) fail({"number", "identifier", "(", "-"});
        Expr e = parse_sum();
        skip();
        if (pos_ != s_.size()) fail({"+", "-", "*", "/", "^", "end of input"});
        return e;
    }

private:
    [[noreturn]] void fail(std::vector<std::string> expected) {
        std::ostringstream os;
        os << "syntax error at byte " << pos_ << ": expected one of";
        for (auto& t : expected) os << " '" << t << "'";
        throw SyntaxError(pos_, std::move(expected), os.str());
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Expr parse_sum() {
        Expr e = parse_product();
        while (true) {
            if (accept('+'))
                e = make(Kind::Add, e, parse_product());
            else if (accept('-'))
                e = make(Kind::Sub, e, parse_product());
            else
                return e;
        }
    }

    Expr parse_product() {
        Expr e = parse_unary();
        while (true) {
            if (accept('*'))
                e = make(Kind::Mul, e, parse_unary());
            else if (accept('/'))
                e = make(Kind::Div, e, parse_unary());
            else
                return e;
        }
    }

    Expr parse_unary() {
        if (accept('-')) return make(Kind::Neg, parse_unary());
        return parse_power();
    }

    Expr parse_power() {
        Expr base = parse_primary();
        if (accept('^')) return make(Kind::Pow, base, parse_unary());
        return base;
    }

    Expr parse_primary() {
        skip();
        if (pos_ >= s_.size()) fail({"number", "identifier", "(", "-"});
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            Expr e = parse_sum();
            if (!accept(')')) fail({")", "+", "-", "*", "/", "^"});
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = pos_;
            while (pos_ < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
                ++pos_;
            std::string_view id = s_.substr(start, pos_ - start);
            skip();
            if (pos_ < s_.size() && s_[pos_] == '(') {
                Fn f;
                if (!fn_from_name(id, f)) {
                    pos_ = start;
                    fail({"sin", "cos", "tan", "exp", "ln", "sqrt"});
                }
                ++pos_;
                Expr arg = parse_sum();
                if (!accept(')')) fail({")", "+", "-", "*", "/", "^"});
                auto n = std::make_shared<Node>();
                n->kind = Kind::Call;
                n->fn = f;
                n->lhs = arg;
                return n;
            }
            return var(std::string(id));
        }
        fail({"number", "identifier", "(", "-"});
    }

    Expr parse_number() {
        size_t start = pos_;
        auto digits = [&] {
            size_t d0 = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            return pos_ - d0;
        };
        size_t nd = digits();
        if (pos_ < s_.size() && s_[pos_] == '.') {
            ++pos_;
            nd += digits();
        }
        if (nd == 0) {
            pos_ = start;
            fail({"number"});
        }
        if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
            size_t save = pos_;
            ++pos_;
            if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
            if (digits() == 0) {
                pos_ = save + 1;
                fail({"exponent digits"});
            }
        }
        double v = 0;
        auto r = std::from_chars(s_.data() + start, s_.data() + pos_, v);
        if (r.ec != std::errc()) {
            pos_ = start;
            fail({"number"});
        }
        return num(v);
    }

    std::string_view s_;
    size_t pos_ = 0;
};

// ---------------------------------------------------------------- printer

int prec(const Expr& e) {
    switch (e->kind) {
        case Kind::Add:
        case Kind::Sub: return 1;
        case Kind::Mul:
        case Kind::Div: return 2;
        case Kind::Neg: return 3;
        case Kind::Pow: return 4;
        case Kind::Num: return e->value < 0 ? 3 : 5;
        default: return 5;
    }
}

std::string fmt_num(double v) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

void print(const Expr& e, std::string& out);

void print_wrapped(const Expr& e, bool paren, std::string& out) {
    if (paren) out += '(';
    print(e, out);
    if (paren) out += ')';
}

void print(const Expr& e, std::string& out) {
    switch (e->kind) {
        case Kind::Num: out += fmt_num(e->value); return;
        case Kind::Var: out += e->name; return;
        case Kind::Neg:
            out += '-';
            print_wrapped(e->lhs, prec(e->lhs) < 3, out);
            return;
        case Kind::Add:
        case Kind::Sub:
            print_wrapped(e->lhs, prec(e->lhs) < 1, out);
            out += e->kind == Kind::Add ? " + " : " - ";
            print_wrapped(e->rhs, prec(e->rhs) <= 1, out);
            return;
        case Kind::Mul:
        case Kind::Div:
            print_wrapped(e->lhs, prec(e->lhs) < 2, out);
            out += e->kind == Kind::Mul ? "*" : "/";
            print_wrapped(e->rhs, prec(e->rhs) <= 2, out);
            return;
        case Kind::Pow:
            print_wrapped(e->lhs, prec(e->lhs) < 5, out);
            out += '^';
            print_wrapped(e->rhs, prec(e->rhs) < 3, out);
            return;
        case Kind::Call:
            out += fn_name(e->fn);
            out += '(';
            print(e->lhs, out);
            out += ')';
            return;
    }
}

void collect_vars(const Expr& e, std::set<std::string>& out) {
    if (!e) return;
    if (e->kind == Kind::Var) out.insert(e->name);
    collect_vars(e->lhs, out);
    collect_vars(e->rhs, out);
}

}  // namespace

// ---------------------------------------------------------------- builders

Expr num(double v) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Num;
    n->value = v;
    return n;
}

Expr var(std::string name) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Var;
    n->name = std::move(name);
    return n;
}

Expr neg(Expr a) {
    if (is_num(a)) return num(-a->value);
    if (a->kind == Kind::Neg) return a->lhs;
    return make(Kind::Neg, a);
}

Expr add(Expr a, Expr b) {
    if (is_num(a) && is_num(b)) return num(a->value + b->value);
    if (is_num(a, 0)) return b;
    if (is_num(b, 0)) return a;
    return make(Kind::Add, a, b);
}

Expr sub(Expr a, Expr b) {
    if (is_num(a) && is_num(b)) return num(a->value - b->value);
    if (is_num(b, 0)) return a;
    if (is_num(a, 0)) return neg(b);
    return make(Kind::Sub, a, b);
}

Expr mul(Expr a, Expr b) {
    if (is_num(a) && is_num(b)) return num(a->value * b->value);
    if (is_num(a, 0) || is_num(b, 0)) return num(0);
    if (is_num(a, 1)) return b;
    if (is_num(b, 1)) return a;
    if (is_num(a, -1)) return neg(b);
    if (is_num(b, -1)) return neg(a);
    return make(Kind::Mul, a, b);
}

Expr div(Expr a, Expr b) {
    if (is_num(a) && is_num(b) && b->value != 0) return num(a->value / b->value);
    if (is_num(a, 0)) return num(0);
    if (is_num(b, 1)) return a;
    return make(Kind::Div, a, b);
}

Expr pow(Expr a, Expr b) {
    if (is_num(b, 1)) return a;
    if (is_num(b, 0)) return num(1);
    if (is_num(a) && is_num(b) && a->value > 0) return num(std::pow(a->value, b->value));
    return make(Kind::Pow, a, b);
}

Expr call(Fn f, Expr a) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Call;
    n->fn = f;
    n->lhs = std::move(a);
    return n;
}

Expr parse(std::string_view text) { return Parser(text).run(); }

std::string to_string(const Expr& e) {
    std::string out;
    print(e, out);
    return out;
}

bool equal(const Expr& a, const Expr& b) {
    if (!a || !b) return !a && !b;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case Kind::Num: return a->value == b->value;
        case Kind::Var: return a->name == b->name;
        case Kind::Call: return a->fn == b->fn && equal(a->lhs, b->lhs);
        default: return equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
    }
}

Expr differentiate(const Expr& e, const std::string& v) {
    switch (e->kind) {
        case Kind::Num: return num(0);
        case Kind::Var: return num(e->name == v ? 1 : 0);
        case Kind::Neg: return neg(differentiate(e->lhs, v));
        case Kind::Add: return add(differentiate(e->lhs, v), differentiate(e->rhs, v));
        case Kind::Sub: return sub(differentiate(e->lhs, v), differentiate(e->rhs, v));
        case Kind::Mul:
            return add(mul(differentiate(e->lhs, v), e->rhs), mul(e->lhs, differentiate(e->rhs, v)));
        case Kind::Div: {
            Expr du = differentiate(e->lhs, v), dw = differentiate(e->rhs, v);
            if (is_num(dw, 0)) return div(du, e->rhs);
            return div(sub(mul(du, e->rhs), mul(e->lhs, dw)), pow(e->rhs, num(2)));
        }
        case Kind::Pow: {
            Expr du = differentiate(e->lhs, v), dw = differentiate(e->rhs, v);
            if (is_num(dw, 0)) {
                if (is_num(e->rhs))
                    return mul(mul(e->rhs, pow(e->lhs, num(e->rhs->value - 1))), du);
                return mul(mul(e->rhs, pow(e->lhs, sub(e->rhs, num(1)))), du);
            }
            // u^w (w' ln u + w u'/u)
            return mul(e, add(mul(dw, call(Fn::Ln, e->lhs)), div(mul(e->rhs, du), e->lhs)));
        }
        case Kind::Call: {
            const Expr& u = e->lhs;
            Expr du = differentiate(u, v);
            if (is_num(du, 0)) return num(0);
            switch (e->fn) {
                case Fn::Sin: return mul(call(Fn::Cos, u), du);
                case Fn::Cos: return neg(mul(call(Fn::Sin, u), du));
                case Fn::Tan: return div(du, pow(call(Fn::Cos, u), num(2)));
                case Fn::Exp: return mul(e, du);
                case Fn::Ln: return div(du, u);
                case Fn::Sqrt: return div(du, mul(num(2), e));
            }
        }
    }
    return num(0);
}

std::vector<std::string> variables(const Expr& e) {
    std::set<std::string> s;
    collect_vars(e, s);
    return {s.begin(), s.end()};
}

Expr substitute(const Expr& e, const std::map<std::string, Expr>& repl) {
    switch (e->kind) {
        case Kind::Num: return e;
        case Kind::Var: {
            auto it = repl.find(e->name);
            return it == repl.end() ? e : it->second;
        }
        case Kind::Call: return call(e->fn, substitute(e->lhs, repl));
        case Kind::Neg: return make(Kind::Neg, substitute(e->lhs, repl));
        default: return make(e->kind, substitute(e->lhs, repl), substitute(e->rhs, repl));
    }
}

double evaluate(const Expr& e, const std::map<std::string, double>& env) {
    switch (e->kind) {
        case Kind::Num: return e->value;
        case Kind::Var: {
            auto it = env.find(e->name);
            if (it == env.end()) throw Error(Errc::unknown_symbol, "unknown symbol '" + e->name + "'");
            return it->second;
        }
        case Kind::Neg: return -evaluate(e->lhs, env);
        case Kind::Add: return checked(evaluate(e->lhs, env) + evaluate(e->rhs, env));
        case Kind::Sub: return checked(evaluate(e->lhs, env) - evaluate(e->rhs, env));
        case Kind::Mul: return checked(evaluate(e->lhs, env) * evaluate(e->rhs, env));
        case Kind::Div: return checked(apply_div(evaluate(e->lhs, env), evaluate(e->rhs, env)));
        case Kind::Pow: return checked(apply_pow(evaluate(e->lhs, env), evaluate(e->rhs, env)));
        case Kind::Call: return checked(apply_fn(e->fn, evaluate(e->lhs, env)));
    }
    return 0;
}

// ---------------------------------------------------------------- compiled form

Compiled::Compiled(const Expr& e, const std::vector<std::string>& slots,
                   const std::map<std::string, double>& constants) {
    int depth = 0;
    auto emit = [&](auto&& self, const Expr& x) -> void {
        switch (x->kind) {
            case Kind::Num:
                code_.push_back({Op::Const, Fn::Sin, 0, x->value});
                ++depth;
                break;
            case Kind::Var: {
                auto it = std::find(slots.begin(), slots.end(), x->name);
                if (it != slots.end()) {
                    code_.push_back({Op::Load, Fn::Sin, int(it - slots.begin()), 0});
                } else {
                    auto c = constants.find(x->name);
                    if (c == constants.end())
                        throw Error(Errc::unknown_symbol, "unknown symbol '" + x->name + "'");
                    code_.push_back({Op::Const, Fn::Sin, 0, c->second});
                }
                ++depth;
                break;
            }
            case Kind::Neg:
                self(self, x->lhs);
                code_.push_back({Op::Neg, Fn::Sin, 0, 0});
                break;
            case Kind::Call:
                self(self, x->lhs);
                code_.push_back({Op::Call, x->fn, 0, 0});
                break;
            default: {
                self(self, x->lhs);
                self(self, x->rhs);
                Op op = x->kind == Kind::Add   ? Op::Add
                        : x->kind == Kind::Sub ? Op::Sub
                        : x->kind == Kind::Mul ? Op::Mul
                        : x->kind == Kind::Div ? Op::Div
                                               : Op::Pow;
                code_.push_back({op, Fn::Sin, 0, 0});
                --depth;
            }
        }
        depth_ = std::max(depth_, depth);
    };
    emit(emit, e);
}

bool Compiled::is_constant() const {
    return std::none_of(code_.begin(), code_.end(), [](const Instr& i) { return i.op == Op::Load; });
}

double Compiled::operator()(const Vec& x) const { return (*this)(x.data()); }

double Compiled::operator()(const double* x) const {
    if (code_.empty()) return 0.0;
    double small[32] = {};
    std::vector<double> big;
    double* st = small;
    if (depth_ > 32) {
        big.resize(depth_);
        st = big.data();
    }
    int sp = 0;
    for (const Instr& in : code_) {
        switch (in.op) {
            case Op::Const: st[sp++] = in.value; break;
            case Op::Load: st[sp++] = x[in.slot]; break;
            case Op::Neg: st[sp - 1] = -st[sp - 1]; break;
            case Op::Add: --sp; st[sp - 1] = checked(st[sp - 1] + st[sp]); break;
            case Op::Sub: --sp; st[sp - 1] = checked(st[sp - 1] - st[sp]); break;
            case Op::Mul: --sp; st[sp - 1] = checked(st[sp - 1] * st[sp]); break;
            case Op::Div: --sp; st[sp - 1] = checked(apply_div(st[sp - 1], st[sp])); break;
            case Op::Pow: --sp; st[sp - 1] = checked(apply_pow(st[sp - 1], st[sp])); break;
            case Op::Call: st[sp - 1] = checked(apply_fn(in.fn, st[sp - 1])); break;
        }
    }
    return st[0];
}

ScalarField scalar_field(const Expr& e, const std::vector<std::string>& coords,
                         const std::map<std::string, double>& params) {
    auto f = std::make_shared<Compiled>(e, coords, params);
    auto g = std::make_shared<std::vector<Compiled>>();
    for (const auto& c : coords) g->emplace_back(differentiate(e, c), coords, params);
    ScalarField s;
    s.value = [f](const Vec& q) { return (*f)(q); };
    s.gradient = [g](const Vec& q) {
        Vec out(g->size());
        for (size_t i = 0; i < g->size(); ++i) out(i) = (*g)[i](q);
        return out;
    };
    return s;
}

VectorField vector_field(const std::vector<Expr>& comps, const std::vector<std::string>& coords,
                         const std::map<std::string, double>& params) {
    auto f = std::make_shared<std::vector<Compiled>>();
    auto J = std::make_shared<std::vector<Compiled>>();
    for (const auto& c : comps) {
        f->emplace_back(c, coords, params);
        for (const auto& x : coords) J->emplace_back(differentiate(c, x), coords, params);
    }
    const int n = static_cast<int>(coords.size());
    VectorField X;
    X.components = [f](const Vec& q) {
        Vec out(f->size());
        for (size_t i = 0; i < f->size(); ++i) out(i) = (*f)[i](q);
        return out;
    };
    X.jacobian = [J, n](const Vec& q) {
        Mat out(J->size() / n, n);
        for (int i = 0; i < out.rows(); ++i)
            for (int j = 0; j < n; ++j) out(i, j) = (*J)[i * n + j](q);
        return out;
    };
    return X;
}

MatrixFn matrix_field(const std::vector<Expr>& entries, int rows, int cols,
                      const std::vector<std::string>& coords,
                      const std::map<std::string, double>& params) {
    auto f = std::make_shared<std::vector<Compiled>>();
    for (const auto& e : entries) f->emplace_back(e, coords, params);
    return [f, rows, cols](const Vec& q) {
        Mat out(rows, cols);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) out(i, j) = (*f)[i * cols + j](q);
        return out;
    };
}

}  // namespace geoext::expr
