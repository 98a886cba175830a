#pragma once

#include <cctype>
#include <cstdio>
#include <memory>
#include <set>

#include "dynmat.hpp"

namespace sdra {

struct ParseError : Error {
    std::size_t pos;
    ParseError(const std::string& msg, std::size_t p) : Error(msg + " at position " + std::to_string(p)), pos(p) {}
};

// Values an expression can read: lambda (1-based), local spectral values u1..uk, gamma.
struct ExprEnv {
    Vec lambda;
    std::vector<cplx> u; // u[0] is u1
    cplx gamma = 1.0;
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    enum class Kind { Number, I, Gamma, Sigma, Lambda, U, Add, Sub, Mul, Div, Pow, Exp };
    Kind kind;
    double value = 0.0; // Number
    int index = 0;      // Lambda / U (1-based), Pow exponent
    ExprPtr lhs, rhs;
};

inline bool same_expr(const Expr& a, const Expr& b) {
    if (a.kind != b.kind || a.index != b.index) return false;
    if (a.kind == Expr::Kind::Number && a.value != b.value) return false;
    auto eq = [](const ExprPtr& x, const ExprPtr& y) { return (!x && !y) || (x && y && same_expr(*x, *y)); };
    return eq(a.lhs, b.lhs) && eq(a.rhs, b.rhs);
}

namespace detail {

class Parser {
public:
    explicit Parser(const std::string& s) : s_(s) {}

    ExprPtr parse() {
        ExprPtr e = expr();
        skip();
        if (i_ != s_.size()) throw ParseError("unexpected '" + std::string(1, s_[i_]) + "', expected operator or end", i_);
        return e;
    }

private:
    const std::string& s_;
    std::size_t i_ = 0;

    void skip() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }
    bool accept(char c) {
        skip();
        if (i_ < s_.size() && s_[i_] == c) {
            ++i_;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!accept(c)) throw ParseError(std::string("expected '") + c + "'", i_);
    }
    static ExprPtr node(Expr::Kind k, ExprPtr l = nullptr, ExprPtr r = nullptr, int idx = 0, double v = 0.0) {
        return std::make_shared<const Expr>(Expr{k, v, idx, std::move(l), std::move(r)});
    }

    ExprPtr expr() {
        ExprPtr e = term();
        for (;;) {
            if (accept('+')) e = node(Expr::Kind::Add, e, term());
            else if (accept('-')) e = node(Expr::Kind::Sub, e, term());
            else return e;
        }
    }
    ExprPtr term() {
        ExprPtr e = factor();
        for (;;) {
            if (accept('*')) e = node(Expr::Kind::Mul, e, factor());
            else if (accept('/')) e = node(Expr::Kind::Div, e, factor());
            else return e;
        }
    }
    ExprPtr factor() {
        ExprPtr b = base();
        if (accept('^')) {
            skip();
            std::size_t start = i_;
            bool neg = false;
            if (i_ < s_.size() && (s_[i_] == '-' || s_[i_] == '+')) neg = s_[i_++] == '-';
            if (i_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[i_])))
                throw ParseError("expected integer exponent", start);
            long v = 0;
            while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) {
                v = v * 10 + (s_[i_++] - '0');
                if (v > 1000000) throw ParseError("exponent too large", start);
            }
            b = node(Expr::Kind::Pow, b, nullptr, static_cast<int>(neg ? -v : v));
        }
        return b;
    }
    ExprPtr base() {
        skip();
        if (i_ >= s_.size()) throw ParseError("unexpected end of input, expected a value", i_);
        char c = s_[i_];
        if (c == '(') {
            ++i_;
            ExprPtr e = expr();
            expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t start = i_;
            while (i_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[i_]))) ++i_;
            std::string word = s_.substr(start, i_ - start);
            if (word == "i") return node(Expr::Kind::I);
            if (word == "gamma") return node(Expr::Kind::Gamma);
            if (word == "sigma") return node(Expr::Kind::Sigma);
            if (word == "exp") {
                expect('(');
                ExprPtr e = expr();
                expect(')');
                return node(Expr::Kind::Exp, e);
            }
            if (word == "lambda" || word == "u") {
                std::size_t ds = i_;
                while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
                if (ds == i_) throw ParseError("expected index digits after '" + word + "'", ds);
                int k = std::stoi(s_.substr(ds, i_ - ds));
                if (k < 1) throw ParseError("index must be at least 1", ds);
                return node(word == "u" ? Expr::Kind::U : Expr::Kind::Lambda, nullptr, nullptr, k);
            }
            throw ParseError("unknown identifier '" + word + "'", start);
        }
        throw ParseError("unexpected '" + std::string(1, c) + "', expected a value", i_);
    }
    ExprPtr number() {
        std::size_t start = i_;
        auto digits = [&] {
            std::size_t d = i_;
            while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
            return i_ - d;
        };
        std::size_t n = digits();
        if (i_ < s_.size() && s_[i_] == '.') {
            ++i_;
            n += digits();
        }
        if (n == 0) throw ParseError("malformed number", start);
        if (i_ < s_.size() && (s_[i_] == 'e' || s_[i_] == 'E')) {
            std::size_t save = i_++;
            if (i_ < s_.size() && (s_[i_] == '+' || s_[i_] == '-')) ++i_;
            if (digits() == 0) i_ = save; // the 'e' starts something else
        }
        return node(Expr::Kind::Number, nullptr, nullptr, 0, std::stod(s_.substr(start, i_ - start)));
    }
};

} // namespace detail

inline ExprPtr parse_expr(const std::string& src) { return detail::Parser(src).parse(); }

inline std::string print_expr(const Expr& e) {
    using K = Expr::Kind;
    switch (e.kind) {
    case K::Number: {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", e.value);
        return buf;
    }
    case K::I: return "i";
    case K::Gamma: return "gamma";
    case K::Sigma: return "sigma";
    case K::Lambda: return "lambda" + std::to_string(e.index);
    case K::U: return "u" + std::to_string(e.index);
    case K::Add: return "(" + print_expr(*e.lhs) + " + " + print_expr(*e.rhs) + ")";
    case K::Sub: return "(" + print_expr(*e.lhs) + " - " + print_expr(*e.rhs) + ")";
    case K::Mul: return "(" + print_expr(*e.lhs) + " * " + print_expr(*e.rhs) + ")";
    case K::Div: return "(" + print_expr(*e.lhs) + " / " + print_expr(*e.rhs) + ")";
    case K::Pow: return "(" + print_expr(*e.lhs) + ")^" + std::to_string(e.index);
    case K::Exp: return "exp(" + print_expr(*e.lhs) + ")";
    }
    return "?";
}

namespace detail {

// Evaluates e; if pole_eps >= 0 returns nullopt as soon as a denominator is within pole_eps of zero.
inline std::optional<cplx> eval_expr(const Expr& e, const ExprEnv& env, double pole_eps) {
    using K = Expr::Kind;
    auto sub = [&](const ExprPtr& x) { return eval_expr(*x, env, pole_eps); };
    switch (e.kind) {
    case K::Number: return cplx(e.value, 0.0);
    case K::I: return cplx(0.0, 1.0);
    case K::Gamma: return env.gamma;
    case K::Sigma: return env.lambda.sum();
    case K::Lambda:
        if (e.index > env.lambda.size()) throw Error("lambda" + std::to_string(e.index) + " exceeds the rank");
        return env.lambda(e.index - 1);
    case K::U:
        if (e.index > static_cast<int>(env.u.size()))
            throw Error("u" + std::to_string(e.index) + " is not a leg of this matrix");
        return env.u[e.index - 1];
    case K::Exp: {
        auto a = sub(e.lhs);
        if (!a) return a;
        return std::exp(*a);
    }
    case K::Pow: {
        auto a = sub(e.lhs);
        if (!a) return a;
        cplx base = e.index < 0 ? 1.0 / *a : *a;
        if (e.index < 0 && std::abs(*a) <= pole_eps) return std::nullopt;
        cplx r = 1.0;
        for (int k = 0; k < std::abs(e.index); ++k) r *= base;
        return r;
    }
    default: break;
    }
    auto a = sub(e.lhs);
    if (!a) return a;
    auto b = sub(e.rhs);
    if (!b) return b;
    switch (e.kind) {
    case K::Add: return *a + *b;
    case K::Sub: return *a - *b;
    case K::Mul: return *a * *b;
    case K::Div:
        if (std::abs(*b) <= pole_eps) return std::nullopt;
        return *a / *b;
    default: return std::nullopt;
    }
}

} // namespace detail

// Exact evaluation; a vanishing denominator is a pole.
inline cplx eval_expr(const Expr& e, const ExprEnv& env) {
    auto v = detail::eval_expr(e, env, 0.0);
    if (!v) throw PoleError("division by zero in " + print_expr(e));
    return *v;
}

// True when some denominator is within eps of zero.
inline bool expr_near_pole(const Expr& e, const ExprEnv& env, double eps) {
    return !detail::eval_expr(e, env, eps).has_value();
}

inline void collect_u(const Expr& e, std::set<int>& out) {
    if (e.kind == Expr::Kind::U) out.insert(e.index);
    if (e.lhs) collect_u(*e.lhs, out);
    if (e.rhs) collect_u(*e.rhs, out);
}

// A dynamical matrix on legs 1..k whose entries are expressions; uK reads the spectral value of leg K.
struct ExprMatrix {
    int k = 1;                          // number of legs
    std::vector<std::vector<std::string>> src;
    std::vector<std::vector<ExprPtr>> ast;
};

inline ExprMatrix parse_expr_matrix(const std::vector<std::vector<std::string>>& rows, int rank) {
    ExprMatrix m;
    m.src = rows;
    const int d = static_cast<int>(rows.size());
    int k = 0;
    for (int dd = 1; dd < d; dd *= rank) ++k;
    if (ipow(rank, k) != d || k < 1) throw Error("expression matrix size " + std::to_string(d) + " is not a power of the rank");
    m.k = k;
    for (const auto& r : rows) {
        if (static_cast<int>(r.size()) != d) throw Error("expression matrix is not square");
        std::vector<ExprPtr> row;
        for (const auto& s : r) row.push_back(parse_expr(s));
        m.ast.push_back(std::move(row));
    }
    return m;
}

inline DynMat expr_dynmat(const ExprMatrix& m, const WeightScheme& s) {
    std::set<int> us;
    for (const auto& row : m.ast)
        for (const auto& e : row) collect_u(*e, us);
    for (int l : us)
        if (l > m.k) throw Error("u" + std::to_string(l) + " refers to a leg the matrix does not have");
    Legs legs(m.k);
    std::iota(legs.begin(), legs.end(), 1);
    Legs slots(us.begin(), us.end());
    auto env_of = [k = m.k, s](const Point& p) {
        ExprEnv env{p.lambda, std::vector<cplx>(k, cplx(0.0)), s.gamma};
        for (int l = 1; l <= k; ++l)
            if (p.has_u(l)) env.u[l - 1] = *p.u[l];
        return env;
    };
    auto ast = m.ast;
    const int d = static_cast<int>(ast.size());
    return DynMat(
        s, legs,
        [ast, d, env_of](const Point& p) {
            ExprEnv env = env_of(p);
            Mat out(d, d);
            for (int r = 0; r < d; ++r)
                for (int c = 0; c < d; ++c) out(r, c) = eval_expr(*ast[r][c], env);
            return out;
        },
        slots,
        [ast, env_of](const Point& p, double eps) {
            ExprEnv env = env_of(p);
            for (const auto& row : ast)
                for (const auto& e : row)
                    if (expr_near_pole(*e, env, eps)) return true;
            return false;
        });
}

} // namespace sdra
