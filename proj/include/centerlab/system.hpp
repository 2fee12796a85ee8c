#pragma once

#include <array>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "parser.hpp"

namespace centerlab {

enum class LinearClass { linear_type, nilpotent, degenerate, perturbed_nilpotent, perturbed_degenerate, other };

inline const char* to_string(LinearClass c)
{
    switch (c) {
    case LinearClass::linear_type: return "linear_type";
    case LinearClass::nilpotent: return "nilpotent";
    case LinearClass::degenerate: return "degenerate";
    case LinearClass::perturbed_nilpotent: return "perturbed_nilpotent";
    case LinearClass::perturbed_degenerate: return "perturbed_degenerate";
    case LinearClass::other: return "other";
    }
    return "other";
}

// Inequality annotation `expr rel 0`, checked only once parameters are numeric.
struct Assumption {
    MPoly expr;
    std::string rel;
};

struct LinearInfo {
    LinearClass cls = LinearClass::other;
    Rational scale = 1;
    bool canonical = true;
};

// Linear part is scale times the canonical form of its class:
// linear_type (-y, x), nilpotent (y, 0), perturbed_nilpotent (y, -eps x),
// perturbed_degenerate (eps y, -eps x).
inline LinearInfo classify_linear_part(const MPoly& P, const MPoly& Q)
{
    const auto& t = P.table();
    MPoly p10 = P.coeff_xy(1, 0), p01 = P.coeff_xy(0, 1), q10 = Q.coeff_xy(1, 0), q01 = Q.coeff_xy(0, 1);
    MPoly eps = MPoly::var(t, VarTable::EPS);
    LinearInfo r;
    if (p10.is_zero() && p01.is_zero() && q10.is_zero() && q01.is_zero()) {
        r.cls = LinearClass::degenerate;
        return r;
    }
    if (p10.is_zero() && q01.is_zero() && p01.is_constant()) {
        Rational k = p01.constant_value();
        if (q10.is_zero()) return {LinearClass::nilpotent, k, true};
        if (q10 == -(eps * k)) return {LinearClass::perturbed_nilpotent, k, true};
        if (q10.is_constant() && q10.constant_value() == -k) return {LinearClass::linear_type, -k, true};
    }
    if (p10.is_zero() && q01.is_zero()) {
        auto k = exact_divide(p01, eps);
        if (k && k->is_constant() && q10 == -p01) return {LinearClass::perturbed_degenerate, k->constant_value(), true};
    }
    if (p10.is_constant() && p01.is_constant() && q10.is_constant() && q01.is_constant()) {
        Rational a = p10.constant_value(), b = p01.constant_value(), c = q10.constant_value(), d = q01.constant_value();
        if (a + d == 0 && a * d - b * c > 0) return {LinearClass::linear_type, 1, false};
    }
    return r;
}

struct PlaneSystem {
    MPoly P, Q;
    LinearClass linear_class = LinearClass::other;
    Rational scale = 1;
    bool canonical = true;
    std::vector<Assumption> assumptions;

    const VarTablePtr& table() const { return P.table(); }
    std::vector<std::string> params() const { return table()->params(); }
    friend bool operator==(const PlaneSystem& a, const PlaneSystem& b)
    {
        return same_table(a.table(), b.table()) && a.P == b.P && a.Q == b.Q;
    }
};

struct SystemError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

inline PlaneSystem make_system(MPoly P, MPoly Q, std::vector<Assumption> assumptions = {})
{
    if (!same_table(P.table(), Q.table())) throw TableMismatch();
    if (!P.coeff_xy(0, 0).is_zero() || !Q.coeff_xy(0, 0).is_zero())
        throw SystemError("nonzero constant term: the origin is not a singular point");
    PlaneSystem s;
    auto info = classify_linear_part(P, Q);
    s.P = std::move(P);
    s.Q = std::move(Q);
    s.linear_class = info.cls;
    s.scale = info.scale;
    s.canonical = info.canonical;
    s.assumptions = std::move(assumptions);
    return s;
}

struct HomogeneousPart {
    std::uint32_t degree;
    MPoly P, Q;
};

inline std::vector<HomogeneousPart> homogeneous_parts(const PlaneSystem& s)
{
    std::set<std::uint32_t> degs;
    for (auto* p : {&s.P, &s.Q})
        for (auto& kv : p->terms()) degs.insert(kv.first[VarTable::X] + kv.first[VarTable::Y]);
    std::vector<HomogeneousPart> out;
    for (auto d : degs) out.push_back({d, s.P.homogeneous_xy(d), s.Q.homogeneous_xy(d)});
    return out;
}

inline MPoly lie_derivative(const MPoly& H, const PlaneSystem& s)
{
    return H.diff(VarTable::X) * s.P + H.diff(VarTable::Y) * s.Q;
}

inline MPoly divergence(const PlaneSystem& s) { return s.P.diff(VarTable::X) + s.Q.diff(VarTable::Y); }

using Binding = std::variant<Rational, MPoly>;

inline std::map<std::size_t, MPoly> resolve_bindings(const VarTablePtr& t, const std::map<std::string, Binding>& b)
{
    std::map<std::size_t, MPoly> out;
    for (auto& [name, v] : b) {
        auto i = t->index(name);
        if (!i) throw std::invalid_argument("unknown symbol: " + name);
        if (*i == VarTable::X || *i == VarTable::Y) throw std::invalid_argument("cannot bind state variable " + name);
        if (auto* r = std::get_if<Rational>(&v)) out.emplace(*i, MPoly(t, *r));
        else {
            const MPoly& m = std::get<MPoly>(v);
            if (m.depends_on_state()) throw std::invalid_argument("binding for " + name + " depends on x or y");
            out.emplace(*i, m.reembed(t));
        }
    }
    return out;
}

inline PlaneSystem substitute(const PlaneSystem& s, const std::map<std::size_t, MPoly>& bind)
{
    for (auto& kv : bind)
        if (kv.first == VarTable::X || kv.first == VarTable::Y)
            throw std::invalid_argument("cannot bind a state variable");
    std::vector<Assumption> as;
    for (auto& a : s.assumptions) as.push_back({a.expr.substitute(bind), a.rel});
    return make_system(s.P.substitute(bind), s.Q.substitute(bind), as);
}

inline PlaneSystem substitute(const PlaneSystem& s, const std::map<std::string, Binding>& b)
{
    return substitute(s, resolve_bindings(s.table(), b));
}

// Assumptions whose numeric value violates the relation; symbolic ones are skipped.
inline std::vector<std::string> violated_assumptions(const PlaneSystem& s)
{
    std::vector<std::string> out;
    for (auto& a : s.assumptions) {
        if (!a.expr.is_constant()) continue;
        Rational v = a.expr.constant_value();
        bool ok = a.rel == ">" ? v > 0 : a.rel == ">=" ? v >= 0 : a.rel == "<" ? v < 0 : a.rel == "<=" ? v <= 0
                                                                                  : a.rel == "!=" ? v != 0 : v == 0;
        if (!ok) out.push_back(a.expr.to_string() + " " + a.rel + " 0");
    }
    return out;
}

inline std::string print_system(const PlaneSystem& s)
{
    std::string out;
    auto ps = s.params();
    if (!ps.empty()) {
        out += "params: ";
        for (std::size_t i = 0; i < ps.size(); ++i) out += (i ? ", " : "") + ps[i];
        out += "\n";
    }
    for (auto& a : s.assumptions) out += "assume: " + a.expr.to_string() + " " + a.rel + " 0\n";
    out += "xdot = " + s.P.to_string() + "\n";
    out += "ydot = " + s.Q.to_string() + "\n";
    return out;
}

namespace detail {

inline std::vector<std::vector<Token>> split_statements(const std::vector<Token>& toks)
{
    std::vector<std::vector<Token>> out(1);
    for (auto& k : toks) {
        if (k.kind == Token::end) break;
        if (k.kind == Token::newline || (k.kind == Token::op && k.text == ";")) {
            if (!out.back().empty()) out.emplace_back();
            continue;
        }
        out.back().push_back(k);
    }
    if (out.back().empty()) out.pop_back();
    for (auto& st : out) {
        const Token& last = st.back();
        st.push_back({Token::end, "", last.line, last.col + int(last.text.size())});
    }
    return out;
}

inline ExprPtr parse_full(const std::vector<Token>& toks, std::size_t start)
{
    ExprParser p(toks, start);
    ExprPtr e = p.parse_expr();
    if (p.peek().kind != Token::end) p.fail("unexpected token");
    return e;
}

} // namespace detail

inline PlaneSystem parse_system(const std::string& text)
{
    auto stmts = detail::split_statements(tokenize(text));
    std::vector<std::string> declared;
    ExprPtr xdot, ydot;
    std::vector<std::pair<ExprPtr, std::string>> assumes;
    for (auto& st : stmts) {
        const Token& head = st[0];
        if (head.kind == Token::ident && (head.text == "params" || head.text == "assume") && st[1].kind == Token::op &&
            st[1].text == ":") {
            if (head.text == "params") {
                std::size_t i = 2;
                while (st[i].kind != Token::end) {
                    if (st[i].kind != Token::ident)
                        throw ParseError(st[i].line, st[i].col, "expected a parameter name");
                    if (is_reserved_symbol(st[i].text))
                        throw ParseError(st[i].line, st[i].col, "reserved symbol '" + st[i].text + "' in params");
                    declared.push_back(st[i].text);
                    ++i;
                    if (st[i].kind == Token::op && st[i].text == ",") ++i;
                    else if (st[i].kind != Token::end)
                        throw ParseError(st[i].line, st[i].col, "expected ',' in params list");
                }
            } else {
                ExprParser p(st, 2);
                ExprPtr lhs = p.parse_expr();
                const Token& r = p.peek();
                static const std::set<std::string> rels{">", "<", ">=", "<=", "!=", "="};
                if (r.kind != Token::op || !rels.count(r.text)) p.fail("expected a relation");
                std::string rel = r.text;
                ExprPtr rhs = detail::parse_full(st, p.pos() + 1);
                auto e = std::make_shared<Expr>();
                e->kind = Expr::sub;
                e->args = {lhs, rhs};
                e->line = r.line;
                e->col = r.col;
                assumes.emplace_back(e, rel);
            }
            continue;
        }
        if (head.kind != Token::ident || (head.text != "xdot" && head.text != "ydot"))
            throw ParseError(head.line, head.col, "expected 'xdot =', 'ydot =', 'params:' or 'assume:'");
        if (!(st[1].kind == Token::op && st[1].text == "="))
            throw ParseError(st[1].line, st[1].col, "expected '=' after " + head.text);
        ExprPtr e = detail::parse_full(st, 2);
        ExprPtr& slot = head.text == "xdot" ? xdot : ydot;
        if (slot) throw ParseError(head.line, head.col, head.text + " given twice");
        slot = e;
    }
    if (!xdot) throw ParseError(1, 1, "missing 'xdot = ...'");
    if (!ydot) throw ParseError(1, 1, "missing 'ydot = ...'");
    std::set<std::string> syms;
    collect_symbols(xdot, syms);
    collect_symbols(ydot, syms);
    for (auto& a : assumes) collect_symbols(a.first, syms);
    for (auto& n : syms)
        if (!is_reserved_symbol(n)) declared.push_back(n);
    auto t = VarTable::make(declared);
    MPoly P = to_mpoly(xdot, t), Q = to_mpoly(ydot, t);
    if (!P.coeff_xy(0, 0).is_zero())
        throw ParseError(xdot->line, xdot->col, "nonzero constant term in xdot: the origin is not a singular point");
    if (!Q.coeff_xy(0, 0).is_zero())
        throw ParseError(ydot->line, ydot->col, "nonzero constant term in ydot: the origin is not a singular point");
    std::vector<Assumption> as;
    for (auto& [e, rel] : assumes) as.push_back({to_mpoly(e, t), rel});
    return make_system(std::move(P), std::move(Q), std::move(as));
}

struct NumPoly {
    std::vector<std::array<double, 3>> terms; // coefficient, i, j

    explicit NumPoly(const MPoly& p)
    {
        for (auto& [e, c] : p.terms()) {
            for (std::size_t k = 2; k < e.size(); ++k)
                if (e[k]) throw std::invalid_argument("numeric evaluation needs a parameter-free system");
            terms.push_back({c.get_d(), double(e[VarTable::X]), double(e[VarTable::Y])});
        }
    }
    std::array<double, 3> eval_grad(double x, double y) const
    {
        double v = 0, dx = 0, dy = 0;
        for (auto& t : terms) {
            int i = int(t[1]), j = int(t[2]);
            double xi = std::pow(x, i), yj = std::pow(y, j);
            v += t[0] * xi * yj;
            if (i) dx += t[0] * i * std::pow(x, i - 1) * yj;
            if (j) dy += t[0] * j * xi * std::pow(y, j - 1);
        }
        return {v, dx, dy};
    }
    double operator()(double x, double y) const
    {
        double v = 0;
        for (auto& t : terms) v += t[0] * std::pow(x, int(t[1])) * std::pow(y, int(t[2]));
        return v;
    }
};

} // namespace centerlab
