#pragma once

#include <cctype>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "ratfunc.hpp"

namespace centerlab {

struct ParseError : std::runtime_error {
    int line, column;
    ParseError(int l, int c, const std::string& msg)
        : std::runtime_error("line " + std::to_string(l) + ", column " + std::to_string(c) + ": " + msg),
          line(l), column(c)
    {
    }
};

struct Token {
    enum Kind { number, ident, op, newline, end } kind;
    std::string text;
    int line, col;
};

inline std::vector<Token> tokenize(const std::string& s)
{
    std::vector<Token> out;
    int line = 1, col = 1, depth = 0;
    std::size_t i = 0;
    auto push = [&](Token::Kind k, std::string t, int l, int c) { out.push_back({k, std::move(t), l, c}); };
    while (i < s.size()) {
        char ch = s[i];
        if (ch == '#') {
            while (i < s.size() && s[i] != '\n') ++i;
            continue;
        }
        if (ch == '\n') {
            bool continuation = depth > 0 || (!out.empty() && out.back().kind == Token::op &&
                                              std::string("+-*/^=,(").find(out.back().text) != std::string::npos);
            if (!continuation) push(Token::newline, "\n", line, col);
            ++i;
            ++line;
            col = 1;
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(ch))) {
            ++i;
            ++col;
            continue;
        }
        int l = line, c = col;
        if (std::isdigit(static_cast<unsigned char>(ch))) {
            std::size_t j = i;
            while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
            push(Token::number, s.substr(i, j - i), l, c);
            col += int(j - i);
            i = j;
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
            std::size_t j = i;
            while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
            push(Token::ident, s.substr(i, j - i), l, c);
            col += int(j - i);
            i = j;
            continue;
        }
        if (static_cast<unsigned char>(ch) == 0xCE && i + 1 < s.size() && static_cast<unsigned char>(s[i + 1]) == 0xB5) {
            push(Token::ident, "eps", l, c);
            i += 2;
            ++col;
            continue;
        }
        std::string two = s.substr(i, 2);
        if (two == ">=" || two == "<=" || two == "!=") {
            push(Token::op, two, l, c);
            i += 2;
            col += 2;
            continue;
        }
        if (std::string("+-*/^()=,;:<>").find(ch) != std::string::npos) {
            if (ch == '(') ++depth;
            if (ch == ')') depth = std::max(0, depth - 1);
            push(Token::op, std::string(1, ch), l, c);
            ++i;
            ++col;
            continue;
        }
        throw ParseError(l, c, std::string("unexpected character '") + ch + "'");
    }
    push(Token::end, "", line, col);
    return out;
}

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    enum Kind { num, sym, add, sub, mul, div, pow, neg, call } kind;
    Rational value;
    std::string name;
    std::vector<ExprPtr> args;
    int line = 0, col = 0;
};

class ExprParser {
public:
    ExprParser(const std::vector<Token>& toks, std::size_t pos = 0) : t_(toks), p_(pos) {}

    ExprPtr parse_expr()
    {
        ExprPtr e = parse_term();
        while (is_op("+") || is_op("-")) {
            Token op = t_[p_++];
            e = node(op.text == "+" ? Expr::add : Expr::sub, op, {e, parse_term()});
        }
        return e;
    }

    std::size_t pos() const { return p_; }
    const Token& peek() const { return t_[p_]; }
    bool is_op(const char* s) const { return t_[p_].kind == Token::op && t_[p_].text == s; }
    void expect(const char* s)
    {
        if (!is_op(s)) fail(std::string("expected '") + s + "'");
        ++p_;
    }
    [[noreturn]] void fail(const std::string& msg) const
    {
        const Token& k = t_[p_];
        throw ParseError(k.line, k.col, msg + (k.kind == Token::end ? " at end of input" : " near '" + k.text + "'"));
    }

private:
    static ExprPtr node(Expr::Kind k, const Token& at, std::vector<ExprPtr> args)
    {
        auto e = std::make_shared<Expr>();
        e->kind = k;
        e->args = std::move(args);
        e->line = at.line;
        e->col = at.col;
        return e;
    }

    ExprPtr parse_term()
    {
        ExprPtr e = parse_unary();
        while (is_op("*") || is_op("/")) {
            Token op = t_[p_++];
            e = node(op.text == "*" ? Expr::mul : Expr::div, op, {e, parse_unary()});
        }
        return e;
    }
    ExprPtr parse_unary()
    {
        if (is_op("-")) {
            Token op = t_[p_++];
            return node(Expr::neg, op, {parse_unary()});
        }
        if (is_op("+")) {
            ++p_;
            return parse_unary();
        }
        return parse_power();
    }
    ExprPtr parse_power()
    {
        ExprPtr base = parse_primary();
        if (is_op("^")) {
            Token op = t_[p_++];
            return node(Expr::pow, op, {base, parse_unary()});
        }
        return base;
    }
    ExprPtr parse_primary()
    {
        const Token& k = t_[p_];
        if (k.kind == Token::number) {
            ++p_;
            auto e = node(Expr::num, k, {});
            std::const_pointer_cast<Expr>(e)->value = Rational(k.text);
            return e;
        }
        if (k.kind == Token::ident) {
            ++p_;
            if (is_op("(")) {
                ++p_;
                std::vector<ExprPtr> args;
                if (!is_op(")")) {
                    args.push_back(parse_expr());
                    while (is_op(",") || is_op(";")) {
                        ++p_;
                        args.push_back(parse_expr());
                    }
                }
                expect(")");
                auto e = node(Expr::call, k, std::move(args));
                std::const_pointer_cast<Expr>(e)->name = k.text;
                return e;
            }
            auto e = node(Expr::sym, k, {});
            std::const_pointer_cast<Expr>(e)->name = k.text;
            return e;
        }
        if (is_op("(")) {
            ++p_;
            ExprPtr e = parse_expr();
            expect(")");
            return e;
        }
        fail("expected a number, symbol or '('");
    }

    const std::vector<Token>& t_;
    std::size_t p_;
};

inline ExprPtr parse_expression(const std::string& text)
{
    auto toks = tokenize(text);
    std::size_t start = 0;
    while (toks[start].kind == Token::newline) ++start;
    ExprParser p(toks, start);
    ExprPtr e = p.parse_expr();
    std::size_t q = p.pos();
    while (toks[q].kind == Token::newline) ++q;
    if (toks[q].kind != Token::end) throw ParseError(toks[q].line, toks[q].col, "unexpected '" + toks[q].text + "'");
    return e;
}

inline void collect_symbols(const ExprPtr& e, std::set<std::string>& out)
{
    if (e->kind == Expr::sym) out.insert(e->name);
    for (auto& a : e->args) collect_symbols(a, out);
}

inline bool is_reserved_symbol(const std::string& s) { return s == "x" || s == "y" || s == "eps"; }

inline MPoly to_mpoly(const ExprPtr& e, const VarTablePtr& t)
{
    switch (e->kind) {
    case Expr::num: return MPoly(t, e->value);
    case Expr::sym: {
        auto i = t->index(e->name);
        if (!i) throw ParseError(e->line, e->col, "undeclared symbol '" + e->name + "'");
        return MPoly::var(t, *i);
    }
    case Expr::add: return to_mpoly(e->args[0], t) + to_mpoly(e->args[1], t);
    case Expr::sub: return to_mpoly(e->args[0], t) - to_mpoly(e->args[1], t);
    case Expr::mul: return to_mpoly(e->args[0], t) * to_mpoly(e->args[1], t);
    case Expr::neg: return -to_mpoly(e->args[0], t);
    case Expr::div: {
        MPoly d = to_mpoly(e->args[1], t);
        if (!d.is_constant()) throw ParseError(e->line, e->col, "division by a non-constant expression");
        if (d.is_zero()) throw ParseError(e->line, e->col, "division by zero");
        return to_mpoly(e->args[0], t) * (1 / d.constant_value());
    }
    case Expr::pow: {
        MPoly ex = to_mpoly(e->args[1], t);
        if (!ex.is_constant()) throw ParseError(e->line, e->col, "exponent must be a number");
        Rational v = ex.constant_value();
        if (v.get_den() != 1 || v < 0) throw ParseError(e->line, e->col, "exponent must be a nonnegative integer");
        return to_mpoly(e->args[0], t).pow(v.get_num().get_si());
    }
    case Expr::call: throw ParseError(e->line, e->col, "unknown function '" + e->name + "'");
    }
    throw ParseError(e->line, e->col, "malformed expression");
}

inline RatFunc to_ratfunc(const ExprPtr& e, const VarTablePtr& t)
{
    switch (e->kind) {
    case Expr::add: return to_ratfunc(e->args[0], t) + to_ratfunc(e->args[1], t);
    case Expr::sub: return to_ratfunc(e->args[0], t) - to_ratfunc(e->args[1], t);
    case Expr::mul: return to_ratfunc(e->args[0], t) * to_ratfunc(e->args[1], t);
    case Expr::neg: return -to_ratfunc(e->args[0], t);
    case Expr::div: {
        RatFunc d = to_ratfunc(e->args[1], t);
        if (d.is_zero()) throw ParseError(e->line, e->col, "division by zero");
        return to_ratfunc(e->args[0], t) / d;
    }
    case Expr::pow: {
        MPoly ex = to_mpoly(e->args[1], t);
        if (!ex.is_constant() || ex.constant_value().get_den() != 1)
            throw ParseError(e->line, e->col, "exponent must be an integer");
        long n = ex.constant_value().get_num().get_si();
        RatFunc b = to_ratfunc(e->args[0], t);
        RatFunc r(t, Rational(1));
        for (long k = 0; k < std::labs(n); ++k) r = r * b;
        return n < 0 ? RatFunc(t, Rational(1)) / r : r;
    }
    default: return RatFunc(to_mpoly(e, t));
    }
}

// Parse a polynomial over an existing table (symbols must be declared).
inline MPoly parse_poly(const VarTablePtr& t, const std::string& text) { return to_mpoly(parse_expression(text), t); }

inline RatFunc parse_ratfunc(const VarTablePtr& t, const std::string& text)
{
    return to_ratfunc(parse_expression(text), t);
}

// Table holding every non-reserved symbol of the given expressions.
inline VarTablePtr table_for(const std::vector<std::string>& texts, std::vector<std::string> extra = {})
{
    std::set<std::string> syms;
    for (auto& s : texts) collect_symbols(parse_expression(s), syms);
    for (auto& s : syms)
        if (!is_reserved_symbol(s)) extra.push_back(s);
    return VarTable::make(extra);
}

} // namespace centerlab
