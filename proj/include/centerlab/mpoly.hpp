#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "vartable.hpp"

namespace centerlab {

using Rational = mpq_class;
using Integer = mpz_class;
using Exponents = std::vector<std::uint32_t>;

struct TableMismatch : std::invalid_argument {
    TableMismatch() : std::invalid_argument("polynomials over different variable tables") {}
};

inline std::uint64_t total_degree(const Exponents& e)
{
    std::uint64_t s = 0;
    for (auto v : e) s += v;
    return s;
}

// Graded lexicographic, x > y > eps > parameters. Sorted descending so
// that begin() is the leading term.
struct GrlexGreater {
    bool operator()(const Exponents& a, const Exponents& b) const
    {
        auto da = total_degree(a), db = total_degree(b);
        if (da != db) return da > db;
        for (std::size_t i = 0; i < a.size(); ++i)
            if (a[i] != b[i]) return a[i] > b[i];
        return false;
    }
};

class MPoly {
public:
    using Terms = std::map<Exponents, Rational, GrlexGreater>;

    MPoly() = default;
    explicit MPoly(VarTablePtr t) : table_(std::move(t)) {}
    MPoly(VarTablePtr t, const Rational& c) : table_(std::move(t))
    {
        if (c != 0) terms_.emplace(Exponents(table_->size(), 0), c);
    }

    static MPoly var(const VarTablePtr& t, std::size_t i, std::uint32_t power = 1)
    {
        Exponents e(t->size(), 0);
        e.at(i) = power;
        MPoly p(t);
        p.terms_.emplace(std::move(e), Rational(1));
        return p;
    }
    static MPoly var(const VarTablePtr& t, const std::string& name, std::uint32_t power = 1)
    {
        return var(t, t->require(name), power);
    }
    static MPoly monomial(const VarTablePtr& t, Exponents e, const Rational& c)
    {
        if (e.size() != t->size()) throw std::invalid_argument("exponent arity mismatch");
        MPoly p(t);
        if (c != 0) p.terms_.emplace(std::move(e), c);
        return p;
    }

    const VarTablePtr& table() const { return table_; }
    const Terms& terms() const { return terms_; }
    std::size_t nterms() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }

    bool is_constant() const
    {
        return terms_.empty() || (terms_.size() == 1 && centerlab::total_degree(terms_.begin()->first) == 0);
    }
    Rational constant_value() const
    {
        if (terms_.empty()) return 0;
        auto it = terms_.rbegin();
        return centerlab::total_degree(it->first) == 0 ? it->second : Rational(0);
    }
    Rational coefficient(const Exponents& e) const
    {
        auto it = terms_.find(e);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    const Exponents& leading_exponents() const { return terms_.begin()->first; }
    const Rational& leading_coefficient() const { return terms_.begin()->second; }

    void add_term(const Exponents& e, const Rational& c)
    {
        if (c == 0) return;
        auto [it, fresh] = terms_.try_emplace(e, c);
        if (!fresh) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    MPoly& operator+=(const MPoly& o)
    {
        adopt(o);
        for (auto& [e, c] : o.terms_) add_term(e, c);
        return *this;
    }
    MPoly& operator-=(const MPoly& o)
    {
        adopt(o);
        for (auto& [e, c] : o.terms_) add_term(e, -c);
        return *this;
    }
    MPoly& operator*=(const Rational& c)
    {
        if (c == 0) terms_.clear();
        else
            for (auto& kv : terms_) kv.second *= c;
        return *this;
    }
    MPoly& operator*=(const MPoly& o) { return *this = *this * o; }

    friend MPoly operator+(MPoly a, const MPoly& b) { return a += b; }
    friend MPoly operator-(MPoly a, const MPoly& b) { return a -= b; }
    friend MPoly operator*(MPoly a, const Rational& c) { return a *= c; }
    friend MPoly operator*(const Rational& c, MPoly a) { return a *= c; }
    MPoly operator-() const
    {
        MPoly r = *this;
        for (auto& kv : r.terms_) kv.second = -kv.second;
        return r;
    }

    friend MPoly operator*(const MPoly& a, const MPoly& b)
    {
        check(a, b);
        const auto& t = a.table_ ? a.table_ : b.table_;
        MPoly r(t);
        if (a.is_zero() || b.is_zero()) return r;
        const MPoly& small = a.nterms() <= b.nterms() ? a : b;
        const MPoly& big = a.nterms() <= b.nterms() ? b : a;
        Exponents e;
        Rational c;
        for (auto& [ea, ca] : small.terms_) {
            for (auto& [eb, cb] : big.terms_) {
                e = ea;
                for (std::size_t i = 0; i < e.size(); ++i) e[i] += eb[i];
                c = ca * cb;
                r.add_term(e, c);
            }
        }
        return r;
    }

    friend bool operator==(const MPoly& a, const MPoly& b)
    {
        if (a.is_zero() && b.is_zero()) return true;
        check(a, b);
        return a.terms_ == b.terms_;
    }
    friend bool operator!=(const MPoly& a, const MPoly& b) { return !(a == b); }

    MPoly pow(long n) const
    {
        if (n < 0) throw std::invalid_argument("negative power of a polynomial");
        MPoly result(table_, Rational(1)), base = *this;
        while (n) {
            if (n & 1) result = result * base;
            n >>= 1;
            if (n) base = base * base;
        }
        return result;
    }

    MPoly diff(std::size_t v) const
    {
        MPoly r(table_);
        for (auto& [e, c] : terms_) {
            if (e[v] == 0) continue;
            Exponents f = e;
            f[v] -= 1;
            r.terms_.emplace(std::move(f), c * e[v]);
        }
        return r;
    }

    std::uint32_t degree(std::size_t v) const
    {
        std::uint32_t d = 0;
        for (auto& kv : terms_) d = std::max(d, kv.first[v]);
        return d;
    }
    std::uint32_t min_degree(std::size_t v) const
    {
        if (terms_.empty()) return 0;
        std::uint32_t d = UINT32_MAX;
        for (auto& kv : terms_) d = std::min(d, kv.first[v]);
        return d;
    }
    std::uint64_t total_degree() const
    {
        std::uint64_t d = 0;
        for (auto& kv : terms_) d = std::max(d, centerlab::total_degree(kv.first));
        return d;
    }
    std::uint32_t degree_xy() const
    {
        std::uint32_t d = 0;
        for (auto& kv : terms_) d = std::max(d, kv.first[VarTable::X] + kv.first[VarTable::Y]);
        return d;
    }
    bool depends_on(std::size_t v) const
    {
        for (auto& kv : terms_)
            if (kv.first[v]) return true;
        return false;
    }
    std::vector<bool> variables() const
    {
        std::vector<bool> used(table_ ? table_->size() : 0, false);
        for (auto& kv : terms_)
            for (std::size_t i = 0; i < kv.first.size(); ++i)
                if (kv.first[i]) used[i] = true;
        return used;
    }
    bool depends_on_state() const { return depends_on(VarTable::X) || depends_on(VarTable::Y); }

    MPoly homogeneous_xy(std::uint32_t d) const
    {
        MPoly r(table_);
        for (auto& [e, c] : terms_)
            if (e[VarTable::X] + e[VarTable::Y] == d) r.terms_.emplace(e, c);
        return r;
    }

    // Coefficient of x^i y^j, as a polynomial in eps and parameters.
    MPoly coeff_xy(std::uint32_t i, std::uint32_t j) const
    {
        MPoly r(table_);
        for (auto& [e, c] : terms_) {
            if (e[VarTable::X] != i || e[VarTable::Y] != j) continue;
            Exponents f = e;
            f[VarTable::X] = f[VarTable::Y] = 0;
            r.terms_.emplace(std::move(f), c);
        }
        return r;
    }

    // View as a polynomial in the variables flagged in `vars`; keys carry only
    // those exponents (others zeroed), values are the cofactors.
    std::map<Exponents, MPoly, GrlexGreater> coefficients_in(const std::vector<bool>& vars) const
    {
        std::map<Exponents, MPoly, GrlexGreater> out;
        for (auto& [e, c] : terms_) {
            Exponents key(e.size(), 0), rest = e;
            for (std::size_t i = 0; i < e.size(); ++i)
                if (vars[i]) {
                    key[i] = e[i];
                    rest[i] = 0;
                }
            auto it = out.try_emplace(std::move(key), MPoly(table_)).first;
            it->second.terms_.emplace(std::move(rest), c);
        }
        return out;
    }

    // Univariate view: coefficient list indexed by the power of v.
    std::vector<MPoly> univariate(std::size_t v) const
    {
        std::vector<MPoly> out(degree(v) + 1, MPoly(table_));
        for (auto& [e, c] : terms_) {
            Exponents f = e;
            f[v] = 0;
            out[e[v]].terms_.emplace(std::move(f), c);
        }
        return out;
    }
    static MPoly from_univariate(const std::vector<MPoly>& cs, std::size_t v, const VarTablePtr& t)
    {
        MPoly r(t);
        for (std::size_t k = 0; k < cs.size(); ++k)
            for (auto& [e, c] : cs[k].terms_) {
                Exponents f = e;
                f[v] += std::uint32_t(k);
                r.add_term(f, c);
            }
        return r;
    }

    MPoly substitute(const std::map<std::size_t, MPoly>& bind) const
    {
        if (bind.empty()) return *this;
        std::map<std::size_t, std::vector<MPoly>> powers;
        MPoly r(table_);
        for (auto& [e, c] : terms_) {
            Exponents rest = e;
            MPoly factor(table_, c);
            for (auto& [v, val] : bind) {
                if (!e[v]) continue;
                rest[v] = 0;
                auto& pw = powers[v];
                if (pw.empty()) pw.push_back(MPoly(table_, Rational(1)));
                while (pw.size() <= e[v]) pw.push_back(pw.back() * val);
                factor = factor * pw[e[v]];
            }
            MPoly mono = MPoly::monomial(table_, rest, Rational(1));
            r += factor * mono;
        }
        return r;
    }
    MPoly substitute(std::size_t v, const MPoly& val) const { return substitute({{v, val}}); }

    double evaluate(const std::vector<double>& point) const
    {
        double s = 0;
        for (auto& [e, c] : terms_) {
            double t = c.get_d();
            for (std::size_t i = 0; i < e.size(); ++i)
                for (std::uint32_t k = 0; k < e[i]; ++k) t *= point[i];
            s += t;
        }
        return s;
    }

    // Rational multiple making all coefficients coprime integers with a positive
    // leading coefficient; returns the scalar c with *this = c * primitive().
    Rational content() const
    {
        if (terms_.empty()) return 0;
        Integer g = 0, l = 1;
        for (auto& kv : terms_) {
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), kv.second.get_num_mpz_t());
            mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), kv.second.get_den_mpz_t());
        }
        Rational c(g, l);
        c.canonicalize();
        if (leading_coefficient() < 0) c = -c;
        return c;
    }
    MPoly primitive() const
    {
        if (terms_.empty()) return *this;
        MPoly r = *this;
        Rational inv = 1 / content();
        r *= inv;
        return r;
    }

    MPoly reembed(const VarTablePtr& t) const
    {
        MPoly r(t);
        std::vector<std::size_t> map(table_->size());
        for (std::size_t i = 0; i < table_->size(); ++i) map[i] = t->require(table_->name(i));
        for (auto& [e, c] : terms_) {
            Exponents f(t->size(), 0);
            for (std::size_t i = 0; i < e.size(); ++i) f[map[i]] = e[i];
            r.terms_.emplace(std::move(f), c);
        }
        return r;
    }

    std::string to_string(bool unicode = false) const;

private:
    friend std::optional<MPoly> exact_divide(const MPoly&, const MPoly&);

    static void check(const MPoly& a, const MPoly& b)
    {
        if (a.table_ && b.table_ && !same_table(a.table_, b.table_)) throw TableMismatch();
    }
    void adopt(const MPoly& o)
    {
        check(*this, o);
        if (!table_) table_ = o.table_;
    }

    VarTablePtr table_;
    Terms terms_;
};

inline bool divides_monomial(const Exponents& d, const Exponents& e)
{
    for (std::size_t i = 0; i < d.size(); ++i)
        if (d[i] > e[i]) return false;
    return true;
}

// Multivariate division; returns the quotient only when the remainder is zero.
inline std::optional<MPoly> exact_divide(const MPoly& a, const MPoly& b)
{
    if (b.is_zero()) throw std::domain_error("division by zero polynomial");
    MPoly::check(a, b);
    MPoly q(a.table() ? a.table() : b.table());
    if (a.is_zero()) return q;
    if (b.nterms() == 1) {
        auto& [eb, cb] = *b.terms_.begin();
        for (auto& [e, c] : a.terms_) {
            if (!divides_monomial(eb, e)) return std::nullopt;
            Exponents f = e;
            for (std::size_t i = 0; i < f.size(); ++i) f[i] -= eb[i];
            q.terms_.emplace(std::move(f), c / cb);
        }
        return q;
    }
    MPoly r = a;
    const Exponents& lb = b.leading_exponents();
    Rational lcinv = 1 / b.leading_coefficient();
    Exponents f;
    while (!r.is_zero()) {
        auto& [er, cr] = *r.terms_.begin();
        if (!divides_monomial(lb, er)) return std::nullopt;
        f = er;
        for (std::size_t i = 0; i < f.size(); ++i) f[i] -= lb[i];
        Rational c = cr * lcinv;
        q.terms_.emplace(f, c);
        Exponents g;
        for (auto& [eb, cb] : b.terms_) {
            g = eb;
            for (std::size_t i = 0; i < g.size(); ++i) g[i] += f[i];
            r.add_term(g, -c * cb);
        }
    }
    return q;
}

inline MPoly divide_exact(const MPoly& a, const MPoly& b)
{
    auto q = exact_divide(a, b);
    if (!q) throw std::domain_error("inexact polynomial division");
    return *q;
}

inline std::string rational_to_string(const Rational& c)
{
    return c.get_str();
}

inline std::string MPoly::to_string(bool unicode) const
{
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto& [e, c] : terms_) {
        Rational a = abs(c);
        bool neg = c < 0;
        if (first) {
            if (neg) os << "-";
        } else {
            os << (neg ? " - " : " + ");
        }
        first = false;
        bool is_const = centerlab::total_degree(e) == 0;
        bool wrote = false;
        if (is_const || a != 1) {
            if (a.get_den() != 1 && !is_const) os << "(" << a.get_str() << ")";
            else os << a.get_str();
            wrote = true;
        }
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (!e[i]) continue;
            if (wrote) os << "*";
            if (i == VarTable::EPS && unicode) os << "ε";
            else os << table_->name(i);
            if (e[i] > 1) os << "^" << e[i];
            wrote = true;
        }
    }
    return os.str();
}

} // namespace centerlab
