#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "mpoly.hpp"

namespace centerlab {

// Dense univariate polynomial over Q, coefficient k multiplies t^k.
struct UPoly {
    std::vector<Rational> c;

    UPoly() = default;
    explicit UPoly(std::vector<Rational> cs) : c(std::move(cs)) { trim(); }

    void trim()
    {
        while (!c.empty() && c.back() == 0) c.pop_back();
    }
    bool is_zero() const { return c.empty(); }
    int degree() const { return int(c.size()) - 1; }
    const Rational& lc() const { return c.back(); }

    Rational eval(const Rational& x) const
    {
        Rational s = 0;
        for (std::size_t k = c.size(); k-- > 0;) s = s * x + c[k];
        return s;
    }
    double eval(double x) const
    {
        double s = 0;
        for (std::size_t k = c.size(); k-- > 0;) s = s * x + c[k].get_d();
        return s;
    }
    UPoly derivative() const
    {
        std::vector<Rational> d;
        for (std::size_t k = 1; k < c.size(); ++k) d.push_back(c[k] * int(k));
        return UPoly(d);
    }
    UPoly operator-() const
    {
        UPoly r = *this;
        for (auto& v : r.c) v = -v;
        return r;
    }
};

inline UPoly operator*(const UPoly& a, const UPoly& b)
{
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Rational> r(a.c.size() + b.c.size() - 1, 0);
    for (std::size_t i = 0; i < a.c.size(); ++i)
        for (std::size_t j = 0; j < b.c.size(); ++j) r[i + j] += a.c[i] * b.c[j];
    return UPoly(r);
}

inline std::pair<UPoly, UPoly> divmod(const UPoly& a, const UPoly& b)
{
    if (b.is_zero()) throw std::domain_error("division by zero polynomial");
    std::vector<Rational> r = a.c, q;
    if (a.degree() >= b.degree()) q.assign(std::size_t(a.degree() - b.degree() + 1), 0);
    for (int k = a.degree() - b.degree(); k >= 0; --k) {
        Rational f = r[std::size_t(k + b.degree())] / b.lc();
        q[std::size_t(k)] = f;
        for (int j = 0; j <= b.degree(); ++j) r[std::size_t(k + j)] -= f * b.c[std::size_t(j)];
    }
    return {UPoly(q), UPoly(r)};
}

inline UPoly ugcd(UPoly a, UPoly b)
{
    while (!b.is_zero()) {
        auto r = divmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.is_zero()) {
        Rational l = a.lc();
        for (auto& v : a.c) v /= l;
    }
    return a;
}

inline UPoly squarefree(const UPoly& p)
{
    if (p.degree() <= 0) return p;
    UPoly g = ugcd(p, p.derivative());
    return divmod(p, g).first;
}

inline std::vector<UPoly> sturm_sequence(const UPoly& p)
{
    std::vector<UPoly> s{p, p.derivative()};
    while (!s.back().is_zero()) {
        auto r = divmod(s[s.size() - 2], s.back()).second;
        if (r.is_zero()) break;
        s.push_back(-r);
    }
    return s;
}

inline int sign_changes_at(const std::vector<UPoly>& s, const Rational& x)
{
    int changes = 0, last = 0;
    for (auto& p : s) {
        int v = sgn(p.eval(x));
        if (v == 0) continue;
        if (last != 0 && v != last) ++changes;
        last = v;
    }
    return changes;
}

inline int sign_changes_at_infinity(const std::vector<UPoly>& s, bool positive)
{
    int changes = 0, last = 0;
    for (auto& p : s) {
        if (p.is_zero()) continue;
        int v = sgn(p.lc());
        if (!positive && (p.degree() % 2)) v = -v;
        if (last != 0 && v != last) ++changes;
        last = v;
    }
    return changes;
}

// Cauchy bound on the modulus of the roots.
inline Rational root_bound(const UPoly& p)
{
    Rational m = 0;
    for (int k = 0; k < p.degree(); ++k) m = std::max(m, Rational(abs(p.c[std::size_t(k)] / p.lc())));
    return m + 1;
}

// Number of distinct real roots in (a, b].
inline int count_roots(const UPoly& p, const Rational& a, const Rational& b)
{
    auto s = sturm_sequence(squarefree(p));
    return sign_changes_at(s, a) - sign_changes_at(s, b);
}

struct RootInterval {
    Rational lo, hi;   // root in (lo, hi], or exact when lo == hi
    bool exact = false;
    double approx() const { return exact ? lo.get_d() : 0.5 * (lo.get_d() + hi.get_d()); }
};

// Try to recognise a rational root near x by continued fractions.
inline std::optional<Rational> rational_near(const UPoly& p, const Rational& lo, const Rational& hi)
{
    double x = 0.5 * (lo.get_d() + hi.get_d());
    long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    double r = x;
    for (int it = 0; it < 40; ++it) {
        double a = std::floor(r);
        if (std::abs(a) > 1e12) break;
        long ai = long(a);
        if (std::abs(double(ai) * double(k1)) > 1e15 || std::abs(double(ai) * double(h1)) > 1e15) break;
        long h2 = ai * h1 + h0, k2 = ai * k1 + k0;
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        if (k1 > 0) {
            Rational q(h1, k1);
            q.canonicalize();
            if (q > lo && q <= hi && p.eval(q) == 0) return q;
        }
        if (r - a < 1e-15) break;
        r = 1.0 / (r - a);
    }
    return std::nullopt;
}

// Isolate the distinct real roots of p and refine each interval below `width`.
inline std::vector<RootInterval> real_roots(const UPoly& p, double width = 1e-14)
{
    std::vector<RootInterval> out;
    if (p.degree() <= 0) return out;
    UPoly q = squarefree(p);
    auto s = sturm_sequence(q);
    Rational B = root_bound(q);
    std::vector<std::pair<Rational, Rational>> stack{{-B, B}};
    std::vector<std::pair<Rational, Rational>> isolated;
    while (!stack.empty()) {
        auto [a, b] = stack.back();
        stack.pop_back();
        int n = sign_changes_at(s, a) - sign_changes_at(s, b);
        if (n == 0) continue;
        if (n == 1) {
            isolated.emplace_back(a, b);
            continue;
        }
        Rational m = (a + b) / 2;
        stack.emplace_back(m, b);
        stack.emplace_back(a, m);
    }
    std::sort(isolated.begin(), isolated.end());
    for (auto [a, b] : isolated) {
        RootInterval ri{a, b, false};
        if (q.eval(b) == 0) {
            out.push_back({b, b, true});
            continue;
        }
        if (auto r = rational_near(q, a, b)) {
            out.push_back({*r, *r, true});
            continue;
        }
        while (Rational(ri.hi - ri.lo).get_d() > width * std::max(1.0, std::abs(ri.lo.get_d()))) {
            Rational m = (ri.lo + ri.hi) / 2;
            if (q.eval(m) == 0) {
                ri = {m, m, true};
                break;
            }
            if (sgn(q.eval(m)) == sgn(q.eval(ri.hi))) ri.hi = m;
            else ri.lo = m;
            if (auto r = rational_near(q, ri.lo, ri.hi)) {
                ri = {*r, *r, true};
                break;
            }
        }
        out.push_back(ri);
    }
    return out;
}

} // namespace centerlab
