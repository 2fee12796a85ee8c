#pragma once

#include "mpoly.hpp"

namespace centerlab {

namespace detail {

inline MPoly one_like(const MPoly& a) { return MPoly(a.table(), Rational(1)); }

inline MPoly monomial_content(const MPoly& a)
{
    Exponents m(a.table()->size(), UINT32_MAX);
    for (auto& kv : a.terms())
        for (std::size_t i = 0; i < m.size(); ++i) m[i] = std::min(m[i], kv.first[i]);
    return MPoly::monomial(a.table(), m, Rational(1));
}

// Pseudo-remainder of univariate polynomials with MPoly coefficients.
inline std::vector<MPoly> prem(std::vector<MPoly> r, const std::vector<MPoly>& b)
{
    std::size_t n = b.size() - 1;
    const MPoly& lb = b.back();
    while (r.size() > n && r.size() >= 1) {
        std::size_t m = r.size() - 1;
        MPoly lr = r.back();
        for (auto& c : r) c = c * lb;
        for (std::size_t k = 0; k <= n; ++k) r[m - n + k] -= lr * b[k];
        while (!r.empty() && r.back().is_zero()) r.pop_back();
    }
    return r;
}

} // namespace detail

MPoly poly_gcd(const MPoly& a, const MPoly& b);

namespace detail {

inline MPoly gcd_of(const std::vector<MPoly>& cs)
{
    MPoly g(cs.front().table());
    for (auto& c : cs) {
        if (c.is_zero()) continue;
        g = poly_gcd(g, c);
        if (g.is_constant()) break;
    }
    return g;
}

inline std::vector<MPoly> primitive_part(std::vector<MPoly> cs)
{
    MPoly g = gcd_of(cs);
    if (!g.is_constant())
        for (auto& c : cs) c = divide_exact(c, g);
    Integer gn = 0, ld = 1;
    for (auto& c : cs)
        for (auto& kv : c.terms()) {
            gn = gcd(gn, Integer(kv.second.get_num()));
            ld = lcm(ld, Integer(kv.second.get_den()));
        }
    if (gn != 0 && (gn != 1 || ld != 1)) {
        Rational k(ld, gn);
        k.canonicalize();
        for (auto& c : cs) c *= k;
    }
    return cs;
}

} // namespace detail

// Canonical gcd: primitive integer coefficients, positive leading coefficient.
inline MPoly poly_gcd(const MPoly& a, const MPoly& b)
{
    if (a.is_zero()) return b.primitive();
    if (b.is_zero()) return a.primitive();
    if (a.is_constant() || b.is_constant()) return detail::one_like(a);
    if (a.nterms() == 1 || b.nterms() == 1) {
        MPoly ma = detail::monomial_content(a), mb = detail::monomial_content(b);
        Exponents m(a.table()->size());
        for (std::size_t i = 0; i < m.size(); ++i)
            m[i] = std::min(ma.leading_exponents()[i], mb.leading_exponents()[i]);
        return MPoly::monomial(a.table(), m, Rational(1));
    }

    auto va = a.variables(), vb = b.variables();
    std::vector<bool> only_a(va.size()), only_b(va.size());
    bool any_a = false, any_b = false;
    for (std::size_t i = 0; i < va.size(); ++i) {
        only_a[i] = va[i] && !vb[i];
        only_b[i] = vb[i] && !va[i];
        any_a |= only_a[i];
        any_b |= only_b[i];
    }
    // A common divisor cannot involve variables missing from either argument.
    if (any_a || any_b) {
        MPoly g = any_a ? b : a;
        const MPoly& other = any_a ? a : b;
        for (auto& [k, c] : other.coefficients_in(any_a ? only_a : only_b)) {
            g = poly_gcd(g, c);
            if (g.is_constant()) return detail::one_like(a);
        }
        return g;
    }

    if (auto q = exact_divide(a, b)) return b.primitive();
    if (auto q = exact_divide(b, a)) return a.primitive();

    std::size_t v = 0;
    std::uint32_t best = UINT32_MAX;
    for (std::size_t i = 0; i < va.size(); ++i) {
        if (!va[i]) continue;
        std::uint32_t d = std::max(a.degree(i), b.degree(i));
        if (d < best) {
            best = d;
            v = i;
        }
    }

    auto A = a.univariate(v), B = b.univariate(v);
    MPoly ca = detail::gcd_of(A), cb = detail::gcd_of(B);
    MPoly c = poly_gcd(ca, cb);
    A = detail::primitive_part(A);
    B = detail::primitive_part(B);
    if (A.size() < B.size()) std::swap(A, B);
    while (B.size() > 1) {
        auto R = detail::prem(A, B);
        if (R.empty()) break;
        if (R.size() == 1) {
            B = {detail::one_like(a)};
            break;
        }
        A = std::move(B);
        B = detail::primitive_part(std::move(R));
    }
    if (B.size() == 1) return c.primitive();
    MPoly g = MPoly::from_univariate(B, v, a.table());
    return (g * c).primitive();
}

inline MPoly poly_lcm(const MPoly& a, const MPoly& b)
{
    if (a.is_zero() || b.is_zero()) return MPoly(a.table() ? a.table() : b.table());
    return (divide_exact(a, poly_gcd(a, b)) * b).primitive();
}

} // namespace centerlab
