#pragma once

#include "gcd.hpp"

namespace centerlab {

// Reduced quotient num/den. The denominator is a primitive integer polynomial
// with positive leading coefficient; zero is 0/1.
class RatFunc {
public:
    RatFunc() = default;
    explicit RatFunc(const VarTablePtr& t) : num_(t), den_(t, Rational(1)) {}
    RatFunc(const VarTablePtr& t, const Rational& c) : num_(t, c), den_(t, Rational(1)) {}
    explicit RatFunc(MPoly n) : num_(std::move(n)), den_(num_.table(), Rational(1)) {}
    RatFunc(MPoly n, MPoly d) : num_(std::move(n)), den_(std::move(d)) { normalize(); }

    // Trusted constructor: caller guarantees canonical form.
    static RatFunc raw(MPoly n, MPoly d)
    {
        RatFunc r;
        r.num_ = std::move(n);
        r.den_ = std::move(d);
        return r;
    }

    const MPoly& num() const { return num_; }
    const MPoly& den() const { return den_; }
    const VarTablePtr& table() const { return num_.table(); }
    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return den_.is_constant(); }

    friend RatFunc operator+(const RatFunc& a, const RatFunc& b)
    {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        if (a.den_ == b.den_) return RatFunc(a.num_ + b.num_, a.den_);
        MPoly g = poly_gcd(a.den_, b.den_);
        MPoly da = divide_exact(a.den_, g), db = divide_exact(b.den_, g);
        return RatFunc(a.num_ * db + b.num_ * da, a.den_ * db);
    }
    friend RatFunc operator-(const RatFunc& a, const RatFunc& b) { return a + (-b); }
    RatFunc operator-() const { return raw(-num_, den_); }

    friend RatFunc operator*(const RatFunc& a, const RatFunc& b)
    {
        if (a.is_zero() || b.is_zero()) return RatFunc(a.table() ? a.table() : b.table());
        MPoly g1 = poly_gcd(a.num_, b.den_), g2 = poly_gcd(b.num_, a.den_);
        return RatFunc(divide_exact(a.num_, g1) * divide_exact(b.num_, g2),
                       divide_exact(a.den_, g2) * divide_exact(b.den_, g1));
    }
    friend RatFunc operator/(const RatFunc& a, const RatFunc& b)
    {
        if (b.is_zero()) throw std::domain_error("division by zero rational function");
        return a * raw(b.den_, b.num_);
    }
    friend RatFunc operator*(const RatFunc& a, const Rational& c) { return RatFunc(a.num_ * c, a.den_); }

    RatFunc& operator+=(const RatFunc& o) { return *this = *this + o; }
    RatFunc& operator-=(const RatFunc& o) { return *this = *this - o; }
    RatFunc& operator*=(const RatFunc& o) { return *this = *this * o; }

    // Structural equality of canonical forms.
    friend bool operator==(const RatFunc& a, const RatFunc& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
    friend bool operator!=(const RatFunc& a, const RatFunc& b) { return !(a == b); }

    RatFunc substitute(const std::map<std::size_t, MPoly>& bind) const
    {
        MPoly d = den_.substitute(bind);
        if (d.is_zero()) throw std::domain_error("substitution annihilates denominator");
        return RatFunc(num_.substitute(bind), d);
    }

    std::string to_string(bool unicode = false) const
    {
        if (den_.is_constant() && den_.constant_value() == 1) return num_.to_string(unicode);
        auto wrap = [&](const MPoly& p) {
            std::string s = p.to_string(unicode);
            return p.nterms() > 1 || (p.nterms() == 1 && s.find('*') != std::string::npos) ? "(" + s + ")" : s;
        };
        return wrap(num_) + "/" + wrap(den_);
    }

private:
    void normalize()
    {
        if (den_.is_zero()) throw std::domain_error("zero denominator");
        if (num_.is_zero()) {
            den_ = MPoly(den_.table(), Rational(1));
            num_ = MPoly(den_.table());
            return;
        }
        MPoly g = poly_gcd(num_, den_);
        if (!g.is_constant()) {
            num_ = divide_exact(num_, g);
            den_ = divide_exact(den_, g);
        }
        Rational c = den_.content();
        if (c != 1) {
            Rational inv = 1 / c;
            num_ *= inv;
            den_ *= inv;
        }
    }

    MPoly num_, den_;
};

inline RatFunc ratfunc_normalize(const MPoly& num, const MPoly& den) { return RatFunc(num, den); }

// Equality of formal quotients by cross-multiplication.
inline bool cross_equal(const RatFunc& a, const RatFunc& b)
{
    return a.num() * b.den() == b.num() * a.den();
}

} // namespace centerlab
