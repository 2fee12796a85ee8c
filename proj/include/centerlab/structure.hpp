#pragma once

#include <cmath>

#include "system.hpp"
#include "univariate.hpp"

namespace centerlab {

inline bool is_hamiltonian(const PlaneSystem& s) { return divergence(s).is_zero(); }

// Homogeneous polynomial in two chosen variables -> dehomogenised UPoly in t = second/first.
inline UPoly dehomogenize(const MPoly& f, std::size_t u, std::size_t v)
{
    std::uint32_t d = 0;
    for (auto& kv : f.terms()) d = std::max(d, kv.first[u] + kv.first[v]);
    std::vector<Rational> c(d + 1, 0);
    for (auto& [e, k] : f.terms()) {
        for (std::size_t i = 0; i < e.size(); ++i)
            if (i != u && i != v && e[i]) throw std::invalid_argument("form has symbolic coefficients");
        c[e[v]] += k;
    }
    return UPoly(c);
}

struct Direction {
    bool vertical = false; // the line x = 0
    RootInterval slope;    // y = slope * x otherwise
    std::string describe() const
    {
        if (vertical) return "x = 0";
        if (slope.exact) {
            if (slope.lo == 0) return "y = 0";
            return "y = " + slope.lo.get_str() + "*x";
        }
        std::ostringstream os;
        os.precision(15);
        os << "y = " << slope.approx() << "*x";
        return os.str();
    }
};

// Real projective roots of a binary form in variables (u, v): v/u = t, plus u = 0.
inline std::vector<Direction> real_projective_roots(const MPoly& F, std::size_t u, std::size_t v)
{
    std::vector<Direction> out;
    UPoly p = dehomogenize(F, u, v);
    std::uint32_t d = 0;
    for (auto& kv : F.terms()) d = std::max(d, kv.first[u] + kv.first[v]);
    for (auto& r : real_roots(p)) out.push_back({false, r});
    if (p.degree() < int(d)) out.push_back({true, {}});
    return out;
}

struct CharacteristicDirections {
    bool all = false;           // x*Q - y*P vanishes identically
    std::uint32_t degree = 0;   // degree of the lowest homogeneous part
    MPoly form;                 // that part
    std::vector<Direction> directions;
    std::string note;
};

inline CharacteristicDirections characteristic_directions(const PlaneSystem& s)
{
    if (s.P.is_zero() && s.Q.is_zero()) throw std::invalid_argument("characteristic directions need (P,Q) != (0,0)");
    const auto& t = s.table();
    MPoly M = MPoly::var(t, VarTable::X) * s.Q - MPoly::var(t, VarTable::Y) * s.P;
    CharacteristicDirections out;
    if (M.is_zero()) {
        out.all = true;
        return out;
    }
    std::uint32_t lo = UINT32_MAX;
    for (auto& kv : M.terms()) lo = std::min(lo, kv.first[VarTable::X] + kv.first[VarTable::Y]);
    out.degree = lo;
    out.form = M.homogeneous_xy(lo);
    bool symbolic = false;
    for (std::size_t i = 2; i < t->size(); ++i) symbolic |= out.form.depends_on(i);
    if (symbolic && out.form.nterms() == 1) {
        const auto& e = out.form.terms().begin()->first;
        if (e[VarTable::Y]) out.directions.push_back({false, {Rational(0), Rational(0), true}});
        if (e[VarTable::X]) out.directions.push_back({true, {}});
        out.note = "assumes " + out.form.coeff_xy(e[VarTable::X], e[VarTable::Y]).to_string() + " != 0";
        return out;
    }
    out.directions = real_projective_roots(out.form, VarTable::X, VarTable::Y);
    return out;
}

enum class ReversibilityVerdict { reversible, reversible_every_axis, not_reversible, undetermined };

inline const char* to_string(ReversibilityVerdict v)
{
    switch (v) {
    case ReversibilityVerdict::reversible: return "reversible";
    case ReversibilityVerdict::reversible_every_axis: return "reversible_every_axis";
    case ReversibilityVerdict::not_reversible: return "not_reversible";
    case ReversibilityVerdict::undetermined: return "undetermined";
    }
    return "undetermined";
}

struct AxisWitness {
    double c = 0, s = 0; // cos and sin of the axis angle
    bool exact = false;  // tan (or cot) is rational
    Rational ratio;      // s/c when c != 0, otherwise c/s (= 0)
    double angle() const { return std::atan2(s, c); }
};

struct ReversibilityResult {
    VarTablePtr table; // parameters plus the two angle symbols
    std::size_t c_index = 0, s_index = 0;
    std::vector<MPoly> axis_conditions; // forms in (c, s), c^2+s^2 factors removed
    ReversibilityVerdict verdict = ReversibilityVerdict::undetermined;
    std::vector<AxisWitness> witnesses;
};

// Rotate by (c, s): u = c x - s y, v = s x + c y, and require invariance under
// (u, v, t) -> (u, -v, -t).
inline ReversibilityResult reversibility_conditions(const PlaneSystem& sys)
{
    ReversibilityResult out;
    auto ps = sys.params();
    std::string cn = "c", sn = "s";
    for (int k = 0; std::find(ps.begin(), ps.end(), cn) != ps.end() || std::find(ps.begin(), ps.end(), sn) != ps.end();
         ++k) {
        cn = "cos_a" + std::to_string(k);
        sn = "sin_a" + std::to_string(k);
    }
    auto all = ps;
    all.push_back(cn);
    all.push_back(sn);
    auto t = VarTable::make(all);
    out.table = t;
    out.c_index = t->require(cn);
    out.s_index = t->require(sn);
    MPoly c = MPoly::var(t, out.c_index), s = MPoly::var(t, out.s_index);
    MPoly u = MPoly::var(t, VarTable::X), v = MPoly::var(t, VarTable::Y);
    std::map<std::size_t, MPoly> rot{{VarTable::X, c * u + s * v}, {VarTable::Y, -(s * u) + c * v}};
    MPoly P = sys.P.reembed(t).substitute(rot), Q = sys.Q.reembed(t).substitute(rot);
    MPoly Pt = c * P - s * Q, Qt = s * P + c * Q;
    MPoly circle = c * c + s * s;
    std::vector<MPoly> forms;
    auto add = [&](MPoly f) {
        if (f.is_zero()) return;
        while (auto q = exact_divide(f, circle)) f = *q;
        f = f.primitive();
        if (std::find(forms.begin(), forms.end(), f) == forms.end()) forms.push_back(f);
    };
    std::vector<bool> xy(t->size(), false);
    xy[VarTable::X] = xy[VarTable::Y] = true;
    for (auto& [e, f] : Pt.coefficients_in(xy))
        if (e[VarTable::Y] % 2 == 0) add(f);
    for (auto& [e, f] : Qt.coefficients_in(xy))
        if (e[VarTable::Y] % 2 == 1) add(f);
    out.axis_conditions = forms;
    if (forms.empty()) {
        out.verdict = ReversibilityVerdict::reversible_every_axis;
        return out;
    }
    bool symbolic = false;
    for (auto& f : forms)
        for (std::size_t i = 3; i < t->size(); ++i)
            if (i != out.c_index && i != out.s_index && f.depends_on(i)) symbolic = true;
    if (symbolic) {
        out.verdict = ReversibilityVerdict::undetermined;
        return out;
    }
    MPoly g = forms.front();
    for (auto& f : forms) g = poly_gcd(g, f);
    if (g.is_constant()) {
        out.verdict = ReversibilityVerdict::not_reversible;
        return out;
    }
    // common factor may mix forms of different degree only through c^2+s^2, removed above
    for (auto& d : real_projective_roots(g, out.c_index, out.s_index)) {
        AxisWitness w;
        if (d.vertical) {
            w = {0, 1, true, 0};
        } else {
            double tt = d.slope.approx();
            w.c = 1 / std::sqrt(1 + tt * tt);
            w.s = tt * w.c;
            w.exact = d.slope.exact;
            w.ratio = d.slope.exact ? d.slope.lo : Rational(0);
        }
        out.witnesses.push_back(w);
    }
    out.verdict = out.witnesses.empty() ? ReversibilityVerdict::not_reversible : ReversibilityVerdict::reversible;
    return out;
}

// Residual numerator of dH/dt / H for H = prod f_i^l_i * exp(g/h) * exp(k*arg(u+iv)).
struct PowerFactor {
    MPoly f;
    MPoly lambda;
};
struct ExpFactor {
    MPoly g, h;
};
struct ArgFactor {
    MPoly kappa, u, v;
};

struct DarbouxExpr {
    std::vector<PowerFactor> power_factors;
    std::optional<ExpFactor> exp_factor;
    std::optional<ArgFactor> arg_factor;
};

struct DarbouxResidual {
    bool zero = true;
    MPoly residual;
    std::string domain_note;
};

inline DarbouxResidual verify_darboux_integral(const PlaneSystem& s, const DarbouxExpr& H)
{
    const auto& t = s.table();
    auto lie = [&](const MPoly& f) { return lie_derivative(f, s); };
    std::vector<MPoly> fs;
    for (auto& pf : H.power_factors)
        if (!pf.f.is_constant()) fs.push_back(pf.f);
    MPoly one(t, Rational(1));
    MPoly h2 = H.exp_factor ? H.exp_factor->h * H.exp_factor->h : one;
    MPoly W = H.arg_factor ? H.arg_factor->u * H.arg_factor->u + H.arg_factor->v * H.arg_factor->v : one;
    auto prod_except = [&](std::size_t skip) {
        MPoly p = one;
        for (std::size_t i = 0; i < fs.size(); ++i)
            if (i != skip) p = p * fs[i];
        return p;
    };
    MPoly all = prod_except(SIZE_MAX);
    MPoly num(t);
    std::size_t k = 0;
    for (auto& pf : H.power_factors) {
        if (pf.f.is_constant()) continue;
        num += pf.lambda * lie(pf.f) * prod_except(k) * h2 * W;
        ++k;
    }
    if (H.exp_factor) {
        const auto& [g, h] = *H.exp_factor;
        num += (lie(g) * h - g * lie(h)) * all * W;
    }
    DarbouxResidual out;
    if (H.arg_factor) {
        const auto& [kap, u, v] = *H.arg_factor;
        num += kap * (u * lie(v) - v * lie(u)) * all * h2;
        out.domain_note = "identity certified where u^2+v^2 > 0";
    }
    out.residual = num;
    out.zero = num.is_zero();
    return out;
}

namespace detail {

inline void collect_factors(const ExprPtr& e, bool inverse, std::vector<std::pair<ExprPtr, bool>>& out)
{
    if (e->kind == Expr::mul) {
        collect_factors(e->args[0], inverse, out);
        collect_factors(e->args[1], inverse, out);
    } else if (e->kind == Expr::div) {
        collect_factors(e->args[0], inverse, out);
        collect_factors(e->args[1], !inverse, out);
    } else {
        out.emplace_back(e, inverse);
    }
}

inline bool has_call(const ExprPtr& e)
{
    if (e->kind == Expr::call) return true;
    for (auto& a : e->args)
        if (has_call(a)) return true;
    return false;
}

inline bool has_symbolic_power(const ExprPtr& e)
{
    if (e->kind == Expr::pow) {
        std::set<std::string> syms;
        collect_symbols(e->args[1], syms);
        if (!syms.empty()) return true;
    }
    for (auto& a : e->args)
        if (has_symbolic_power(a)) return true;
    return false;
}

} // namespace detail

// Parse `(f)^(l) * exp((g)/(h)) * argexp(k; u; v)`; a call-free expression is
// read as a single rational factor with exponent 1. Unknown symbols must be
// parameters of the table.
inline DarbouxExpr parse_darboux(const VarTablePtr& t, const std::string& text)
{
    ExprPtr root = parse_expression(text);
    DarbouxExpr out;
    auto add_power = [&](const RatFunc& base, const MPoly& lam) {
        if (!base.num().is_constant()) out.power_factors.push_back({base.num(), lam});
        if (!base.den().is_constant()) out.power_factors.push_back({base.den(), -lam});
    };
    MPoly one(t, Rational(1));
    if (!detail::has_call(root) && !detail::has_symbolic_power(root)) {
        add_power(to_ratfunc(root, t), one);
        if (out.power_factors.empty()) throw ParseError(root->line, root->col, "first integral is constant");
        return out;
    }
    std::vector<std::pair<ExprPtr, bool>> fac;
    detail::collect_factors(root, false, fac);
    RatFunc expo(t);
    for (auto& [e, inv] : fac) {
        MPoly sign = inv ? -one : one;
        if (e->kind == Expr::call) {
            if (e->name == "exp") {
                if (e->args.size() != 1) throw ParseError(e->line, e->col, "exp takes one argument");
                RatFunc g = to_ratfunc(e->args[0], t);
                expo += inv ? -g : g;
            } else if (e->name == "argexp") {
                if (e->args.size() != 3) throw ParseError(e->line, e->col, "argexp takes (kappa; u; v)");
                if (out.arg_factor) throw ParseError(e->line, e->col, "only one argexp factor is supported");
                MPoly kap = to_mpoly(e->args[0], t);
                if (kap.depends_on_state()) throw ParseError(e->line, e->col, "kappa must not depend on x or y");
                out.arg_factor = ArgFactor{kap * sign, to_mpoly(e->args[1], t), to_mpoly(e->args[2], t)};
            } else {
                throw ParseError(e->line, e->col, "unknown function '" + e->name + "'");
            }
            continue;
        }
        if (e->kind == Expr::pow && !detail::has_call(e->args[0])) {
            MPoly lam = to_mpoly(e->args[1], t);
            if (lam.depends_on_state()) throw ParseError(e->line, e->col, "exponent must not depend on x or y");
            add_power(to_ratfunc(e->args[0], t), lam * sign);
            continue;
        }
        if (detail::has_call(e)) throw ParseError(e->line, e->col, "unsupported factor shape");
        add_power(to_ratfunc(e, t), sign);
    }
    if (!expo.is_zero()) out.exp_factor = ExpFactor{expo.num(), expo.den()};
    if (out.power_factors.empty() && !out.exp_factor && !out.arg_factor)
        throw ParseError(root->line, root->col, "first integral is constant");
    return out;
}

} // namespace centerlab
