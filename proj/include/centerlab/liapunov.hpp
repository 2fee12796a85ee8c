#pragma once

#include <map>
#include <string>
#include <vector>

#include "conditions.hpp"
#include "linsolve.hpp"

namespace centerlab {

struct ConventionRecord {
    std::string h2;
    std::string corrective = "V*(x^2+y^2)^(n/2)";
    std::string kernel_rule = "coefficient of y^n in H_n is 0 for even n >= 4";
    Rational h2_scale = Rational(1, 2);
    Rational printed_factor = 2; // reference constants = printed_factor * V
};

struct LiapunovConstant {
    unsigned k = 0;       // (degree - 2) / 2
    unsigned degree = 0;  // even degree at which V arises
    unsigned ordinal = 0; // position among nonzero constants, 0 if V == 0
    RatFunc V;
};

struct HEntry {
    unsigned degree;
    RatFunc H;
};

struct LiapunovReport {
    ConventionRecord convention;
    LinearClass cls = LinearClass::other;
    unsigned max_degree = 0;
    std::vector<HEntry> H_table;
    std::vector<LiapunovConstant> constants;
    std::vector<MPoly> side_conditions;
    std::vector<std::string> warnings;

    std::vector<LiapunovConstant> nonzero() const
    {
        std::vector<LiapunovConstant> out;
        for (auto& c : constants)
            if (!c.V.is_zero()) out.push_back(c);
        return out;
    }
};

struct ClassMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct EngineFault : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline Integer binomial(unsigned n, unsigned k)
{
    Integer r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

// x^2 + y^2 raised to the power k.
inline MPoly circle_power(const VarTablePtr& t, unsigned k)
{
    MPoly r(t);
    for (unsigned i = 0; i <= k; ++i) {
        Exponents e(t->size(), 0);
        e[VarTable::X] = 2 * (k - i);
        e[VarTable::Y] = 2 * i;
        r.add_term(e, Rational(binomial(k, i)));
    }
    return r;
}

inline MPoly xy_monomial(const VarTablePtr& t, unsigned a, unsigned b)
{
    Exponents e(t->size(), 0);
    e[VarTable::X] = a;
    e[VarTable::Y] = b;
    return MPoly::monomial(t, e, Rational(1));
}

// Inverse of the degree-n homological matrix over Q(eps): solution_j = sum_i adj[j][i]*rhs_i / det.
struct HomologicalInverse {
    unsigned n = 0;
    MPoly det;
    std::vector<std::vector<MPoly>> adj;
};

inline HomologicalInverse homological_inverse(const MPoly& P1, const MPoly& Q1, unsigned n, PivotOrder order)
{
    const auto& t = P1.table();
    MPoly p10 = P1.coeff_xy(1, 0), p01 = P1.coeff_xy(0, 1), q10 = Q1.coeff_xy(1, 0), q01 = Q1.coeff_xy(0, 1);
    const bool even = n % 2 == 0;
    const std::size_t N = n + 1;
    std::vector<std::vector<MPoly>> M(N, std::vector<MPoly>(N, MPoly(t)));
    for (unsigned j = 0; j <= n; ++j) {
        if (even && j == n) {
            for (unsigned r = 0; r <= n; r += 2) M[r][n] = MPoly(t, -Rational(binomial(n / 2, r / 2)));
            continue;
        }
        Rational a = n - j, b = j;
        M[j][j] += p10 * a + q01 * b;
        if (j + 1 <= n) M[j + 1][j] += p01 * a;
        if (j >= 1) M[j - 1][j] += q10 * b;
    }
    HomologicalInverse inv;
    inv.n = n;
    inv.adj.assign(N, std::vector<MPoly>(N, MPoly(t)));
    for (std::size_t i = 0; i < N; ++i) {
        std::vector<MPoly> e(N, MPoly(t));
        e[i] = MPoly(t, Rational(1));
        BareissResult br;
        try {
            br = bareiss_solve(M, e, order);
        } catch (const SingularMatrix&) {
            throw EngineFault("homological matrix of degree " + std::to_string(n) + " is singular");
        }
        if (i == 0) inv.det = br.det;
        for (std::size_t j = 0; j < N; ++j) inv.adj[j][i] = br.numer[j];
    }
    return inv;
}

struct HomologicalSolution {
    RatFunc H;
    std::optional<RatFunc> V;
};

inline HomologicalSolution apply_inverse(const HomologicalInverse& inv, const RatFunc& residual)
{
    const auto& t = residual.table();
    const unsigned n = inv.n;
    const bool even = n % 2 == 0;
    std::vector<MPoly> rhs(n + 1, MPoly(t));
    for (unsigned r = 0; r <= n; ++r) rhs[r] = -residual.num().coeff_xy(n - r, r);
    MPoly den = inv.det * residual.den();
    MPoly H(t);
    HomologicalSolution out;
    for (unsigned j = 0; j <= n; ++j) {
        MPoly s(t);
        for (unsigned i = 0; i <= n; ++i)
            if (!rhs[i].is_zero() && !inv.adj[j][i].is_zero()) s += inv.adj[j][i] * rhs[i];
        if (even && j == n) out.V = RatFunc(s, den);
        else if (!s.is_zero()) H += s * xy_monomial(t, n - j, j);
    }
    out.H = RatFunc(H, den);
    if (even && !out.V) out.V = RatFunc(t);
    return out;
}

// One homological step: L(H_n) = -residual (+ V (x^2+y^2)^(n/2) for even n).
inline HomologicalSolution solve_homological_step(const PlaneSystem& linear_part, const RatFunc& residual, unsigned n,
                                                  PivotOrder order = PivotOrder::first_nonzero)
{
    MPoly P1 = linear_part.P.homogeneous_xy(1), Q1 = linear_part.Q.homogeneous_xy(1);
    return apply_inverse(homological_inverse(P1, Q1, n, order), residual);
}

inline ConventionRecord convention_for(LinearClass c)
{
    ConventionRecord r;
    r.h2 = c == LinearClass::perturbed_nilpotent ? "(eps*x^2+y^2)/2" : "(x^2+y^2)/2";
    return r;
}

inline void require_engine_class(const PlaneSystem& s)
{
    switch (s.linear_class) {
    case LinearClass::linear_type:
        if (!s.canonical)
            throw ClassMismatch("linear part is a rotation but not in the form k*(-y, x); pre-normalize the system");
        return;
    case LinearClass::perturbed_nilpotent:
    case LinearClass::perturbed_degenerate: return;
    case LinearClass::nilpotent:
    case LinearClass::degenerate:
        throw ClassMismatch(std::string("class ") + to_string(s.linear_class) +
                            " has no Liapunov constants; apply a perturbation first");
    default:
        throw ClassMismatch("linear part is not k*(-y,x), k*(y,-eps*x) or k*(eps*y,-eps*x); pre-normalize the system");
    }
}

// Degree-by-degree engine; parameter substitutions may be applied between
// steps since every H_n depends polynomially on the parameters.
class LiapunovEngine {
public:
    explicit LiapunovEngine(const PlaneSystem& s, PivotOrder order = PivotOrder::first_nonzero)
        : sys_(s), order_(order)
    {
        require_engine_class(s);
        const auto& t = s.table();
        P1_ = s.P.homogeneous_xy(1);
        Q1_ = s.Q.homogeneous_xy(1);
        MPoly x2 = xy_monomial(t, 2, 0), y2 = xy_monomial(t, 0, 2);
        if (s.linear_class == LinearClass::perturbed_nilpotent) x2 = x2 * MPoly::var(t, VarTable::EPS);
        H_.assign(3, RatFunc(t));
        H_[2] = RatFunc((x2 + y2) * Rational(1, 2));
        split();
    }

    const PlaneSystem& system() const { return sys_; }
    unsigned degree() const { return unsigned(H_.size()) - 1; }

    void advance_to(unsigned n)
    {
        while (degree() < n) step();
    }

    RatFunc V(unsigned n) const
    {
        auto it = V_.find(n);
        return it == V_.end() ? RatFunc(sys_.table()) : it->second;
    }
    const RatFunc& H(unsigned n) const { return H_.at(n); }

    void substitute(const std::map<std::size_t, MPoly>& bind)
    {
        for (auto& kv : bind)
            if (kv.first < 3) throw std::invalid_argument("engine substitution may only bind parameters");
        sys_ = centerlab::substitute(sys_, bind);
        split();
        for (std::size_t n = 3; n < H_.size(); ++n) H_[n] = H_[n].substitute(bind);
        for (auto& kv : V_) kv.second = kv.second.substitute(bind);
    }

    LiapunovReport report() const
    {
        LiapunovReport r;
        r.convention = convention_for(sys_.linear_class);
        r.cls = sys_.linear_class;
        r.max_degree = degree();
        for (unsigned n = 2; n <= degree(); ++n) r.H_table.push_back({n, H_[n]});
        unsigned ord = 0;
        for (auto& [n, v] : V_) {
            if (n < 4) continue;
            LiapunovConstant c;
            c.degree = n;
            c.k = (n - 2) / 2;
            c.ordinal = v.is_zero() ? 0 : ++ord;
            c.V = v;
            r.constants.push_back(c);
        }
        r.warnings.push_back("truncated at degree " + std::to_string(degree()) +
                             ": vanishing of the computed constants is not a proof of a center");
        return r;
    }

private:
    void split()
    {
        const auto& t = sys_.table();
        Pd_.clear();
        Qd_.clear();
        for (auto& hp : homogeneous_parts(sys_)) {
            if (Pd_.size() <= hp.degree) {
                Pd_.resize(hp.degree + 1, MPoly(t));
                Qd_.resize(hp.degree + 1, MPoly(t));
            }
            Pd_[hp.degree] = hp.P;
            Qd_[hp.degree] = hp.Q;
        }
    }
    const MPoly& part(const std::vector<MPoly>& v, std::size_t d) const
    {
        static thread_local MPoly zero;
        if (d < v.size()) return v[d];
        zero = MPoly(sys_.table());
        return zero;
    }

    RatFunc residual(unsigned n) const
    {
        const auto& t = sys_.table();
        MPoly L(t, Rational(1));
        for (unsigned k = 2; k < n; ++k) L = poly_lcm(L, H_[k].den());
        MPoly num(t);
        for (unsigned k = 2; k < n; ++k) {
            const MPoly& Pk = part(Pd_, n - k + 1);
            const MPoly& Qk = part(Qd_, n - k + 1);
            if (H_[k].is_zero() || (Pk.is_zero() && Qk.is_zero())) continue;
            MPoly term = H_[k].num().diff(VarTable::X) * Pk + H_[k].num().diff(VarTable::Y) * Qk;
            num += term * divide_exact(L, H_[k].den());
        }
        return RatFunc(num, L);
    }

    void step()
    {
        unsigned n = degree() + 1;
        auto it = inverses_.find(n);
        if (it == inverses_.end()) it = inverses_.emplace(n, homological_inverse(P1_, Q1_, n, order_)).first;
        auto sol = apply_inverse(it->second, residual(n));
        H_.push_back(sol.H);
        if (sol.V) V_[n] = *sol.V;
    }

    PlaneSystem sys_;
    PivotOrder order_;
    MPoly P1_, Q1_;
    std::vector<MPoly> Pd_, Qd_;
    std::vector<RatFunc> H_;
    std::map<unsigned, RatFunc> V_;
    std::map<unsigned, HomologicalInverse> inverses_;
};

inline LiapunovReport compute_liapunov_constants(const PlaneSystem& s, unsigned max_even_degree,
                                                 PivotOrder order = PivotOrder::first_nonzero)
{
    if (max_even_degree < 4) throw std::invalid_argument("max_even_degree must be at least 4");
    LiapunovEngine e(s, order);
    e.advance_to(max_even_degree);
    return e.report();
}

inline std::uint32_t min_degree_xy(const MPoly& p)
{
    std::uint32_t d = UINT32_MAX;
    for (auto& kv : p.terms()) d = std::min(d, kv.first[VarTable::X] + kv.first[VarTable::Y]);
    return d;
}

// Exact check that Lie(sum H_n) - sum V (x^2+y^2)^(n/2) has no terms of degree <= max_degree.
inline bool back_substitution_holds(const PlaneSystem& s, const LiapunovReport& r)
{
    const auto& t = s.table();
    const unsigned N = r.max_degree;
    MPoly P(t), Q(t);
    for (auto& [e, c] : s.P.terms())
        if (e[0] + e[1] < N) P.add_term(e, c);
    for (auto& [e, c] : s.Q.terms())
        if (e[0] + e[1] < N) Q.add_term(e, c);
    MPoly L(t, Rational(1));
    for (auto& h : r.H_table) L = poly_lcm(L, h.H.den());
    for (auto& c : r.constants) L = poly_lcm(L, c.V.den());
    MPoly num(t);
    for (auto& h : r.H_table) {
        MPoly d = h.H.num().diff(VarTable::X) * P + h.H.num().diff(VarTable::Y) * Q;
        num += d * divide_exact(L, h.H.den());
    }
    for (auto& c : r.constants)
        if (!c.V.is_zero()) num -= c.V.num() * divide_exact(L, c.V.den()) * circle_power(t, c.degree / 2);
    for (auto& [e, c] : num.terms())
        if (e[0] + e[1] <= N) return false;
    return true;
}

struct IndependenceCount {
    int count = 0;
    bool undetermined = false;
};

// Count constants not reduced to zero by the solved varieties of earlier ones.
inline IndependenceCount count_independent_constants(const LiapunovReport& r)
{
    IndependenceCount out;
    SolveState st;
    for (auto& c : r.constants) {
        if (c.V.is_zero()) continue;
        RatFunc v = c.V.substitute(st.subst);
        if (v.is_zero()) continue;
        ++out.count;
        for (auto& [j, cond] : eps_coefficient_conditions(v)) {
            auto step = solve_condition(cond, st, {}, nullptr);
            if (step.outcome == SolveOutcome::unsolvable || step.outcome == SolveOutcome::contradiction) {
                out.undetermined = true;
                return out;
            }
        }
    }
    return out;
}

} // namespace centerlab
