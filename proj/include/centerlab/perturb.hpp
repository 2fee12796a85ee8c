#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>

#include "liapunov.hpp"

namespace centerlab {

enum class PerturbationKind { nilpotent, degenerate, hamiltonian };

inline const char* to_string(PerturbationKind k)
{
    return k == PerturbationKind::nilpotent ? "nilpotent" : k == PerturbationKind::degenerate ? "degenerate"
                                                                                               : "hamiltonian";
}

struct PerturbationSpec {
    PerturbationKind kind = PerturbationKind::nilpotent;
    MPoly G1, G2; // a default-constructed MPoly means zero
};

inline PlaneSystem build_perturbation(const PlaneSystem& s, const PerturbationSpec& spec)
{
    VarTablePtr t = s.table();
    for (auto* g : {&spec.G1, &spec.G2})
        if (g->table() && !same_table(g->table(), t)) t = merge_tables(t, g->table());
    auto up = [&](const MPoly& p) { return p.table() ? p.reembed(t) : MPoly(t); };
    MPoly P = up(s.P), Q = up(s.Q), G1 = up(spec.G1), G2 = up(spec.G2);
    MPoly x = MPoly::var(t, VarTable::X), y = MPoly::var(t, VarTable::Y), eps = MPoly::var(t, VarTable::EPS);
    std::vector<Assumption> as;
    for (auto& a : s.assumptions) as.push_back({up(a.expr), a.rel});
    switch (spec.kind) {
    case PerturbationKind::nilpotent:
        if (s.linear_class != LinearClass::nilpotent)
            throw ClassMismatch("nilpotent perturbation needs a nilpotent linear part k*(y, 0)");
        for (auto* g : {&G1, &G2})
            if (!g->coeff_xy(0, 0).is_zero()) throw std::invalid_argument("G1 and G2 must have no constant term");
        return make_system(P + eps * x * G1, Q - eps * x * s.scale + eps * x * G2, as);
    case PerturbationKind::degenerate:
        if (s.linear_class != LinearClass::degenerate)
            throw ClassMismatch("degenerate perturbation needs a zero linear part");
        for (auto* g : {&G1, &G2})
            if (!g->coeff_xy(0, 0).is_zero() || !g->homogeneous_xy(1).is_zero())
                throw std::invalid_argument("G1 and G2 must have no constant or linear terms");
        return make_system(P + eps * y + eps * G1, Q - eps * x + eps * G2, as);
    case PerturbationKind::hamiltonian:
        if (s.linear_class != LinearClass::degenerate)
            throw ClassMismatch("hamiltonian perturbation needs a zero linear part");
        if (!G1.is_zero() || !G2.is_zero()) throw std::invalid_argument("hamiltonian perturbation takes no G terms");
        return make_system(P - eps * y, Q + eps * x, as);
    }
    throw std::invalid_argument("unknown perturbation kind");
}

struct PerturbationTemplate {
    PlaneSystem system;
    std::vector<std::string> names;
    std::set<std::size_t> perturbation_vars;
};

// G1 = sum a_ij x^i y^j, G2 = sum b_ij x^i y^j with fresh parameters.
inline PerturbationTemplate general_perturbation(const PlaneSystem& s, PerturbationKind kind, unsigned d)
{
    if (kind == PerturbationKind::hamiltonian) throw std::invalid_argument("hamiltonian perturbation has no template");
    if (d > 9) throw std::invalid_argument("template degree must be at most 9");
    const unsigned lo = kind == PerturbationKind::nilpotent ? 1 : 2;
    static const std::array<std::pair<const char*, const char*>, 5> prefixes{
        {{"a", "b"}, {"c", "d"}, {"g", "h"}, {"ga", "gb"}, {"pa", "pb"}}};
    auto existing = s.params();
    std::set<std::string> taken(existing.begin(), existing.end());
    std::vector<std::pair<std::string, std::string>> idx;
    std::vector<std::array<unsigned, 2>> ij;
    for (unsigned tdeg = lo; tdeg <= d; ++tdeg)
        for (unsigned i = tdeg + 1; i-- > 0;) ij.push_back({i, tdeg - i});
    for (auto [pa, pb] : prefixes) {
        bool clash = false;
        std::vector<std::pair<std::string, std::string>> cand;
        for (auto [i, j] : ij) {
            std::string sfx = std::to_string(i) + std::to_string(j);
            cand.emplace_back(pa + sfx, pb + sfx);
            if (taken.count(cand.back().first) || taken.count(cand.back().second)) clash = true;
        }
        if (!clash) {
            idx = cand;
            break;
        }
    }
    if (idx.empty()) throw std::invalid_argument("cannot find fresh names for the perturbation template");
    PerturbationTemplate out;
    for (auto& [a, b] : idx) {
        out.names.push_back(a);
        out.names.push_back(b);
    }
    auto ps = existing;
    ps.insert(ps.end(), out.names.begin(), out.names.end());
    auto t = VarTable::make(ps);
    MPoly G1(t), G2(t);
    for (std::size_t k = 0; k < ij.size(); ++k) {
        MPoly mono = xy_monomial(t, ij[k][0], ij[k][1]);
        G1 += MPoly::var(t, idx[k].first) * mono;
        G2 += MPoly::var(t, idx[k].second) * mono;
    }
    PlaneSystem base = s;
    base.P = s.P.reembed(t);
    base.Q = s.Q.reembed(t);
    for (auto& a : base.assumptions) a.expr = a.expr.reembed(t);
    out.system = build_perturbation(base, {kind, G1, G2});
    for (auto& n : out.names) out.perturbation_vars.insert(t->require(n));
    return out;
}

enum class ConditionMode { all_orders, first_order };

inline const char* to_string(ConditionMode m) { return m == ConditionMode::all_orders ? "all_orders" : "first_order"; }

struct ConditionRecord {
    int eps_order = 0;
    MPoly poly;
    ConditionKind kind = ConditionKind::base;
    unsigned degree = 0;
    unsigned ordinal = 0;
    std::string action;
};

enum class PipelineStatus { complete, branching_required, contradiction };

inline const char* to_string(PipelineStatus s)
{
    return s == PipelineStatus::complete ? "complete" : s == PipelineStatus::branching_required ? "branching_required"
                                                                                                 : "contradiction";
}

struct CenterConditions {
    ConditionMode mode = ConditionMode::all_orders;
    std::vector<ConditionRecord> conditions;
    std::vector<MPoly> side_conditions;
    std::map<std::size_t, MPoly> substitution;
    std::set<std::size_t> nonzero;
    PipelineStatus status = PipelineStatus::complete;
    std::vector<std::string> warnings;
    std::vector<LiapunovConstant> constants; // each nonzero V as first met, after earlier solves
    unsigned max_degree = 0;

    std::vector<MPoly> polys(std::optional<ConditionKind> kind = std::nullopt) const
    {
        std::vector<MPoly> out;
        for (auto& c : conditions)
            if (!kind || c.kind == *kind) out.push_back(c.poly);
        return out;
    }
};

namespace detail {

inline std::vector<std::pair<int, MPoly>> conditions_for(const RatFunc& V, ConditionMode mode, std::vector<MPoly>& side)
{
    if (mode == ConditionMode::all_orders) {
        auto u = V.den().univariate(VarTable::EPS);
        const MPoly& u0 = u[V.den().min_degree(VarTable::EPS)];
        if (!u0.is_constant()) side.push_back(u0.primitive());
        return eps_coefficient_conditions(V);
    }
    return first_order_conditions(V, &side);
}

// Returns false when the sequence must stop.
inline bool process_constant(const RatFunc& V, unsigned degree, unsigned ordinal, ConditionMode mode,
                             const std::set<std::size_t>& pert, SolveState& st, CenterConditions& out,
                             const std::function<const PlaneSystem*()>& current,
                             const std::function<void(const std::map<std::size_t, MPoly>&)>& apply)
{
    for (auto& [j, cond] : conditions_for(V, mode, out.side_conditions)) {
        auto step = solve_condition(cond, st, pert, current());
        if (step.outcome == SolveOutcome::satisfied) continue;
        ConditionRecord rec{j, step.condition, classify_condition(step.condition, pert), degree, ordinal, step.action};
        out.conditions.push_back(rec);
        if (step.outcome == SolveOutcome::unsolvable) {
            out.status = PipelineStatus::branching_required;
            out.warnings.push_back("stopped at degree " + std::to_string(degree) + ": " + step.action);
            return false;
        }
        if (step.outcome == SolveOutcome::contradiction) {
            out.status = PipelineStatus::contradiction;
            out.warnings.push_back("stopped at degree " + std::to_string(degree) + ": " + step.action);
            return false;
        }
        apply(step.binding);
    }
    return true;
}

inline void finish(const SolveState& st, CenterConditions& out)
{
    out.substitution = st.subst;
    out.nonzero = st.nonzero;
    out.warnings.insert(out.warnings.end(), st.warnings.begin(), st.warnings.end());
    std::vector<MPoly> uniq;
    for (auto& s : out.side_conditions)
        if (std::find(uniq.begin(), uniq.end(), s) == uniq.end()) uniq.push_back(s);
    out.side_conditions = uniq;
}

} // namespace detail

// Conditions read off a finished report, solved in order of appearance.
inline CenterConditions extract_center_conditions(const LiapunovReport& r, ConditionMode mode,
                                                  const std::set<std::size_t>& pert = {},
                                                  const PlaneSystem* system = nullptr)
{
    CenterConditions out;
    out.mode = mode;
    out.max_degree = r.max_degree;
    SolveState st;
    std::optional<PlaneSystem> cur;
    if (system) cur = *system;
    auto current = [&]() -> const PlaneSystem* { return cur ? &*cur : nullptr; };
    auto apply = [&](const std::map<std::size_t, MPoly>& b) {
        if (cur) cur = substitute(*cur, b);
    };
    unsigned ord = 0;
    for (auto& c : r.constants) {
        if (c.V.is_zero()) continue;
        RatFunc v = c.V.substitute(st.subst);
        if (v.is_zero()) continue;
        out.constants.push_back({c.k, c.degree, ++ord, v});
        if (!detail::process_constant(v, c.degree, ord, mode, pert, st, out, current, apply)) break;
    }
    detail::finish(st, out);
    return out;
}

// Full pipeline: compute V degree by degree on the system specialised by the
// conditions solved so far.
inline CenterConditions center_condition_pipeline(const PlaneSystem& s, unsigned max_degree, ConditionMode mode,
                                                  const std::set<std::size_t>& pert = {}, int recheck_limit = 16)
{
    CenterConditions out;
    out.mode = mode;
    out.max_degree = max_degree;
    LiapunovEngine eng(s);
    SolveState st;
    auto current = [&]() -> const PlaneSystem* { return &eng.system(); };
    auto apply = [&](const std::map<std::size_t, MPoly>& b) { eng.substitute(b); };
    unsigned ord = 0;
    for (unsigned n = 4; n <= max_degree; n += 2) {
        eng.advance_to(n);
        for (int pass = 0; pass <= recheck_limit; ++pass) {
            RatFunc V = eng.V(n);
            if (V.is_zero()) break;
            if (pass == 0) out.constants.push_back({(n - 2) / 2, n, ++ord, V});
            std::size_t before = out.conditions.size();
            if (!detail::process_constant(V, n, ord, mode, pert, st, out, current, apply)) {
                detail::finish(st, out);
                return out;
            }
            if (mode == ConditionMode::first_order) break;
            if (out.conditions.size() == before) break;
            if (pass == recheck_limit) out.warnings.push_back("recheck limit reached at degree " + std::to_string(n));
        }
    }
    detail::finish(st, out);
    out.warnings.push_back("conditions are necessary up to degree " + std::to_string(max_degree) +
                           "; sufficiency needs a separate argument");
    return out;
}

struct SingularityCheck {
    bool pass = true;
    std::vector<double> eps;
    std::vector<double> min_distance; // +inf when no non-origin singular point was found
    std::vector<int> converged;
    std::optional<std::array<double, 2>> witness;
};

// Numeric evidence that no singular point other than the origin tends to it as eps -> 0.
inline SingularityCheck check_no_vanishing_singularities(const PlaneSystem& family, const std::vector<Rational>& eps_samples,
                                                         const Rational& radius)
{
    SingularityCheck out;
    const double R = radius.get_d();
    for (auto& e : eps_samples) {
        auto sys = substitute(family, std::map<std::size_t, MPoly>{{VarTable::EPS, MPoly(family.table(), e)}});
        NumPoly P(sys.P), Q(sys.Q);
        double best = std::numeric_limits<double>::infinity();
        std::array<double, 2> bestpt{0, 0};
        int conv = 0;
        const int nr = 60, na = 24;
        for (int a = 0; a < nr; ++a) {
            double r0 = R * std::pow(10.0, -5.0 * (1.0 - double(a) / (nr - 1)));
            for (int b = 0; b < na; ++b) {
                double th = 2 * M_PI * (b + 0.5 * (a % 2)) / na;
                double x = r0 * std::cos(th), y = r0 * std::sin(th), lam = 1e-3;
                bool ok = false;
                for (int it = 0; it < 200; ++it) {
                    auto p = P.eval_grad(x, y), q = Q.eval_grad(x, y);
                    double f2 = p[0] * p[0] + q[0] * q[0];
                    if (std::sqrt(f2) < 1e-14) {
                        ok = true;
                        break;
                    }
                    double a11 = p[1] * p[1] + q[1] * q[1], a12 = p[1] * p[2] + q[1] * q[2], a22 = p[2] * p[2] + q[2] * q[2];
                    double g1 = p[1] * p[0] + q[1] * q[0], g2 = p[2] * p[0] + q[2] * q[0];
                    double d = lam * std::max(1e-300, a11 + a22);
                    double det = (a11 + d) * (a22 + d) - a12 * a12;
                    if (det == 0) break;
                    double sx = -((a22 + d) * g1 - a12 * g2) / det, sy = -((a11 + d) * g2 - a12 * g1) / det;
                    auto p2 = P.eval_grad(x + sx, y + sy), q2 = Q.eval_grad(x + sx, y + sy);
                    if (p2[0] * p2[0] + q2[0] * q2[0] < f2) {
                        x += sx;
                        y += sy;
                        lam = std::max(lam / 10, 1e-12);
                        if (std::hypot(sx, sy) < 1e-16 * std::max(1.0, std::hypot(x, y))) {
                            ok = std::sqrt(p2[0] * p2[0] + q2[0] * q2[0]) < 1e-10;
                            break;
                        }
                    } else {
                        lam *= 10;
                        if (lam > 1e12) break;
                    }
                    if (std::hypot(x, y) > 10 * R) break;
                }
                double dist = std::hypot(x, y);
                if (!ok || dist > R) continue;
                ++conv;
                if (dist < 1e-9 * R) continue;
                if (dist < best) {
                    best = dist;
                    bestpt = {x, y};
                }
            }
        }
        out.eps.push_back(e.get_d());
        out.min_distance.push_back(best);
        out.converged.push_back(conv);
        if (std::isfinite(best)) out.witness = bestpt;
    }
    const auto& d = out.min_distance;
    if (!d.empty() && std::isfinite(d.back())) {
        bool nonincreasing = true;
        double earlier = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i + 1 < d.size(); ++i) {
            if (d[i + 1] > d[i]) nonincreasing = false;
            earlier = std::min(earlier, d[i]);
        }
        if (d.size() == 1) out.pass = d.back() > 1e-3 * R;
        else out.pass = !(nonincreasing && d.back() <= 0.5 * earlier);
    }
    if (out.pass) out.witness.reset();
    return out;
}

} // namespace centerlab
