#pragma once

#include <set>

#include "laurent.hpp"
#include "system.hpp"

namespace centerlab {

enum class ConditionKind { base, perturbation, mixed };

inline const char* to_string(ConditionKind k)
{
    return k == ConditionKind::base ? "base" : k == ConditionKind::perturbation ? "perturbation" : "mixed";
}

inline ConditionKind classify_condition(const MPoly& c, const std::set<std::size_t>& perturbation_vars)
{
    bool pert = false, base = false;
    auto used = c.variables();
    for (std::size_t i = 0; i < used.size(); ++i) {
        if (!used[i]) continue;
        (perturbation_vars.count(i) ? pert : base) = true;
    }
    if (pert && base) return ConditionKind::mixed;
    return pert ? ConditionKind::perturbation : ConditionKind::base;
}

// Epsilon coefficients of the numerator of V (all must vanish for V to vanish
// at every order). Proportional coefficients collapse to one condition.
inline std::vector<std::pair<int, MPoly>> eps_coefficient_conditions(const RatFunc& V)
{
    std::vector<std::pair<int, MPoly>> out;
    if (V.is_zero()) return out;
    auto cs = V.num().univariate(VarTable::EPS);
    int v = int(V.den().min_degree(VarTable::EPS));
    for (std::size_t j = 0; j < cs.size(); ++j)
        if (!cs[j].is_zero()) out.emplace_back(int(j) - v, cs[j].primitive());
    bool proportional = true;
    for (auto& c : out)
        if (c.second != out.front().second) proportional = false;
    if (proportional) out.resize(1);
    return out;
}

// Laurent coefficients of V at its lowest order j0 and at j0+1.
inline std::vector<std::pair<int, MPoly>> first_order_conditions(const RatFunc& V, std::vector<MPoly>* side = nullptr)
{
    std::vector<std::pair<int, MPoly>> out;
    if (V.is_zero()) return out;
    int lowest = int(V.num().min_degree(VarTable::EPS)) - int(V.den().min_degree(VarTable::EPS));
    auto L = laurent_expand_eps(V, lowest + 1);
    if (side)
        for (auto& s : L.side_conditions) side->push_back(s);
    for (int j = lowest; j <= lowest + 1; ++j) {
        RatFunc c = L.coefficient(j, V.table());
        if (!c.is_zero()) out.emplace_back(j, c.num().primitive());
    }
    return out;
}

struct SolveState {
    std::map<std::size_t, MPoly> subst;   // composed solution map
    std::set<std::size_t> nonzero;        // variables assumed nonzero
    std::vector<std::string> warnings;
};

enum class SolveOutcome { satisfied, solved, zeroed, branched, contradiction, unsolvable };

struct SolveStep {
    SolveOutcome outcome = SolveOutcome::satisfied;
    MPoly condition;                      // condition after prior substitutions, primitive
    std::map<std::size_t, MPoly> binding; // the new binding, if any
    std::string action;
};

namespace detail {

inline void compose(SolveState& st, std::size_t v, const MPoly& val)
{
    std::map<std::size_t, MPoly> one{{v, val}};
    for (auto& kv : st.subst) kv.second = kv.second.substitute(one);
    st.subst[v] = val;
}

inline std::size_t term_occurrences(const PlaneSystem& s, std::size_t v)
{
    std::size_t n = 0;
    for (auto* p : {&s.P, &s.Q})
        for (auto& kv : p->terms())
            if (kv.first[v]) ++n;
    return n;
}

} // namespace detail

// Solve one polynomial condition c = 0 against the running state. `current`
// (the system with st.subst applied) drives the branch heuristic; without it a
// branch is reported as unsolvable.
inline SolveStep solve_condition(const MPoly& c, SolveState& st, const std::set<std::size_t>& preferred,
                                 const PlaneSystem* current)
{
    SolveStep step;
    const auto& t = c.table();
    MPoly r = c.substitute(st.subst);
    if (r.is_zero()) return step;
    r = r.primitive();
    step.condition = r;
    if (r.is_constant()) {
        step.outcome = SolveOutcome::contradiction;
        step.action = "nonzero constant obstruction";
        return step;
    }
    MPoly m = detail::monomial_content(r);
    MPoly rest = divide_exact(r, m);
    auto mvars = m.variables();

    if (!rest.is_constant()) {
        std::vector<std::size_t> order;
        for (std::size_t i = 3; i < t->size(); ++i)
            if (preferred.count(i)) order.push_back(i);
        for (std::size_t i = 3; i < t->size(); ++i)
            if (!preferred.count(i)) order.push_back(i);
        for (std::size_t v : order) {
            if (rest.degree(v) != 1) continue;
            auto cs = rest.univariate(v);
            if (!cs[1].is_constant()) continue;
            MPoly val = cs[0] * (-1 / cs[1].constant_value());
            detail::compose(st, v, val);
            for (std::size_t i = 0; i < mvars.size(); ++i)
                if (mvars[i]) st.nonzero.insert(i);
            step.outcome = SolveOutcome::solved;
            step.binding = {{v, val}};
            step.action = t->name(v) + " = " + val.to_string();
            return step;
        }
        step.outcome = SolveOutcome::unsolvable;
        step.action = "branching required: no variable appears linearly with a constant coefficient";
        return step;
    }

    std::vector<std::size_t> cand;
    for (std::size_t i = 3; i < mvars.size(); ++i)
        if (mvars[i] && !st.nonzero.count(i)) cand.push_back(i);
    if (cand.empty()) {
        step.outcome = SolveOutcome::contradiction;
        step.action = "contradiction with variables assumed nonzero";
        return step;
    }
    std::size_t v = cand.front();
    if (cand.size() > 1) {
        if (!current) {
            step.outcome = SolveOutcome::unsolvable;
            step.action = "branching required";
            return step;
        }
        std::size_t best = SIZE_MAX;
        for (std::size_t i : cand) {
            std::size_t n = detail::term_occurrences(*current, i);
            if (n < best) {
                best = n;
                v = i;
            }
        }
        st.warnings.push_back("branch chosen: " + t->name(v) + " = 0 for condition " + r.to_string());
        step.outcome = SolveOutcome::branched;
    } else {
        step.outcome = SolveOutcome::zeroed;
    }
    MPoly zero(t);
    detail::compose(st, v, zero);
    step.binding = {{v, zero}};
    step.action = t->name(v) + " = 0";
    return step;
}

} // namespace centerlab
