#pragma once

#include "ratfunc.hpp"

namespace centerlab {

struct LaurentExpansion {
    int lowest = 0;                     // order of the first stored coefficient
    std::vector<RatFunc> coeffs;        // coeffs[k] multiplies eps^(lowest+k)
    std::vector<MPoly> side_conditions; // assumed nonzero

    RatFunc coefficient(int j, const VarTablePtr& t) const
    {
        if (j < lowest || j - lowest >= int(coeffs.size())) return RatFunc(t);
        return coeffs[j - lowest];
    }
    // First order carrying a nonzero coefficient, if any.
    std::optional<int> leading_order() const
    {
        for (std::size_t k = 0; k < coeffs.size(); ++k)
            if (!coeffs[k].is_zero()) return lowest + int(k);
        return std::nullopt;
    }
};

struct LaurentError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Expansion of f about eps = 0 up to and including eps^order.
inline LaurentExpansion laurent_expand_eps(const RatFunc& f, int order)
{
    const auto& t = f.table();
    if (f.num().depends_on_state() || f.den().depends_on_state())
        throw LaurentError("Laurent expansion in eps requires a function free of x and y");
    LaurentExpansion out;
    if (f.is_zero()) {
        out.lowest = order + 1;
        return out;
    }
    auto N = f.num().univariate(VarTable::EPS);
    auto D = f.den().univariate(VarTable::EPS);
    int w = 0, v = 0;
    while (N[w].is_zero()) ++w;
    while (D[v].is_zero()) ++v;
    const MPoly& u0 = D[v];
    if (!u0.is_constant()) out.side_conditions.push_back(u0.primitive());
    out.lowest = w - v;
    if (order < out.lowest) return out;
    std::size_t count = std::size_t(order - out.lowest + 1);
    auto at = [](const std::vector<MPoly>& P, std::size_t i, int shift, const VarTablePtr& tt) {
        std::size_t k = i + std::size_t(shift);
        return k < P.size() ? P[k] : MPoly(tt);
    };
    RatFunc inv_u0 = RatFunc(MPoly(t, Rational(1)), u0);
    for (std::size_t k = 0; k < count; ++k) {
        RatFunc s(at(N, k, w, t));
        for (std::size_t i = 1; i <= k; ++i) {
            MPoly ui = at(D, i, v, t);
            if (ui.is_zero() || out.coeffs[k - i].is_zero()) continue;
            s -= RatFunc(ui) * out.coeffs[k - i];
        }
        out.coeffs.push_back(s * inv_u0);
    }
    return out;
}

} // namespace centerlab
