#pragma once

#include <random>

#include "centerlab/parser.hpp"

namespace testing_helpers {

using namespace centerlab;

inline MPoly P(const VarTablePtr& t, const std::string& s) { return parse_poly(t, s); }
inline RatFunc R(const VarTablePtr& t, const std::string& s) { return parse_ratfunc(t, s); }

// Random polynomial in the listed variables with small integer coefficients.
inline MPoly random_poly(const VarTablePtr& t, const std::vector<std::size_t>& vars, int nterms, int maxdeg,
                         std::mt19937& rng, int cmax = 5)
{
    std::uniform_int_distribution<int> deg(0, maxdeg), coef(-cmax, cmax), pick(0, int(vars.size()) - 1);
    MPoly p(t);
    for (int k = 0; k < nterms; ++k) {
        Exponents e(t->size(), 0);
        int d = deg(rng);
        for (int j = 0; j < d; ++j) e[vars[std::size_t(pick(rng))]] += 1;
        p.add_term(e, Rational(coef(rng)));
    }
    return p;
}

inline MPoly random_nonzero(const VarTablePtr& t, const std::vector<std::size_t>& vars, int nterms, int maxdeg,
                            std::mt19937& rng, int cmax = 5)
{
    for (;;) {
        MPoly p = random_poly(t, vars, nterms, maxdeg, rng, cmax);
        if (!p.is_zero()) return p;
    }
}

} // namespace testing_helpers
