#pragma once

#include <vector>

#include "ratfunc.hpp"

namespace centerlab {

struct SingularMatrix : std::runtime_error {
    SingularMatrix() : std::runtime_error("matrix is singular as a rational function matrix") {}
};

using RatMatrix = std::vector<std::vector<RatFunc>>;
using RatVector = std::vector<RatFunc>;

enum class PivotOrder { first_nonzero, last_nonzero };

struct BareissResult {
    MPoly det;                  // determinant of the row-scaled polynomial matrix
    std::vector<MPoly> numer;   // solution_i = numer_i / det
};

// Fraction-free elimination on a polynomial matrix with several right-hand
// sides; back-substitution stays in the polynomial ring (Cramer numerators).
inline BareissResult bareiss_solve(std::vector<std::vector<MPoly>> M, std::vector<MPoly> rhs,
                                   PivotOrder order = PivotOrder::first_nonzero)
{
    const std::size_t n = M.size();
    for (std::size_t i = 0; i < n; ++i) M[i].push_back(rhs[i]);
    const VarTablePtr t = rhs.empty() ? VarTablePtr() : rhs[0].table();
    MPoly prev(M[0][0].table() ? M[0][0].table() : t, Rational(1));
    int sign = 1;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = n;
        if (order == PivotOrder::first_nonzero) {
            for (std::size_t i = k; i < n; ++i)
                if (!M[i][k].is_zero()) {
                    piv = i;
                    break;
                }
        } else {
            for (std::size_t i = n; i-- > k;)
                if (!M[i][k].is_zero()) {
                    piv = i;
                    break;
                }
        }
        if (piv == n) throw SingularMatrix();
        if (piv != k) {
            std::swap(M[piv], M[k]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j <= n; ++j) {
                MPoly v = M[k][k] * M[i][j] - M[i][k] * M[k][j];
                M[i][j] = divide_exact(v, prev);
            }
            M[i][k] = MPoly(M[i][k].table());
        }
        prev = M[k][k];
    }
    MPoly det = M[n - 1][n - 1];
    std::vector<MPoly> X(n);
    for (std::size_t i = n; i-- > 0;) {
        MPoly s = det * M[i][n];
        for (std::size_t j = i + 1; j < n; ++j) s -= M[i][j] * X[j];
        X[i] = divide_exact(s, M[i][i]);
    }
    if (sign < 0) {
        det = -det;
        for (auto& x : X) x = -x;
    }
    return {det, X};
}

inline RatVector linsolve_fraction_field(const RatMatrix& A, const RatVector& b,
                                         PivotOrder order = PivotOrder::first_nonzero)
{
    const std::size_t n = A.size();
    if (b.size() != n) throw std::invalid_argument("dimension mismatch");
    for (auto& row : A)
        if (row.size() != n) throw std::invalid_argument("matrix is not square");
    if (n == 0) return {};
    std::vector<std::vector<MPoly>> M(n);
    std::vector<MPoly> rhs(n);
    for (std::size_t i = 0; i < n; ++i) {
        MPoly l = b[i].den();
        for (auto& e : A[i]) l = poly_lcm(l, e.den());
        for (auto& e : A[i]) M[i].push_back(e.num() * divide_exact(l, e.den()));
        rhs[i] = b[i].num() * divide_exact(l, b[i].den());
    }
    auto r = bareiss_solve(std::move(M), std::move(rhs), order);
    RatVector x;
    for (auto& nu : r.numer) x.emplace_back(nu, r.det);
    return x;
}

} // namespace centerlab
