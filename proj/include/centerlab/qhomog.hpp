#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <memory>
#include <mutex>
#include <numeric>

#include "gcd.hpp"
#include "numeric.hpp"

namespace centerlab {

struct QHSignature {
    int p = 1, q = 1, m = 0;
    bool operator==(const QHSignature&) const = default;
};

// Weight of x^i y^j is p*i + q*j; P needs weight p-1+m, Q needs q-1+m.
inline bool is_quasi_homogeneous(const PlaneSystem& s, const QHSignature& sig)
{
    auto ok = [&](const MPoly& F, int target) {
        for (auto& kv : F.terms())
            if (sig.p * int(kv.first[VarTable::X]) + sig.q * int(kv.first[VarTable::Y]) != target) return false;
        return true;
    };
    return sig.m >= 0 && ok(s.P, sig.p - 1 + sig.m) && ok(s.Q, sig.q - 1 + sig.m);
}

inline std::vector<QHSignature> detect_quasi_homogeneity(const PlaneSystem& s, int search_bound)
{
    if (s.P.is_zero() && s.Q.is_zero()) throw std::invalid_argument("(P,Q) = (0,0)");
    std::vector<QHSignature> out;
    for (int p = 1; p <= search_bound; ++p)
        for (int q = 1; q <= search_bound; ++q) {
            if (std::gcd(p, q) != 1) continue;
            const auto& [e, c] = s.P.is_zero() ? *s.Q.terms().begin() : *s.P.terms().begin();
            int w = p * int(e[VarTable::X]) + q * int(e[VarTable::Y]);
            QHSignature sig{p, q, s.P.is_zero() ? w - q + 1 : w - p + 1};
            if (is_quasi_homogeneous(s, sig)) out.push_back(sig);
        }
    return out;
}

inline double pq_period(int p, int q)
{
    if (p < 1 || q < 1) throw std::invalid_argument("p, q must be positive");
    double a = 1.0 / (2 * p), b = 1.0 / (2 * q);
    return 2 * std::pow(p, -b) * std::pow(q, -a) * std::tgamma(a) * std::tgamma(b) / std::tgamma(a + b);
}

// (Cs, Sn) solving z' = -w^(2p-1), w' = z^(2q-1), z(0) = p^(-1/2q), w(0) = 0, tabulated over one period.
class PQCircle {
public:
    PQCircle(int p, int q, double rtol = 1e-13) : p_(p), q_(q), tau_(pq_period(p, q))
    {
        auto f = [p, q](double, const Vec2& z, Vec2& dz) {
            dz[0] = -std::pow(z[1], 2 * p - 1);
            dz[1] = std::pow(z[0], 2 * q - 1);
        };
        Dop853<2> ode(f, rtol, rtol);
        ode.hmax = tau_ / 64;
        Vec2 z0{std::pow(double(p), -1.0 / (2 * q)), 0};
        auto st = ode.integrate(0, z0, tau_, [&](const Dop853<2>::Dense& d, const Vec2&, const Vec2& yn) {
            segs_.push_back(d);
            tolerance_ = std::max(tolerance_, std::abs(identity(yn[0], yn[1])));
            return true;
        });
        if (st != Dop853<2>::Status::done) throw std::runtime_error("(p,q)-trigonometric integration failed");
        tolerance_ = std::max(tolerance_, 1e-13);
    }

    int p() const { return p_; }
    int q() const { return q_; }
    double tau() const { return tau_; }
    double tolerance() const { return tolerance_; }
    double identity(double cs, double sn) const
    {
        return p_ * std::pow(cs, 2 * q_) + q_ * std::pow(sn, 2 * p_) - 1;
    }
    std::vector<std::array<double, 3>> samples(int n) const
    {
        std::vector<std::array<double, 3>> out;
        for (int k = 0; k < n; ++k) {
            double th = tau_ * k / n;
            auto v = (*this)(th);
            out.push_back({th, v[0], v[1]});
        }
        return out;
    }

    Vec2 operator()(double theta) const
    {
        double th = std::fmod(theta, tau_);
        if (th < 0) th += tau_;
        auto it = std::upper_bound(segs_.begin(), segs_.end(), th,
                                   [](double t, const Dop853<2>::Dense& d) { return t < d.t_new(); });
        if (it == segs_.end()) --it;
        return (*it)(th);
    }

private:
    int p_, q_;
    double tau_, tolerance_ = 0;
    std::vector<Dop853<2>::Dense> segs_;
};

inline const PQCircle& pq_circle(int p, int q)
{
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::unique_ptr<PQCircle>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[{p, q}];
    if (!slot) slot = std::make_unique<PQCircle>(p, q);
    return *slot;
}

inline Vec2 pq_trig(int p, int q, double theta)
{
    if (!std::isfinite(theta)) throw std::invalid_argument("theta must be finite");
    return pq_circle(p, q)(theta);
}

struct QHError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ConditionIStatus { holds, fails, uncertified };

inline const char* to_string(ConditionIStatus s)
{
    return s == ConditionIStatus::holds ? "holds" : s == ConditionIStatus::fails ? "fails" : "uncertified";
}

struct ConditionI {
    ConditionIStatus status = ConditionIStatus::uncertified;
    MPoly W;                          // p*x*Q - q*y*P
    bool exact = false;               // decided by exact root counting
    std::array<double, 2> window{0, 0}; // theta window of a sign change or near-zero
    int sign = 0;                     // sign of G when it holds
    std::string detail;
};

namespace detail {

inline void require_numeric_coprime(const PlaneSystem& s, const QHSignature& sig)
{
    for (auto* f : {&s.P, &s.Q}) {
        auto used = f->variables();
        for (std::size_t i = 2; i < used.size(); ++i)
            if (used[i]) throw QHError("parameters must be specialized to numbers");
    }
    if (!is_quasi_homogeneous(s, sig))
        throw QHError("system is not (" + std::to_string(sig.p) + "," + std::to_string(sig.q) +
                      ")-quasi-homogeneous of weight degree " + std::to_string(sig.m));
    if (s.P.is_zero() || s.Q.is_zero() || !poly_gcd(s.P, s.Q).is_constant()) throw QHError("P and Q are not coprime");
}

inline bool even_in_both(const MPoly& W)
{
    for (auto& kv : W.terms())
        if (kv.first[VarTable::X] % 2 || kv.first[VarTable::Y] % 2) return false;
    return true;
}

// Sum over terms of |c| * d/dx-bound style products, for the Lipschitz constant of G.
inline double lipschitz_bound(const NumPoly& W, int p, int q, double cmax, double smax)
{
    double L = 0;
    for (auto& t : W.terms) {
        int i = int(t[1]), j = int(t[2]);
        double c = std::abs(t[0]);
        if (i) L += c * i * std::pow(cmax, i - 1) * std::pow(smax, j) * std::pow(smax, 2 * p - 1);
        if (j) L += c * j * std::pow(cmax, i) * std::pow(smax, j - 1) * std::pow(cmax, 2 * q - 1);
    }
    return L;
}

} // namespace detail

inline ConditionI condition_i_no_real_factors(const PlaneSystem& s, const QHSignature& sig)
{
    detail::require_numeric_coprime(s, sig);
    const auto& t = s.table();
    ConditionI out;
    MPoly x = MPoly::var(t, VarTable::X), y = MPoly::var(t, VarTable::Y);
    out.W = x * s.Q * Rational(sig.p) - y * s.P * Rational(sig.q);
    if (out.W.is_zero()) {
        out.status = ConditionIStatus::fails;
        out.window = {0, pq_period(sig.p, sig.q)};
        out.detail = "p*x*Q - q*y*P vanishes identically";
        return out;
    }
    if (detail::even_in_both(out.W)) {
        // x = 1, t = y^2 covers x != 0; x = 0 is checked separately.
        std::vector<Rational> c;
        for (auto& [e, k] : out.W.terms()) {
            std::size_t j = e[VarTable::Y] / 2;
            if (c.size() <= j) c.resize(j + 1, Rational(0));
            c[j] += k;
        }
        UPoly w(c);
        Rational at_axis = 0;
        for (auto& [e, k] : out.W.terms())
            if (e[VarTable::X] == 0) at_axis = k;
        bool axis_ok = at_axis != 0;
        bool positive_root = !w.is_zero() && (w.eval(Rational(0)) == 0 || count_roots(w, 0, root_bound(w)) > 0);
        out.exact = true;
        if (axis_ok && !positive_root) {
            out.status = ConditionIStatus::holds;
            out.sign = sgn(at_axis);
            out.detail = "sign-definite by exact root counting in y^2";
            return out;
        }
        out.status = ConditionIStatus::fails;
        out.detail = "weighted form has a real zero off the origin";
    }

    const PQCircle& C = pq_circle(sig.p, sig.q);
    NumPoly W(out.W);
    double cmax = std::pow(double(sig.p), -1.0 / (2 * sig.q)), smax = std::pow(double(sig.q), -1.0 / (2 * sig.p));
    double L = detail::lipschitz_bound(W, sig.p, sig.q, cmax, smax);
    double scale = 0;
    for (auto& tm : W.terms) scale += std::abs(tm[0]);
    for (int n = 1024; n <= (1 << 20); n *= 4) {
        double h = C.tau() / n;
        double gmin = std::numeric_limits<double>::infinity(), at = 0;
        int first = 0;
        bool change = false;
        for (int k = 0; k <= n; ++k) {
            double th = h * k;
            auto v = C(th);
            double g = W(v[0], v[1]);
            if (std::abs(g) < gmin) {
                gmin = std::abs(g);
                at = th;
            }
            int sg = g > 0 ? 1 : g < 0 ? -1 : 0;
            if (k == 0) first = sg;
            if (sg == 0 || sg != first) {
                if (!change) out.window = {std::max(0.0, th - h), th};
                change = true;
            }
        }
        if (change) {
            out.status = ConditionIStatus::fails;
            out.detail = "G changes sign or vanishes on the (p,q)-circle";
            return out;
        }
        if (out.status == ConditionIStatus::fails) break;
        if (gmin > L * h / 2 + 1e-9 * scale) {
            out.status = ConditionIStatus::holds;
            out.sign = first;
            out.detail = "sign-definite on a grid of " + std::to_string(n) + " points with Lipschitz margin";
            return out;
        }
        out.window = {std::max(0.0, at - h), std::min(C.tau(), at + h)};
    }
    if (out.status == ConditionIStatus::fails) return out;
    out.status = ConditionIStatus::uncertified;
    out.detail = "G comes close to zero; sign-definiteness not certified";
    return out;
}

struct ConditionII {
    double value = 0, error = 0, period = 0;
    bool zero = false;
};

inline ConditionII condition_ii_integral(const PlaneSystem& s, const QHSignature& sig, const ConditionI* cond_i = nullptr)
{
    ConditionI ci;
    if (!cond_i) {
        ci = condition_i_no_real_factors(s, sig);
        cond_i = &ci;
    }
    if (cond_i->status != ConditionIStatus::holds) throw QHError("condition (i) is not verified");
    const PQCircle& C = pq_circle(sig.p, sig.q);
    NumPoly P(s.P), Q(s.Q);
    const int p = sig.p, q = sig.q;
    auto f = [&](double th) {
        auto v = C(th);
        double cs = v[0], sn = v[1], Pv = P(cs, sn), Qv = Q(cs, sn);
        double F = std::pow(cs, 2 * q - 1) * Pv + std::pow(sn, 2 * p - 1) * Qv;
        double G = p * cs * Qv - q * sn * Pv;
        return F / G;
    };
    ConditionII out;
    out.period = C.tau();
    out.value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, C.tau(), 15, 1e-13, &out.error);
    out.zero = std::abs(out.value) <= std::max(1e-8, 1e3 * out.error);
    return out;
}

enum class QHVerdict { center, focus, undecided };

inline const char* to_string(QHVerdict v)
{
    return v == QHVerdict::center ? "center" : v == QHVerdict::focus ? "focus" : "undecided";
}

struct QHClassification {
    QHVerdict verdict = QHVerdict::undecided;
    QHSignature sig;
    ConditionI condition_i;
    std::optional<ConditionII> condition_ii;
    std::vector<std::string> notes;
};

inline QHClassification classify_qh_center(const PlaneSystem& s, const QHSignature& sig)
{
    QHClassification out;
    out.sig = sig;
    out.condition_i = condition_i_no_real_factors(s, sig);
    if (out.condition_i.status != ConditionIStatus::holds) {
        out.notes.push_back(std::string("condition (i) ") + to_string(out.condition_i.status) + ": " +
                            out.condition_i.detail);
        return out;
    }
    out.condition_ii = condition_ii_integral(s, sig, &out.condition_i);
    out.verdict = out.condition_ii->zero ? QHVerdict::center : QHVerdict::focus;
    out.notes.push_back("condition (ii) decided numerically by quadrature");
    return out;
}

} // namespace centerlab
