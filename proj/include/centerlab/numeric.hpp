#pragma once

#include <limits>
#include <optional>
#include <stdexcept>

#include "ode.hpp"
#include "structure.hpp"

namespace centerlab {

using Vec2 = std::array<double, 2>;

struct IntegrationError : std::runtime_error {
    double closest_approach;
    IntegrationError(const std::string& m, double closest) : std::runtime_error(m), closest_approach(closest) {}
};

struct IntegratorStats {
    long steps = 0, accepted = 0, rejected = 0, nfev = 0;
};

struct Trajectory {
    std::vector<double> t;
    std::vector<Vec2> y;
    double closest_approach = std::numeric_limits<double>::infinity(); // min distance to the origin
    IntegratorStats stats;
};

class NumericField {
public:
    explicit NumericField(const PlaneSystem& s) : P_(s.P), Q_(s.Q) {}
    void operator()(double, const Vec2& z, Vec2& dz) const
    {
        dz[0] = P_(z[0], z[1]);
        dz[1] = Q_(z[0], z[1]);
    }

private:
    NumPoly P_, Q_;
};

namespace detail {

inline void check_tolerances(double rtol, double atol)
{
    if (!(rtol > 0 && rtol <= 1e-4) || !(atol > 0 && atol <= 1e-4))
        throw std::invalid_argument("tolerances must lie in (0, 1e-4]");
}

template <class S>
IntegratorStats to_stats(const S& s)
{
    return {s.steps, s.accepted, s.rejected, s.nfev};
}

} // namespace detail

inline Trajectory integrate_adaptive(const PlaneSystem& s, Vec2 y0, double t0, double t1, double rtol, double atol)
{
    detail::check_tolerances(rtol, atol);
    NumericField f(s);
    Dop853<2> ode(std::cref(f), rtol, atol);
    Trajectory tr;
    tr.t.push_back(t0);
    tr.y.push_back(y0);
    tr.closest_approach = std::hypot(y0[0], y0[1]);
    auto st = ode.integrate(t0, y0, t1, [&](const Dop853<2>::Dense& d, const Vec2&, const Vec2& yn) {
        tr.t.push_back(d.t_new());
        tr.y.push_back(yn);
        tr.closest_approach = std::min(tr.closest_approach, std::hypot(yn[0], yn[1]));
        return true;
    });
    tr.stats = detail::to_stats(ode.stats());
    if (st == Dop853<2>::Status::step_underflow || st == Dop853<2>::Status::nonfinite)
        throw IntegrationError("step size underflow at t = " + std::to_string(ode.t()), tr.closest_approach);
    if (st == Dop853<2>::Status::max_steps)
        throw IntegrationError("maximum number of steps exceeded", tr.closest_approach);
    return tr;
}

enum class TransversalKind { positive_x, positive_y, ray };

struct Transversal {
    TransversalKind kind = TransversalKind::positive_x;
    double ray_angle = 0;
    double angle() const
    {
        return kind == TransversalKind::positive_x ? 0 : kind == TransversalKind::positive_y ? M_PI / 2 : ray_angle;
    }
    std::string describe() const
    {
        if (kind == TransversalKind::positive_x) return "positive x-axis";
        if (kind == TransversalKind::positive_y) return "positive y-axis";
        return "ray at angle " + std::to_string(ray_angle);
    }
};

enum class ReturnClass { center_evidence, stable_focus_evidence, unstable_focus_evidence, inconclusive };

inline const char* to_string(ReturnClass c)
{
    switch (c) {
    case ReturnClass::center_evidence: return "center_evidence";
    case ReturnClass::stable_focus_evidence: return "stable_focus_evidence";
    case ReturnClass::unstable_focus_evidence: return "unstable_focus_evidence";
    default: return "inconclusive";
    }
}

struct ReturnSample {
    double x0 = 0, image = 0, displacement = 0, time = 0;
};

struct ReturnMapResult {
    Transversal transversal;
    std::vector<ReturnSample> samples;
    ReturnClass classification = ReturnClass::inconclusive;
    double rel_tol = 0, threshold_factor = 0;
    IntegratorStats stats;
};

struct ReturnMapError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ReturnMapOptions {
    double rel_tol = 1e-12;
    double guard_radius = 1;
    long max_steps = 1000000;
};

// First return to the transversal ray, crossing it in the starting direction.
inline ReturnSample first_return(const PlaneSystem& s, double x0, const Transversal& tv, const ReturnMapOptions& opt,
                                 IntegratorStats* stats = nullptr)
{
    if (!(x0 > 0)) throw std::invalid_argument("x0 must be positive");
    const double phi = tv.angle();
    const Vec2 d{std::cos(phi), std::sin(phi)}, n{-std::sin(phi), std::cos(phi)};
    NumericField f(s);
    Vec2 z0{x0 * d[0], x0 * d[1]}, f0;
    f(0, z0, f0);
    double gdot = n[0] * f0[0] + n[1] * f0[1];
    if (gdot == 0) throw ReturnMapError("vector field is tangent to the transversal at x0");
    const double sigma = gdot > 0 ? 1 : -1;
    auto g = [&](const Vec2& z) { return sigma * (n[0] * z[0] + n[1] * z[1]); };
    auto along = [&](const Vec2& z) { return d[0] * z[0] + d[1] * z[1]; };

    Dop853<2> ode(std::cref(f), opt.rel_tol, 1e-14 * x0);
    ode.max_steps = opt.max_steps;
    std::optional<ReturnSample> hit;
    bool escaped = false;
    auto st = ode.integrate(0, z0, 1e12, [&](const Dop853<2>::Dense& D, const Vec2& yo, const Vec2& yn) {
        if (std::hypot(yn[0], yn[1]) > opt.guard_radius) {
            escaped = true;
            return false;
        }
        if (!(g(yo) < 0 && g(yn) >= 0)) return true;
        double a = D.t_old, b = D.t_new();
        for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, std::abs(b)); ++it) {
            double m = 0.5 * (a + b);
            (g(D(m)) < 0 ? a : b) = m;
        }
        double tc = 0.5 * (a + b);
        Vec2 zc = D(tc);
        if (along(zc) <= 0) return true;
        hit = ReturnSample{x0, along(zc), along(zc) - x0, tc};
        return false;
    });
    if (stats) {
        auto s2 = detail::to_stats(ode.stats());
        stats->steps += s2.steps;
        stats->accepted += s2.accepted;
        stats->rejected += s2.rejected;
        stats->nfev += s2.nfev;
    }
    if (escaped) throw ReturnMapError("orbit from x0 = " + std::to_string(x0) + " left the guard radius");
    if (hit) return *hit;
    if (st == Dop853<2>::Status::max_steps) throw ReturnMapError("maximum number of steps exceeded before return");
    throw ReturnMapError("integration failed before return");
}

inline ReturnMapResult return_map(const PlaneSystem& s, const std::vector<double>& x0s, const Transversal& tv = {},
                                  const ReturnMapOptions& opt = {})
{
    detail::check_tolerances(opt.rel_tol, opt.rel_tol);
    ReturnMapResult r;
    r.transversal = tv;
    r.rel_tol = opt.rel_tol;
    r.threshold_factor = std::max(1e-9, 1e2 * opt.rel_tol);
    for (double x0 : x0s) r.samples.push_back(first_return(s, x0, tv, opt, &r.stats));
    bool small = true, neg = true, pos = true;
    for (auto& smp : r.samples) {
        double tol = r.threshold_factor * smp.x0;
        if (std::abs(smp.displacement) > tol) small = false;
        if (!(smp.displacement < -tol)) neg = false;
        if (!(smp.displacement > tol)) pos = false;
    }
    if (r.samples.empty()) r.classification = ReturnClass::inconclusive;
    else if (small) r.classification = ReturnClass::center_evidence;
    else if (neg) r.classification = ReturnClass::stable_focus_evidence;
    else if (pos) r.classification = ReturnClass::unstable_focus_evidence;
    return r;
}

struct MonodromicReport {
    CharacteristicDirections directions;
    std::optional<ReturnMapResult> return_map;
    std::string verdict; // center_evidence, *_focus_evidence, non_monodromic_evidence, inconclusive
    std::vector<std::string> notes;
};

inline MonodromicReport classify_monodromic(const PlaneSystem& s, const std::vector<double>& x0s = {0.02, 0.05, 0.1},
                                            const Transversal& tv = {}, const ReturnMapOptions& opt = {})
{
    MonodromicReport out;
    out.directions = characteristic_directions(s);
    if (out.directions.all) out.notes.push_back("every direction is characteristic");
    else if (out.directions.directions.empty()) out.notes.push_back("no characteristic directions");
    else
        out.notes.push_back(std::to_string(out.directions.directions.size()) +
                            " candidate characteristic direction(s); orbits may still spiral");
    try {
        out.return_map = return_map(s, x0s, tv, opt);
        out.verdict = to_string(out.return_map->classification);
    } catch (const ReturnMapError& e) {
        out.notes.push_back(e.what());
        std::string m = e.what();
        out.verdict = m.find("guard") != std::string::npos || m.find("tangent") != std::string::npos
                          ? "non_monodromic_evidence"
                          : "inconclusive";
    }
    out.notes.push_back("numeric evidence only, not a proof");
    return out;
}

} // namespace centerlab
