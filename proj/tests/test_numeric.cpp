#include <gtest/gtest.h>

#include "centerlab/numeric.hpp"
#include "helpers.hpp"

using namespace centerlab;
using namespace testing_helpers;

namespace {

const std::vector<double> x0s{0.02, 0.05, 0.1};

ReturnClass classify(const char* sys, const std::vector<double>& xs = x0s)
{
    return return_map(parse_system(sys), xs).classification;
}

void expect_small_displacements(const PlaneSystem& s, const std::vector<double>& xs = x0s)
{
    auto r = return_map(s, xs);
    EXPECT_EQ(r.classification, ReturnClass::center_evidence);
    for (auto& smp : r.samples) EXPECT_LE(std::abs(smp.displacement), 1e-8 * smp.x0) << smp.x0;
}

} // namespace

TEST(Integrate, LinearRotation)
{
    auto tr = integrate_adaptive(parse_system("xdot = -y; ydot = x"), {1, 0}, 0, M_PI / 2, 1e-12, 1e-14);
    EXPECT_NEAR(tr.y.back()[0], 0, 1e-10);
    EXPECT_NEAR(tr.y.back()[1], 1, 1e-10);
    EXPECT_EQ(tr.t.front(), 0);
    EXPECT_DOUBLE_EQ(tr.t.back(), M_PI / 2);
    EXPECT_GT(tr.stats.accepted, 0);
    EXPECT_NEAR(tr.closest_approach, 1, 1e-10);
}

TEST(Integrate, ExponentialDecayBackwards)
{
    auto tr = integrate_adaptive(parse_system("xdot = -x; ydot = -2*y"), {1, 1}, 0, -1, 1e-12, 1e-14);
    EXPECT_NEAR(tr.y.back()[0], std::exp(1.0), 1e-10);
    EXPECT_NEAR(tr.y.back()[1], std::exp(2.0), 1e-9);
}

TEST(Integrate, Errors)
{
    auto s = parse_system("xdot = -y; ydot = x");
    EXPECT_THROW(integrate_adaptive(s, {1, 0}, 0, 1, 0, 1e-12), std::invalid_argument);
    EXPECT_THROW(integrate_adaptive(s, {1, 0}, 0, 1, 1e-12, -1), std::invalid_argument);
    EXPECT_THROW(integrate_adaptive(parse_system("xdot = a*y; ydot = x"), {1, 0}, 0, 1, 1e-10, 1e-12),
                 std::invalid_argument);
    EXPECT_THROW(integrate_adaptive(parse_system("xdot = x^2; ydot = 0"), {1, 0}, 0, 2, 1e-10, 1e-12), IntegrationError);
}

TEST(Integrate, PropertyEnergyConservation)
{
    std::mt19937 rng(61);
    std::uniform_real_distribution<double> amp(0.01, 0.04);
    auto t = VarTable::make();
    for (int trial = 0; trial < 200; ++trial) {
        MPoly H = random_poly(t, {0, 1}, 6, 5, rng, 3);
        for (std::uint32_t d = 0; d <= 2; ++d) H -= H.homogeneous_xy(d);
        H += P(t, "(x^2+y^2)/2");
        auto s = make_system(-H.diff(VarTable::Y), H.diff(VarTable::X));
        NumPoly h(H);
        double a = amp(rng);
        auto tr = integrate_adaptive(s, {a, 0}, 0, 2 * M_PI, 1e-12, 1e-15);
        double e0 = h(a, 0);
        for (auto& z : tr.y) ASSERT_LE(std::abs(h(z[0], z[1]) - e0), 1e-9) << H.to_string();
    }
}

TEST(Integrate, DarbouxIntegralConserved)
{
    auto s = parse_system("xdot = y + x*y - a*x^4 - a*x^5 + (1-a)*y^2 + (1-a)*x*y^2; "
                          "ydot = c*y^2 - 2*x^3 + c*y^3 - 2*x^3*y + (c-2)*x^4*(1+y)");
    auto n = substitute(s, std::map<std::string, Binding>{{"a", Rational(1)}, {"c", Rational(1)}});
    auto I = [](const Vec2& z) {
        return (std::pow(z[0], 4) + z[1] * z[1]) / (std::pow(1 + z[0], 2) * std::pow(1 + z[1], 2));
    };
    for (double x0 : {0.1, 0.2}) {
        auto tr = integrate_adaptive(n, {x0, 0}, 0, 200, 1e-12, 1e-16);
        double i0 = I(tr.y.front());
        for (auto& z : tr.y) ASSERT_NEAR(I(z), i0, 1e-9 * i0);
    }
}

TEST(ReturnMap, LinearCenterAndFocus)
{
    EXPECT_EQ(classify("xdot = -y; ydot = x"), ReturnClass::center_evidence);
    EXPECT_EQ(classify("xdot = -y - x/100; ydot = x - y/100"), ReturnClass::stable_focus_evidence);
    EXPECT_EQ(classify("xdot = -y + x/100; ydot = x + y/100"), ReturnClass::unstable_focus_evidence);
    auto r = return_map(parse_system("xdot = -y - x/100; ydot = x - y/100"), {0.1});
    EXPECT_NEAR(r.samples[0].image, 0.1 * std::exp(-2 * M_PI / 100), 1e-12);
    EXPECT_NEAR(r.samples[0].time, 2 * M_PI, 1e-9);
}

TEST(ReturnMap, NilpotentCenter) { expect_small_displacements(parse_system("xdot = y + x^2; ydot = -x^3")); }

TEST(ReturnMap, DegenerateNonHamiltonianCenter)
{
    expect_small_displacements(parse_system("xdot = (-y+y^2)*(x^2+y^2); ydot = (x+2*x^2)*(x^2+y^2)"));
}

TEST(ReturnMap, LinearTypeCenterAtUnitEps)
{
    auto s = parse_system("xdot = y + A*x*y + B*y^2; ydot = -eps*x - x^3 + K*x*y^2 + L*y^3");
    auto n = substitute(s, std::map<std::string, Binding>{{"A", Rational(1)},
                                                          {"B", Rational(3)},
                                                          {"L", Rational(1)},
                                                          {"K", Rational(1, 2)},
                                                          {"eps", Rational(1)}});
    expect_small_displacements(n);
}

TEST(ReturnMap, CenterWithoutCharacteristicDirections)
{
    auto n = substitute(parse_system("xdot = -a*y^3; ydot = eps*x^3 + b*x^5"),
                        std::map<std::string, Binding>{{"a", Rational(1)}, {"b", Rational(1)}, {"eps", Rational(1)}});
    expect_small_displacements(n);
}

TEST(ReturnMap, DegenerateRadialFocus)
{
    // r' = -r^3, theta' = 1
    auto r = return_map(parse_system("xdot = -y - x*(x^2+y^2); ydot = x - y*(x^2+y^2)"), x0s);
    EXPECT_EQ(r.classification, ReturnClass::stable_focus_evidence);
    for (auto& smp : r.samples) {
        EXPECT_LT(smp.displacement, 0);
        double exact = smp.x0 / std::sqrt(1 + 4 * M_PI * smp.x0 * smp.x0);
        EXPECT_NEAR(smp.image, exact, 1e-10);
    }
}

TEST(ReturnMap, OtherTransversals)
{
    auto s = parse_system("xdot = y + x^2; ydot = -x^3");
    const std::vector<double> xs{0.005, 0.01, 0.02};
    EXPECT_EQ(return_map(s, xs, Transversal{TransversalKind::positive_y}).classification, ReturnClass::center_evidence);
    EXPECT_EQ(return_map(s, xs, Transversal{TransversalKind::ray, 1.0}).classification, ReturnClass::center_evidence);
    EXPECT_THROW(return_map(s, {0.05}, Transversal{TransversalKind::positive_y}), ReturnMapError);
}

TEST(ReturnMap, DisplacementShrinksWithTolerance)
{
    auto s = parse_system("xdot = y + x^2; ydot = -x^3");
    ReturnMapOptions loose, tight;
    loose.rel_tol = 1e-7;
    tight.rel_tol = 1e-9;
    double dl = 0, dt = 0;
    for (auto& smp : return_map(s, x0s, {}, loose).samples) dl = std::max(dl, std::abs(smp.displacement) / smp.x0);
    for (auto& smp : return_map(s, x0s, {}, tight).samples) dt = std::max(dt, std::abs(smp.displacement) / smp.x0);
    EXPECT_GE(dl, 4 * dt) << dl << " " << dt;
}

TEST(ReturnMap, Errors)
{
    EXPECT_THROW(return_map(parse_system("xdot = x; ydot = y"), {0.1}), ReturnMapError);
    EXPECT_THROW(return_map(parse_system("xdot = -y; ydot = x"), {0.0}), std::invalid_argument);
    EXPECT_THROW(return_map(parse_system("xdot = -y; ydot = x"), {2.0}), ReturnMapError);
    EXPECT_THROW(return_map(parse_system("xdot = -a*y; ydot = x"), {0.1}), std::invalid_argument);
}

TEST(Monodromic, Verdicts)
{
    EXPECT_EQ(classify_monodromic(parse_system("xdot = -y^3; ydot = x^3 + x^5")).verdict, "center_evidence");
    EXPECT_EQ(classify_monodromic(parse_system("xdot = -y - x*(x^2+y^2); ydot = x - y*(x^2+y^2)")).verdict,
              "stable_focus_evidence");
    auto node = classify_monodromic(parse_system("xdot = x; ydot = y"));
    EXPECT_EQ(node.verdict, "non_monodromic_evidence");
    EXPECT_TRUE(node.directions.all);
}
