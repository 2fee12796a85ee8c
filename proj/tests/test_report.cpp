#include <gtest/gtest.h>

#include "centerlab/report.hpp"
#include "helpers.hpp"

using namespace centerlab;
using namespace testing_helpers;

TEST(Report, PropertyJsonRoundTrip)
{
    std::mt19937 rng(71);
    auto t = VarTable::make({"A", "B", "mu"});
    std::vector<std::size_t> all{0, 1, 2, 3, 4, 5};
    for (int trial = 0; trial < 200; ++trial) {
        AnalysisReport r;
        r.table = t;
        r.input = {{"command", "liapunov"}, {"file", "f.sys"}};
        r.linear_class = "perturbed_nilpotent";
        r.perturbation = {{"kind", "nilpotent"}};
        for (unsigned k = 1; k <= 3; ++k) {
            RatFunc V(random_poly(t, {2, 3, 4, 5}, 4, 3, rng) * Rational(1, 3), random_nonzero(t, {2}, 3, 3, rng));
            r.liapunov.push_back({k, 2 * k + 2, V.is_zero() ? 0u : k, V});
        }
        r.conditions.push_back({-1, random_nonzero(t, {3, 4, 5}, 3, 3, rng), "base", "L = 0", 2});
        r.warnings = {"truncated"};
        json j = json::parse(to_json(r).dump());
        AnalysisReport back = report_from_json(j);
        ASSERT_EQ(*back.table, *t);
        ASSERT_EQ(back.liapunov.size(), r.liapunov.size());
        for (std::size_t i = 0; i < r.liapunov.size(); ++i) {
            ASSERT_EQ(back.liapunov[i].V.to_string(), r.liapunov[i].V.to_string());
            ASSERT_EQ(back.liapunov[i].ordinal, r.liapunov[i].ordinal);
        }
        ASSERT_EQ(back.conditions[0].poly.to_string(), r.conditions[0].poly.to_string());
        ASSERT_EQ(to_json(back), j);
    }
}

TEST(Report, TextRendering)
{
    auto t = VarTable::make({"L"});
    AnalysisReport r;
    r.table = t;
    r.linear_class = "nilpotent";
    r.liapunov.push_back({1, 4, 1, R(t, "L/(1+eps)")});
    r.liapunov.push_back({2, 6, 0, RatFunc(t)});
    std::string s = render_text(to_json(r));
    EXPECT_NE(s.find("class: nilpotent"), std::string::npos);
    EXPECT_NE(s.find("degree 4: V1 = "), std::string::npos);
    EXPECT_NE(s.find("degree 6: V = 0"), std::string::npos);
}
