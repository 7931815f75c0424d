#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "tinylca/growth.hpp"

namespace tinylca {
namespace {

const LinearGrowth kLinear{2023, 15.0, 35.0 / 18.0};

TEST(Project, Linear) {
    EXPECT_NEAR(project(kLinear, 2041), 50.0, 1e-12);
    EXPECT_EQ(project(kLinear, 2023), 15.0);
    EXPECT_THROW((void)project(kLinear, 2022), ValueError);
}

TEST(Project, Exponential) {
    const ExponentialGrowth flat{2023, 15.0, 0.0};
    EXPECT_EQ(project(flat, 2100), 15.0);
    const ExponentialGrowth g{2000, 1.0, 0.1};
    EXPECT_NEAR(project(g, 2010), std::pow(1.1, 10), 1e-12);
}

TEST(Crossing, LinearDefaultRows) {
    EXPECT_EQ(first_crossing(kLinear, 50).year, 2041);
    EXPECT_EQ(first_crossing(kLinear, 100).year, 2067);
    EXPECT_EQ(first_crossing(kLinear, 250).year, 2144);
    EXPECT_EQ(*first_crossing(kLinear, 250).year - 2023, 121);
    const int y1000 = *first_crossing(kLinear, 1000).year;
    EXPECT_EQ(y1000, oracle::linear_crossing_by_search(2023, 15.0, 35.0 / 18.0, 1000));
    EXPECT_NEAR(y1000, 2531, 1);
    EXPECT_EQ(first_crossing(kLinear, 10).year, 2023);
}

TEST(Crossing, NeverIsAResultNotAnError) {
    const auto r = first_crossing(LinearGrowth{2023, 15, 0}, 50);
    EXPECT_TRUE(r.never());
    EXPECT_EQ(r.threshold, 50.0);
    EXPECT_TRUE(first_crossing(ExponentialGrowth{2023, 15, 0}, 16).never());
    EXPECT_EQ(first_crossing(ExponentialGrowth{2023, 15, 0}, 15).year, 2023);
}

TEST(Crossing, ExponentialDefault) {
    const auto m = default_exponential_model();
    EXPECT_NEAR(*first_crossing(m, 250).year, 2043, 2);
    EXPECT_EQ(first_crossing(m, 50).year, 2032);
}

TEST(Fit, TwoPointLinearAndExponential) {
    const std::vector<YearCount> lin{{2023, 15}, {2041, 50}};
    const auto m = std::get<LinearGrowth>(fit(lin, GrowthFamily::Linear));
    EXPECT_NEAR(m.slope, 35.0 / 18.0, 1e-12);
    EXPECT_EQ(m.base_year, 2023);
    const std::vector<YearCount> ex{{2032, 50}, {2043, 250}};
    const auto e = std::get<ExponentialGrowth>(fit(ex, GrowthFamily::Exponential));
    EXPECT_NEAR(e.rate, std::pow(5.0, 1.0 / 11.0) - 1.0, 1e-12);
    EXPECT_NEAR(e.rate, 0.158, 0.001);
    EXPECT_EQ(std::get<LinearGrowth>(default_linear_model()), kLinear);
}

TEST(Fit, Errors) {
    EXPECT_THROW((void)fit(std::vector<YearCount>{{2023, 15}, {2023, 20}}, GrowthFamily::Linear), ValueError);
    EXPECT_THROW((void)fit(std::vector<YearCount>{{2023, 15}}, GrowthFamily::Linear), ValueError);
    EXPECT_THROW((void)fit(std::vector<YearCount>{{2023, 0}, {2030, 5}}, GrowthFamily::Exponential), ValueError);
    EXPECT_THROW((void)fit(std::vector<YearCount>{{2030, 5}, {2023, 6}}, GrowthFamily::Linear), ValueError);
}

TEST(Fit, LeastSquaresOnManyPoints) {
    const std::vector<YearCount> pts{{2020, 10}, {2021, 12}, {2022, 14}, {2023, 16}};
    const auto m = std::get<LinearGrowth>(fit(pts, GrowthFamily::Linear));
    EXPECT_NEAR(m.slope, 2.0, 1e-9);
    EXPECT_NEAR(project(m, 2023), 16.0, 1e-9);
    const std::vector<YearCount> geo{{2020, 1}, {2021, 2}, {2022, 4}, {2023, 8}};
    const auto e = std::get<ExponentialGrowth>(fit(geo, GrowthFamily::Exponential));
    EXPECT_NEAR(e.rate, 1.0, 1e-9);
}

TEST(Validate, RejectsBadModels) {
    EXPECT_THROW(validate(LinearGrowth{2023, 0, 1}), ValueError);
    EXPECT_THROW(validate(LinearGrowth{2023, 1, -1}), ValueError);
    EXPECT_THROW(validate(ExponentialGrowth{2023, 1, -0.1}), ValueError);
}

GrowthModel random_model(std::mt19937_64& gen) {
    std::uniform_int_distribution<int> year(1900, 2100);
    std::uniform_real_distribution<double> base(0.01, 100.0);
    std::uniform_real_distribution<double> slope(0.0, 20.0);
    std::uniform_real_distribution<double> rate(0.0, 0.5);
    if (gen() % 2) return LinearGrowth{year(gen), base(gen), gen() % 10 == 0 ? 0.0 : slope(gen)};
    return ExponentialGrowth{year(gen), base(gen), gen() % 10 == 0 ? 0.0 : rate(gen)};
}

TEST(CrossingProperty, PostHocInvariantOnRandomModels) {
    auto gen = oracle::rng(6);
    std::uniform_real_distribution<double> factor(0.5, 50.0);
    for (int i = 0; i < 1000; ++i) {
        const GrowthModel m = random_model(gen);
        const double threshold = base_count(m) * factor(gen);
        const auto r = first_crossing(m, threshold);
        if (r.never()) {
            EXPECT_GT(threshold, base_count(m));
            continue;
        }
        EXPECT_TRUE(reaches(project(m, *r.year), threshold)) << i;
        if (*r.year > base_year(m)) {
            EXPECT_FALSE(reaches(project(m, *r.year - 1), threshold)) << i;
        }
    }
}

TEST(CrossingProperty, MonotoneInThreshold) {
    auto gen = oracle::rng(7);
    for (int i = 0; i < 200; ++i) {
        const GrowthModel m = random_model(gen);
        std::optional<int> prev;
        for (double t = base_count(m); t < base_count(m) * 20; t *= 1.7) {
            const auto r = first_crossing(m, t);
            if (r.never()) break;
            if (prev) {
                EXPECT_GE(*r.year, *prev);
            }
            prev = r.year;
        }
    }
}

TEST(FitProperty, TwoPointRoundTrip) {
    auto gen = oracle::rng(8);
    std::uniform_int_distribution<int> year(1950, 2050), gap(1, 80);
    std::uniform_real_distribution<double> count(0.1, 1000.0);
    for (int i = 0; i < 500; ++i) {
        const int y0 = year(gen);
        const int y1 = y0 + gap(gen);
        const double c0 = count(gen);
        const double c1 = c0 + count(gen);
        const std::vector<YearCount> pts{{y0, c0}, {y1, c1}};
        for (auto family : {GrowthFamily::Linear, GrowthFamily::Exponential}) {
            const auto m = fit(pts, family);
            EXPECT_TRUE(oracle::near_rel(project(m, y0), c0, 1e-9));
            EXPECT_TRUE(oracle::near_rel(project(m, y1), c1, 1e-9));
        }
    }
}

TEST(GrowthProperty, ExponentialOvertakesLinearAfterMatchYear) {
    const LinearGrowth lin{2023, 15, 35.0 / 18.0};
    const double rate = std::pow(50.0 / 15.0, 1.0 / 18.0) - 1.0;
    const ExponentialGrowth ex{2023, 15, rate};
    for (double t : {60.0, 100.0, 250.0, 1000.0}) {
        EXPECT_LE(*first_crossing(ex, t).year, *first_crossing(lin, t).year) << t;
    }
}

}  // namespace
}  // namespace tinylca
