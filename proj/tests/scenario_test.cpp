#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "stochuc/scenario.hpp"

using namespace stochuc;

namespace {

CurveSet flat_groups() {
    CurveSet cs;
    cs.label = "flat";
    cs.curves = {{10, 10, 10}, {10, 10, 10}, {100, 100, 100}, {100, 100, 100}};
    return cs;
}

// 48 days in three regimes of 33, 7 and 8 days.
CurveSet regimes(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> noise(-20.0, 20.0);
    CurveSet cs;
    cs.label = "wind";
    const int days[3] = {33, 7, 8};
    const double level[3] = {250.0, 700.0, 1100.0};
    for (int r = 0; r < 3; ++r)
        for (int d = 0; d < days[r]; ++d) {
            std::vector<double> v(24);
            for (int t = 0; t < 24; ++t) v[static_cast<std::size_t>(t)] = level[r] * (1.0 + 0.2 * std::sin(t / 4.0)) + noise(rng);
            cs.curves.push_back(v);
        }
    return cs;
}

ClusterResult marginal(std::vector<double> probs, double level) {
    ClusterResult r;
    r.probabilities = std::move(probs);
    for (std::size_t c = 0; c < r.probabilities.size(); ++c) r.centroids.push_back(std::vector<double>(4, level * (c + 1)));
    return r;
}

}  // namespace

TEST(KMeans, SingleClusterIsTheMean) {
    CurveSet cs;
    cs.curves = {{0, 2}, {4, 6}, {8, 10}};
    const auto r = kmeans(cs, 1, 7);
    ASSERT_EQ(r.k(), 1);
    EXPECT_DOUBLE_EQ(r.centroids[0][0], 4.0);
    EXPECT_DOUBLE_EQ(r.centroids[0][1], 6.0);
    EXPECT_DOUBLE_EQ(r.probabilities[0], 1.0);
    // Squared distances 16+16, 0, 16+16.
    EXPECT_DOUBLE_EQ(r.sse, 64.0);
}

TEST(KMeans, TwoObviousGroups) {
    const auto r = kmeans(flat_groups(), 2, 3);
    ASSERT_EQ(r.k(), 2);
    EXPECT_DOUBLE_EQ(r.probabilities[0], 0.5);
    EXPECT_DOUBLE_EQ(r.probabilities[1], 0.5);
    EXPECT_EQ(r.assignments[0], r.assignments[1]);
    EXPECT_EQ(r.assignments[2], r.assignments[3]);
    EXPECT_NE(r.assignments[0], r.assignments[2]);
    EXPECT_DOUBLE_EQ(r.sse, 0.0);
}

TEST(KMeans, SseNeverIncreasesAcrossSeeds) {
    const auto cs = regimes(11);
    for (std::uint64_t seed = 0; seed < 20; ++seed)
        for (int k = 1; k <= 6; ++k) {
            const auto r = kmeans(cs, k, seed);
            ASSERT_FALSE(r.sse_history.empty());
            for (std::size_t i = 1; i < r.sse_history.size(); ++i)
                EXPECT_LE(r.sse_history[i], r.sse_history[i - 1] * (1.0 + 1e-12)) << "seed " << seed << " k " << k;
            EXPECT_NEAR(r.sse_history.back(), r.sse, 1e-9 * std::max(1.0, r.sse));
        }
}

TEST(KMeans, RepeatRunsAreBitIdentical) {
    const auto cs = regimes(5);
    const auto a = kmeans(cs, 3, 99);
    const auto b = kmeans(cs, 3, 99);
    EXPECT_EQ(a.assignments, b.assignments);
    EXPECT_EQ(a.centroids, b.centroids);
    EXPECT_EQ(a.sse_history, b.sse_history);
}

TEST(KMeans, CentroidsStayInsideThePeriodRange) {
    const auto cs = regimes(8);
    const auto r = kmeans(cs, 4, 1);
    for (int t = 0; t < cs.periods(); ++t) {
        double lo = 1e300, hi = -1e300;
        for (const auto& c : cs.curves) {
            lo = std::min(lo, c[static_cast<std::size_t>(t)]);
            hi = std::max(hi, c[static_cast<std::size_t>(t)]);
        }
        for (const auto& c : r.centroids) {
            EXPECT_GE(c[static_cast<std::size_t>(t)], lo - 1e-9);
            EXPECT_LE(c[static_cast<std::size_t>(t)], hi + 1e-9);
        }
    }
}

TEST(KMeans, ThreeRegimesGiveThreeClustersWithUnitMass) {
    const auto r = kmeans(regimes(3), 3, 42);
    ASSERT_EQ(r.k(), 3);
    EXPECT_NEAR(std::accumulate(r.probabilities.begin(), r.probabilities.end(), 0.0), 1.0, 1e-12);
    std::vector<double> p = r.probabilities;
    std::sort(p.begin(), p.end());
    EXPECT_DOUBLE_EQ(p[0], 7.0 / 48.0);
    EXPECT_DOUBLE_EQ(p[1], 8.0 / 48.0);
    EXPECT_DOUBLE_EQ(p[2], 33.0 / 48.0);
}

TEST(KMeans, RejectsBadArguments) {
    const auto cs = flat_groups();
    EXPECT_THROW((void)kmeans(cs, 0, 1), std::invalid_argument);
    EXPECT_THROW((void)kmeans(cs, 5, 1), std::invalid_argument);
    CurveSet ragged;
    ragged.curves = {{1, 2}, {1}};
    EXPECT_THROW(validate_curves(ragged), std::invalid_argument);
    CurveSet negative;
    negative.curves = {{1, -2}};
    EXPECT_THROW(validate_curves(negative), std::invalid_argument);
    EXPECT_THROW(validate_curves(CurveSet{}), std::invalid_argument);
}

TEST(Elbow, KneeOfAHandProfile) {
    // Chord from (1,100) to (5,16); k=2 lies farthest below it.
    EXPECT_EQ(elbow_from_sse({1, 2, 3, 4, 5}, {100, 20, 18, 17, 16}), 2);
}

TEST(Elbow, StraightLinePicksTheSmallestK) {
    EXPECT_EQ(elbow_from_sse({2, 3, 4, 5}, {40, 30, 20, 10}), 2);
}

TEST(Elbow, TwoGroupsGiveTwo) {
    auto cs = flat_groups();
    cs.curves.push_back({11, 11, 11});
    cs.curves.push_back({99, 99, 99});
    EXPECT_EQ(elbow_k(cs, 1, 4, 1), 2);
}

TEST(Elbow, ThreadCountDoesNotMatter) {
    const auto cs = regimes(21);
    EXPECT_EQ(elbow_k(cs, 1, 8, 42, 1), elbow_k(cs, 1, 8, 42, 4));
}

TEST(Elbow, RejectsBadRanges) {
    EXPECT_THROW((void)elbow_k(flat_groups(), 2, 2, 1), std::invalid_argument);
    EXPECT_THROW((void)elbow_k(flat_groups(), 1, 9, 1), std::invalid_argument);
    EXPECT_THROW((void)elbow_from_sse({1}, {3}), std::invalid_argument);
}

TEST(Joint, ReproducesPublishedProbabilities) {
    const auto wind = marginal({0.6874, 0.1459, 0.1667}, 100.0);
    const auto solar = marginal({0.6458, 0.3125, 0.0417}, 10.0);
    const auto set = joint_scenarios(wind, solar, std::vector<double>(4, 5.0));
    const double expected[9] = {44.40, 21.48, 2.86, 9.42, 4.56, 0.61, 10.76, 5.21, 0.70};
    ASSERT_EQ(set.size(), 9);
    double total = 0.0;
    for (int s = 0; s < 9; ++s) {
        EXPECT_NEAR(100.0 * set.scenarios[static_cast<std::size_t>(s)].probability, expected[s], 0.02) << s;
        total += set.scenarios[static_cast<std::size_t>(s)].probability;
    }
    EXPECT_NEAR(total, 1.0, 1e-9);
}

TEST(Joint, RowAndColumnSumsGiveTheMarginals) {
    const auto wind = marginal({0.5, 0.3, 0.2}, 100.0);
    const auto solar = marginal({0.25, 0.75}, 10.0);
    const auto set = joint_scenarios(wind, solar, std::vector<double>(4, 5.0));
    for (int i = 0; i < 3; ++i) {
        double row = 0.0;
        for (int j = 0; j < 2; ++j) {
            const auto& sc = set.scenarios[static_cast<std::size_t>(i * 2 + j)];
            row += sc.probability;
            EXPECT_DOUBLE_EQ(sc.wind_cap[0], 100.0 * (i + 1));
            EXPECT_DOUBLE_EQ(sc.solar_cap[0], 10.0 * (j + 1));
            EXPECT_DOUBLE_EQ(sc.hydro_cap[0], 5.0);
        }
        EXPECT_NEAR(row, wind.probabilities[static_cast<std::size_t>(i)], 1e-15);
    }
    for (int j = 0; j < 2; ++j) {
        double col = 0.0;
        for (int i = 0; i < 3; ++i) col += set.scenarios[static_cast<std::size_t>(i * 2 + j)].probability;
        EXPECT_NEAR(col, solar.probabilities[static_cast<std::size_t>(j)], 1e-15);
    }
}

TEST(Joint, RejectsMismatchedPeriods) {
    const auto wind = marginal({1.0}, 100.0);
    const auto solar = marginal({1.0}, 10.0);
    EXPECT_THROW((void)joint_scenarios(wind, solar, std::vector<double>(3, 5.0)), std::invalid_argument);
}
