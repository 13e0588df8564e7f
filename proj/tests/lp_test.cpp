#include <gtest/gtest.h>

#include <random>

#include "lp_oracle.hpp"
#include "stochuc/lp.hpp"

using namespace stochuc;
using stochuc::testing::DenseLp;
using stochuc::testing::random_feasible_lp;

namespace {

MILPModel two_var_face() {
    MILPModel m;
    const int x = m.add_continuous("x", 0.0, kInf, -1.0);
    const int y = m.add_continuous("y", 0.0, kInf, -1.0);
    m.add_constraint("sum", {{x, 1.0}, {y, 1.0}}, Sense::LessEqual, 4.0);
    m.add_constraint("xcap", {{x, 1.0}}, Sense::LessEqual, 3.0);
    m.add_constraint("ycap", {{y, 1.0}}, Sense::LessEqual, 3.0);
    return m;
}

}  // namespace

TEST(SolveLp, SingleActiveBound) {
    MILPModel m;
    const int x = m.add_continuous("x", -kInf, kInf, 1.0);
    m.add_constraint("lo", {{x, 1.0}}, Sense::GreaterEqual, 3.0);
    m.add_constraint("hi", {{x, 1.0}}, Sense::LessEqual, 10.0);
    const auto r = solve_lp(m);
    ASSERT_EQ(r.status, LpStatus::Optimal);
    EXPECT_NEAR(r.objective, 3.0, 1e-9);
    EXPECT_TRUE(verify_lp(m, r, 1e-6));
}

TEST(SolveLp, DegenerateFaceHasUniqueValue) {
    const auto m = two_var_face();
    // Vertex enumeration: (0,0)=0, (3,0)=-3, (0,3)=-3, (3,1)=-4, (1,3)=-4.
    const auto r = solve_lp(m);
    ASSERT_EQ(r.status, LpStatus::Optimal);
    EXPECT_NEAR(r.objective, -4.0, 1e-9);
    EXPECT_NEAR(r.primal[0] + r.primal[1], 4.0, 1e-9);
    EXPECT_TRUE(verify_lp(m, r, 1e-6));
}

TEST(SolveLp, ContradictoryBoundsAreInfeasible) {
    MILPModel m;
    const int x = m.add_continuous("x", -kInf, kInf, 1.0);
    m.add_constraint("a", {{x, 1.0}}, Sense::GreaterEqual, 1.0);
    m.add_constraint("b", {{x, 1.0}}, Sense::LessEqual, 0.0);
    EXPECT_EQ(solve_lp(m).status, LpStatus::Infeasible);
}

TEST(SolveLp, UnboundedRay) {
    MILPModel m;
    const int x = m.add_continuous("x", 0.0, kInf, -1.0);
    const int y = m.add_continuous("y", 0.0, kInf, 0.0);
    m.add_constraint("a", {{x, 1.0}, {y, -1.0}}, Sense::LessEqual, 2.0);
    EXPECT_EQ(solve_lp(m).status, LpStatus::Unbounded);
}

TEST(VerifyLp, RejectsPerturbedPrimal) {
    const auto m = two_var_face();
    auto r = solve_lp(m);
    ASSERT_TRUE(verify_lp(m, r, 1e-6));
    r.primal[0] += 1.0;
    EXPECT_FALSE(verify_lp(m, r, 1e-6));
}

TEST(VerifyLp, AcceptsHandComputedOptimum) {
    const auto m = two_var_face();
    LpResult r;
    r.status = LpStatus::Optimal;
    r.primal = {3.0, 1.0};
    r.dual = {-1.0, 0.0, 0.0};  // sum row binds with shadow price -1
    r.objective = -4.0;
    EXPECT_TRUE(verify_lp(m, r, 1e-6));
}

TEST(SolveLp, MatchesVertexEnumerationOnTinyInstances) {
    std::mt19937_64 rng(7);
    int counts[3] = {0, 0, 0};
    for (int trial = 0; trial < 600; ++trial) {
        const DenseLp lp = stochuc::testing::random_tiny_lp(rng);
        const auto oracle = stochuc::testing::enumerate_lp(lp);
        const auto model = lp.to_model();
        const auto r = solve_lp(model);
        ASSERT_EQ(r.status, oracle.status) << "trial " << trial;
        if (oracle.status == LpStatus::Optimal) {
            EXPECT_NEAR(r.objective, oracle.objective, 1e-7 * (1.0 + std::abs(oracle.objective)));
            EXPECT_TRUE(verify_lp(model, r, 1e-6));
        }
        ++counts[oracle.status == LpStatus::Optimal ? 0 : oracle.status == LpStatus::Infeasible ? 1 : 2];
    }
    // The generator must exercise every classification.
    EXPECT_GT(counts[0], 50);
    EXPECT_GT(counts[1], 50);
    EXPECT_GT(counts[2], 20);
}

TEST(SolveLp, StrongDualityOnRandomFeasibleLps) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const auto model = random_feasible_lp(rng);
        const auto r = solve_lp(model);
        ASSERT_EQ(r.status, LpStatus::Optimal) << "trial " << trial;
        EXPECT_TRUE(verify_lp(model, r, 1e-6)) << "trial " << trial;
    }
}

TEST(SolveLp, ObjectiveScalingScalesOptimum) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const auto model = random_feasible_lp(rng);
        auto scaled = model;
        for (int j = 0; j < model.num_variables(); ++j) scaled.set_cost(j, 3.5 * model.costs()[static_cast<std::size_t>(j)]);
        const auto a = solve_lp(model);
        const auto b = solve_lp(scaled);
        ASSERT_EQ(a.status, LpStatus::Optimal);
        ASSERT_EQ(b.status, LpStatus::Optimal);
        EXPECT_NEAR(b.objective, 3.5 * a.objective, 1e-7 * (1.0 + std::abs(b.objective)));
    }
}

TEST(SolveLp, DuplicateRowLeavesOptimumUnchanged) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        auto model = random_feasible_lp(rng);
        const auto a = solve_lp(model);
        const auto c = model.constraints().front();
        model.add_constraint(c.name + "_dup", c.terms, c.sense, c.rhs);
        const auto b = solve_lp(model);
        ASSERT_EQ(b.status, LpStatus::Optimal);
        EXPECT_NEAR(a.objective, b.objective, 1e-8 * (1.0 + std::abs(a.objective)));
    }
}

TEST(SimplexEngine, DualWarmStartAfterBoundChangeMatchesColdSolve) {
    std::mt19937_64 rng(19);
    for (int trial = 0; trial < 40; ++trial) {
        auto model = random_feasible_lp(rng);
        auto data = std::make_shared<const LpData>(LpData::from_model(model));
        SimplexEngine warm(data);
        ASSERT_EQ(warm.solve_primal(), LpStatus::Optimal);
        const auto x = warm.primal();
        // Tighten a variable to cut off the current optimum.
        int j = static_cast<int>(rng() % static_cast<unsigned>(model.num_variables()));
        const auto& v = model.variables()[static_cast<std::size_t>(j)];
        const double mid = x[static_cast<std::size_t>(j)] - 0.5;
        const double lo = v.lower;
        const double hi = std::max(lo, mid);
        warm.set_col_bounds(j, lo, hi);
        const auto ws = warm.solve_dual();
        model.set_bounds(j, lo, hi);
        const auto cold = solve_lp(model);
        ASSERT_EQ(ws, cold.status) << "trial " << trial;
        if (ws == LpStatus::Optimal) EXPECT_NEAR(warm.objective(), cold.objective, 1e-7 * (1.0 + std::abs(cold.objective)));
    }
}
