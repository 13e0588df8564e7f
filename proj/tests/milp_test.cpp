#include <gtest/gtest.h>

#include <random>
#include <sstream>
#include <string>

#include "lp_oracle.hpp"
#include "stochuc/feasibility.hpp"
#include "stochuc/formulation.hpp"
#include "stochuc/milp.hpp"
#include "uc_fixtures.hpp"

using namespace stochuc;
namespace fx = stochuc::testing;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

TEST(Milp, NoBinariesMatchesLp) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        const auto model = fx::random_tiny_lp(rng).to_model();
        const auto lp = solve_lp(model);
        const auto mip = solve_milp(model);
        if (lp.status == LpStatus::Optimal) {
            ASSERT_EQ(mip.status, MilpStatus::Optimal);
            EXPECT_NEAR(mip.objective, lp.objective, 1e-9 * std::max(1.0, std::abs(lp.objective)));
        } else if (lp.status == LpStatus::Infeasible) {
            EXPECT_EQ(mip.status, MilpStatus::Infeasible);
        } else {
            EXPECT_EQ(mip.status, MilpStatus::Unbounded);
        }
    }
}

TEST(Milp, KnapsackMatchesBruteForce) {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<int> W(1, 30), V(1, 40);
    for (int trial = 0; trial < 40; ++trial) {
        MILPModel m;
        std::vector<Term> weight;
        for (int j = 0; j < 10; ++j) {
            const int v = m.add_binary("x" + std::to_string(j), -V(rng));
            weight.push_back({v, static_cast<double>(W(rng))});
        }
        m.add_constraint("cap", weight, Sense::LessEqual, 60.0);
        const auto a = solve_milp(m, SolveOptions{.mip_gap = 0.0});
        const auto b = brute_force_milp(m);
        ASSERT_EQ(a.status, MilpStatus::Optimal);
        ASSERT_EQ(b.status, MilpStatus::Optimal);
        EXPECT_NEAR(a.objective, b.objective, 1e-9);
        EXPECT_LE(a.bound, a.objective + 1e-9);
    }
}

TEST(Milp, BruteForceBasics) {
    MILPModel m;
    const int x = m.add_continuous("x", 0, 10, 1.0);
    const int y = m.add_binary("y", 3.0);
    m.add_constraint("c", {{x, 1.0}, {y, 5.0}}, Sense::GreaterEqual, 4.0);
    const auto r = brute_force_milp(m);
    EXPECT_EQ(r.nodes, 2);
    EXPECT_NEAR(r.objective, 3.0, 1e-12);  // y=1, x=0 beats y=0, x=4
    MILPModel big;
    for (int j = 0; j < 17; ++j) big.add_binary("b" + std::to_string(j));
    EXPECT_THROW((void)brute_force_milp(big), std::invalid_argument);
    EXPECT_EQ(brute_force_milp(MILPModel{}).status, MilpStatus::Optimal);
}

TEST(Milp, InfeasibleIntegerProgram) {
    MILPModel m;
    const int a = m.add_binary("a"), b = m.add_binary("b");
    m.add_constraint("half", {{a, 2.0}, {b, 2.0}}, Sense::Equal, 1.0);
    EXPECT_EQ(solve_milp(m).status, MilpStatus::Infeasible);
    EXPECT_EQ(brute_force_milp(m).status, MilpStatus::Infeasible);
}

TEST(Milp, UcInstancesMatchBruteForce) {
    std::mt19937_64 rng(31337);
    int optimal = 0;
    for (int trial = 0; trial < 25; ++trial) {
        const auto inst = fx::random_instance(rng);
        const auto b = build_model(inst.config, inst.scenarios);
        ASSERT_LE(b.model.num_binaries(), 12);
        const auto a = solve_milp(b.model, SolveOptions{.mip_gap = 0.0});
        const auto o = brute_force_milp(b.model);
        ASSERT_EQ(a.status, o.status) << "trial " << trial;
        if (a.status != MilpStatus::Optimal) continue;
        ++optimal;
        EXPECT_LE(rel(a.objective, o.objective), 1e-6) << "trial " << trial;
        const auto [sched, disp] = extract_solution(a.values, b.index, inst.config, inst.scenarios);
        EXPECT_TRUE(check_feasibility(sched, disp, inst.config, inst.scenarios, 1e-6).empty());
    }
    EXPECT_GT(optimal, 10);
}

TEST(Milp, ThreadCountDoesNotChangeResult) {
    std::mt19937_64 rng(4242);
    for (int trial = 0; trial < 10; ++trial) {
        const auto inst = fx::random_instance(rng);
        const auto b = build_model(inst.config, inst.scenarios);
        SolveOptions one;
        one.batch_size = 4;
        auto four = one;
        four.threads = 4;
        const auto r1 = solve_milp(b.model, one);
        const auto r4 = solve_milp(b.model, four);
        EXPECT_EQ(r1.status, r4.status);
        EXPECT_EQ(r1.objective, r4.objective);
        EXPECT_EQ(r1.values, r4.values);
        EXPECT_EQ(r1.nodes, r4.nodes);
    }
}

TEST(Milp, IncumbentsImproveAndLogIsParseable) {
    std::mt19937_64 rng(8);
    std::uniform_int_distribution<int> W(1, 30), V(1, 40);
    MILPModel m;
    std::vector<Term> weight;
    for (int j = 0; j < 16; ++j) {
        const int v = m.add_binary("x" + std::to_string(j), -V(rng));
        weight.push_back({v, static_cast<double>(W(rng))});
    }
    m.add_constraint("cap", weight, Sense::LessEqual, 90.0);
    std::ostringstream log;
    SolveOptions opt;
    opt.mip_gap = 0.0;
    opt.log = &log;
    opt.log_every = 1;
    const auto r = solve_milp(m, opt);
    ASSERT_EQ(r.status, MilpStatus::Optimal);
    std::istringstream in(log.str());
    std::string line;
    double last = 1e300;
    int incumbents = 0;
    while (std::getline(in, line)) {
        long node = 0;
        std::size_t open = 0;
        double inc = 0, bound = 0, gap = 0;
        char tag[32];
        ASSERT_EQ(std::sscanf(line.c_str(), "bnb %31s node=%ld open=%zu incumbent=%lf bound=%lf gap=%lf", tag, &node,
                              &open, &inc, &bound, &gap),
                  6)
            << line;
        if (std::string(tag) == "incumbent") {
            EXPECT_LT(inc, last);
            last = inc;
            ++incumbents;
        }
    }
    EXPECT_GE(incumbents, 1);
    EXPECT_NEAR(last, r.objective, 1e-9);
}
