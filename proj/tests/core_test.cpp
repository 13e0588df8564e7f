#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <random>

#include "stochuc/core.hpp"
#include "uc_fixtures.hpp"

using namespace stochuc;
namespace fx = stochuc::testing;

namespace {

ThermalUnit curve_unit() {
    ThermalUnit u;
    u.a = 100.0;
    u.b = 2.0;
    u.c = 0.01;
    u.l = 10.0;
    u.k = 0.9;
    u.j = 0.0001;
    return u;
}

CommitmentSchedule single(std::vector<int> on, int initial) {
    CommitmentSchedule s;
    s.on = {std::move(on)};
    s.initial_state = {initial};
    return s;
}

}  // namespace

TEST(FuelCost, Examples) {
    ThermalUnit zero;
    EXPECT_DOUBLE_EQ(fuel_cost(zero, 50.0, 700.0), 0.0);
    EXPECT_DOUBLE_EQ(fuel_cost(curve_unit(), 50.0, 1.0), 225.0);
    EXPECT_DOUBLE_EQ(fuel_cost(curve_unit(), 0.0, 1.0), 100.0);
    EXPECT_THROW((void)fuel_cost(curve_unit(), -1.0, 1.0), std::invalid_argument);
}

TEST(Emissions, Examples) {
    ThermalUnit zero;
    EXPECT_DOUBLE_EQ(emissions(zero, 100.0), 0.0);
    EXPECT_DOUBLE_EQ(emissions(curve_unit(), 100.0), 101.0);
    EXPECT_DOUBLE_EQ(emissions(curve_unit(), 0.0), 10.0);
    EXPECT_THROW((void)emissions(curve_unit(), -0.5), std::invalid_argument);
}

TEST(UcCost, Examples) {
    ThermalUnit u;
    u.startup_cost = 1000.0;
    u.shutdown_cost = 500.0;
    EXPECT_DOUBLE_EQ(uc_cost(single({0, 0, 0}, 0), {u}), 0.0);
    EXPECT_DOUBLE_EQ(uc_cost(single({0, 1, 1, 0}, 0), {u}), 1500.0);
    EXPECT_DOUBLE_EQ(uc_cost(single({1, 1, 1}, 1), {u}), 0.0);
    EXPECT_THROW((void)uc_cost(single({0, 2}, 0), {u}), std::invalid_argument);
    EXPECT_EQ(start_stop_cycles(single({0, 1, 1, 0}, 0)), 2);
}

TEST(UcCost, InvariantUnderRepeatedLastPeriod) {
    std::mt19937_64 rng(7);
    std::bernoulli_distribution coin(0.5);
    ThermalUnit u;
    u.startup_cost = 37.0;
    u.shutdown_cost = 11.0;
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<int> on(1 + trial % 9);
        for (auto& v : on) v = coin(rng);
        const auto s = single(on, coin(rng));
        auto longer = s;
        longer.on[0].push_back(on.back());
        EXPECT_DOUBLE_EQ(uc_cost(s, {u}), uc_cost(longer, {u}));
    }
}

TEST(CostCurves, Convex) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> P(0.0, 500.0), A(0.0, 1.0);
    const auto u = curve_unit();
    for (int trial = 0; trial < 1000; ++trial) {
        const double p1 = P(rng), p2 = P(rng), a = A(rng);
        const double mid = a * p1 + (1 - a) * p2;
        EXPECT_LE(fuel_cost(u, mid, 3.0), a * fuel_cost(u, p1, 3.0) + (1 - a) * fuel_cost(u, p2, 3.0) + 1e-9);
        EXPECT_LE(emissions(u, mid), a * emissions(u, p1) + (1 - a) * emissions(u, p2) + 1e-9);
    }
}

TEST(ValidateConfig, WellFormed) {
    auto cfg = fx::toy_config();
    cfg.units.push_back(fx::toy_unit("g2"));
    cfg.initial_state.push_back(1);
    EXPECT_TRUE(validate_config(cfg).empty());
}

TEST(ValidateConfig, InvertedSoc) {
    auto cfg = fx::toy_config();
    cfg.battery.soc_min = 0.9;
    cfg.battery.soc_max = 0.3;
    const auto r = validate_config(cfg);
    EXPECT_TRUE(std::any_of(r.begin(), r.end(), [](const Violation& v) { return v.rule == "soc_min < soc_max"; }));
}

TEST(ValidateConfig, LoadLengthMismatch) {
    auto cfg = fx::toy_config(24);
    cfg.load.resize(23);
    const auto r = validate_config(cfg);
    ASSERT_EQ(r.size(), 1u);
    EXPECT_EQ(r[0].rule, "horizon = length(load)");
}

TEST(ValidateConfig, SingleMutationGivesSingleViolation) {
    using Mut = std::function<void(SystemConfig&)>;
    const std::vector<std::pair<Mut, std::string>> cases = {
        {[](SystemConfig& c) { c.units[0].p_min = -1.0; }, "0 <= p_min"},
        {[](SystemConfig& c) { c.units[0].p_min = 120.0; }, "p_min <= p_max"},
        {[](SystemConfig& c) { c.units[0].ramp_up = 0.0; }, "ramp_up > 0"},
        {[](SystemConfig& c) { c.units[0].ramp_down = -2.0; }, "ramp_down > 0"},
        {[](SystemConfig& c) { c.units[0].c = -1e-3; }, "c >= 0"},
        {[](SystemConfig& c) { c.units[0].j = -1e-3; }, "j >= 0"},
        {[](SystemConfig& c) { c.units[0].min_up = 0; }, "min_up >= 1"},
        {[](SystemConfig& c) { c.units[0].min_down = 0; }, "min_down >= 1"},
        {[](SystemConfig& c) { c.units[0].startup_cost = -1.0; }, "startup_cost >= 0"},
        {[](SystemConfig& c) { c.units[0].shutdown_cost = -1.0; }, "shutdown_cost >= 0"},
        {[](SystemConfig& c) { c.battery.soc_min = -0.1; }, "0 <= soc_min"},
        {[](SystemConfig& c) { c.battery.soc_min = c.battery.soc_max = 0.5; }, "soc_min < soc_max"},
        {[](SystemConfig& c) { c.battery.soc_max = 1.2; }, "soc_max <= 1"},
        {[](SystemConfig& c) { c.battery.capacity = 0.0; c.battery.initial_energy = 0.0; c.battery.soc_min = 0.0; }, "capacity > 0"},
        {[](SystemConfig& c) { c.battery.charge_limit = -1.0; }, "charge_limit >= 0"},
        {[](SystemConfig& c) { c.battery.release_limit = -1.0; }, "release_limit >= 0"},
        {[](SystemConfig& c) { c.battery.eta_charge = 1.5; }, "eta_charge in (0,1]"},
        {[](SystemConfig& c) { c.battery.eta_release = 0.0; }, "eta_release > 0"},
        {[](SystemConfig& c) { c.battery.initial_energy = 95.0; }, "soc_min*capacity <= initial_energy <= soc_max*capacity"},
        {[](SystemConfig& c) { c.carbon.price = -1.0; }, "price >= 0"},
        {[](SystemConfig& c) { c.carbon.allocation_coeff = -1.0; }, "allocation_coeff >= 0"},
        {[](SystemConfig& c) { c.carbon.eta_correction = 0.0; }, "eta_correction > 0"},
        {[](SystemConfig& c) { c.horizon = 4; }, "horizon = length(load)"},
        {[](SystemConfig& c) { c.dt = 0.0; }, "dt > 0"},
        {[](SystemConfig& c) { c.load[1] = -5.0; }, "load >= 0"},
        {[](SystemConfig& c) { c.initial_state = {3}; }, "initial state is binary"},
    };
    for (const auto& [mutate, rule] : cases) {
        auto cfg = fx::toy_config();
        mutate(cfg);
        const auto r = validate_config(cfg);
        ASSERT_EQ(r.size(), 1u) << rule;
        EXPECT_EQ(r[0].rule, rule);
    }
}

TEST(ValidateScenarios, Checks) {
    auto set = fx::flat_scenarios(3, {0.25, 0.75});
    EXPECT_TRUE(validate_scenarios(set, 3).empty());
    EXPECT_FALSE(validate_scenarios(set, 4).empty());
    set.scenarios[0].probability = 0.3;
    EXPECT_EQ(validate_scenarios(set, 3).size(), 1u);
    EXPECT_FALSE(validate_scenarios(ScenarioSet{}, 3).empty());
}

TEST(ScenarioSet, ExpectedValue) {
    const auto set = fx::flat_scenarios(2, {0.25, 0.75}, 8.0);
    const auto mean = set.expected_value();
    ASSERT_EQ(mean.size(), 1);
    EXPECT_DOUBLE_EQ(mean.scenarios[0].probability, 1.0);
    EXPECT_DOUBLE_EQ(mean.scenarios[0].wind_cap[0], 0.25 * 8.0 + 0.75 * 16.0);
}
