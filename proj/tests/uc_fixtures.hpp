#pragma once

#include <random>

#include "stochuc/core.hpp"

namespace stochuc::testing {

inline ThermalUnit toy_unit(std::string id = "g1") {
    ThermalUnit u;
    u.id = std::move(id);
    u.a = 10.0;
    u.b = 0.3;
    u.c = 0.0004;
    u.l = 5.0;
    u.k = 0.9;
    u.j = 0.0002;
    u.p_min = 40.0;
    u.p_max = 100.0;
    u.ramp_up = 30.0;
    u.ramp_down = 30.0;
    u.startup_cost = 1000.0;
    u.shutdown_cost = 500.0;
    u.min_up = 2;
    u.min_down = 2;
    return u;
}

/// One unit, T periods, a small battery and one scenario.
inline SystemConfig toy_config(int T = 3) {
    SystemConfig cfg;
    cfg.units = {toy_unit()};
    cfg.battery.capacity = 100.0;
    cfg.battery.charge_limit = 20.0;
    cfg.battery.release_limit = 20.0;
    cfg.battery.eta_charge = 0.95;
    cfg.battery.eta_release = 1.0 / 0.95;
    cfg.battery.soc_min = 0.2;
    cfg.battery.soc_max = 0.9;
    cfg.battery.initial_energy = 50.0;
    cfg.carbon = {100.0, 1.0, 0.9419};
    cfg.coal_price = 700.0;
    cfg.horizon = T;
    cfg.load.assign(static_cast<std::size_t>(T), 80.0);
    cfg.initial_state = {0};
    return cfg;
}

inline ScenarioSet flat_scenarios(int T, std::vector<double> probs, double wind = 10.0, double solar = 5.0,
                                  double hydro = 5.0) {
    ScenarioSet set;
    for (std::size_t s = 0; s < probs.size(); ++s) {
        Scenario sc;
        sc.probability = probs[s];
        sc.wind_cap.assign(static_cast<std::size_t>(T), wind * static_cast<double>(s + 1));
        sc.solar_cap.assign(static_cast<std::size_t>(T), solar);
        sc.hydro_cap.assign(static_cast<std::size_t>(T), hydro);
        set.scenarios.push_back(std::move(sc));
    }
    return set;
}

struct RandomInstance {
    SystemConfig config;
    ScenarioSet scenarios;
};

/// At most 2 units, 3 periods and 2 scenarios, so at most 12 binaries.
inline RandomInstance random_instance(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> n_units(1, 2), horizon(1, 3), n_scen(1, 2), updown(1, 3), bit(0, 1);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    RandomInstance inst;
    auto& cfg = inst.config;
    const int N = n_units(rng);
    const int T = horizon(rng);
    const int W = n_scen(rng);
    double cap = 0.0;
    for (int i = 0; i < N; ++i) {
        ThermalUnit u;
        u.id = "g" + std::to_string(i);
        u.a = 5.0 + 20.0 * U(rng);
        u.b = 0.2 + 0.2 * U(rng);
        u.c = 0.002 * U(rng);
        u.l = 2.0 + 5.0 * U(rng);
        u.k = 0.8 + 0.3 * U(rng);
        u.j = 0.001 * U(rng);
        u.p_min = 10.0 + 30.0 * U(rng);
        u.p_max = u.p_min + 20.0 + 80.0 * U(rng);
        u.ramp_up = 10.0 + 60.0 * U(rng);
        u.ramp_down = 10.0 + 60.0 * U(rng);
        u.startup_cost = 2000.0 * U(rng);
        u.shutdown_cost = 1000.0 * U(rng);
        u.min_up = updown(rng);
        u.min_down = updown(rng);
        cap += u.p_max;
        cfg.units.push_back(u);
        cfg.initial_state.push_back(bit(rng));
    }
    cfg.battery.capacity = 40.0 + 60.0 * U(rng);
    cfg.battery.charge_limit = 5.0 + 20.0 * U(rng);
    cfg.battery.release_limit = 5.0 + 20.0 * U(rng);
    cfg.battery.eta_charge = 0.9 + 0.1 * U(rng);
    cfg.battery.eta_release = 1.0 / 0.95;
    cfg.battery.soc_min = 0.1 + 0.2 * U(rng);
    cfg.battery.soc_max = 0.8 + 0.2 * U(rng);
    cfg.battery.initial_energy =
        cfg.battery.energy_min() + U(rng) * (cfg.battery.energy_max() - cfg.battery.energy_min());
    cfg.carbon = {200.0 * U(rng), 1.0, 0.9419};
    cfg.coal_price = 500.0 + 400.0 * U(rng);
    cfg.horizon = T;
    for (int t = 0; t < T; ++t) cfg.load.push_back(0.6 * cap * U(rng));
    std::vector<double> probs(static_cast<std::size_t>(W));
    double total = 0.0;
    for (auto& p : probs) total += (p = 0.2 + U(rng));
    for (int w = 0; w < W; ++w) {
        Scenario sc;
        sc.probability = w + 1 == W ? 1.0 - [&] {
            double acc = 0.0;
            for (int v = 0; v + 1 < W; ++v) acc += probs[static_cast<std::size_t>(v)] / total;
            return acc;
        }()
                                    : probs[static_cast<std::size_t>(w)] / total;
        for (int t = 0; t < T; ++t) {
            sc.wind_cap.push_back(60.0 * U(rng));
            sc.solar_cap.push_back(30.0 * U(rng));
            sc.hydro_cap.push_back(20.0 * U(rng));
        }
        inst.scenarios.scenarios.push_back(std::move(sc));
    }
    return inst;
}

}  // namespace stochuc::testing
