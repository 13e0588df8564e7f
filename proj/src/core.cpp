#include "stochuc/core.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace stochuc {

std::vector<double> ScenarioSet::probabilities() const {
    std::vector<double> p;
    p.reserve(scenarios.size());
    for (const auto& s : scenarios) p.push_back(s.probability);
    return p;
}

ScenarioSet ScenarioSet::expected_value() const {
    if (scenarios.empty()) throw std::invalid_argument("empty scenario set");
    const auto T = scenarios.front().wind_cap.size();
    Scenario mean;
    mean.probability = 1.0;
    mean.wind_cap.assign(T, 0.0);
    mean.solar_cap.assign(T, 0.0);
    mean.hydro_cap.assign(T, 0.0);
    for (const auto& s : scenarios) {
        for (std::size_t t = 0; t < T; ++t) {
            mean.wind_cap[t] += s.probability * s.wind_cap[t];
            mean.solar_cap[t] += s.probability * s.solar_cap[t];
            mean.hydro_cap[t] += s.probability * s.hydro_cap[t];
        }
    }
    return ScenarioSet{{mean}};
}

ScenarioDispatch ScenarioDispatch::zeros(int units, int horizon) {
    const auto T = static_cast<std::size_t>(horizon);
    ScenarioDispatch d;
    d.p_thermal.assign(static_cast<std::size_t>(units), std::vector<double>(T, 0.0));
    d.p_wind.assign(T, 0.0);
    d.p_solar.assign(T, 0.0);
    d.p_hydro.assign(T, 0.0);
    d.p_charge.assign(T, 0.0);
    d.p_release.assign(T, 0.0);
    d.energy.assign(T, 0.0);
    d.shed.assign(T, 0.0);
    d.surplus.assign(T, 0.0);
    return d;
}

namespace {

void require(ValidationReport& report, bool ok, std::string path, std::string rule) {
    if (!ok) report.push_back(Violation{std::move(path), std::move(rule)});
}

}  // namespace

ValidationReport validate_config(const SystemConfig& cfg) {
    ValidationReport r;
    for (std::size_t i = 0; i < cfg.units.size(); ++i) {
        const auto& u = cfg.units[i];
        const std::string p = "units[" + std::to_string(i) + "]";
        require(r, u.p_min >= 0.0, p + ".p_min", "0 <= p_min");
        require(r, u.p_min <= u.p_max, p + ".p_max", "p_min <= p_max");
        require(r, u.ramp_up > 0.0, p + ".ramp_up", "ramp_up > 0");
        require(r, u.ramp_down > 0.0, p + ".ramp_down", "ramp_down > 0");
        require(r, u.c >= 0.0, p + ".c", "c >= 0");
        require(r, u.j >= 0.0, p + ".j", "j >= 0");
        require(r, u.min_up >= 1, p + ".min_up", "min_up >= 1");
        require(r, u.min_down >= 1, p + ".min_down", "min_down >= 1");
        require(r, u.startup_cost >= 0.0, p + ".startup_cost", "startup_cost >= 0");
        require(r, u.shutdown_cost >= 0.0, p + ".shutdown_cost", "shutdown_cost >= 0");
    }
    const auto& b = cfg.battery;
    require(r, b.soc_min >= 0.0, "battery.soc_min", "0 <= soc_min");
    require(r, b.soc_min < b.soc_max, "battery.soc_max", "soc_min < soc_max");
    require(r, b.soc_max <= 1.0, "battery.soc_max", "soc_max <= 1");
    require(r, b.capacity > 0.0, "battery.capacity", "capacity > 0");
    require(r, b.charge_limit >= 0.0, "battery.charge_limit", "charge_limit >= 0");
    require(r, b.release_limit >= 0.0, "battery.release_limit", "release_limit >= 0");
    require(r, b.eta_charge > 0.0 && b.eta_charge <= 1.0, "battery.eta_charge", "eta_charge in (0,1]");
    require(r, b.eta_release > 0.0, "battery.eta_release", "eta_release > 0");
    require(r, b.initial_energy >= b.energy_min() && b.initial_energy <= b.energy_max(), "battery.initial_energy",
            "soc_min*capacity <= initial_energy <= soc_max*capacity");
    require(r, cfg.carbon.price >= 0.0, "carbon.price", "price >= 0");
    require(r, cfg.carbon.allocation_coeff >= 0.0, "carbon.allocation_coeff", "allocation_coeff >= 0");
    require(r, cfg.carbon.eta_correction > 0.0, "carbon.eta_correction", "eta_correction > 0");
    require(r, cfg.horizon == static_cast<int>(cfg.load.size()), "horizon", "horizon = length(load)");
    require(r, cfg.dt > 0.0, "dt", "dt > 0");
    for (std::size_t t = 0; t < cfg.load.size(); ++t)
        require(r, cfg.load[t] >= 0.0, "load[" + std::to_string(t) + "]", "load >= 0");
    if (cfg.initial_state.size() != cfg.units.size()) {
        r.push_back(Violation{"initial_state", "one initial state per unit"});
    } else {
        for (std::size_t i = 0; i < cfg.initial_state.size(); ++i)
            require(r, cfg.initial_state[i] == 0 || cfg.initial_state[i] == 1,
                    "initial_state[" + std::to_string(i) + "]", "initial state is binary");
    }
    return r;
}

ValidationReport validate_scenarios(const ScenarioSet& set, int horizon) {
    ValidationReport r;
    require(r, !set.scenarios.empty(), "scenarios", "nonempty");
    double total = 0.0;
    for (std::size_t s = 0; s < set.scenarios.size(); ++s) {
        const auto& sc = set.scenarios[s];
        const std::string p = "scenarios[" + std::to_string(s) + "]";
        require(r, sc.probability >= 0.0 && sc.probability <= 1.0, p + ".probability", "probability in [0,1]");
        total += sc.probability;
        const std::pair<const char*, const std::vector<double>*> curves[] = {
            {"wind_cap", &sc.wind_cap}, {"solar_cap", &sc.solar_cap}, {"hydro_cap", &sc.hydro_cap}};
        for (const auto& [name, v] : curves) {
            require(r, static_cast<int>(v->size()) == horizon, p + "." + name, "length = horizon");
            bool nonneg = true;
            for (double x : *v) nonneg = nonneg && x >= 0.0;
            require(r, nonneg, p + "." + name, "entries >= 0");
        }
    }
    if (!set.scenarios.empty())
        require(r, std::abs(total - 1.0) <= 1e-9, "scenarios", "probabilities sum to 1");
    return r;
}

double fuel_cost(const ThermalUnit& unit, double power, double coal_price) {
    if (power < 0.0) throw std::invalid_argument("fuel_cost: negative power");
    return coal_price * (unit.a + unit.b * power + unit.c * power * power);
}

double emissions(const ThermalUnit& unit, double power) {
    if (power < 0.0) throw std::invalid_argument("emissions: negative power");
    return unit.l + unit.k * power + unit.j * power * power;
}

namespace {

void check_schedule(const CommitmentSchedule& s, std::size_t units) {
    if (s.on.size() != units || s.initial_state.size() != units)
        throw std::invalid_argument("schedule does not match the unit count");
    for (const auto& row : s.on)
        for (int v : row)
            if (v != 0 && v != 1) throw std::invalid_argument("schedule entries must be binary");
    for (int v : s.initial_state)
        if (v != 0 && v != 1) throw std::invalid_argument("initial state must be binary");
}

}  // namespace

double uc_cost(const CommitmentSchedule& schedule, const std::vector<ThermalUnit>& units) {
    check_schedule(schedule, units.size());
    double total = 0.0;
    for (int i = 0; i < schedule.num_units(); ++i) {
        const auto& u = units[static_cast<std::size_t>(i)];
        for (int t = 0; t < schedule.horizon(); ++t) {
            const int now = schedule.on[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)];
            const int before = schedule.previous(i, t);
            if (now > before) total += u.startup_cost;
            if (now < before) total += u.shutdown_cost;
        }
    }
    return total;
}

int start_stop_cycles(const CommitmentSchedule& schedule) {
    int cycles = 0;
    for (int i = 0; i < schedule.num_units(); ++i)
        for (int t = 0; t < schedule.horizon(); ++t)
            if (schedule.on[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)] != schedule.previous(i, t)) ++cycles;
    return cycles;
}

}  // namespace stochuc
