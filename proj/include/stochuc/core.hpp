#pragma once

#include <string>
#include <vector>

namespace stochuc {

/// Coal-fired unit. Fuel use f(p) = a + b p + c p^2 [tce/h], emissions
/// E(p) = l + k p + j p^2 [tCO2/h].
struct ThermalUnit {
    std::string id;
    double a = 0.0, b = 0.0, c = 0.0;
    double l = 0.0, k = 0.0, j = 0.0;
    double p_min = 0.0, p_max = 0.0;
    double ramp_up = 1.0, ramp_down = 1.0;
    double startup_cost = 0.0, shutdown_cost = 0.0;
    int min_up = 1, min_down = 1;

    /// Largest change allowed across a startup or shutdown period.
    [[nodiscard]] double startup_ramp() const { return 0.5 * (p_min + p_max); }
    [[nodiscard]] double shutdown_ramp() const { return startup_ramp(); }
};

struct BatteryParams {
    double capacity = 1.0;       // MWh
    double charge_limit = 0.0;   // MW
    double release_limit = 0.0;  // MW
    double eta_charge = 1.0;
    double eta_release = 1.0;    // energy drawn per period is release * dt / eta_release
    double soc_min = 0.0, soc_max = 1.0;
    double initial_energy = 0.0;  // MWh before the first period

    [[nodiscard]] double energy_min() const { return soc_min * capacity; }
    [[nodiscard]] double energy_max() const { return soc_max * capacity; }
};

struct CarbonMarketParams {
    double price = 0.0;             // money per tCO2
    double eta_correction = 1.0;    // free-allocation correction factor
    double allocation_coeff = 0.0;  // tCO2 allowance per MWh generated
};

struct SystemConfig {
    std::vector<ThermalUnit> units;
    BatteryParams battery;
    CarbonMarketParams carbon;
    double coal_price = 0.0;  // money per tce
    std::vector<double> load;  // MW per period
    int horizon = 0;
    double dt = 1.0;  // hours per period
    std::vector<int> initial_state;  // commitment before the first period, one per unit
    double load_shed_penalty = 1e5;  // money per MWh of unserved or surplus energy

    [[nodiscard]] int num_units() const { return static_cast<int>(units.size()); }
};

struct Scenario {
    double probability = 0.0;
    std::vector<double> wind_cap, solar_cap, hydro_cap;
};

struct ScenarioSet {
    std::vector<Scenario> scenarios;

    [[nodiscard]] int size() const { return static_cast<int>(scenarios.size()); }
    [[nodiscard]] std::vector<double> probabilities() const;
    /// Probability-weighted mean scenario with probability 1.
    [[nodiscard]] ScenarioSet expected_value() const;
};

/// First-stage decisions: on[i][t] in {0,1}. The cost matrices hold the
/// start/stop cost epigraph values when the schedule comes from a solve.
struct CommitmentSchedule {
    std::vector<std::vector<int>> on;
    std::vector<int> initial_state;
    std::vector<std::vector<double>> startup_cost;
    std::vector<std::vector<double>> shutdown_cost;

    [[nodiscard]] int num_units() const { return static_cast<int>(on.size()); }
    [[nodiscard]] int horizon() const { return on.empty() ? 0 : static_cast<int>(on.front().size()); }
    [[nodiscard]] int previous(int unit, int t) const {
        return t == 0 ? initial_state[static_cast<std::size_t>(unit)]
                      : on[static_cast<std::size_t>(unit)][static_cast<std::size_t>(t - 1)];
    }
};

struct CostBreakdown {
    double fuel = 0.0;
    double carbon = 0.0;
    double emissions = 0.0;   // tCO2
    double allowance = 0.0;   // tCO2
    double penalty = 0.0;     // load-shedding / surplus slack cost
};

/// Second-stage decisions for one scenario.
struct ScenarioDispatch {
    std::vector<std::vector<double>> p_thermal;  // [unit][t]
    std::vector<double> p_wind, p_solar, p_hydro;
    std::vector<double> p_charge, p_release, energy;
    std::vector<double> shed, surplus;  // zero unless penalty slacks are modelled
    CostBreakdown cost;

    [[nodiscard]] static ScenarioDispatch zeros(int units, int horizon);
};

struct DispatchSolution {
    std::vector<ScenarioDispatch> scenarios;
};

struct Violation {
    std::string path;
    std::string rule;
};

using ValidationReport = std::vector<Violation>;

[[nodiscard]] ValidationReport validate_config(const SystemConfig& config);
[[nodiscard]] ValidationReport validate_scenarios(const ScenarioSet& set, int horizon);

/// coal_price * (a + b p + c p^2); throws std::invalid_argument for negative power.
[[nodiscard]] double fuel_cost(const ThermalUnit& unit, double power, double coal_price);
/// l + k p + j p^2; throws std::invalid_argument for negative power.
[[nodiscard]] double emissions(const ThermalUnit& unit, double power);

/// Start-up plus shut-down cost of a schedule; the initial state supplies t = -1.
[[nodiscard]] double uc_cost(const CommitmentSchedule& schedule, const std::vector<ThermalUnit>& units);
/// Number of 0->1 and 1->0 transitions over all units, including from the initial state.
[[nodiscard]] int start_stop_cycles(const CommitmentSchedule& schedule);

}  // namespace stochuc
