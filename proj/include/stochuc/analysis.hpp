#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stochuc/core.hpp"
#include "stochuc/feasibility.hpp"
#include "stochuc/formulation.hpp"
#include "stochuc/milp.hpp"

namespace stochuc {

/// lambda * [sum of committed emissions - eta * h * generation], all energies over dt.
[[nodiscard]] double carbon_cost(const ScenarioDispatch& dispatch, const CommitmentSchedule& schedule,
                                 const std::vector<ThermalUnit>& units, const CarbonMarketParams& carbon,
                                 double dt = 1.0);

/// Probability-weighted sum; throws std::invalid_argument when the probabilities
/// do not sum to 1 within 1e-9 or the sizes differ.
[[nodiscard]] double expected_cost(const std::vector<double>& costs, const std::vector<double>& probabilities);

struct StudyOptions {
    SolveOptions solve;
    int segments = 8;
    /// Shed/surplus slacks in the scenario-weighted model as well, so a fixed
    /// schedule evaluated with slacks is a feasible point of the same model.
    bool penalty_slacks = false;
};

struct CostReport {
    double total = 0.0;  // uc_cost + expected fuel, carbon and penalty, exact curves
    double uc_cost = 0.0;
    double expected_fuel = 0.0;
    double expected_carbon = 0.0;
    double expected_penalty = 0.0;
    double expected_emissions = 0.0;  // tCO2
    double expected_allowance = 0.0;  // tCO2
    double model_objective = 0.0;     // the minimized piecewise objective
    double linearization_bound = 0.0;
    std::vector<CostBreakdown> scenarios;
    std::vector<int> penalized_scenarios;  // scenarios that needed shed or surplus energy
    int start_stop_cycles = 0;
};

[[nodiscard]] CostReport make_report(const CommitmentSchedule& schedule, const DispatchSolution& dispatch,
                                     const SystemConfig& config, const ScenarioSet& scenarios,
                                     const std::vector<UnitCurves>& curves, double model_objective);

struct Solved {
    MILPResult milp;
    CommitmentSchedule schedule;
    DispatchSolution dispatch;
    CostReport report;
    FeasibilityReport feasibility;
    BuiltModel built;

    [[nodiscard]] bool ok() const { return milp.has_incumbent; }
};

/// build_model, solve_milp, extract_solution and check_feasibility in one call.
[[nodiscard]] Solved solve_instance(const SystemConfig& config, const ScenarioSet& scenarios,
                                    const StudyOptions& options = {});

/// Costs a fixed schedule under every scenario by re-solving each second stage
/// separately with shed/surplus slacks. Scenario re-solves run on up to
/// options.solve.threads threads and are aggregated by index.
[[nodiscard]] Solved evaluate_schedule(const SystemConfig& config, const ScenarioSet& scenarios,
                                       const CommitmentSchedule& schedule, const StudyOptions& options = {});

struct Comparison {
    Solved stochastic;
    Solved deterministic;  // mean-scenario schedule evaluated under every scenario
    double vss = 0.0;        // deterministic - stochastic, minimized objective
    double vss_exact = 0.0;  // the same difference on exact-curve totals
};

[[nodiscard]] Comparison compare_deterministic(const SystemConfig& config, const ScenarioSet& scenarios,
                                               const StudyOptions& options = {});

struct SweepRow {
    double carbon_price = 0.0;
    bool ok = false;
    std::string error;
    double total = 0.0;
    double model_objective = 0.0;
    double expected_emissions = 0.0;
    double expected_allowance = 0.0;
    double uc_cost = 0.0;
    double expected_fuel = 0.0;
    double expected_carbon = 0.0;
    int start_stop_cycles = 0;
};

/// One full two-stage solve per price, rows ordered by price. A failed row is
/// recorded and the sweep continues.
[[nodiscard]] std::vector<SweepRow> carbon_price_sweep(const SystemConfig& config, const ScenarioSet& scenarios,
                                                       std::vector<double> prices, const StudyOptions& options = {});

}  // namespace stochuc
