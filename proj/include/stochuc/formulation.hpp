#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stochuc/core.hpp"
#include "stochuc/milp_model.hpp"
#include "stochuc/piecewise.hpp"

namespace stochuc {

struct BuildOptions {
    int segments = 8;
    /// Fixes every u[i,t] to this schedule (second-stage evaluation of a given commitment).
    std::optional<CommitmentSchedule> fixed_schedule;
    /// Adds penalized shed/surplus slacks to each power balance row.
    bool penalty_slacks = false;
};

/// Positions of the model variables, keyed by their role and indices.
/// Layouts: unit-period arrays are [i * T + t]; scenario-period arrays are
/// [w * T + t]; scenario-unit-period arrays are [(w * N + i) * T + t];
/// segment fills are [((w * N + i) * T + t) * S + k].
struct VariableIndex {
    int units = 0, horizon = 0, scenarios = 0, segments = 0;
    std::vector<int> u, cu, cd;
    std::vector<int> p_g, seg;
    std::vector<int> p_wt, p_pv, p_h, p_ch, p_re, e, y_ch;
    std::vector<int> shed, surplus;  // empty without penalty slacks

    [[nodiscard]] int ut(int i, int t) const { return u[idx_it(i, t)]; }
    [[nodiscard]] int cut(int i, int t) const { return cu[idx_it(i, t)]; }
    [[nodiscard]] int cdt(int i, int t) const { return cd[idx_it(i, t)]; }
    [[nodiscard]] int pg(int w, int i, int t) const { return p_g[idx_wit(w, i, t)]; }
    [[nodiscard]] int segment(int w, int i, int t, int k) const {
        return seg[idx_wit(w, i, t) * static_cast<std::size_t>(segments) + static_cast<std::size_t>(k)];
    }
    [[nodiscard]] static int at(const std::vector<int>& v, int T, int w, int t) {
        return v[static_cast<std::size_t>(w) * static_cast<std::size_t>(T) + static_cast<std::size_t>(t)];
    }
    /// Every index array concatenated; a bijection onto [0, num_variables) for a built model.
    [[nodiscard]] std::vector<int> all() const;

private:
    [[nodiscard]] std::size_t idx_it(int i, int t) const {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(horizon) + static_cast<std::size_t>(t);
    }
    [[nodiscard]] std::size_t idx_wit(int w, int i, int t) const {
        return (static_cast<std::size_t>(w) * static_cast<std::size_t>(units) + static_cast<std::size_t>(i)) *
                   static_cast<std::size_t>(horizon) +
               static_cast<std::size_t>(t);
    }
};

/// Chord approximations of a unit's fuel and emission curves over [p_min, p_max].
struct UnitCurves {
    PiecewiseCurve fuel;
    PiecewiseCurve emission;
    double fuel_error = 0.0;      // max chord error of the fuel curve, tce/h
    double emission_error = 0.0;  // max chord error of the emission curve, tCO2/h
};

[[nodiscard]] std::vector<UnitCurves> unit_curves(const std::vector<ThermalUnit>& units, int segments);

struct BuiltModel {
    MILPModel model;
    VariableIndex index;
    std::vector<UnitCurves> curves;
};

/// Deterministic-equivalent MILP of the two-stage commitment/dispatch problem.
/// Throws std::invalid_argument on an invalid config, mismatched scenario
/// horizon, or segments < 1.
[[nodiscard]] BuiltModel build_model(const SystemConfig& config, const ScenarioSet& scenarios,
                                     const BuildOptions& options = {});

/// Rounds binaries (must lie within 1e-6 of {0,1}) and recomputes every cost
/// component from the exact quadratic curves.
[[nodiscard]] std::pair<CommitmentSchedule, DispatchSolution> extract_solution(const std::vector<double>& values,
                                                                               const VariableIndex& index,
                                                                               const SystemConfig& config,
                                                                               const ScenarioSet& scenarios);

/// Exact per-scenario cost of a dispatch under a schedule.
[[nodiscard]] CostBreakdown scenario_cost(const CommitmentSchedule& schedule, const ScenarioDispatch& dispatch,
                                          const SystemConfig& config);

/// The same cost with the fuel and emission quadratics replaced by their chords.
[[nodiscard]] CostBreakdown scenario_cost_piecewise(const CommitmentSchedule& schedule, const ScenarioDispatch& dispatch,
                                                    const SystemConfig& config, const std::vector<UnitCurves>& curves);

/// Upper bound on |piecewise - exact| of one scenario's fuel plus carbon cost:
/// the sum of per-term chord errors over committed unit-periods.
[[nodiscard]] double linearization_bound(const CommitmentSchedule& schedule, const SystemConfig& config,
                                         const std::vector<UnitCurves>& curves);

}  // namespace stochuc
