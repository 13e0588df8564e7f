#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "stochuc/core.hpp"

namespace stochuc {

/// Constraint families checked on domain values.
enum class Family {
    MinDown,
    MinUp,
    StartupCost,
    ShutdownCost,
    PowerBalance,
    GenerationBounds,
    Ramp,
    WindCap,
    SolarCap,
    HydroCap,
    ChargeLimit,
    ReleaseLimit,
    ChargeReleaseExclusive,
    EnergyBalance,
    StateOfCharge,
};

inline constexpr int kNumFamilies = 15;

[[nodiscard]] std::string_view to_string(Family f);
[[nodiscard]] std::vector<Family> all_families();

/// One violated constraint. Indices not applicable to the family are -1.
struct FeasibilityViolation {
    Family family = Family::PowerBalance;
    int scenario = -1;
    int unit = -1;
    int period = -1;
    double residual = 0.0;  // amount by which the constraint is exceeded

    [[nodiscard]] std::string describe() const;
};

using FeasibilityReport = std::vector<FeasibilityViolation>;

/// Evaluates every constraint family on the given values. A constraint is
/// violated when its residual exceeds tol * max(1, |rhs|). The start/stop cost
/// families are only checked when the schedule carries cost matrices.
[[nodiscard]] FeasibilityReport check_feasibility(const CommitmentSchedule& schedule, const DispatchSolution& dispatch,
                                                  const SystemConfig& config, const ScenarioSet& scenarios,
                                                  double tol = 1e-6);

}  // namespace stochuc
