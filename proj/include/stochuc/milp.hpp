#pragma once

#include <iosfwd>
#include <limits>
#include <string_view>
#include <vector>

#include "stochuc/lp.hpp"
#include "stochuc/milp_model.hpp"

namespace stochuc {

enum class MilpStatus { Optimal, Infeasible, Unbounded, GapLimit, NodeLimit, TimeLimit };

[[nodiscard]] std::string_view to_string(MilpStatus s);

enum class Branching { MostFractional, PseudoCost };

struct SolveOptions {
    double mip_gap = 1e-4;
    long node_limit = std::numeric_limits<long>::max();
    double time_limit = std::numeric_limits<double>::infinity();  // seconds
    Branching branching = Branching::MostFractional;
    /// Worker threads for node relaxations. Results do not depend on this.
    int threads = 1;
    /// Nodes taken from the open list per round; part of the search definition.
    int batch_size = 8;
    double integrality_tol = 1e-6;
    /// Rounding-and-resolve heuristic at the root and every this many nodes (0 disables).
    long heuristic_every = 20;
    /// Progress lines every this many nodes (0 disables periodic lines).
    long log_every = 100;
    std::ostream* log = nullptr;
    LpOptions lp;
};

struct MILPResult {
    MilpStatus status = MilpStatus::Infeasible;
    bool has_incumbent = false;
    std::vector<double> values;
    double objective = std::numeric_limits<double>::infinity();
    double bound = -std::numeric_limits<double>::infinity();
    double gap = std::numeric_limits<double>::infinity();
    long nodes = 0;
    long lp_iterations = 0;
};

/// Relative gap (objective - bound) / max(1, |objective|).
[[nodiscard]] double relative_gap(double objective, double bound);

/// LP-based branch-and-bound over the binary variables. Depth-first until the
/// first incumbent, best-bound afterwards; node relaxations are warm-started
/// with the dual simplex from the parent basis.
[[nodiscard]] MILPResult solve_milp(const MILPModel& model, const SolveOptions& options = {});

/// Enumerates every binary assignment and solves the continuous restriction of each.
/// Throws std::invalid_argument when the model has more than max_binaries binaries.
[[nodiscard]] MILPResult brute_force_milp(const MILPModel& model, int max_binaries = 16, const LpOptions& lp = {});

}  // namespace stochuc
