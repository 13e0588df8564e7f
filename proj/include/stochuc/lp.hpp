#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string_view>
#include <vector>

#include "stochuc/basis_factor.hpp"
#include "stochuc/milp_model.hpp"

namespace stochuc {

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

[[nodiscard]] std::string_view to_string(LpStatus s);

struct LpOptions {
    double feasibility_tol = 1e-7;
    double optimality_tol = 1e-7;
    double pivot_tol = 1e-9;
    /// Consecutive degenerate pivots before switching to Bland's rule.
    int bland_after = 1000;
    int refactor_interval = 100;
    long max_iterations = 5'000'000;
    std::ostream* log = nullptr;
};

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    double objective = 0.0;
    std::vector<double> primal;  // one per model variable
    std::vector<double> dual;    // one per constraint: d(objective)/d(rhs)
    long iterations = 0;
};

/// Column-compressed LP in bounded form: row_lower <= A x <= row_upper, col bounds on x.
struct LpData {
    int num_cols = 0;
    int num_rows = 0;
    std::vector<int> col_start, row_index;
    std::vector<double> value;
    std::vector<int> row_start, col_index;
    std::vector<double> row_value;
    std::vector<double> cost;
    std::vector<double> col_lower, col_upper;
    std::vector<double> row_lower, row_upper;
    double objective_constant = 0.0;

    /// Relaxes integrality; duplicate terms in a row are summed.
    static LpData from_model(const MILPModel& model);
};

enum class VarStatus : std::uint8_t { Basic, AtLower, AtUpper, AtZero };

/// Status of every structural column followed by every row logical.
using Basis = std::vector<VarStatus>;

/// Bounded revised simplex over `LpData`, with primal and dual algorithms and
/// warm starts from a stored basis. Row r carries a logical s_r = a_r x whose
/// bounds are the row bounds.
class SimplexEngine {
public:
    SimplexEngine(std::shared_ptr<const LpData> data, LpOptions options = {});

    void set_col_bounds(int col, double lower, double upper);
    void reset_bounds();
    void set_basis(const Basis& basis);
    [[nodiscard]] Basis basis() const { return status_; }

    /// Two-phase primal simplex from the current basis.
    LpStatus solve_primal();
    /// Dual simplex from the current basis when it is dual feasible, otherwise primal.
    LpStatus solve_dual();

    [[nodiscard]] double objective() const;
    [[nodiscard]] std::vector<double> primal() const;
    [[nodiscard]] std::vector<double> row_duals() const;
    [[nodiscard]] long iterations() const { return iterations_; }
    [[nodiscard]] const LpData& data() const { return *data_; }

private:
    [[nodiscard]] int total() const { return n_ + m_; }
    [[nodiscard]] double lower(int j) const { return lower_[static_cast<std::size_t>(j)]; }
    [[nodiscard]] double upper(int j) const { return upper_[static_cast<std::size_t>(j)]; }
    [[nodiscard]] double cost(int j) const { return j < n_ ? data_->cost[static_cast<std::size_t>(j)] : 0.0; }
    [[nodiscard]] double dot_column(int j, const std::vector<double>& y) const;
    void load_column(int j, std::vector<double>& dense) const;
    [[nodiscard]] double nonbasic_value(int j) const;
    void normalize_status(int j);

    void refactor();
    void compute_basic_values();
    void compute_duals(bool phase_one);
    [[nodiscard]] double basic_infeasibility(int j) const;
    void pivot(int entering, int leave_pos, const std::vector<double>& alpha, VarStatus leaving_status);

    LpStatus primal_loop();
    LpStatus dual_loop();
    [[nodiscard]] bool dual_feasible();

    std::shared_ptr<const LpData> data_;
    LpOptions opt_;
    int n_ = 0;
    int m_ = 0;
    std::vector<double> lower_, upper_;
    std::vector<VarStatus> status_;
    std::vector<int> head_;      // basis slot -> variable
    std::vector<int> slot_of_;   // variable -> basis slot or -1
    std::vector<double> x_;
    std::vector<double> y_;      // row duals of the current phase
    std::vector<double> d_;      // reduced costs of the current phase
    BasisFactor factor_;
    bool factored_ = false;
    long iterations_ = 0;
    int degenerate_run_ = 0;
};

/// Two-phase primal simplex on the continuous relaxation of `model`.
[[nodiscard]] LpResult solve_lp(const MILPModel& model, const LpOptions& options = {});

/// Primal feasibility plus weak-duality gap check of an optimal result.
[[nodiscard]] bool verify_lp(const MILPModel& model, const LpResult& result, double tol);

}  // namespace stochuc
