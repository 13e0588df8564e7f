#pragma once

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

namespace stochuc {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class VarKind { Continuous, Binary };
enum class Sense { LessEqual, Equal, GreaterEqual };

struct Variable {
    std::string name;
    VarKind kind = VarKind::Continuous;
    double lower = 0.0;
    double upper = kInf;
    /// Branching class; fractional binaries in a higher class are branched on first.
    int priority = 0;
};

struct Term {
    int var = 0;
    double coef = 0.0;
};

struct Constraint {
    std::string name;
    std::vector<Term> terms;
    Sense sense = Sense::LessEqual;
    double rhs = 0.0;
};

/// Solver-agnostic sparse linear model, always a minimization.
class MILPModel {
public:
    int add_variable(std::string name, VarKind kind, double lower, double upper, double cost = 0.0);
    int add_continuous(std::string name, double lower, double upper, double cost = 0.0) {
        return add_variable(std::move(name), VarKind::Continuous, lower, upper, cost);
    }
    int add_binary(std::string name, double cost = 0.0) {
        return add_variable(std::move(name), VarKind::Binary, 0.0, 1.0, cost);
    }
    int add_constraint(std::string name, std::vector<Term> terms, Sense sense, double rhs);

    void set_cost(int var, double cost) { costs_.at(static_cast<std::size_t>(var)) = cost; }
    void add_cost(int var, double cost) { costs_.at(static_cast<std::size_t>(var)) += cost; }
    void set_objective_constant(double c) { objective_constant_ = c; }
    void set_bounds(int var, double lower, double upper);
    void set_priority(int var, int priority) { variables_.at(static_cast<std::size_t>(var)).priority = priority; }

    [[nodiscard]] int num_variables() const { return static_cast<int>(variables_.size()); }
    [[nodiscard]] int num_constraints() const { return static_cast<int>(constraints_.size()); }
    [[nodiscard]] int num_binaries() const;
    [[nodiscard]] const std::vector<Variable>& variables() const { return variables_; }
    [[nodiscard]] const std::vector<Constraint>& constraints() const { return constraints_; }
    [[nodiscard]] const std::vector<double>& costs() const { return costs_; }
    [[nodiscard]] double objective_constant() const { return objective_constant_; }

    [[nodiscard]] double objective_value(const std::vector<double>& x) const;
    /// Largest violation of any row or bound at x (0 when feasible).
    [[nodiscard]] double max_violation(const std::vector<double>& x) const;
    [[nodiscard]] double row_activity(int row, const std::vector<double>& x) const;

    /// Human-readable list of structural problems; empty when the model is well formed.
    [[nodiscard]] std::vector<std::string> check() const;

    /// Writes the model in fixed-format MPS (RANGES omitted, BOUNDS per variable).
    void write_mps(std::ostream& out, const std::string& name = "STOCHUC") const;

private:
    std::vector<Variable> variables_;
    std::vector<double> costs_;
    std::vector<Constraint> constraints_;
    double objective_constant_ = 0.0;
};

}  // namespace stochuc
