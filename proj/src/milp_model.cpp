#include "stochuc/milp_model.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace stochuc {

int MILPModel::add_variable(std::string name, VarKind kind, double lower, double upper, double cost) {
    variables_.push_back(Variable{std::move(name), kind, lower, upper});
    costs_.push_back(cost);
    return static_cast<int>(variables_.size()) - 1;
}

int MILPModel::add_constraint(std::string name, std::vector<Term> terms, Sense sense, double rhs) {
    constraints_.push_back(Constraint{std::move(name), std::move(terms), sense, rhs});
    return static_cast<int>(constraints_.size()) - 1;
}

void MILPModel::set_bounds(int var, double lower, double upper) {
    auto& v = variables_.at(static_cast<std::size_t>(var));
    v.lower = lower;
    v.upper = upper;
}

int MILPModel::num_binaries() const {
    return static_cast<int>(std::count_if(variables_.begin(), variables_.end(),
                                          [](const Variable& v) { return v.kind == VarKind::Binary; }));
}

double MILPModel::objective_value(const std::vector<double>& x) const {
    double obj = objective_constant_;
    for (std::size_t j = 0; j < costs_.size(); ++j) obj += costs_[j] * x.at(j);
    return obj;
}

double MILPModel::row_activity(int row, const std::vector<double>& x) const {
    double s = 0.0;
    for (const auto& t : constraints_.at(static_cast<std::size_t>(row)).terms) s += t.coef * x.at(static_cast<std::size_t>(t.var));
    return s;
}

double MILPModel::max_violation(const std::vector<double>& x) const {
    double worst = 0.0;
    for (std::size_t j = 0; j < variables_.size(); ++j) {
        worst = std::max(worst, variables_[j].lower - x.at(j));
        worst = std::max(worst, x.at(j) - variables_[j].upper);
    }
    for (int r = 0; r < num_constraints(); ++r) {
        const auto& c = constraints_[static_cast<std::size_t>(r)];
        const double act = row_activity(r, x);
        switch (c.sense) {
            case Sense::LessEqual: worst = std::max(worst, act - c.rhs); break;
            case Sense::GreaterEqual: worst = std::max(worst, c.rhs - act); break;
            case Sense::Equal: worst = std::max(worst, std::abs(act - c.rhs)); break;
        }
    }
    return worst;
}

std::vector<std::string> MILPModel::check() const {
    std::vector<std::string> problems;
    const int n = num_variables();
    for (int j = 0; j < n; ++j) {
        const auto& v = variables_[static_cast<std::size_t>(j)];
        if (std::isnan(v.lower) || std::isnan(v.upper) || v.lower > v.upper)
            problems.push_back("variable " + v.name + ": lower > upper");
        if (v.kind == VarKind::Binary && (v.lower < 0.0 || v.upper > 1.0))
            problems.push_back("variable " + v.name + ": binary bounds outside [0,1]");
        if (!std::isfinite(costs_[static_cast<std::size_t>(j)]))
            problems.push_back("variable " + v.name + ": non-finite cost");
    }
    for (const auto& c : constraints_) {
        if (!std::isfinite(c.rhs)) problems.push_back("constraint " + c.name + ": non-finite rhs");
        for (const auto& t : c.terms) {
            if (t.var < 0 || t.var >= n) problems.push_back("constraint " + c.name + ": unknown variable index");
            else if (!std::isfinite(t.coef)) problems.push_back("constraint " + c.name + ": non-finite coefficient");
        }
    }
    return problems;
}

void MILPModel::write_mps(std::ostream& out, const std::string& name) const {
    auto row_name = [](int r) { return "R" + std::to_string(r); };
    auto col_name = [](int j) { return "C" + std::to_string(j); };
    out << "NAME          " << name << "\n";
    out << "ROWS\n N  OBJ\n";
    for (int r = 0; r < num_constraints(); ++r) {
        const char* s = "L";
        if (constraints_[static_cast<std::size_t>(r)].sense == Sense::Equal) s = "E";
        if (constraints_[static_cast<std::size_t>(r)].sense == Sense::GreaterEqual) s = "G";
        out << " " << s << "  " << row_name(r) << "\n";
    }
    // Column-major listing.
    std::vector<std::vector<std::pair<int, double>>> cols(static_cast<std::size_t>(num_variables()));
    for (int r = 0; r < num_constraints(); ++r)
        for (const auto& t : constraints_[static_cast<std::size_t>(r)].terms) {
            auto& col = cols[static_cast<std::size_t>(t.var)];
            // Repeated terms in one row are summed; MPS allows one entry per pair.
            if (!col.empty() && col.back().first == r) col.back().second += t.coef;
            else col.emplace_back(r, t.coef);
        }
    out.precision(17);
    out << "COLUMNS\n";
    bool in_int = false;
    int marker = 0;
    for (int j = 0; j < num_variables(); ++j) {
        const bool is_int = variables_[static_cast<std::size_t>(j)].kind == VarKind::Binary;
        if (is_int != in_int) {
            out << "    MARKER" << marker++ << "  'MARKER'  " << (is_int ? "'INTORG'" : "'INTEND'") << "\n";
            in_int = is_int;
        }
        const double c = costs_[static_cast<std::size_t>(j)];
        if (c != 0.0 || cols[static_cast<std::size_t>(j)].empty()) out << "    " << col_name(j) << "  OBJ  " << c << "\n";
        for (const auto& [r, v] : cols[static_cast<std::size_t>(j)]) out << "    " << col_name(j) << "  " << row_name(r) << "  " << v << "\n";
    }
    if (in_int) out << "    MARKER" << marker++ << "  'MARKER'  'INTEND'\n";
    out << "RHS\n";
    for (int r = 0; r < num_constraints(); ++r) {
        const double b = constraints_[static_cast<std::size_t>(r)].rhs;
        if (b != 0.0) out << "    RHS  " << row_name(r) << "  " << b << "\n";
    }
    if (objective_constant_ != 0.0) out << "    RHS  OBJ  " << -objective_constant_ << "\n";
    out << "BOUNDS\n";
    for (int j = 0; j < num_variables(); ++j) {
        const auto& v = variables_[static_cast<std::size_t>(j)];
        const auto cn = col_name(j);
        if (v.kind == VarKind::Binary && v.lower == 0.0 && v.upper == 1.0) {
            out << " BV BND  " << cn << "\n";
            continue;
        }
        if (v.lower == v.upper) {
            out << " FX BND  " << cn << "  " << v.lower << "\n";
            continue;
        }
        if (std::isinf(v.lower) && std::isinf(v.upper)) {
            out << " FR BND  " << cn << "\n";
            continue;
        }
        if (std::isinf(v.lower)) out << " MI BND  " << cn << "\n";
        else if (v.lower != 0.0) out << " LO BND  " << cn << "  " << v.lower << "\n";
        if (!std::isinf(v.upper)) out << " UP BND  " << cn << "  " << v.upper << "\n";
    }
    out << "ENDATA\n";
}

}  // namespace stochuc
