#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "stochuc/lp.hpp"

namespace stochuc {

std::string_view to_string(LpStatus s) {
    switch (s) {
        case LpStatus::Optimal: return "optimal";
        case LpStatus::Infeasible: return "infeasible";
        case LpStatus::Unbounded: return "unbounded";
        case LpStatus::IterationLimit: return "iteration_limit";
    }
    return "unknown";
}

LpData LpData::from_model(const MILPModel& model) {
    LpData lp;
    lp.num_cols = model.num_variables();
    lp.num_rows = model.num_constraints();
    const auto n = static_cast<std::size_t>(lp.num_cols);
    const auto m = static_cast<std::size_t>(lp.num_rows);
    lp.cost = model.costs();
    lp.objective_constant = model.objective_constant();
    lp.col_lower.resize(n);
    lp.col_upper.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        lp.col_lower[j] = model.variables()[j].lower;
        lp.col_upper[j] = model.variables()[j].upper;
    }
    lp.row_lower.resize(m);
    lp.row_upper.resize(m);

    // Merge duplicate terms row by row into CSR, then transpose.
    std::vector<double> acc(n, 0.0);
    std::vector<int> seen(n, -1);
    lp.row_start.assign(1, 0);
    for (std::size_t r = 0; r < m; ++r) {
        const auto& c = model.constraints()[r];
        std::vector<int> cols;
        for (const auto& t : c.terms) {
            const auto j = static_cast<std::size_t>(t.var);
            if (seen[j] != static_cast<int>(r)) {
                seen[j] = static_cast<int>(r);
                acc[j] = 0.0;
                cols.push_back(t.var);
            }
            acc[j] += t.coef;
        }
        std::sort(cols.begin(), cols.end());
        for (int j : cols) {
            if (acc[static_cast<std::size_t>(j)] == 0.0) continue;
            lp.col_index.push_back(j);
            lp.row_value.push_back(acc[static_cast<std::size_t>(j)]);
        }
        lp.row_start.push_back(static_cast<int>(lp.col_index.size()));
        switch (c.sense) {
            case Sense::LessEqual: lp.row_lower[r] = -kInf; lp.row_upper[r] = c.rhs; break;
            case Sense::GreaterEqual: lp.row_lower[r] = c.rhs; lp.row_upper[r] = kInf; break;
            case Sense::Equal: lp.row_lower[r] = c.rhs; lp.row_upper[r] = c.rhs; break;
        }
    }
    std::vector<int> count(n + 1, 0);
    for (int j : lp.col_index) ++count[static_cast<std::size_t>(j) + 1];
    lp.col_start.assign(n + 1, 0);
    for (std::size_t j = 0; j < n; ++j) lp.col_start[j + 1] = lp.col_start[j] + count[j + 1];
    lp.row_index.resize(lp.col_index.size());
    lp.value.resize(lp.col_index.size());
    std::vector<int> fill(lp.col_start.begin(), lp.col_start.end() - 1);
    for (std::size_t r = 0; r < m; ++r) {
        for (int e = lp.row_start[r]; e < lp.row_start[r + 1]; ++e) {
            const auto j = static_cast<std::size_t>(lp.col_index[static_cast<std::size_t>(e)]);
            const auto slot = static_cast<std::size_t>(fill[j]++);
            lp.row_index[slot] = static_cast<int>(r);
            lp.value[slot] = lp.row_value[static_cast<std::size_t>(e)];
        }
    }
    return lp;
}

SimplexEngine::SimplexEngine(std::shared_ptr<const LpData> data, LpOptions options)
    : data_(std::move(data)), opt_(options), n_(data_->num_cols), m_(data_->num_rows) {
    reset_bounds();
    status_.assign(static_cast<std::size_t>(total()), VarStatus::AtLower);
    head_.resize(static_cast<std::size_t>(m_));
    slot_of_.assign(static_cast<std::size_t>(total()), -1);
    for (int r = 0; r < m_; ++r) {
        head_[static_cast<std::size_t>(r)] = n_ + r;
        slot_of_[static_cast<std::size_t>(n_ + r)] = r;
        status_[static_cast<std::size_t>(n_ + r)] = VarStatus::Basic;
    }
    for (int j = 0; j < n_; ++j) normalize_status(j);
    x_.assign(static_cast<std::size_t>(total()), 0.0);
    d_.assign(static_cast<std::size_t>(total()), 0.0);
    y_.assign(static_cast<std::size_t>(m_), 0.0);
}

void SimplexEngine::reset_bounds() {
    lower_ = data_->col_lower;
    upper_ = data_->col_upper;
    lower_.insert(lower_.end(), data_->row_lower.begin(), data_->row_lower.end());
    upper_.insert(upper_.end(), data_->row_upper.begin(), data_->row_upper.end());
    if (!status_.empty())
        for (int j = 0; j < total(); ++j) normalize_status(j);
}

void SimplexEngine::set_col_bounds(int col, double lower, double upper) {
    lower_.at(static_cast<std::size_t>(col)) = lower;
    upper_.at(static_cast<std::size_t>(col)) = upper;
    normalize_status(col);
}

void SimplexEngine::normalize_status(int j) {
    auto& s = status_[static_cast<std::size_t>(j)];
    if (s == VarStatus::Basic) return;
    const bool lo = std::isfinite(lower(j));
    const bool up = std::isfinite(upper(j));
    if (s == VarStatus::AtLower && !lo) s = up ? VarStatus::AtUpper : VarStatus::AtZero;
    else if (s == VarStatus::AtUpper && !up) s = lo ? VarStatus::AtLower : VarStatus::AtZero;
    else if (s == VarStatus::AtZero && (lo || up)) s = lo ? VarStatus::AtLower : VarStatus::AtUpper;
}

void SimplexEngine::set_basis(const Basis& basis) {
    if (static_cast<int>(basis.size()) != total()) throw std::invalid_argument("basis size mismatch");
    const auto basic = std::count(basis.begin(), basis.end(), VarStatus::Basic);
    if (basic != m_) throw std::invalid_argument("basis must have one basic variable per row");
    status_ = basis;
    std::fill(slot_of_.begin(), slot_of_.end(), -1);
    int p = 0;
    for (int j = 0; j < total(); ++j) {
        if (status_[static_cast<std::size_t>(j)] == VarStatus::Basic) {
            head_[static_cast<std::size_t>(p)] = j;
            slot_of_[static_cast<std::size_t>(j)] = p++;
        } else {
            normalize_status(j);
        }
    }
    factored_ = false;
    degenerate_run_ = 0;
}

double SimplexEngine::nonbasic_value(int j) const {
    switch (status_[static_cast<std::size_t>(j)]) {
        case VarStatus::AtLower: return lower(j);
        case VarStatus::AtUpper: return upper(j);
        default: return 0.0;
    }
}

double SimplexEngine::dot_column(int j, const std::vector<double>& y) const {
    if (j >= n_) return -y[static_cast<std::size_t>(j - n_)];
    double s = 0.0;
    const auto& lp = *data_;
    for (int e = lp.col_start[static_cast<std::size_t>(j)]; e < lp.col_start[static_cast<std::size_t>(j) + 1]; ++e)
        s += lp.value[static_cast<std::size_t>(e)] * y[static_cast<std::size_t>(lp.row_index[static_cast<std::size_t>(e)])];
    return s;
}

void SimplexEngine::load_column(int j, std::vector<double>& dense) const {
    dense.assign(static_cast<std::size_t>(m_), 0.0);
    if (j >= n_) {
        dense[static_cast<std::size_t>(j - n_)] = -1.0;
        return;
    }
    const auto& lp = *data_;
    for (int e = lp.col_start[static_cast<std::size_t>(j)]; e < lp.col_start[static_cast<std::size_t>(j) + 1]; ++e)
        dense[static_cast<std::size_t>(lp.row_index[static_cast<std::size_t>(e)])] = lp.value[static_cast<std::size_t>(e)];
}

void SimplexEngine::refactor() {
    static const double kMinusOne = -1.0;
    const auto& lp = *data_;
    std::vector<int> logical_rows(static_cast<std::size_t>(m_));
    for (int r = 0; r < m_; ++r) logical_rows[static_cast<std::size_t>(r)] = r;
    for (int attempt = 0; attempt < 4; ++attempt) {
        std::vector<SparseColumn> cols(static_cast<std::size_t>(m_));
        for (int p = 0; p < m_; ++p) {
            const int j = head_[static_cast<std::size_t>(p)];
            if (j < n_) {
                const auto b = static_cast<std::size_t>(lp.col_start[static_cast<std::size_t>(j)]);
                const auto e = static_cast<std::size_t>(lp.col_start[static_cast<std::size_t>(j) + 1]);
                cols[static_cast<std::size_t>(p)] = SparseColumn{std::span<const int>(lp.row_index.data() + b, e - b),
                                                                 std::span<const double>(lp.value.data() + b, e - b)};
            } else {
                cols[static_cast<std::size_t>(p)] =
                    SparseColumn{std::span<const int>(&logical_rows[static_cast<std::size_t>(j - n_)], 1),
                                 std::span<const double>(&kMinusOne, 1)};
            }
        }
        const auto sing = factor_.factorize(m_, cols);
        if (sing.positions.empty()) {
            factored_ = true;
            compute_basic_values();
            return;
        }
        // Swap dependent columns for the logicals of the rows left without a pivot.
        for (std::size_t k = 0; k < sing.positions.size() && k < sing.rows.size(); ++k) {
            const int p = sing.positions[k];
            const int out = head_[static_cast<std::size_t>(p)];
            const int in = n_ + sing.rows[k];
            status_[static_cast<std::size_t>(out)] = VarStatus::AtLower;
            normalize_status(out);
            slot_of_[static_cast<std::size_t>(out)] = -1;
            head_[static_cast<std::size_t>(p)] = in;
            status_[static_cast<std::size_t>(in)] = VarStatus::Basic;
            slot_of_[static_cast<std::size_t>(in)] = p;
        }
    }
    throw std::runtime_error("simplex: basis repair failed");
}

void SimplexEngine::compute_basic_values() {
    std::vector<double> rhs(static_cast<std::size_t>(m_), 0.0);
    const auto& lp = *data_;
    for (int j = 0; j < total(); ++j) {
        if (status_[static_cast<std::size_t>(j)] == VarStatus::Basic) continue;
        const double v = nonbasic_value(j);
        x_[static_cast<std::size_t>(j)] = v;
        if (v == 0.0) continue;
        if (j >= n_) {
            rhs[static_cast<std::size_t>(j - n_)] += v;
        } else {
            for (int e = lp.col_start[static_cast<std::size_t>(j)]; e < lp.col_start[static_cast<std::size_t>(j) + 1]; ++e)
                rhs[static_cast<std::size_t>(lp.row_index[static_cast<std::size_t>(e)])] -= lp.value[static_cast<std::size_t>(e)] * v;
        }
    }
    factor_.ftran(rhs);
    for (int p = 0; p < m_; ++p) x_[static_cast<std::size_t>(head_[static_cast<std::size_t>(p)])] = rhs[static_cast<std::size_t>(p)];
}

double SimplexEngine::basic_infeasibility(int j) const {
    const double v = x_[static_cast<std::size_t>(j)];
    if (v < lower(j) - opt_.feasibility_tol) return lower(j) - v;
    if (v > upper(j) + opt_.feasibility_tol) return v - upper(j);
    return 0.0;
}

void SimplexEngine::compute_duals(bool phase_one) {
    std::vector<double> cb(static_cast<std::size_t>(m_), 0.0);
    for (int p = 0; p < m_; ++p) {
        const int j = head_[static_cast<std::size_t>(p)];
        if (phase_one) {
            const double v = x_[static_cast<std::size_t>(j)];
            if (v < lower(j) - opt_.feasibility_tol) cb[static_cast<std::size_t>(p)] = -1.0;
            else if (v > upper(j) + opt_.feasibility_tol) cb[static_cast<std::size_t>(p)] = 1.0;
        } else {
            cb[static_cast<std::size_t>(p)] = cost(j);
        }
    }
    factor_.btran(cb);
    y_ = std::move(cb);
    for (int j = 0; j < total(); ++j) {
        if (status_[static_cast<std::size_t>(j)] == VarStatus::Basic) {
            d_[static_cast<std::size_t>(j)] = 0.0;
            continue;
        }
        d_[static_cast<std::size_t>(j)] = (phase_one ? 0.0 : cost(j)) - dot_column(j, y_);
    }
}

void SimplexEngine::pivot(int entering, int leave_pos, const std::vector<double>& alpha, VarStatus leaving_status) {
    const int leaving = head_[static_cast<std::size_t>(leave_pos)];
    status_[static_cast<std::size_t>(leaving)] = leaving_status;
    slot_of_[static_cast<std::size_t>(leaving)] = -1;
    x_[static_cast<std::size_t>(leaving)] = nonbasic_value(leaving);
    head_[static_cast<std::size_t>(leave_pos)] = entering;
    slot_of_[static_cast<std::size_t>(entering)] = leave_pos;
    status_[static_cast<std::size_t>(entering)] = VarStatus::Basic;
    factor_.update(leave_pos, alpha);
}

LpStatus SimplexEngine::primal_loop() {
    const double ftol = opt_.feasibility_tol;
    const double dtol = opt_.optimality_tol;
    std::vector<double> alpha;
    degenerate_run_ = 0;
    for (;;) {
        if (iterations_ >= opt_.max_iterations) return LpStatus::IterationLimit;
        if (factor_.num_updates() >= opt_.refactor_interval) refactor();

        bool phase_one = false;
        for (int p = 0; p < m_ && !phase_one; ++p)
            phase_one = basic_infeasibility(head_[static_cast<std::size_t>(p)]) > 0.0;
        compute_duals(phase_one);

        const bool bland = degenerate_run_ >= opt_.bland_after;
        int q = -1;
        int dir = 0;
        double best = 0.0;
        for (int j = 0; j < total(); ++j) {
            const auto s = status_[static_cast<std::size_t>(j)];
            if (s == VarStatus::Basic || lower(j) == upper(j)) continue;
            const double dj = d_[static_cast<std::size_t>(j)];
            const bool can_up = s != VarStatus::AtUpper;
            const bool can_down = s != VarStatus::AtLower;
            int this_dir = 0;
            if (dj < -dtol && can_up) this_dir = 1;
            else if (dj > dtol && can_down) this_dir = -1;
            if (this_dir == 0) continue;
            if (bland) {
                q = j;
                dir = this_dir;
                break;
            }
            if (std::abs(dj) > best) {
                best = std::abs(dj);
                q = j;
                dir = this_dir;
            }
        }
        if (q < 0) {
            if (factor_.num_updates() > 0) {
                refactor();
                bool again = false;
                for (int p = 0; p < m_ && !again; ++p)
                    again = basic_infeasibility(head_[static_cast<std::size_t>(p)]) > 0.0;
                if (again != phase_one) continue;
                compute_duals(phase_one);
                bool improvable = false;
                for (int j = 0; j < total() && !improvable; ++j) {
                    const auto s = status_[static_cast<std::size_t>(j)];
                    if (s == VarStatus::Basic || lower(j) == upper(j)) continue;
                    const double dj = d_[static_cast<std::size_t>(j)];
                    improvable = (dj < -dtol && s != VarStatus::AtUpper) || (dj > dtol && s != VarStatus::AtLower);
                }
                if (improvable) continue;
            }
            return phase_one ? LpStatus::Infeasible : LpStatus::Optimal;
        }

        load_column(q, alpha);
        factor_.ftran(alpha);

        // Harris two-pass ratio test; phase one lets infeasible basics travel to their far bound.
        const double range = upper(q) - lower(q);
        double theta_max = range;
        auto limit_of = [&](int p, double& bound) -> double {
            const double a = alpha[static_cast<std::size_t>(p)];
            const int j = head_[static_cast<std::size_t>(p)];
            const double v = x_[static_cast<std::size_t>(j)];
            const double rate = -dir * a;
            if (rate < 0.0) {
                if (phase_one && v < lower(j) - ftol) return kInf;
                bound = lower(j);
                if (phase_one && v > upper(j) + ftol && !std::isfinite(bound)) bound = upper(j);
                if (!std::isfinite(bound)) return kInf;
                return (v - bound) / -rate;
            }
            if (phase_one && v > upper(j) + ftol) return kInf;
            bound = upper(j);
            if (phase_one && v < lower(j) - ftol && !std::isfinite(bound)) bound = lower(j);
            if (!std::isfinite(bound)) return kInf;
            return (bound - v) / rate;
        };
        for (int p = 0; p < m_; ++p) {
            const double a = alpha[static_cast<std::size_t>(p)];
            if (std::abs(a) < opt_.pivot_tol) continue;
            double bound = 0.0;
            const double exact = limit_of(p, bound);
            if (!std::isfinite(exact)) continue;
            const double relaxed = exact + ftol / std::abs(a);
            theta_max = std::min(theta_max, bland ? exact : relaxed);
        }
        if (!std::isfinite(theta_max)) {
            if (!phase_one) return LpStatus::Unbounded;
            refactor();
            continue;
        }
        int leave = -1;
        double leave_bound = 0.0;
        double theta = theta_max;
        if (!(range <= theta_max)) {
            double best_pivot = 0.0;
            double best_ratio = kInf;
            for (int p = 0; p < m_; ++p) {
                const double a = alpha[static_cast<std::size_t>(p)];
                if (std::abs(a) < opt_.pivot_tol) continue;
                double bound = 0.0;
                const double exact = limit_of(p, bound);
                if (!std::isfinite(exact) || exact > theta_max) continue;
                bool take;
                if (bland) {
                    take = exact < best_ratio ||
                           (exact == best_ratio && head_[static_cast<std::size_t>(p)] < head_[static_cast<std::size_t>(leave)]);
                } else {
                    take = std::abs(a) > best_pivot;
                }
                if (take) {
                    best_pivot = std::abs(a);
                    best_ratio = exact;
                    leave = p;
                    leave_bound = bound;
                }
            }
            if (leave < 0) {
                refactor();
                continue;
            }
            theta = std::max(0.0, best_ratio);
        }

        ++iterations_;
        degenerate_run_ = theta < 1e-12 ? degenerate_run_ + 1 : 0;
        x_[static_cast<std::size_t>(q)] += dir * theta;
        for (int p = 0; p < m_; ++p) {
            const double a = alpha[static_cast<std::size_t>(p)];
            if (a != 0.0) x_[static_cast<std::size_t>(head_[static_cast<std::size_t>(p)])] -= dir * a * theta;
        }
        if (leave < 0) {
            status_[static_cast<std::size_t>(q)] = dir > 0 ? VarStatus::AtUpper : VarStatus::AtLower;
            x_[static_cast<std::size_t>(q)] = nonbasic_value(q);
            continue;
        }
        const int leaving = head_[static_cast<std::size_t>(leave)];
        const VarStatus ls = (leave_bound == lower(leaving)) ? VarStatus::AtLower : VarStatus::AtUpper;
        pivot(q, leave, alpha, ls);
        if (opt_.log && iterations_ % 1000 == 0)
            *opt_.log << "primal it=" << iterations_ << (phase_one ? " phase1" : " phase2") << "\n";
    }
}

bool SimplexEngine::dual_feasible() {
    compute_duals(false);
    const double dtol = opt_.optimality_tol;
    bool flipped = false;
    for (int j = 0; j < total(); ++j) {
        const auto s = status_[static_cast<std::size_t>(j)];
        if (s == VarStatus::Basic || lower(j) == upper(j)) continue;
        const double dj = d_[static_cast<std::size_t>(j)];
        if (s == VarStatus::AtLower && dj < -dtol) {
            if (!std::isfinite(upper(j))) return false;
            status_[static_cast<std::size_t>(j)] = VarStatus::AtUpper;
            flipped = true;
        } else if (s == VarStatus::AtUpper && dj > dtol) {
            if (!std::isfinite(lower(j))) return false;
            status_[static_cast<std::size_t>(j)] = VarStatus::AtLower;
            flipped = true;
        } else if (s == VarStatus::AtZero && std::abs(dj) > dtol) {
            return false;
        }
    }
    if (flipped) compute_basic_values();
    return true;
}

LpStatus SimplexEngine::dual_loop() {
    const double dtol = opt_.optimality_tol;
    std::vector<double> rho, alpha, row(static_cast<std::size_t>(total()), 0.0);
    std::vector<char> touched(static_cast<std::size_t>(total()), 0);
    std::vector<int> nz;  // entries of row that may be nonzero
    // Dual steepest-edge weights ||e_p^T B^-1||^2, started at 1 and updated per pivot.
    std::vector<double> weight(static_cast<std::size_t>(m_), 1.0), tau;
    for (;;) {
        if (iterations_ >= opt_.max_iterations) return LpStatus::IterationLimit;
        if (factor_.num_updates() >= opt_.refactor_interval) {
            refactor();
            if (!dual_feasible()) return LpStatus::IterationLimit;
        }
        int leave = -1;
        double worst = 0.0;
        for (int p = 0; p < m_; ++p) {
            const double inf = basic_infeasibility(head_[static_cast<std::size_t>(p)]);
            if (inf == 0.0) continue;
            const double score = inf * inf / weight[static_cast<std::size_t>(p)];
            if (score > worst) {
                worst = score;
                leave = p;
            }
        }
        if (leave < 0) {
            if (factor_.num_updates() > 0) {
                refactor();
                if (!dual_feasible()) return LpStatus::IterationLimit;
                bool again = false;
                for (int p = 0; p < m_ && !again; ++p) again = basic_infeasibility(head_[static_cast<std::size_t>(p)]) > 0.0;
                if (again) continue;
            }
            return LpStatus::Optimal;
        }
        const int jl = head_[static_cast<std::size_t>(leave)];
        const bool to_lower = x_[static_cast<std::size_t>(jl)] < lower(jl);
        const double target = to_lower ? lower(jl) : upper(jl);
        const double delta = x_[static_cast<std::size_t>(jl)] - target;
        const double sigma = to_lower ? -1.0 : 1.0;

        rho.assign(static_cast<std::size_t>(m_), 0.0);
        rho[static_cast<std::size_t>(leave)] = 1.0;
        factor_.btran(rho);

        // Pivot row rho^T [A -I], accumulated row-wise over the nonzeros of rho.
        for (int k : nz) {
            row[static_cast<std::size_t>(k)] = 0.0;
            touched[static_cast<std::size_t>(k)] = 0;
        }
        nz.clear();
        auto touch = [&](int k) {
            if (!touched[static_cast<std::size_t>(k)]) {
                touched[static_cast<std::size_t>(k)] = 1;
                nz.push_back(k);
            }
        };
        const auto& lp = *data_;
        for (int i = 0; i < m_; ++i) {
            const double ri = rho[static_cast<std::size_t>(i)];
            if (ri == 0.0) continue;
            for (int e = lp.row_start[static_cast<std::size_t>(i)]; e < lp.row_start[static_cast<std::size_t>(i) + 1]; ++e) {
                const int k = lp.col_index[static_cast<std::size_t>(e)];
                touch(k);
                row[static_cast<std::size_t>(k)] += ri * lp.row_value[static_cast<std::size_t>(e)];
            }
            touch(n_ + i);
            row[static_cast<std::size_t>(n_ + i)] = -ri;
        }
        // Keep the candidate order independent of rho's sparsity pattern.
        std::sort(nz.begin(), nz.end());
        double theta_max = kInf;
        for (int k : nz) {
            const auto s = status_[static_cast<std::size_t>(k)];
            if (s == VarStatus::Basic || lower(k) == upper(k)) {
                row[static_cast<std::size_t>(k)] = 0.0;
                continue;
            }
            const double ak = row[static_cast<std::size_t>(k)];
            const double abar = sigma * ak;
            const double dk = d_[static_cast<std::size_t>(k)];
            if (s == VarStatus::AtLower && abar > opt_.pivot_tol) theta_max = std::min(theta_max, (dk + dtol) / abar);
            else if (s == VarStatus::AtUpper && abar < -opt_.pivot_tol) theta_max = std::min(theta_max, (dk - dtol) / abar);
            else if (s == VarStatus::AtZero && std::abs(abar) > opt_.pivot_tol)
                theta_max = std::min(theta_max, (std::abs(dk) + dtol) / std::abs(abar));
        }
        if (!std::isfinite(theta_max)) return LpStatus::Infeasible;
        int q = -1;
        double best_pivot = 0.0;
        for (int k : nz) {
            const auto s = status_[static_cast<std::size_t>(k)];
            if (s == VarStatus::Basic || lower(k) == upper(k)) continue;
            const double abar = sigma * row[static_cast<std::size_t>(k)];
            const double dk = d_[static_cast<std::size_t>(k)];
            double ratio;
            if (s == VarStatus::AtLower && abar > opt_.pivot_tol) ratio = dk / abar;
            else if (s == VarStatus::AtUpper && abar < -opt_.pivot_tol) ratio = dk / abar;
            else if (s == VarStatus::AtZero && std::abs(abar) > opt_.pivot_tol) ratio = std::abs(dk) / std::abs(abar);
            else continue;
            if (ratio <= theta_max && std::abs(abar) > best_pivot) {
                best_pivot = std::abs(abar);
                q = k;
            }
        }
        if (q < 0) return LpStatus::Infeasible;

        load_column(q, alpha);
        factor_.ftran(alpha);
        const double aq = alpha[static_cast<std::size_t>(leave)];
        const double ar = row[static_cast<std::size_t>(q)];
        if (std::abs(aq - ar) > 1e-7 * (1.0 + std::abs(ar)) || std::abs(aq) < opt_.pivot_tol) {
            if (factor_.num_updates() == 0) return LpStatus::IterationLimit;
            refactor();
            if (!dual_feasible()) return LpStatus::IterationLimit;
            continue;
        }
        {
            double wr = 0.0;
            for (double v : rho) wr += v * v;
            tau = rho;
            factor_.ftran(tau);
            for (int p = 0; p < m_; ++p) {
                if (p == leave) continue;
                const double ratio = alpha[static_cast<std::size_t>(p)] / aq;
                if (ratio == 0.0) continue;
                auto& w = weight[static_cast<std::size_t>(p)];
                w = std::max(w - 2.0 * ratio * tau[static_cast<std::size_t>(p)] + ratio * ratio * wr, 1e-6);
            }
            weight[static_cast<std::size_t>(leave)] = std::max(wr / (aq * aq), 1e-6);
        }
        const double theta_d = d_[static_cast<std::size_t>(q)] / ar;
        for (int k : nz) {
            if (status_[static_cast<std::size_t>(k)] == VarStatus::Basic) continue;
            d_[static_cast<std::size_t>(k)] -= theta_d * row[static_cast<std::size_t>(k)];
        }
        d_[static_cast<std::size_t>(q)] = 0.0;
        d_[static_cast<std::size_t>(jl)] = -theta_d;

        const double theta_p = delta / aq;
        x_[static_cast<std::size_t>(q)] += theta_p;
        for (int p = 0; p < m_; ++p) {
            const double a = alpha[static_cast<std::size_t>(p)];
            if (a != 0.0) x_[static_cast<std::size_t>(head_[static_cast<std::size_t>(p)])] -= theta_p * a;
        }
        ++iterations_;
        pivot(q, leave, alpha, to_lower ? VarStatus::AtLower : VarStatus::AtUpper);
        if (opt_.log && iterations_ % 1000 == 0) *opt_.log << "dual it=" << iterations_ << "\n";
    }
}

LpStatus SimplexEngine::solve_primal() {
    if (!factored_) refactor();
    else compute_basic_values();
    const auto st = primal_loop();
    if (st == LpStatus::Optimal) compute_duals(false);
    return st;
}

LpStatus SimplexEngine::solve_dual() {
    if (!factored_) refactor();
    else compute_basic_values();
    if (!dual_feasible()) return solve_primal();
    const auto st = dual_loop();
    if (st == LpStatus::Infeasible) return st;
    // Clean up residual dual infeasibilities, or recover from a numerically stalled dual.
    return solve_primal();
}

double SimplexEngine::objective() const {
    double obj = data_->objective_constant;
    for (int j = 0; j < n_; ++j) obj += data_->cost[static_cast<std::size_t>(j)] * x_[static_cast<std::size_t>(j)];
    return obj;
}

std::vector<double> SimplexEngine::primal() const {
    return {x_.begin(), x_.begin() + n_};
}

std::vector<double> SimplexEngine::row_duals() const { return y_; }

LpResult solve_lp(const MILPModel& model, const LpOptions& options) {
    auto data = std::make_shared<const LpData>(LpData::from_model(model));
    SimplexEngine engine(data, options);
    LpResult result;
    // An empty feasible region in a bound pair is detected up front.
    for (const auto& v : model.variables()) {
        if (v.lower > v.upper) {
            result.status = LpStatus::Infeasible;
            return result;
        }
    }
    result.status = engine.solve_primal();
    result.iterations = engine.iterations();
    if (result.status == LpStatus::Optimal) {
        result.primal = engine.primal();
        result.objective = engine.objective();
        result.dual = engine.row_duals();
    }
    return result;
}

bool verify_lp(const MILPModel& model, const LpResult& result, double tol) {
    if (result.status != LpStatus::Optimal) return false;
    const auto& x = result.primal;
    const auto& y = result.dual;
    if (static_cast<int>(x.size()) != model.num_variables() || static_cast<int>(y.size()) != model.num_constraints())
        return false;
    for (int j = 0; j < model.num_variables(); ++j) {
        const auto& v = model.variables()[static_cast<std::size_t>(j)];
        const double xj = x[static_cast<std::size_t>(j)];
        if (xj < v.lower - tol * (1.0 + std::abs(v.lower)) || xj > v.upper + tol * (1.0 + std::abs(v.upper))) return false;
    }
    std::vector<double> reduced = model.costs();
    double dual_obj = model.objective_constant();
    for (int r = 0; r < model.num_constraints(); ++r) {
        const auto& c = model.constraints()[static_cast<std::size_t>(r)];
        const double act = model.row_activity(r, x);
        const double slack_tol = tol * (1.0 + std::abs(c.rhs));
        const double yr = y[static_cast<std::size_t>(r)];
        switch (c.sense) {
            case Sense::LessEqual:
                if (act > c.rhs + slack_tol || yr > tol) return false;
                break;
            case Sense::GreaterEqual:
                if (act < c.rhs - slack_tol || yr < -tol) return false;
                break;
            case Sense::Equal:
                if (std::abs(act - c.rhs) > slack_tol) return false;
                break;
        }
        dual_obj += yr * c.rhs;
        for (const auto& t : c.terms) reduced[static_cast<std::size_t>(t.var)] -= yr * t.coef;
    }
    for (int j = 0; j < model.num_variables(); ++j) {
        const auto& v = model.variables()[static_cast<std::size_t>(j)];
        const double dj = reduced[static_cast<std::size_t>(j)];
        if (dj > 0.0) {
            if (!std::isfinite(v.lower)) {
                if (dj > tol) return false;
                continue;
            }
            dual_obj += dj * v.lower;
        } else if (dj < 0.0) {
            if (!std::isfinite(v.upper)) {
                if (-dj > tol) return false;
                continue;
            }
            dual_obj += dj * v.upper;
        }
    }
    const double primal_obj = model.objective_value(x);
    return std::abs(primal_obj - dual_obj) <= tol * (1.0 + std::abs(primal_obj));
}

}  // namespace stochuc
