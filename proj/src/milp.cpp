#include "stochuc/milp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <memory>
#include <ostream>
#include <stdexcept>
#include <thread>
#include <unordered_set>

namespace stochuc {

std::string_view to_string(MilpStatus s) {
    switch (s) {
        case MilpStatus::Optimal: return "optimal";
        case MilpStatus::Infeasible: return "infeasible";
        case MilpStatus::Unbounded: return "unbounded";
        case MilpStatus::GapLimit: return "gap_limit";
        case MilpStatus::NodeLimit: return "node_limit";
        case MilpStatus::TimeLimit: return "time_limit";
    }
    return "unknown";
}

double relative_gap(double objective, double bound) {
    if (!std::isfinite(objective)) return std::numeric_limits<double>::infinity();
    return std::max(0.0, objective - bound) / std::max(1.0, std::abs(objective));
}

namespace {

struct Fixing {
    int var;
    double value;
};

struct Node {
    long id = 0;
    int depth = 0;
    double bound = -kInf;
    std::vector<Fixing> fixings;
    std::shared_ptr<const Basis> basis;  // parent's optimal basis, null at the root
    int branch_var = -1;                 // variable fixed last, for pseudo-costs
    int branch_dir = 0;
    double parent_frac = 0.0;
};

struct NodeOutcome {
    LpStatus status = LpStatus::Infeasible;
    double objective = 0.0;
    std::vector<double> x;
    std::shared_ptr<const Basis> basis;
    long iterations = 0;
};

NodeOutcome solve_node(const std::shared_ptr<const LpData>& data, const LpOptions& lp, const Node& node) {
    SimplexEngine engine(data, lp);
    for (const auto& f : node.fixings) engine.set_col_bounds(f.var, f.value, f.value);
    NodeOutcome out;
    if (node.basis) {
        engine.set_basis(*node.basis);
        out.status = engine.solve_dual();
    } else {
        out.status = engine.solve_primal();
    }
    out.iterations = engine.iterations();
    if (out.status == LpStatus::Optimal) {
        out.objective = engine.objective();
        out.x = engine.primal();
        out.basis = std::make_shared<const Basis>(engine.basis());
    }
    return out;
}

class BranchAndBound {
public:
    BranchAndBound(const MILPModel& model, const SolveOptions& opt)
        : model_(model), opt_(opt), data_(std::make_shared<const LpData>(LpData::from_model(model))) {
        for (int j = 0; j < model.num_variables(); ++j)
            if (model.variables()[static_cast<std::size_t>(j)].kind == VarKind::Binary) binaries_.push_back(j);
        pc_sum_.assign(static_cast<std::size_t>(model.num_variables()) * 2, 0.0);
        pc_count_.assign(static_cast<std::size_t>(model.num_variables()) * 2, 0);
        rows_of_.resize(static_cast<std::size_t>(model.num_variables()));
        for (int r = 0; r < model.num_constraints(); ++r)
            for (const auto& t : model.constraints()[static_cast<std::size_t>(r)].terms)
                rows_of_[static_cast<std::size_t>(t.var)].push_back(r);
    }

    MILPResult run();

private:
    [[nodiscard]] bool prunable(double bound) const {
        if (!result_.has_incumbent) return false;
        return bound >= result_.objective - opt_.mip_gap * std::max(1.0, std::abs(result_.objective)) - 1e-12 * std::max(1.0, std::abs(result_.objective));
    }
    [[nodiscard]] double fractionality(double v) const { return std::abs(v - std::round(v)); }
    [[nodiscard]] int choose_branch(const std::vector<double>& x) const;
    [[nodiscard]] bool fits(int j, const std::vector<double>& x) const;
    void shift_free_binaries(std::vector<double>& x) const;
    bool try_rounding(const std::vector<double>& x);
    void fix_and_resolve(const Node& node, const NodeOutcome& out);
    void offer(std::vector<double> x, double objective);
    void polish();
    [[nodiscard]] double open_bound() const;
    void log_line(const char* tag) const;
    std::vector<Node> take_batch();

    const MILPModel& model_;
    SolveOptions opt_;
    std::shared_ptr<const LpData> data_;
    std::vector<int> binaries_;
    std::vector<std::vector<int>> rows_of_;
    std::vector<Node> open_;
    std::unordered_set<std::string> tried_;
    MILPResult result_;
    long next_id_ = 0;
    std::vector<double> pc_sum_;
    std::vector<int> pc_count_;
};

int BranchAndBound::choose_branch(const std::vector<double>& x) const {
    int best = -1;
    int best_priority = std::numeric_limits<int>::min();
    double best_score = -1.0;
    for (int j : binaries_) {
        const double v = x[static_cast<std::size_t>(j)];
        const int priority = model_.variables()[static_cast<std::size_t>(j)].priority;
        if (priority < best_priority) continue;
        const double f = fractionality(v);
        if (f <= opt_.integrality_tol) continue;
        double score = f;
        if (opt_.branching == Branching::PseudoCost) {
            const auto k = static_cast<std::size_t>(j) * 2;
            const double down = pc_count_[k] ? pc_sum_[k] / pc_count_[k] : 1.0;
            const double up = pc_count_[k + 1] ? pc_sum_[k + 1] / pc_count_[k + 1] : 1.0;
            const double frac = v - std::floor(v);
            score = std::max(down * frac, 1e-6) * std::max(up * (1.0 - frac), 1e-6);
        }
        if (priority > best_priority || score > best_score) {
            best_priority = priority;
            best_score = score;
            best = j;
        }
    }
    return best;
}

// True when every row containing variable j holds at x.
bool BranchAndBound::fits(int j, const std::vector<double>& x) const {
    const double tol = opt_.lp.feasibility_tol;
    for (int r : rows_of_[static_cast<std::size_t>(j)]) {
        const auto& c = model_.constraints()[static_cast<std::size_t>(r)];
        const double act = model_.row_activity(r, x);
        const double slack = tol * (1.0 + std::abs(c.rhs));
        if ((c.sense != Sense::GreaterEqual && act > c.rhs + slack) ||
            (c.sense != Sense::LessEqual && act < c.rhs - slack))
            return false;
    }
    return true;
}

// Moves fractional zero-cost binaries to an integral value when their rows
// allow it. The objective is unchanged, so x stays an optimal relaxation point
// and branching only sees binaries that actually bind.
void BranchAndBound::shift_free_binaries(std::vector<double>& x) const {
    for (int j : binaries_) {
        const auto& var = model_.variables()[static_cast<std::size_t>(j)];
        double& v = x[static_cast<std::size_t>(j)];
        if (model_.costs()[static_cast<std::size_t>(j)] != 0.0 || fractionality(v) <= opt_.integrality_tol) continue;
        const double old = v;
        const double first = std::round(old);
        bool placed = false;
        for (double cand : {first, 1.0 - first}) {
            if (cand < var.lower || cand > var.upper) continue;
            v = cand;
            if (fits(j, x)) {
                placed = true;
                break;
            }
        }
        if (!placed) v = old;
    }
}

// Rounds each fractional binary to a value that keeps every row it appears in
// satisfied with the other values unchanged.
bool BranchAndBound::try_rounding(const std::vector<double>& x0) {
    std::vector<double> x = x0;
    for (int j : binaries_) {
        const double v = x[static_cast<std::size_t>(j)];
        if (fractionality(v) <= opt_.integrality_tol) {
            x[static_cast<std::size_t>(j)] = std::round(v);
            continue;
        }
        const double first = std::round(v);
        const auto& var = model_.variables()[static_cast<std::size_t>(j)];
        bool placed = false;
        for (double cand : {first, 1.0 - first}) {
            if (cand < var.lower || cand > var.upper) continue;
            x[static_cast<std::size_t>(j)] = cand;
            if (fits(j, x)) {
                placed = true;
                break;
            }
        }
        if (!placed) return false;
    }
    const double obj = model_.objective_value(x);
    if (result_.has_incumbent && obj >= result_.objective) return false;
    offer(std::move(x), obj);
    return true;
}

// Fixes the binaries of the highest branching class at rounded relaxation
// values and re-solves, then does the same for each lower class in turn.
// Nearest rounding is tried first, then rounding the top class up.
void BranchAndBound::fix_and_resolve(const Node& node, const NodeOutcome& out) {
    std::vector<int> classes;
    for (int j : binaries_) classes.push_back(model_.variables()[static_cast<std::size_t>(j)].priority);
    std::sort(classes.begin(), classes.end(), std::greater<>());
    classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
    for (const bool up : {false, true}) {
        // Skip top-class roundings that were already tried.
        std::vector<char> key;
        for (int j : binaries_) {
            if (model_.variables()[static_cast<std::size_t>(j)].priority != classes[0]) continue;
            const double v = out.x[static_cast<std::size_t>(j)];
            key.push_back(up && fractionality(v) > opt_.integrality_tol ? 1 : static_cast<char>(std::round(v)));
        }
        if (!tried_.insert(std::string(key.begin(), key.end())).second) continue;
        Node fixed;
        fixed.fixings = node.fixings;
        fixed.basis = out.basis;
        std::vector<double> x = out.x;
        bool failed = false;
        for (std::size_t c = 0; c < classes.size(); ++c) {
            bool changed = false;
            for (int j : binaries_) {
                if (model_.variables()[static_cast<std::size_t>(j)].priority != classes[c]) continue;
                const double v = x[static_cast<std::size_t>(j)];
                const bool frac = fractionality(v) > opt_.integrality_tol;
                changed = changed || frac;
                fixed.fixings.push_back({j, up && c == 0 && frac ? 1.0 : std::round(v)});
            }
            if (!changed && c > 0) continue;
            auto res = solve_node(data_, opt_.lp, fixed);
            result_.lp_iterations += res.iterations;
            if (res.status != LpStatus::Optimal || (result_.has_incumbent && res.objective >= result_.objective)) {
                failed = true;
                break;
            }
            x = std::move(res.x);
            fixed.basis = res.basis;
            shift_free_binaries(x);
            if (choose_branch(x) < 0) {
                offer(std::move(x), model_.objective_value(x));
                return;
            }
        }
        if (failed && !up) continue;
    }
}

void BranchAndBound::offer(std::vector<double> x, double objective) {
    if (result_.has_incumbent && objective >= result_.objective) return;
    for (int j : binaries_) x[static_cast<std::size_t>(j)] = std::round(x[static_cast<std::size_t>(j)]);
    result_.has_incumbent = true;
    result_.objective = objective;
    result_.values = std::move(x);
    log_line("incumbent");
}

// Re-solves the continuous part with every binary fixed at its rounded value,
// so the reported point satisfies the rows at exactly integral binaries.
void BranchAndBound::polish() {
    Node fixed;
    for (int j : binaries_) fixed.fixings.push_back({j, result_.values[static_cast<std::size_t>(j)]});
    auto out = solve_node(data_, opt_.lp, fixed);
    result_.lp_iterations += out.iterations;
    if (out.status != LpStatus::Optimal) return;
    for (int j : binaries_) out.x[static_cast<std::size_t>(j)] = result_.values[static_cast<std::size_t>(j)];
    result_.values = std::move(out.x);
    result_.objective = model_.objective_value(result_.values);
}

double BranchAndBound::open_bound() const {
    double b = result_.has_incumbent ? result_.objective : kInf;
    for (const auto& n : open_) b = std::min(b, n.bound);
    return b;
}

void BranchAndBound::log_line(const char* tag) const {
    if (!opt_.log) return;
    char buf[256];
    const double bound = open_bound();
    std::snprintf(buf, sizeof buf, "bnb %s node=%ld open=%zu incumbent=%.10g bound=%.10g gap=%.3e\n", tag,
                  result_.nodes, open_.size(), result_.has_incumbent ? result_.objective : kInf, bound,
                  relative_gap(result_.objective, bound));
    *opt_.log << buf;
}

std::vector<Node> BranchAndBound::take_batch() {
    // Depth-first until an incumbent exists, best-bound afterwards. Deeper nodes
    // win bound ties so plateaus are searched like a dive; ids settle the rest.
    const bool dive = !result_.has_incumbent;
    auto better = [dive](const Node& a, const Node& b) {
        if (dive) {
            if (a.depth != b.depth) return a.depth > b.depth;
            if (a.bound != b.bound) return a.bound < b.bound;
            return a.id < b.id;
        }
        if (a.bound != b.bound) return a.bound < b.bound;
        if (a.depth != b.depth) return a.depth > b.depth;
        return a.id < b.id;
    };
    // The dive follows one path at a time.
    const std::size_t width = dive ? 1 : static_cast<std::size_t>(std::max(1, opt_.batch_size));
    const auto k = std::min<std::size_t>(open_.size(), width);
    std::partial_sort(open_.begin(), open_.begin() + static_cast<std::ptrdiff_t>(k), open_.end(), better);
    std::vector<Node> batch(std::make_move_iterator(open_.begin()),
                            std::make_move_iterator(open_.begin() + static_cast<std::ptrdiff_t>(k)));
    open_.erase(open_.begin(), open_.begin() + static_cast<std::ptrdiff_t>(k));
    return batch;
}

MILPResult BranchAndBound::run() {
    const auto start = std::chrono::steady_clock::now();
    for (const auto& v : model_.variables())
        if (v.lower > v.upper) return result_;

    Node root;
    root.id = next_id_++;
    open_.push_back(std::move(root));
    bool unbounded = false;
    MilpStatus limit = MilpStatus::Optimal;

    while (!open_.empty()) {
        if (result_.nodes >= opt_.node_limit) {
            limit = MilpStatus::NodeLimit;
            break;
        }
        const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (elapsed > opt_.time_limit) {
            limit = MilpStatus::TimeLimit;
            break;
        }
        if (result_.has_incumbent && relative_gap(result_.objective, open_bound()) <= opt_.mip_gap) break;

        auto batch = take_batch();
        std::vector<NodeOutcome> outcomes(batch.size());
        const int threads = std::max(1, std::min<int>(opt_.threads, static_cast<int>(batch.size())));
        if (threads == 1) {
            for (std::size_t b = 0; b < batch.size(); ++b)
                if (!prunable(batch[b].bound)) outcomes[b] = solve_node(data_, opt_.lp, batch[b]);
        } else {
            std::vector<std::thread> pool;
            for (int w = 0; w < threads; ++w)
                pool.emplace_back([&, w] {
                    for (std::size_t b = static_cast<std::size_t>(w); b < batch.size(); b += static_cast<std::size_t>(threads))
                        if (!prunable(batch[b].bound)) outcomes[b] = solve_node(data_, opt_.lp, batch[b]);
                });
            for (auto& t : pool) t.join();
        }

        for (std::size_t b = 0; b < batch.size(); ++b) {
            auto& node = batch[b];
            auto& out = outcomes[b];
            ++result_.nodes;
            result_.lp_iterations += out.iterations;
            if (prunable(node.bound) || out.status == LpStatus::Infeasible) continue;
            if (out.status == LpStatus::Unbounded) {
                unbounded = true;
                continue;
            }
            if (out.status != LpStatus::Optimal) {
                // Iteration limit on a relaxation: keep the parent's bound and give up on the subtree.
                limit = MilpStatus::NodeLimit;
                continue;
            }
            const double bound = std::max(node.bound, out.objective);
            if (node.branch_var >= 0 && std::isfinite(node.bound)) {
                const auto k = static_cast<std::size_t>(node.branch_var) * 2 + (node.branch_dir > 0 ? 1 : 0);
                const double frac = node.branch_dir > 0 ? 1.0 - node.parent_frac : node.parent_frac;
                pc_sum_[k] += (bound - node.bound) / std::max(frac, 1e-6);
                ++pc_count_[k];
            }
            if (prunable(bound)) continue;
            shift_free_binaries(out.x);
            const int j = choose_branch(out.x);
            if (j < 0) {
                offer(std::move(out.x), out.objective);
                continue;
            }
            if (!try_rounding(out.x) && opt_.heuristic_every > 0 &&
                (result_.nodes == 1 || result_.nodes % opt_.heuristic_every == 0))
                fix_and_resolve(node, out);
            if (prunable(bound)) continue;
            const double v = out.x[static_cast<std::size_t>(j)];
            const double frac = v - std::floor(v);
            // Child on the nearer side first so the dive follows the relaxation.
            const double first = frac >= 0.5 ? 1.0 : 0.0;
            for (double value : {first, 1.0 - first}) {
                Node child;
                child.id = next_id_++;
                child.depth = node.depth + 1;
                child.bound = bound;
                child.fixings = node.fixings;
                child.fixings.push_back({j, value});
                child.basis = out.basis;
                child.branch_var = j;
                child.branch_dir = value > 0.5 ? 1 : -1;
                child.parent_frac = frac;
                open_.push_back(std::move(child));
            }
        }
        if (opt_.log_every > 0 && result_.nodes % opt_.log_every < static_cast<long>(batch.size())) log_line("progress");
    }

    if (unbounded && !result_.has_incumbent) {
        result_.status = MilpStatus::Unbounded;
        return result_;
    }
    result_.bound = result_.has_incumbent ? std::min(open_bound(), result_.objective) : open_bound();
    if (!result_.has_incumbent) {
        result_.status = limit == MilpStatus::Optimal ? MilpStatus::Infeasible : limit;
        log_line("done");
        return result_;
    }
    polish();
    result_.bound = std::min(result_.bound, result_.objective);
    result_.gap = relative_gap(result_.objective, result_.bound);
    // A search stopped by a limit reports the limit even when an incumbent exists.
    result_.status = limit == MilpStatus::Optimal || result_.gap <= opt_.mip_gap ? MilpStatus::Optimal : limit;
    log_line("done");
    return result_;
}

}  // namespace

MILPResult solve_milp(const MILPModel& model, const SolveOptions& options) {
    if (options.mip_gap < 0.0) throw std::invalid_argument("solve_milp: mip_gap must be >= 0");
    BranchAndBound bnb(model, options);
    return bnb.run();
}

MILPResult brute_force_milp(const MILPModel& model, int max_binaries, const LpOptions& lp) {
    std::vector<int> bins;
    for (int j = 0; j < model.num_variables(); ++j)
        if (model.variables()[static_cast<std::size_t>(j)].kind == VarKind::Binary) bins.push_back(j);
    if (static_cast<int>(bins.size()) > max_binaries)
        throw std::invalid_argument("brute_force_milp: too many binaries");
    auto data = std::make_shared<const LpData>(LpData::from_model(model));
    MILPResult best;
    bool unbounded = false;
    const unsigned long count = 1UL << bins.size();
    for (unsigned long mask = 0; mask < count; ++mask) {
        SimplexEngine engine(data, lp);
        bool empty = false;
        for (std::size_t b = 0; b < bins.size(); ++b) {
            const double v = (mask >> b) & 1UL ? 1.0 : 0.0;
            const auto& var = model.variables()[static_cast<std::size_t>(bins[b])];
            if (v < var.lower || v > var.upper) empty = true;
            engine.set_col_bounds(bins[b], v, v);
        }
        ++best.nodes;
        if (empty) continue;
        const auto st = engine.solve_primal();
        best.lp_iterations += engine.iterations();
        if (st == LpStatus::Unbounded) unbounded = true;
        if (st != LpStatus::Optimal) continue;
        const double obj = engine.objective();
        if (!best.has_incumbent || obj < best.objective) {
            best.has_incumbent = true;
            best.objective = obj;
            best.values = engine.primal();
        }
    }
    if (unbounded) {
        best.status = MilpStatus::Unbounded;
        best.has_incumbent = false;
        return best;
    }
    if (best.has_incumbent) {
        best.status = MilpStatus::Optimal;
        best.bound = best.objective;
        best.gap = 0.0;
    }
    return best;
}

}  // namespace stochuc
