#include "stochuc/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace stochuc {

namespace {

std::size_t sz(int v) { return static_cast<std::size_t>(v); }

}  // namespace

double carbon_cost(const ScenarioDispatch& d, const CommitmentSchedule& s, const std::vector<ThermalUnit>& units,
                   const CarbonMarketParams& carbon, double dt) {
    double emitted = 0.0, generated = 0.0;
    for (std::size_t i = 0; i < units.size(); ++i)
        for (std::size_t t = 0; t < d.p_thermal[i].size(); ++t) {
            const double p = d.p_thermal[i][t];
            generated += p * dt;
            if (s.on[i][t] == 1) emitted += emissions(units[i], p) * dt;
        }
    return carbon.price * (emitted - carbon.eta_correction * carbon.allocation_coeff * generated);
}

double expected_cost(const std::vector<double>& costs, const std::vector<double>& probabilities) {
    if (costs.size() != probabilities.size()) throw std::invalid_argument("expected_cost: size mismatch");
    double psum = 0.0, total = 0.0;
    for (std::size_t w = 0; w < costs.size(); ++w) {
        psum += probabilities[w];
        total += probabilities[w] * costs[w];
    }
    if (std::abs(psum - 1.0) > 1e-9) throw std::invalid_argument("expected_cost: probabilities do not sum to 1");
    return total;
}

CostReport make_report(const CommitmentSchedule& s, const DispatchSolution& d, const SystemConfig& cfg,
                       const ScenarioSet& set, const std::vector<UnitCurves>& curves, double model_objective) {
    CostReport r;
    r.uc_cost = uc_cost(s, cfg.units);
    r.start_stop_cycles = start_stop_cycles(s);
    r.model_objective = model_objective;
    r.linearization_bound = linearization_bound(s, cfg, curves);
    const auto probs = set.probabilities();
    std::vector<double> fuel, carbon, penalty, emitted, allowance;
    for (std::size_t w = 0; w < d.scenarios.size(); ++w) {
        const auto& c = d.scenarios[w].cost;
        r.scenarios.push_back(c);
        fuel.push_back(c.fuel);
        carbon.push_back(c.carbon);
        penalty.push_back(c.penalty);
        emitted.push_back(c.emissions);
        allowance.push_back(c.allowance);
        if (c.penalty > 0.0) r.penalized_scenarios.push_back(static_cast<int>(w));
    }
    r.expected_fuel = expected_cost(fuel, probs);
    r.expected_carbon = expected_cost(carbon, probs);
    r.expected_penalty = expected_cost(penalty, probs);
    r.expected_emissions = expected_cost(emitted, probs);
    r.expected_allowance = expected_cost(allowance, probs);
    r.total = r.uc_cost + r.expected_fuel + r.expected_carbon + r.expected_penalty;
    return r;
}

Solved solve_instance(const SystemConfig& cfg, const ScenarioSet& set, const StudyOptions& opt) {
    Solved out;
    BuildOptions bo;
    bo.segments = opt.segments;
    bo.penalty_slacks = opt.penalty_slacks;
    out.built = build_model(cfg, set, bo);
    out.milp = solve_milp(out.built.model, opt.solve);
    if (!out.milp.has_incumbent) return out;
    auto [sched, disp] = extract_solution(out.milp.values, out.built.index, cfg, set);
    out.schedule = std::move(sched);
    out.dispatch = std::move(disp);
    out.feasibility = check_feasibility(out.schedule, out.dispatch, cfg, set);
    out.report = make_report(out.schedule, out.dispatch, cfg, set, out.built.curves, out.milp.objective);
    return out;
}

Solved evaluate_schedule(const SystemConfig& cfg, const ScenarioSet& set, const CommitmentSchedule& schedule,
                         const StudyOptions& opt) {
    const int W = set.size();
    std::vector<Solved> parts(sz(W));
    auto job = [&](int w) {
        ScenarioSet one{{set.scenarios[sz(w)]}};
        one.scenarios[0].probability = 1.0;
        BuildOptions bo;
        bo.segments = opt.segments;
        bo.fixed_schedule = schedule;
        bo.penalty_slacks = true;
        auto& p = parts[sz(w)];
        p.built = build_model(cfg, one, bo);
        auto so = opt.solve;
        so.threads = 1;
        p.milp = solve_milp(p.built.model, so);
        if (!p.milp.has_incumbent) return;
        auto [s, d] = extract_solution(p.milp.values, p.built.index, cfg, one);
        p.schedule = std::move(s);
        p.dispatch = std::move(d);
    };
    const int threads = std::max(1, std::min(opt.solve.threads, W));
    if (threads == 1) {
        for (int w = 0; w < W; ++w) job(w);
    } else {
        std::vector<std::thread> pool;
        for (int k = 0; k < threads; ++k)
            pool.emplace_back([&, k] {
                for (int w = k; w < W; w += threads) job(w);
            });
        for (auto& t : pool) t.join();
    }

    Solved out;
    out.schedule = schedule;
    out.built.curves = unit_curves(cfg.units, opt.segments);
    out.milp.status = MilpStatus::Optimal;
    out.milp.has_incumbent = true;
    out.milp.bound = 0.0;
    // Objective of the fixed schedule in the scenario-weighted model: first-stage cost
    // once, second-stage parts weighted by probability.
    double objective = uc_cost(schedule, cfg.units);
    double bound = objective;
    for (int w = 0; w < W; ++w) {
        auto& p = parts[sz(w)];
        if (!p.milp.has_incumbent) {
            out.milp.status = p.milp.status;
            out.milp.has_incumbent = false;
            return out;
        }
        const double first_stage = uc_cost(schedule, cfg.units);
        const double pw = set.scenarios[sz(w)].probability;
        objective += pw * (p.milp.objective - first_stage);
        bound += pw * (p.milp.bound - first_stage);
        out.milp.nodes += p.milp.nodes;
        out.milp.lp_iterations += p.milp.lp_iterations;
        if (p.milp.status != MilpStatus::Optimal) out.milp.status = p.milp.status;
        out.dispatch.scenarios.push_back(std::move(p.dispatch.scenarios.front()));
    }
    out.milp.objective = objective;
    out.milp.bound = bound;
    out.milp.gap = relative_gap(objective, bound);
    out.feasibility = check_feasibility(out.schedule, out.dispatch, cfg, set);
    out.report = make_report(out.schedule, out.dispatch, cfg, set, out.built.curves, objective);
    return out;
}

Comparison compare_deterministic(const SystemConfig& cfg, const ScenarioSet& set, const StudyOptions& opt) {
    Comparison c;
    auto sopt = opt;
    sopt.penalty_slacks = true;
    c.stochastic = solve_instance(cfg, set, sopt);
    if (!c.stochastic.ok()) throw std::runtime_error("compare_deterministic: stochastic problem has no solution");
    const auto mean = set.expected_value();
    const auto det = solve_instance(cfg, mean, sopt);
    if (!det.ok()) throw std::runtime_error("compare_deterministic: mean-scenario problem has no solution");
    c.deterministic = evaluate_schedule(cfg, set, det.schedule, opt);
    if (!c.deterministic.ok()) throw std::runtime_error("compare_deterministic: schedule evaluation failed");
    c.vss = c.deterministic.report.model_objective - c.stochastic.report.model_objective;
    c.vss_exact = c.deterministic.report.total - c.stochastic.report.total;
    return c;
}

std::vector<SweepRow> carbon_price_sweep(const SystemConfig& cfg, const ScenarioSet& set, std::vector<double> prices,
                                         const StudyOptions& opt) {
    for (double p : prices)
        if (!(p >= 0.0)) throw std::invalid_argument("carbon_price_sweep: prices must be >= 0");
    std::stable_sort(prices.begin(), prices.end());
    std::vector<SweepRow> rows;
    for (double price : prices) {
        SweepRow row;
        row.carbon_price = price;
        try {
            auto c = cfg;
            c.carbon.price = price;
            const auto s = solve_instance(c, set, opt);
            if (!s.ok()) {
                row.error = std::string("no solution: ") + std::string(to_string(s.milp.status));
            } else {
                row.ok = true;
                row.total = s.report.total;
                row.model_objective = s.report.model_objective;
                row.expected_emissions = s.report.expected_emissions;
                row.expected_allowance = s.report.expected_allowance;
                row.uc_cost = s.report.uc_cost;
                row.expected_fuel = s.report.expected_fuel;
                row.expected_carbon = s.report.expected_carbon;
                row.start_stop_cycles = s.report.start_stop_cycles;
            }
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace stochuc
