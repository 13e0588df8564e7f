#include "stochuc/formulation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stochuc {

namespace {

std::string key(const char* name, std::initializer_list<int> idx) {
    std::string s = name;
    s += '[';
    bool first = true;
    for (int v : idx) {
        if (!first) s += ',';
        s += std::to_string(v);
        first = false;
    }
    s += ']';
    return s;
}

std::size_t sz(int v) { return static_cast<std::size_t>(v); }

}  // namespace

std::vector<int> VariableIndex::all() const {
    std::vector<int> out;
    for (const auto* v : {&u, &cu, &cd, &p_g, &seg, &p_wt, &p_pv, &p_h, &p_ch, &p_re, &e, &y_ch, &shed, &surplus})
        out.insert(out.end(), v->begin(), v->end());
    return out;
}

std::vector<UnitCurves> unit_curves(const std::vector<ThermalUnit>& units, int segments) {
    std::vector<UnitCurves> out;
    out.reserve(units.size());
    for (const auto& u : units) {
        UnitCurves c;
        c.fuel = linearize_quadratic({u.a, u.b, u.c}, u.p_min, u.p_max, segments);
        c.emission = linearize_quadratic({u.l, u.k, u.j}, u.p_min, u.p_max, segments);
        c.fuel_error = chord_error_bound(u.c, u.p_min, u.p_max, segments);
        c.emission_error = chord_error_bound(u.j, u.p_min, u.p_max, segments);
        out.push_back(std::move(c));
    }
    return out;
}

BuiltModel build_model(const SystemConfig& cfg, const ScenarioSet& scenarios, const BuildOptions& opt) {
    if (opt.segments < 1) throw std::invalid_argument("build_model: segments must be >= 1");
    if (const auto r = validate_config(cfg); !r.empty())
        throw std::invalid_argument("build_model: invalid config at " + r.front().path + " (" + r.front().rule + ")");
    if (const auto r = validate_scenarios(scenarios, cfg.horizon); !r.empty())
        throw std::invalid_argument("build_model: invalid scenarios at " + r.front().path + " (" + r.front().rule + ")");

    const int N = cfg.num_units();
    const int T = cfg.horizon;
    const int W = scenarios.size();
    const int S = opt.segments;
    const double dt = cfg.dt;
    const auto& bat = cfg.battery;
    const auto& carbon = cfg.carbon;

    if (opt.fixed_schedule) {
        const auto& fs = *opt.fixed_schedule;
        if (fs.num_units() != N || (N > 0 && fs.horizon() != T))
            throw std::invalid_argument("build_model: fixed schedule shape mismatch");
    }

    BuiltModel out;
    out.curves = unit_curves(cfg.units, S);
    auto& m = out.model;
    auto& ix = out.index;
    ix.units = N;
    ix.horizon = T;
    ix.scenarios = W;
    ix.segments = S;

    // First stage.
    for (int i = 0; i < N; ++i)
        for (int t = 0; t < T; ++t) {
            int v = m.add_binary(key("u", {i, t}));
            m.set_priority(v, 1);
            if (opt.fixed_schedule) {
                const double on = opt.fixed_schedule->on[sz(i)][sz(t)];
                m.set_bounds(v, on, on);
            }
            ix.u.push_back(v);
        }
    for (int i = 0; i < N; ++i)
        for (int t = 0; t < T; ++t) ix.cu.push_back(m.add_continuous(key("Cu", {i, t}), 0.0, kInf, 1.0));
    for (int i = 0; i < N; ++i)
        for (int t = 0; t < T; ++t) ix.cd.push_back(m.add_continuous(key("Cd", {i, t}), 0.0, kInf, 1.0));

    auto prev_u = [&](int i, int t, std::vector<Term>& terms, double coef) -> double {
        // Adds coef * u[i,t-1] to terms, or returns its constant contribution at t = 0.
        if (t > 0) {
            terms.push_back({ix.ut(i, t - 1), coef});
            return 0.0;
        }
        return coef * cfg.initial_state[sz(i)];
    };

    for (int i = 0; i < N; ++i) {
        const auto& unit = cfg.units[sz(i)];
        for (int t = 0; t < T; ++t) {
            // Minimum down time: sum_{k in window} (1 - u_k) >= L (u_{t-1} - u_t).
            if (int L = std::min(unit.min_down, T - t); L > 1) {
                std::vector<Term> terms;
                for (int k = t; k < t + L; ++k) terms.push_back({ix.ut(i, k), -1.0});
                terms.push_back({ix.ut(i, t), static_cast<double>(L)});
                const double c = prev_u(i, t, terms, -static_cast<double>(L));
                m.add_constraint(key("min_down", {i, t}), std::move(terms), Sense::GreaterEqual, -L - c);
            }
            // Minimum up time: sum_{k in window} u_k >= L (u_t - u_{t-1}).
            if (int L = std::min(unit.min_up, T - t); L > 1) {
                std::vector<Term> terms;
                for (int k = t; k < t + L; ++k) terms.push_back({ix.ut(i, k), 1.0});
                terms.push_back({ix.ut(i, t), -static_cast<double>(L)});
                const double c = prev_u(i, t, terms, static_cast<double>(L));
                m.add_constraint(key("min_up", {i, t}), std::move(terms), Sense::GreaterEqual, -c);
            }
            {
                std::vector<Term> terms{{ix.cut(i, t), 1.0}, {ix.ut(i, t), -unit.startup_cost}};
                const double c = prev_u(i, t, terms, unit.startup_cost);
                m.add_constraint(key("startup_cost", {i, t}), std::move(terms), Sense::GreaterEqual, -c);
            }
            {
                std::vector<Term> terms{{ix.cdt(i, t), 1.0}, {ix.ut(i, t), unit.shutdown_cost}};
                const double c = prev_u(i, t, terms, -unit.shutdown_cost);
                m.add_constraint(key("shutdown_cost", {i, t}), std::move(terms), Sense::GreaterEqual, -c);
            }
        }
    }

    // Second stage, one block per scenario.
    const double allowance_rate = carbon.eta_correction * carbon.allocation_coeff;
    for (int w = 0; w < W; ++w) {
        const auto& sc = scenarios.scenarios[sz(w)];
        const double pw = sc.probability * dt;
        for (int i = 0; i < N; ++i) {
            const auto& unit = cfg.units[sz(i)];
            const auto& cv = out.curves[sz(i)];
            for (int t = 0; t < T; ++t) {
                const int p = m.add_continuous(key("p_g", {w, i, t}), 0.0, unit.p_max, -pw * carbon.price * allowance_rate);
                ix.p_g.push_back(p);
                std::vector<Term> link{{p, 1.0}, {ix.ut(i, t), -unit.p_min}};
                for (int k = 0; k < S; ++k) {
                    const double width = cv.fuel.segments() > 0 ? cv.fuel.width(k) : 0.0;
                    const double slope = cv.fuel.segments() > 0
                                             ? cfg.coal_price * cv.fuel.slope(k) + carbon.price * cv.emission.slope(k)
                                             : 0.0;
                    const int d = m.add_continuous(key("seg", {w, i, t, k}), 0.0, width, pw * slope);
                    ix.seg.push_back(d);
                    link.push_back({d, -1.0});
                }
                m.add_cost(ix.ut(i, t), pw * (cfg.coal_price * cv.fuel.y.front() + carbon.price * cv.emission.y.front()));
                m.add_constraint(key("generation_link", {w, i, t}), std::move(link), Sense::Equal, 0.0);
                m.add_constraint(key("generation_max", {w, i, t}), {{p, 1.0}, {ix.ut(i, t), -unit.p_max}},
                                 Sense::LessEqual, 0.0);
            }
        }
        for (int t = 0; t < T; ++t) {
            ix.p_wt.push_back(m.add_continuous(key("p_wt", {w, t}), 0.0, sc.wind_cap[sz(t)]));
            ix.p_pv.push_back(m.add_continuous(key("p_pv", {w, t}), 0.0, sc.solar_cap[sz(t)]));
            ix.p_h.push_back(m.add_continuous(key("p_h", {w, t}), 0.0, sc.hydro_cap[sz(t)]));
            ix.p_ch.push_back(m.add_continuous(key("p_ch", {w, t}), 0.0, bat.charge_limit));
            ix.p_re.push_back(m.add_continuous(key("p_re", {w, t}), 0.0, bat.release_limit));
            ix.e.push_back(m.add_continuous(key("e", {w, t}), bat.energy_min(), bat.energy_max()));
            ix.y_ch.push_back(m.add_binary(key("y_ch", {w, t})));
            if (opt.penalty_slacks) {
                ix.shed.push_back(m.add_continuous(key("shed", {w, t}), 0.0, kInf, pw * cfg.load_shed_penalty));
                ix.surplus.push_back(m.add_continuous(key("surplus", {w, t}), 0.0, kInf, pw * cfg.load_shed_penalty));
            }
        }
        auto at = [&](const std::vector<int>& v, int t) { return VariableIndex::at(v, T, w, t); };

        for (int i = 0; i < N; ++i) {
            const auto& unit = cfg.units[sz(i)];
            const double su = unit.startup_ramp();
            const double sd = unit.shutdown_ramp();
            for (int t = 0; t < T; ++t) {
                const int p = ix.pg(w, i, t);
                if (t == 0) {
                    // The output before the horizon is only known for units that start off.
                    if (cfg.initial_state[sz(i)] == 0)
                        m.add_constraint(key("ramp_up", {w, i, t}), {{p, 1.0}}, Sense::LessEqual, su);
                    continue;
                }
                const int q = ix.pg(w, i, t - 1);
                m.add_constraint(key("ramp_up", {w, i, t}),
                                 {{p, 1.0}, {q, -1.0}, {ix.ut(i, t - 1), su - unit.ramp_up}}, Sense::LessEqual, su);
                m.add_constraint(key("ramp_down", {w, i, t}),
                                 {{q, 1.0}, {p, -1.0}, {ix.ut(i, t), sd - unit.ramp_down}}, Sense::LessEqual, sd);
            }
        }
        for (int t = 0; t < T; ++t) {
            std::vector<Term> bal;
            for (int i = 0; i < N; ++i) bal.push_back({ix.pg(w, i, t), 1.0});
            bal.push_back({at(ix.p_wt, t), 1.0});
            bal.push_back({at(ix.p_pv, t), 1.0});
            bal.push_back({at(ix.p_h, t), 1.0});
            bal.push_back({at(ix.p_re, t), 1.0});
            bal.push_back({at(ix.p_ch, t), -1.0});
            if (opt.penalty_slacks) {
                bal.push_back({at(ix.shed, t), 1.0});
                bal.push_back({at(ix.surplus, t), -1.0});
            }
            m.add_constraint(key("power_balance", {w, t}), std::move(bal), Sense::Equal, cfg.load[sz(t)]);

            m.add_constraint(key("charge_mode", {w, t}), {{at(ix.p_ch, t), 1.0}, {at(ix.y_ch, t), -bat.charge_limit}},
                             Sense::LessEqual, 0.0);
            m.add_constraint(key("release_mode", {w, t}), {{at(ix.p_re, t), 1.0}, {at(ix.y_ch, t), bat.release_limit}},
                             Sense::LessEqual, bat.release_limit);

            std::vector<Term> energy{{at(ix.e, t), 1.0},
                                     {at(ix.p_ch, t), -bat.eta_charge * dt},
                                     {at(ix.p_re, t), dt / bat.eta_release}};
            double rhs = 0.0;
            if (t > 0) energy.push_back({at(ix.e, t - 1), -1.0});
            else rhs = bat.initial_energy;
            m.add_constraint(key("energy_balance", {w, t}), std::move(energy), Sense::Equal, rhs);
        }
    }
    return out;
}

namespace {

int round_binary(double v, const char* what) {
    if (std::abs(v) <= 1e-6) return 0;
    if (std::abs(v - 1.0) <= 1e-6) return 1;
    throw std::invalid_argument(std::string("extract_solution: non-binary value for ") + what);
}

double clamp0(double v) { return v < 0.0 ? 0.0 : v; }

}  // namespace

std::pair<CommitmentSchedule, DispatchSolution> extract_solution(const std::vector<double>& x, const VariableIndex& ix,
                                                                 const SystemConfig& cfg, const ScenarioSet& scenarios) {
    const int N = ix.units, T = ix.horizon, W = ix.scenarios;
    const auto val = [&](int v) { return x.at(sz(v)); };

    CommitmentSchedule s;
    s.initial_state = cfg.initial_state;
    s.on.assign(sz(N), std::vector<int>(sz(T), 0));
    s.startup_cost.assign(sz(N), std::vector<double>(sz(T), 0.0));
    s.shutdown_cost.assign(sz(N), std::vector<double>(sz(T), 0.0));
    for (int i = 0; i < N; ++i)
        for (int t = 0; t < T; ++t) {
            s.on[sz(i)][sz(t)] = round_binary(val(ix.ut(i, t)), "u");
            s.startup_cost[sz(i)][sz(t)] = val(ix.cut(i, t));
            s.shutdown_cost[sz(i)][sz(t)] = val(ix.cdt(i, t));
        }

    DispatchSolution sol;
    for (int w = 0; w < W; ++w) {
        auto d = ScenarioDispatch::zeros(N, T);
        auto at = [&](const std::vector<int>& v, int t) { return val(VariableIndex::at(v, T, w, t)); };
        for (int t = 0; t < T; ++t) {
            for (int i = 0; i < N; ++i) d.p_thermal[sz(i)][sz(t)] = clamp0(val(ix.pg(w, i, t)));
            d.p_wind[sz(t)] = clamp0(at(ix.p_wt, t));
            d.p_solar[sz(t)] = clamp0(at(ix.p_pv, t));
            d.p_hydro[sz(t)] = clamp0(at(ix.p_h, t));
            d.p_charge[sz(t)] = clamp0(at(ix.p_ch, t));
            d.p_release[sz(t)] = clamp0(at(ix.p_re, t));
            d.energy[sz(t)] = at(ix.e, t);
            if (!ix.shed.empty()) {
                d.shed[sz(t)] = clamp0(at(ix.shed, t));
                d.surplus[sz(t)] = clamp0(at(ix.surplus, t));
            }
            round_binary(at(ix.y_ch, t), "y_ch");
        }
        d.cost = scenario_cost(s, d, cfg);
        sol.scenarios.push_back(std::move(d));
    }
    (void)scenarios;
    return {std::move(s), std::move(sol)};
}

namespace {

template <class Fuel, class Emit>
CostBreakdown cost_with(const CommitmentSchedule& s, const ScenarioDispatch& d, const SystemConfig& cfg, Fuel fuel,
                        Emit emit) {
    CostBreakdown c;
    const double dt = cfg.dt;
    for (int i = 0; i < cfg.num_units(); ++i)
        for (int t = 0; t < cfg.horizon; ++t) {
            const double p = d.p_thermal[sz(i)][sz(t)];
            c.allowance += cfg.carbon.eta_correction * cfg.carbon.allocation_coeff * p * dt;
            if (s.on[sz(i)][sz(t)] == 0) continue;
            c.fuel += fuel(i, p) * dt;
            c.emissions += emit(i, p) * dt;
        }
    c.carbon = cfg.carbon.price * (c.emissions - c.allowance);
    for (int t = 0; t < cfg.horizon; ++t) {
        if (!d.shed.empty()) c.penalty += cfg.load_shed_penalty * d.shed[sz(t)] * dt;
        if (!d.surplus.empty()) c.penalty += cfg.load_shed_penalty * d.surplus[sz(t)] * dt;
    }
    return c;
}

}  // namespace

CostBreakdown scenario_cost(const CommitmentSchedule& s, const ScenarioDispatch& d, const SystemConfig& cfg) {
    return cost_with(
        s, d, cfg, [&](int i, double p) { return fuel_cost(cfg.units[sz(i)], p, cfg.coal_price); },
        [&](int i, double p) { return emissions(cfg.units[sz(i)], p); });
}

CostBreakdown scenario_cost_piecewise(const CommitmentSchedule& s, const ScenarioDispatch& d, const SystemConfig& cfg,
                                      const std::vector<UnitCurves>& curves) {
    auto inside = [&](int i, double p) { return std::clamp(p, cfg.units[sz(i)].p_min, cfg.units[sz(i)].p_max); };
    return cost_with(
        s, d, cfg, [&](int i, double p) { return cfg.coal_price * curves[sz(i)].fuel.evaluate(inside(i, p)); },
        [&](int i, double p) { return curves[sz(i)].emission.evaluate(inside(i, p)); });
}

double linearization_bound(const CommitmentSchedule& s, const SystemConfig& cfg, const std::vector<UnitCurves>& curves) {
    double total = 0.0;
    for (int i = 0; i < cfg.num_units(); ++i)
        for (int t = 0; t < cfg.horizon; ++t)
            if (s.on[sz(i)][sz(t)] == 1)
                total += cfg.dt * (cfg.coal_price * curves[sz(i)].fuel_error + cfg.carbon.price * curves[sz(i)].emission_error);
    return total;
}

}  // namespace stochuc
