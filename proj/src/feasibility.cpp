#include "stochuc/feasibility.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace stochuc {

std::string_view to_string(Family f) {
    switch (f) {
        case Family::MinDown: return "min_down";
        case Family::MinUp: return "min_up";
        case Family::StartupCost: return "startup_cost";
        case Family::ShutdownCost: return "shutdown_cost";
        case Family::PowerBalance: return "power_balance";
        case Family::GenerationBounds: return "generation_bounds";
        case Family::Ramp: return "ramp";
        case Family::WindCap: return "wind_cap";
        case Family::SolarCap: return "solar_cap";
        case Family::HydroCap: return "hydro_cap";
        case Family::ChargeLimit: return "charge_limit";
        case Family::ReleaseLimit: return "release_limit";
        case Family::ChargeReleaseExclusive: return "charge_release_exclusive";
        case Family::EnergyBalance: return "energy_balance";
        case Family::StateOfCharge: return "state_of_charge";
    }
    return "unknown";
}

std::vector<Family> all_families() {
    std::vector<Family> out;
    for (int f = 0; f < kNumFamilies; ++f) out.push_back(static_cast<Family>(f));
    return out;
}

std::string FeasibilityViolation::describe() const {
    std::ostringstream os;
    os << to_string(family);
    if (scenario >= 0) os << " scenario=" << scenario;
    if (unit >= 0) os << " unit=" << unit;
    if (period >= 0) os << " period=" << period;
    os << " residual=" << residual;
    return os.str();
}

namespace {

std::size_t sz(int v) { return static_cast<std::size_t>(v); }

class Checker {
public:
    Checker(FeasibilityReport& out, double tol) : out_(out), tol_(tol) {}

    // lhs <= rhs
    void le(Family f, int w, int i, int t, double lhs, double rhs) {
        const double r = lhs - rhs;
        if (r > tol_ * std::max(1.0, std::abs(rhs))) out_.push_back({f, w, i, t, r});
    }
    void ge(Family f, int w, int i, int t, double lhs, double rhs) { le(f, w, i, t, -lhs, -rhs); }
    void eq(Family f, int w, int i, int t, double lhs, double rhs) {
        const double r = std::abs(lhs - rhs);
        if (r > tol_ * std::max(1.0, std::abs(rhs))) out_.push_back({f, w, i, t, r});
    }
    // lo <= v <= hi reported once
    void box(Family f, int w, int i, int t, double v, double lo, double hi) {
        const double below = lo - v;
        const double above = v - hi;
        if (below > tol_ * std::max(1.0, std::abs(lo))) out_.push_back({f, w, i, t, below});
        else if (above > tol_ * std::max(1.0, std::abs(hi))) out_.push_back({f, w, i, t, above});
    }

private:
    FeasibilityReport& out_;
    double tol_;
};

}  // namespace

FeasibilityReport check_feasibility(const CommitmentSchedule& s, const DispatchSolution& dispatch,
                                    const SystemConfig& cfg, const ScenarioSet& scenarios, double tol) {
    const int N = cfg.num_units();
    const int T = cfg.horizon;
    if (s.num_units() != N || (N > 0 && s.horizon() != T) || dispatch.scenarios.size() != scenarios.scenarios.size())
        throw std::invalid_argument("check_feasibility: shape mismatch");

    FeasibilityReport out;
    Checker c(out, tol);
    auto u = [&](int i, int t) { return static_cast<double>(s.on[sz(i)][sz(t)]); };
    auto prev = [&](int i, int t) { return static_cast<double>(s.previous(i, t)); };

    for (int i = 0; i < N; ++i) {
        const auto& unit = cfg.units[sz(i)];
        for (int t = 0; t < T; ++t) {
            {
                const int L = std::min(unit.min_down, T - t);
                double lhs = 0.0;
                for (int k = t; k < t + L; ++k) lhs += 1.0 - u(i, k);
                c.ge(Family::MinDown, -1, i, t, lhs, L * (prev(i, t) - u(i, t)));
            }
            {
                const int L = std::min(unit.min_up, T - t);
                double lhs = 0.0;
                for (int k = t; k < t + L; ++k) lhs += u(i, k);
                c.ge(Family::MinUp, -1, i, t, lhs, L * (u(i, t) - prev(i, t)));
            }
            if (!s.startup_cost.empty()) {
                const double cu = s.startup_cost[sz(i)][sz(t)];
                c.ge(Family::StartupCost, -1, i, t, cu, std::max(0.0, unit.startup_cost * (u(i, t) - prev(i, t))));
            }
            if (!s.shutdown_cost.empty()) {
                const double cd = s.shutdown_cost[sz(i)][sz(t)];
                c.ge(Family::ShutdownCost, -1, i, t, cd, std::max(0.0, unit.shutdown_cost * (prev(i, t) - u(i, t))));
            }
        }
    }

    const auto& bat = cfg.battery;
    for (std::size_t wi = 0; wi < dispatch.scenarios.size(); ++wi) {
        const int w = static_cast<int>(wi);
        const auto& d = dispatch.scenarios[wi];
        const auto& sc = scenarios.scenarios[wi];
        for (int t = 0; t < T; ++t) {
            const auto tt = sz(t);
            double supply = d.p_wind[tt] + d.p_solar[tt] + d.p_hydro[tt] + d.p_release[tt] - d.p_charge[tt];
            if (!d.shed.empty()) supply += d.shed[tt];
            if (!d.surplus.empty()) supply -= d.surplus[tt];
            for (int i = 0; i < N; ++i) supply += d.p_thermal[sz(i)][tt];
            c.eq(Family::PowerBalance, w, -1, t, supply, cfg.load[tt]);

            for (int i = 0; i < N; ++i) {
                const auto& unit = cfg.units[sz(i)];
                const double p = d.p_thermal[sz(i)][tt];
                c.box(Family::GenerationBounds, w, i, t, p, u(i, t) * unit.p_min, u(i, t) * unit.p_max);
                const double su = unit.startup_ramp();
                const double sd = unit.shutdown_ramp();
                if (t == 0) {
                    if (cfg.initial_state[sz(i)] == 0) c.le(Family::Ramp, w, i, t, p, su);
                    continue;
                }
                const double q = d.p_thermal[sz(i)][tt - 1];
                const double up_limit = unit.ramp_up * u(i, t - 1) + su * (1.0 - u(i, t - 1));
                const double down_limit = unit.ramp_down * u(i, t) + sd * (1.0 - u(i, t));
                if (p - q > up_limit) c.le(Family::Ramp, w, i, t, p - q, up_limit);
                else c.le(Family::Ramp, w, i, t, q - p, down_limit);
            }

            c.box(Family::WindCap, w, -1, t, d.p_wind[tt], 0.0, sc.wind_cap[tt]);
            c.box(Family::SolarCap, w, -1, t, d.p_solar[tt], 0.0, sc.solar_cap[tt]);
            c.box(Family::HydroCap, w, -1, t, d.p_hydro[tt], 0.0, sc.hydro_cap[tt]);
            c.box(Family::ChargeLimit, w, -1, t, d.p_charge[tt], 0.0, bat.charge_limit);
            c.box(Family::ReleaseLimit, w, -1, t, d.p_release[tt], 0.0, bat.release_limit);
            c.le(Family::ChargeReleaseExclusive, w, -1, t, std::min(d.p_charge[tt], d.p_release[tt]), 0.0);

            const double before = t == 0 ? bat.initial_energy : d.energy[tt - 1];
            const double expected =
                before + d.p_charge[tt] * bat.eta_charge * cfg.dt - d.p_release[tt] * cfg.dt / bat.eta_release;
            c.eq(Family::EnergyBalance, w, -1, t, d.energy[tt], expected);
            c.box(Family::StateOfCharge, w, -1, t, d.energy[tt], bat.energy_min(), bat.energy_max());
        }
    }
    return out;
}

}  // namespace stochuc
