// Command-line entry point: cluster, solve, sweep, compare, verify.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "stochuc/analysis.hpp"
#include "stochuc/io.hpp"
#include "stochuc/manifest.hpp"
#include "stochuc/scenario.hpp"

using namespace stochuc;
namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kCheckFailed = 1, kUsage = 2, kInfeasible = 3, kNoIncumbent = 4 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

int default_threads() {
    if (const char* env = std::getenv("STOCHUC_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    return 1;
}

struct Common {
    std::string config;
    std::string scenarios;
    std::string out = "out";
    int threads = default_threads();
    double mip_gap = 1e-4;
    int segments = 8;
    long node_limit = 0;
    double time_limit = 0.0;
    std::uint64_t seed = 0;
    bool verbose = false;
};

void add_common(CLI::App* app, Common& c) {
    app->add_option("--config", c.config, "System config (JSON)")->required();
    app->add_option("--scenarios", c.scenarios, "Scenario set (JSON)")->required();
    app->add_option("--out", c.out, "Output directory");
    app->add_option("--threads", c.threads, "Worker threads (default 1, or STOCHUC_THREADS)")->check(CLI::PositiveNumber);
    app->add_option("--mip-gap", c.mip_gap, "Relative MIP gap")->check(CLI::NonNegativeNumber);
    app->add_option("--segments", c.segments, "Chord segments per quadratic")->check(CLI::PositiveNumber);
    app->add_option("--node-limit", c.node_limit, "Branch-and-bound node limit (0 = none)");
    app->add_option("--time-limit", c.time_limit, "Solve time limit in seconds (0 = none)");
    app->add_option("--seed", c.seed, "Recorded in the manifest");
    app->add_flag("-v,--verbose", c.verbose, "Branch-and-bound progress on stderr");
}

StudyOptions study_options(const Common& c) {
    StudyOptions o;
    o.segments = c.segments;
    o.solve.mip_gap = c.mip_gap;
    o.solve.threads = c.threads;
    if (c.node_limit > 0) o.solve.node_limit = c.node_limit;
    if (c.time_limit > 0) o.solve.time_limit = c.time_limit;
    if (c.verbose) o.solve.log = &std::cerr;
    return o;
}

std::map<std::string, std::string> option_map(const Common& c) {
    return {{"threads", std::to_string(c.threads)},
            {"mip_gap", format_number(c.mip_gap)},
            {"segments", std::to_string(c.segments)},
            {"node_limit", std::to_string(c.node_limit)},
            {"time_limit", format_number(c.time_limit)}};
}

std::pair<SystemConfig, ScenarioSet> load_inputs(const Common& c) {
    for (const auto& p : {c.config, c.scenarios})
        if (!fs::exists(p)) throw UsageError("input file not found: " + p);
    auto cfg = read_config(c.config);
    auto set = read_scenarios(c.scenarios);
    std::ostringstream err;
    for (const auto& v : validate_config(cfg)) err << "  " << v.path << ": " << v.rule << "\n";
    for (const auto& v : validate_scenarios(set, cfg.horizon)) err << "  " << v.path << ": " << v.rule << "\n";
    if (!err.str().empty()) throw UsageError("invalid input:\n" + err.str());
    return {std::move(cfg), std::move(set)};
}

std::string str(double v) { return format_number(v); }

// Round-trip precision, for values compared bit for bit.
std::string exact(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_commitment(const fs::path& path, const SystemConfig& cfg, const CommitmentSchedule& s) {
    std::vector<std::string> header{"unit"};
    for (int t = 0; t < cfg.horizon; ++t) header.push_back("h" + std::to_string(t));
    std::vector<std::vector<std::string>> rows;
    for (int i = 0; i < cfg.num_units(); ++i) {
        std::vector<std::string> r{cfg.units[static_cast<std::size_t>(i)].id};
        for (int v : s.on[static_cast<std::size_t>(i)]) r.push_back(std::to_string(v));
        rows.push_back(std::move(r));
    }
    write_csv(path, header, rows);
}

void write_dispatch(const fs::path& path, const SystemConfig& cfg, const DispatchSolution& d) {
    std::vector<std::string> header{"scenario", "period"};
    for (const auto& u : cfg.units) header.push_back("p_" + u.id);
    for (const char* h : {"wind", "solar", "hydro", "charge", "release", "energy", "shed", "surplus", "load"})
        header.emplace_back(h);
    std::vector<std::vector<std::string>> rows;
    for (std::size_t w = 0; w < d.scenarios.size(); ++w) {
        const auto& s = d.scenarios[w];
        for (int t = 0; t < cfg.horizon; ++t) {
            const auto tt = static_cast<std::size_t>(t);
            std::vector<std::string> r{std::to_string(w), std::to_string(t)};
            for (const auto& p : s.p_thermal) r.push_back(str(p[tt]));
            for (const auto* v : {&s.p_wind, &s.p_solar, &s.p_hydro, &s.p_charge, &s.p_release, &s.energy, &s.shed, &s.surplus})
                r.push_back(str((*v)[tt]));
            r.push_back(str(cfg.load[tt]));
            rows.push_back(std::move(r));
        }
    }
    write_csv(path, header, rows);
}

void write_scenario_costs(const fs::path& path, const ScenarioSet& set, const CostReport& rep) {
    std::vector<std::vector<std::string>> rows;
    for (std::size_t w = 0; w < rep.scenarios.size(); ++w) {
        const auto& c = rep.scenarios[w];
        rows.push_back({std::to_string(w), str(set.scenarios[w].probability), str(c.fuel), str(c.carbon), str(c.emissions),
                        str(c.allowance), str(c.penalty)});
    }
    write_csv(path, {"scenario", "probability", "fuel", "carbon", "emissions", "allowance", "penalty"}, rows);
}

std::vector<std::vector<std::string>> report_rows(const Solved& s) {
    const auto& r = s.report;
    return {{"status", std::string(to_string(s.milp.status))},
            {"objective", str(s.milp.objective)},
            {"objective_exact", exact(s.milp.objective)},
            {"bound", str(s.milp.bound)},
            {"gap", str(s.milp.gap)},
            {"total", str(r.total)},
            {"uc_cost", str(r.uc_cost)},
            {"expected_fuel", str(r.expected_fuel)},
            {"expected_carbon", str(r.expected_carbon)},
            {"expected_penalty", str(r.expected_penalty)},
            {"expected_emissions", str(r.expected_emissions)},
            {"expected_allowance", str(r.expected_allowance)},
            {"start_stop_cycles", std::to_string(r.start_stop_cycles)},
            {"linearization_bound", str(r.linearization_bound)},
            {"nodes", std::to_string(s.milp.nodes)},
            {"feasibility_violations", std::to_string(s.feasibility.size())}};
}

class Run {
public:
    Run(std::string command, const Common* c) : start_(std::chrono::steady_clock::now()) {
        m_.command = std::move(command);
        if (c) {
            m_.seed = c->seed;
            m_.options = option_map(*c);
        }
    }
    RunManifest& manifest() { return m_; }
    void finish(const fs::path& path) {
        m_.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        write_manifest(path, m_);
    }

private:
    RunManifest m_;
    std::chrono::steady_clock::time_point start_;
};

int cmd_cluster(const std::string& wind_path, const std::string& solar_path, const std::string& hydro_path,
                double hydro_const, const std::string& k_spec, int k_min, int k_max, std::uint64_t seed,
                const std::string& out, int threads) {
    for (const auto& p : {wind_path, solar_path})
        if (!fs::exists(p)) throw UsageError("input file not found: " + p);
    const auto wind = read_day_curves(wind_path, "wind");
    const auto solar = read_day_curves(solar_path, "solar");
    validate_curves(wind);
    validate_curves(solar);
    if (wind.periods() != solar.periods()) throw UsageError("wind and solar curves have different period counts");
    std::vector<double> hydro(static_cast<std::size_t>(wind.periods()), hydro_const);
    if (!hydro_path.empty()) {
        if (!fs::exists(hydro_path)) throw UsageError("input file not found: " + hydro_path);
        const auto series = read_series(hydro_path);
        const auto it = series.find("hydro");
        if (it == series.end()) throw ParseError(hydro_path, 1, 0, "no \"hydro\" column");
        if (it->second.size() != hydro.size()) throw ParseError(hydro_path, 0, 0, "hydro length differs from curve periods");
        hydro = it->second;
    }

    auto pick = [&](const CurveSet& cs) {
        if (k_spec == "auto") return elbow_k(cs, k_min, std::min(k_max, cs.days()), seed, threads);
        std::size_t used = 0;
        int k = 0;
        try {
            k = std::stoi(k_spec, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != k_spec.size() || k < 1) throw UsageError("--k must be 'auto' or a positive integer");
        if (k > cs.days()) throw UsageError("--k exceeds the day count of " + cs.label);
        return k;
    };
    const int kw = pick(wind), ks = pick(solar);
    const auto cw = kmeans(wind, kw, seed);
    const auto cs = kmeans(solar, ks, seed);
    const auto set = joint_scenarios(cw, cs, hydro);

    Run run("cluster", nullptr);
    auto& m = run.manifest();
    m.seed = seed;
    m.options = {{"k", k_spec}, {"k_min", std::to_string(k_min)}, {"k_max", std::to_string(k_max)},
                 {"k_wind", std::to_string(kw)}, {"k_solar", std::to_string(ks)}, {"hydro_const", str(hydro_const)}};
    m.add_input(wind_path);
    m.add_input(solar_path);
    if (!hydro_path.empty()) m.add_input(hydro_path);
    write_scenarios(out, set);
    m.add_output(out);
    run.finish(out + ".manifest.json");

    std::cout << "wind clusters " << kw << ", solar clusters " << ks << ", scenarios " << set.size() << "\n";
    for (int w = 0; w < set.size(); ++w)
        std::cout << "  scenario " << w << " probability " << str(set.scenarios[static_cast<std::size_t>(w)].probability) << "\n";
    return kOk;
}

int solve_exit(const Solved& s) {
    if (!s.ok()) return s.milp.status == MilpStatus::Infeasible ? kInfeasible : kNoIncumbent;
    return s.feasibility.empty() ? kOk : kCheckFailed;
}

int cmd_solve(const Common& c) {
    const auto [cfg, set] = load_inputs(c);
    const auto s = solve_instance(cfg, set, study_options(c));
    std::cerr << "status " << to_string(s.milp.status) << "\n";
    if (!s.ok()) return solve_exit(s);
    const fs::path out = c.out;
    Run run("solve", &c);
    auto& m = run.manifest();
    m.add_input(c.config);
    m.add_input(c.scenarios);
    write_commitment(out / "commitment.csv", cfg, s.schedule);
    write_dispatch(out / "dispatch.csv", cfg, s.dispatch);
    write_scenario_costs(out / "scenario_costs.csv", set, s.report);
    write_csv(out / "report.csv", {"metric", "value"}, report_rows(s));
    for (const char* f : {"commitment.csv", "dispatch.csv", "scenario_costs.csv", "report.csv"}) m.add_output(out / f);
    run.finish(out / "manifest.json");
    for (const auto& v : s.feasibility) std::cerr << "violation: " << v.describe() << "\n";
    std::cout << "objective " << str(s.milp.objective) << " total " << str(s.report.total) << " gap " << str(s.milp.gap)
              << " cycles " << s.report.start_stop_cycles << "\n";
    return solve_exit(s);
}

std::vector<double> parse_prices(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != item.size() || v < 0.0) throw UsageError("bad price '" + item + "'");
        out.push_back(v);
    }
    if (out.empty()) throw UsageError("--prices needs at least one value");
    return out;
}

int cmd_sweep(const Common& c, const std::string& prices_text) {
    const auto prices = parse_prices(prices_text);
    const auto [cfg, set] = load_inputs(c);
    const auto rows = carbon_price_sweep(cfg, set, prices, study_options(c));
    std::vector<std::vector<std::string>> table;
    int ok = 0;
    for (const auto& r : rows) {
        ok += r.ok ? 1 : 0;
        table.push_back({str(r.carbon_price), r.ok ? "ok" : "failed", str(r.total), str(r.expected_emissions),
                         str(r.expected_allowance), str(r.uc_cost), str(r.expected_fuel), str(r.expected_carbon),
                         std::to_string(r.start_stop_cycles)});
        if (!r.ok) std::cerr << "price " << str(r.carbon_price) << ": " << r.error << "\n";
    }
    const fs::path out = c.out;
    Run run("sweep", &c);
    auto& m = run.manifest();
    m.options["prices"] = prices_text;
    m.add_input(c.config);
    m.add_input(c.scenarios);
    write_csv(out / "sweep.csv",
              {"price", "status", "total", "emissions", "allowance", "uc_cost", "expected_fuel", "expected_carbon", "cycles"},
              table);
    m.add_output(out / "sweep.csv");
    run.finish(out / "manifest.json");
    for (const auto& r : table) std::cout << r[0] << " " << r[1] << " total " << r[2] << " emissions " << r[3] << "\n";
    return ok > 0 ? kOk : kInfeasible;
}

int cmd_compare(const Common& c) {
    const auto [cfg, set] = load_inputs(c);
    const auto cmp = compare_deterministic(cfg, set, study_options(c));
    auto row = [](const char* name, const Solved& s) {
        const auto& r = s.report;
        return std::vector<std::string>{name,
                                        str(r.total),
                                        str(r.model_objective),
                                        str(r.uc_cost),
                                        str(r.expected_fuel),
                                        str(r.expected_carbon),
                                        str(r.expected_penalty),
                                        std::to_string(r.start_stop_cycles),
                                        std::to_string(r.penalized_scenarios.size())};
    };
    const fs::path out = c.out;
    Run run("compare", &c);
    auto& m = run.manifest();
    m.add_input(c.config);
    m.add_input(c.scenarios);
    write_csv(out / "comparison.csv",
              {"case", "total", "objective", "uc_cost", "expected_fuel", "expected_carbon", "expected_penalty", "cycles",
               "penalized_scenarios"},
              {row("stochastic", cmp.stochastic), row("deterministic", cmp.deterministic)});
    write_csv(out / "vss.csv", {"metric", "value"}, {{"vss", str(cmp.vss)}, {"vss_exact", str(cmp.vss_exact)}});
    write_commitment(out / "commitment_stochastic.csv", cfg, cmp.stochastic.schedule);
    write_commitment(out / "commitment_deterministic.csv", cfg, cmp.deterministic.schedule);
    for (const char* f : {"comparison.csv", "vss.csv", "commitment_stochastic.csv", "commitment_deterministic.csv"})
        m.add_output(out / f);
    run.finish(out / "manifest.json");
    std::cout << "stochastic " << str(cmp.stochastic.report.total) << " (cycles " << cmp.stochastic.report.start_stop_cycles
              << ")\ndeterministic " << str(cmp.deterministic.report.total) << " (cycles "
              << cmp.deterministic.report.start_stop_cycles << ")\nvss " << str(cmp.vss) << "\n";
    return kOk;
}

int cmd_verify(const std::string& path) {
    if (!fs::exists(path)) throw UsageError("manifest not found: " + path);
    const auto bad = verify_manifest(read_manifest(path));
    for (const auto& b : bad) std::cout << "mismatch: " << b << "\n";
    if (bad.empty()) std::cout << "ok\n";
    return bad.empty() ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-stage stochastic unit commitment with carbon trading"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    auto* cluster = app.add_subcommand("cluster", "Reduce daily wind/solar curves to joint scenarios");
    std::string wind, solar, hydro, k_spec = "auto", cluster_out = "scenarios.json";
    double hydro_const = 0.0;
    int k_min = 1, k_max = 8, cluster_threads = default_threads();
    std::uint64_t cluster_seed = 0;
    cluster->add_option("--wind", wind, "Wind day curves CSV")->required();
    cluster->add_option("--solar", solar, "Solar day curves CSV")->required();
    cluster->add_option("--hydro", hydro, "Series CSV with a 'hydro' column");
    cluster->add_option("--hydro-const", hydro_const, "Constant hydro availability when --hydro is absent");
    cluster->add_option("--k", k_spec, "'auto' or a fixed cluster count");
    cluster->add_option("--k-min", k_min, "Elbow search lower end");
    cluster->add_option("--k-max", k_max, "Elbow search upper end");
    cluster->add_option("--seed", cluster_seed, "Seed for k-means++ initialization")->required();
    cluster->add_option("--out", cluster_out, "Scenario file to write");
    cluster->add_option("--threads", cluster_threads, "Worker threads for the elbow search");

    Common solve_opts, sweep_opts, compare_opts;
    auto* solve = app.add_subcommand("solve", "Solve the two-stage problem");
    add_common(solve, solve_opts);
    auto* sweep = app.add_subcommand("sweep", "Re-solve over a list of carbon prices");
    add_common(sweep, sweep_opts);
    std::string prices;
    sweep->add_option("--prices", prices, "Comma-separated carbon prices")->required();
    auto* compare = app.add_subcommand("compare", "Stochastic vs mean-scenario deterministic schedule");
    add_common(compare, compare_opts);
    auto* verify = app.add_subcommand("verify", "Recompute the digests of a run manifest");
    std::string manifest;
    verify->add_option("manifest", manifest, "Manifest file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*cluster)
            return cmd_cluster(wind, solar, hydro, hydro_const, k_spec, k_min, k_max, cluster_seed, cluster_out,
                               cluster_threads);
        if (*solve) return cmd_solve(solve_opts);
        if (*sweep) return cmd_sweep(sweep_opts, prices);
        if (*compare) return cmd_compare(compare_opts);
        if (*verify) return cmd_verify(manifest);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kUsage;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInfeasible;
    }
    return kUsage;
}
