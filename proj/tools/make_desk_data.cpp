// Writes the synthetic desk instance: a 6-unit 3070 MW fleet, 24-hour load and
// hydro series, and 48 days of wind and solar output.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"
#include "stochuc/io.hpp"

using namespace stochuc;
namespace fs = std::filesystem;

namespace {

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

ThermalUnit make(const char* id, double pmax, double a, double b, double c, double l, double k, double j, double ramp,
                 double su, double sd, int up, int down) {
    ThermalUnit u;
    u.id = id;
    u.p_max = pmax;
    u.p_min = std::round(0.4 * pmax);
    u.a = a;
    u.b = b;
    u.c = c;
    u.l = l;
    u.k = k;
    u.j = j;
    u.ramp_up = u.ramp_down = ramp;
    u.startup_cost = su;
    u.shutdown_cost = sd;
    u.min_up = up;
    u.min_down = down;
    return u;
}

std::string row(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ',';
        s += format_number(std::round(v[i] * 10.0) / 10.0);
    }
    return s + "\n";
}

}  // namespace

int main(int argc, char** argv) {
    const fs::path dir = argc > 1 ? argv[1] : "data/desk";
    fs::create_directories(dir);
    std::mt19937_64 rng(20240605);
    const double pi = std::acos(-1.0);

    SystemConfig cfg;
    cfg.units = {
        make("G1", 600, 3.0, 0.285, 1.8e-5, 10.0, 0.96, 2.0e-5, 240, 9000, 3000, 5, 4),
        make("G2", 600, 3.2, 0.290, 2.0e-5, 11.0, 0.95, 2.2e-5, 240, 8800, 2900, 5, 4),
        make("G3", 500, 2.8, 0.296, 2.4e-5, 9.0, 0.98, 2.5e-5, 200, 7500, 2500, 4, 3),
        make("G4", 500, 2.6, 0.302, 2.6e-5, 8.5, 0.97, 2.8e-5, 200, 7200, 2400, 4, 3),
        make("G5", 450, 2.4, 0.310, 3.0e-5, 8.0, 1.00, 3.0e-5, 180, 6000, 2000, 3, 3),
        make("G6", 420, 2.2, 0.318, 3.4e-5, 7.5, 1.02, 3.2e-5, 170, 5500, 1800, 3, 2),
    };
    cfg.battery = {600.0, 80.0, 80.0, 0.95, 1.0 / 0.95, 0.3, 0.9, 180.0};
    cfg.carbon = {100.0, 1.0, 0.9419};
    cfg.coal_price = 700.0;
    cfg.dt = 1.0;
    cfg.horizon = 24;
    cfg.initial_state = {1, 1, 1, 0, 0, 0};

    const std::vector<double> load = {1900, 1820, 1780, 1760, 1790, 1870, 2020, 2260, 2450, 2550, 2600, 2620,
                                      2580, 2540, 2510, 2500, 2560, 2710, 2850, 2880, 2780, 2560, 2310, 2060};
    std::vector<double> hydro(24);
    for (int t = 0; t < 24; ++t) hydro[static_cast<std::size_t>(t)] = 85.0 + 15.0 * std::sin(pi * t / 24.0);
    cfg.load = load;
    write_config(dir / "config.json", cfg);
    {
        // Point the config at the series file instead of an inline load.
        auto j = nlohmann::json::parse(read_text(dir / "config.json"));
        j.erase("load");
        j["series"] = "series.csv";
        write_text(dir / "config.json", j.dump(2) + "\n");
    }
    {
        std::string s = "period,load,hydro\n";
        for (int t = 0; t < 24; ++t)
            s += std::to_string(t) + "," + format_number(load[static_cast<std::size_t>(t)]) + "," +
                 format_number(std::round(hydro[static_cast<std::size_t>(t)] * 10.0) / 10.0) + "\n";
        write_text(dir / "series.csv", s);
    }

    std::string header;
    for (int t = 0; t < 24; ++t) header += (t ? ",h" : "h") + std::to_string(t);
    header += "\n";

    // Wind regimes: calm, moderate, strong; 33 / 7 / 8 of 48 days.
    const int wind_days[3] = {33, 7, 8};
    const double wind_level[3] = {260.0, 720.0, 1080.0};
    std::string wind = header;
    for (int r = 0; r < 3; ++r)
        for (int d = 0; d < wind_days[r]; ++d) {
            std::vector<double> v(24);
            const double phase = 2.0 * pi * unit(rng);
            for (int t = 0; t < 24; ++t) {
                const double diurnal = 1.0 + 0.25 * std::cos(2.0 * pi * (t - 3) / 24.0);
                const double wobble = 0.08 * std::sin(2.0 * pi * t / 8.0 + phase);
                const double noise = 0.10 * (unit(rng) - 0.5);
                v[static_cast<std::size_t>(t)] = std::clamp(wind_level[r] * (diurnal + wobble + noise), 0.0, 1250.0);
            }
            wind += row(v);
        }
    write_text(dir / "wind_days.csv", wind);

    // Solar regimes: clear, hazy, overcast; 31 / 15 / 2 of 48 days.
    const int solar_days[3] = {31, 15, 2};
    const double solar_peak[3] = {285.0, 170.0, 55.0};
    std::string solar = header;
    for (int r = 0; r < 3; ++r)
        for (int d = 0; d < solar_days[r]; ++d) {
            std::vector<double> v(24, 0.0);
            const double peak = solar_peak[r] * (0.93 + 0.1 * unit(rng));
            for (int t = 6; t <= 18; ++t) {
                const double shape = std::sin(pi * (t - 6) / 12.0);
                v[static_cast<std::size_t>(t)] = std::clamp(peak * shape * (0.95 + 0.1 * unit(rng)), 0.0, 300.0);
            }
            solar += row(v);
        }
    write_text(dir / "solar_days.csv", solar);
    std::printf("wrote desk data to %s\n", dir.string().c_str());
    return 0;
}
