#include "stochuc/io.hpp"

#include <openssl/evp.h>

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <sstream>

#include "json.hpp"

namespace stochuc {

using nlohmann::json;
namespace fs = std::filesystem;

ParseError::ParseError(std::string path, int line, int column, const std::string& what)
    : std::runtime_error(path + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + what),
      path_(std::move(path)),
      line_(line),
      column_(column) {}

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct CsvLine {
    int line = 0;
    std::vector<std::string> fields;
};

std::vector<CsvLine> split_csv(const std::string& text) {
    std::vector<CsvLine> out;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        if (trim(raw).empty() || trim(raw)[0] == '#') continue;
        CsvLine row{line, {}};
        std::string field;
        std::istringstream fs(raw);
        while (std::getline(fs, field, ',')) row.fields.push_back(trim(field));
        if (!raw.empty() && raw.back() == ',') row.fields.emplace_back();
        out.push_back(std::move(row));
    }
    return out;
}

bool parse_double(const std::string& s, double& v) {
    if (s.empty()) return false;
    char* end = nullptr;
    errno = 0;
    v = std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size() && errno == 0 && std::isfinite(v);
}

bool all_numeric(const CsvLine& row) {
    double v = 0.0;
    for (const auto& f : row.fields)
        if (!parse_double(f, v)) return false;
    return true;
}

std::vector<double> numeric_row(const std::string& path, const CsvLine& row, std::size_t expected) {
    if (expected != 0 && row.fields.size() != expected)
        throw ParseError(path, row.line, static_cast<int>(std::min(row.fields.size(), expected)) + 1,
                         "expected " + std::to_string(expected) + " fields, found " + std::to_string(row.fields.size()));
    std::vector<double> v(row.fields.size());
    for (std::size_t c = 0; c < row.fields.size(); ++c)
        if (!parse_double(row.fields[c], v[c]))
            throw ParseError(path, row.line, static_cast<int>(c) + 1, "not a number: '" + row.fields[c] + "'");
    return v;
}

// Maps a byte offset in text to a 1-based line and column.
std::pair<int, int> locate(const std::string& text, std::size_t byte) {
    int line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

json parse_json(const fs::path& path) {
    const auto text = read_text(path);
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        const auto [line, col] = locate(text, e.byte > 0 ? e.byte - 1 : 0);
        throw ParseError(path.string(), line, col, e.what());
    }
}

void check_header(const json& j, const fs::path& path, const char* format) {
    if (!j.is_object() || j.value("format", std::string()) != format)
        throw ParseError(path.string(), 0, 0, std::string("missing or wrong \"format\" (expected ") + format + ")");
    if (j.value("version", 0) != kFormatVersion)
        throw ParseError(path.string(), 0, 0, "unsupported version");
}

template <class T>
T field(const json& j, const char* key, const fs::path& path, const std::string& where) {
    if (!j.contains(key)) throw ParseError(path.string(), 0, 0, where + ": missing \"" + key + "\"");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ParseError(path.string(), 0, 0, where + "." + key + ": " + e.what());
    }
}

template <class T>
T field_or(const json& j, const char* key, T fallback, const fs::path& path, const std::string& where) {
    return j.contains(key) ? field<T>(j, key, path, where) : fallback;
}

}  // namespace

SystemConfig read_config(const fs::path& path) {
    const json j = parse_json(path);
    check_header(j, path, kConfigFormat);
    SystemConfig c;
    for (std::size_t i = 0; i < field<json>(j, "units", path, "config").size(); ++i) {
        const auto& u = j["units"][i];
        const std::string w = "units[" + std::to_string(i) + "]";
        ThermalUnit t;
        t.id = field<std::string>(u, "id", path, w);
        t.a = field<double>(u, "a", path, w);
        t.b = field<double>(u, "b", path, w);
        t.c = field<double>(u, "c", path, w);
        t.l = field<double>(u, "l", path, w);
        t.k = field<double>(u, "k", path, w);
        t.j = field<double>(u, "j", path, w);
        t.p_min = field<double>(u, "p_min", path, w);
        t.p_max = field<double>(u, "p_max", path, w);
        t.ramp_up = field<double>(u, "ramp_up", path, w);
        t.ramp_down = field<double>(u, "ramp_down", path, w);
        t.startup_cost = field<double>(u, "startup_cost", path, w);
        t.shutdown_cost = field<double>(u, "shutdown_cost", path, w);
        t.min_up = field<int>(u, "min_up", path, w);
        t.min_down = field<int>(u, "min_down", path, w);
        c.units.push_back(std::move(t));
    }
    const auto b = field<json>(j, "battery", path, "config");
    c.battery.capacity = field<double>(b, "capacity", path, "battery");
    c.battery.charge_limit = field<double>(b, "charge_limit", path, "battery");
    c.battery.release_limit = field<double>(b, "release_limit", path, "battery");
    c.battery.eta_charge = field<double>(b, "eta_charge", path, "battery");
    c.battery.eta_release = field<double>(b, "eta_release", path, "battery");
    c.battery.soc_min = field<double>(b, "soc_min", path, "battery");
    c.battery.soc_max = field<double>(b, "soc_max", path, "battery");
    c.battery.initial_energy = field_or<double>(b, "initial_energy", c.battery.soc_min * c.battery.capacity, path, "battery");
    const auto cm = field<json>(j, "carbon", path, "config");
    c.carbon.price = field<double>(cm, "price", path, "carbon");
    c.carbon.eta_correction = field<double>(cm, "eta_correction", path, "carbon");
    c.carbon.allocation_coeff = field<double>(cm, "allocation_coeff", path, "carbon");
    c.coal_price = field<double>(j, "coal_price", path, "config");
    c.dt = field_or<double>(j, "dt", 1.0, path, "config");
    c.load_shed_penalty = field_or<double>(j, "load_shed_penalty", 1e5, path, "config");
    if (j.contains("series")) {
        const auto series_path = path.parent_path() / field<std::string>(j, "series", path, "config");
        const auto series = read_series(series_path);
        const auto it = series.find("load");
        if (it == series.end()) throw ParseError(series_path.string(), 1, 0, "no \"load\" column");
        c.load = it->second;
    } else {
        c.load = field<std::vector<double>>(j, "load", path, "config");
    }
    c.horizon = field_or<int>(j, "horizon", static_cast<int>(c.load.size()), path, "config");
    c.initial_state = field_or<std::vector<int>>(j, "initial_state", std::vector<int>(c.units.size(), 0), path, "config");
    return c;
}

void write_config(const fs::path& path, const SystemConfig& c) {
    json j;
    j["format"] = kConfigFormat;
    j["version"] = kFormatVersion;
    j["coal_price"] = c.coal_price;
    j["dt"] = c.dt;
    j["horizon"] = c.horizon;
    j["load_shed_penalty"] = c.load_shed_penalty;
    j["load"] = c.load;
    j["initial_state"] = c.initial_state;
    j["carbon"] = {{"price", c.carbon.price},
                   {"eta_correction", c.carbon.eta_correction},
                   {"allocation_coeff", c.carbon.allocation_coeff}};
    const auto& b = c.battery;
    j["battery"] = {{"capacity", b.capacity},       {"charge_limit", b.charge_limit}, {"release_limit", b.release_limit},
                    {"eta_charge", b.eta_charge},   {"eta_release", b.eta_release},   {"soc_min", b.soc_min},
                    {"soc_max", b.soc_max},         {"initial_energy", b.initial_energy}};
    j["units"] = json::array();
    for (const auto& u : c.units)
        j["units"].push_back({{"id", u.id},
                              {"a", u.a},
                              {"b", u.b},
                              {"c", u.c},
                              {"l", u.l},
                              {"k", u.k},
                              {"j", u.j},
                              {"p_min", u.p_min},
                              {"p_max", u.p_max},
                              {"ramp_up", u.ramp_up},
                              {"ramp_down", u.ramp_down},
                              {"startup_cost", u.startup_cost},
                              {"shutdown_cost", u.shutdown_cost},
                              {"min_up", u.min_up},
                              {"min_down", u.min_down}});
    write_text(path, j.dump(2) + "\n");
}

CurveSet read_day_curves(const fs::path& path, const std::string& label) {
    const auto rows = split_csv(read_text(path));
    CurveSet cs;
    cs.label = label;
    std::size_t first = 0;
    if (!rows.empty() && !all_numeric(rows.front())) first = 1;
    for (std::size_t r = first; r < rows.size(); ++r) {
        const std::size_t expected = cs.curves.empty() ? (first ? rows.front().fields.size() : 0) : cs.curves.front().size();
        auto v = numeric_row(path.string(), rows[r], expected);
        for (std::size_t c = 0; c < v.size(); ++c)
            if (v[c] < 0.0) throw ParseError(path.string(), rows[r].line, static_cast<int>(c) + 1, "negative output");
        cs.curves.push_back(std::move(v));
    }
    if (cs.curves.empty()) throw ParseError(path.string(), 0, 0, "no data rows");
    return cs;
}

std::map<std::string, std::vector<double>> read_series(const fs::path& path) {
    const auto rows = split_csv(read_text(path));
    if (rows.empty()) throw ParseError(path.string(), 0, 0, "empty file");
    const auto& header = rows.front().fields;
    std::map<std::string, std::vector<double>> out;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (header[c].empty()) throw ParseError(path.string(), rows.front().line, static_cast<int>(c) + 1, "empty column name");
        out[header[c]];
    }
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto v = numeric_row(path.string(), rows[r], header.size());
        for (std::size_t c = 0; c < v.size(); ++c) out[header[c]].push_back(v[c]);
    }
    return out;
}

ScenarioSet read_scenarios(const fs::path& path) {
    const json j = parse_json(path);
    check_header(j, path, kScenarioFormat);
    ScenarioSet set;
    const auto arr = field<json>(j, "scenarios", path, "scenario set");
    for (std::size_t s = 0; s < arr.size(); ++s) {
        const std::string w = "scenarios[" + std::to_string(s) + "]";
        Scenario sc;
        sc.probability = field<double>(arr[s], "probability", path, w);
        sc.wind_cap = field<std::vector<double>>(arr[s], "wind_cap", path, w);
        sc.solar_cap = field<std::vector<double>>(arr[s], "solar_cap", path, w);
        sc.hydro_cap = field<std::vector<double>>(arr[s], "hydro_cap", path, w);
        set.scenarios.push_back(std::move(sc));
    }
    return set;
}

void write_scenarios(const fs::path& path, const ScenarioSet& set) {
    json j;
    j["format"] = kScenarioFormat;
    j["version"] = kFormatVersion;
    j["horizon"] = set.scenarios.empty() ? 0 : set.scenarios.front().wind_cap.size();
    j["scenarios"] = json::array();
    for (const auto& s : set.scenarios)
        j["scenarios"].push_back(
            {{"probability", s.probability}, {"wind_cap", s.wind_cap}, {"solar_cap", s.solar_cap}, {"hydro_cap", s.hydro_cap}});
    write_text(path, j.dump(2) + "\n");
}

std::string format_number(double v) {
    if (v == 0.0) v = 0.0;  // no negative zero
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

void write_csv(const fs::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
    std::string text;
    auto line = [&text](const std::vector<std::string>& f) {
        for (std::size_t i = 0; i < f.size(); ++i) {
            if (i) text += ',';
            text += f[i];
        }
        text += '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
    write_text(path, text);
}

std::vector<std::vector<std::string>> read_csv_rows(const fs::path& path) {
    std::vector<std::vector<std::string>> out;
    for (auto& r : split_csv(read_text(path))) out.push_back(std::move(r.fields));
    return out;
}

std::string sha256_hex(const std::string& bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 || EVP_DigestFinal_ex(ctx.get(), md, &len) != 1)
        throw std::runtime_error("sha256 failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 15];
    }
    return out;
}

std::string sha256_file(const fs::path& path) { return sha256_hex(read_text(path)); }

}  // namespace stochuc
