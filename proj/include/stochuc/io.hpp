#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "stochuc/core.hpp"
#include "stochuc/scenario.hpp"

namespace stochuc {

/// Malformed input; line and column are 1-based, 0 when unknown.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string path, int line, int column, const std::string& what);
    [[nodiscard]] const std::string& path() const { return path_; }
    [[nodiscard]] int line() const { return line_; }
    [[nodiscard]] int column() const { return column_; }

private:
    std::string path_;
    int line_;
    int column_;
};

inline constexpr const char* kConfigFormat = "stochuc-config";
inline constexpr const char* kScenarioFormat = "stochuc-scenarios";
inline constexpr int kFormatVersion = 1;

/// Reads a JSON system config. A "series" entry names a CSV (relative to the
/// config file) whose "load" column replaces an inline "load" array.
[[nodiscard]] SystemConfig read_config(const std::filesystem::path& path);
void write_config(const std::filesystem::path& path, const SystemConfig& config);

/// One row per day, one column per period; a non-numeric first row is a header.
[[nodiscard]] CurveSet read_day_curves(const std::filesystem::path& path, const std::string& label);

/// Header row of signal names, then one row per period.
[[nodiscard]] std::map<std::string, std::vector<double>> read_series(const std::filesystem::path& path);

[[nodiscard]] ScenarioSet read_scenarios(const std::filesystem::path& path);
void write_scenarios(const std::filesystem::path& path, const ScenarioSet& set);

/// Fixed 6-significant-digit rendering used by every CSV writer.
[[nodiscard]] std::string format_number(double v);

/// Writes a header and rows; throws std::runtime_error when the file cannot be written.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);
/// Reads a CSV written by write_csv back into header + rows.
[[nodiscard]] std::vector<std::vector<std::string>> read_csv_rows(const std::filesystem::path& path);

[[nodiscard]] std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

/// Lowercase hex SHA-256 of a byte string or a file.
[[nodiscard]] std::string sha256_hex(const std::string& bytes);
[[nodiscard]] std::string sha256_file(const std::filesystem::path& path);

}  // namespace stochuc
