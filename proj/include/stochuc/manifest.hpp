#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace stochuc {

inline constexpr const char* kManifestFormat = "stochuc-manifest";
inline constexpr const char* kToolVersion = "0.1.0";

struct FileDigest {
    std::string path;
    std::string sha256;
};

struct RunManifest {
    std::string command;
    std::string tool_version = kToolVersion;
    std::uint64_t seed = 0;
    std::map<std::string, std::string> options;
    std::vector<FileDigest> inputs;
    std::vector<FileDigest> outputs;
    double wall_time_s = 0.0;

    void add_input(const std::filesystem::path& p);
    void add_output(const std::filesystem::path& p);
};

void write_manifest(const std::filesystem::path& path, const RunManifest& manifest);
[[nodiscard]] RunManifest read_manifest(const std::filesystem::path& path);

/// Recomputes every recorded digest; returns the paths whose content no longer matches.
[[nodiscard]] std::vector<std::string> verify_manifest(const RunManifest& manifest);

}  // namespace stochuc
