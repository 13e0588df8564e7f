#include "stochuc/manifest.hpp"

#include "json.hpp"
#include "stochuc/io.hpp"

namespace stochuc {

using nlohmann::json;

void RunManifest::add_input(const std::filesystem::path& p) { inputs.push_back({p.string(), sha256_file(p)}); }
void RunManifest::add_output(const std::filesystem::path& p) { outputs.push_back({p.string(), sha256_file(p)}); }

void write_manifest(const std::filesystem::path& path, const RunManifest& m) {
    json j;
    j["format"] = kManifestFormat;
    j["version"] = kFormatVersion;
    j["command"] = m.command;
    j["tool_version"] = m.tool_version;
    j["seed"] = m.seed;
    j["options"] = m.options;
    auto files = [](const std::vector<FileDigest>& v) {
        json a = json::array();
        for (const auto& f : v) a.push_back({{"path", f.path}, {"sha256", f.sha256}});
        return a;
    };
    j["inputs"] = files(m.inputs);
    j["outputs"] = files(m.outputs);
    j["wall_time_s"] = m.wall_time_s;
    write_text(path, j.dump(2) + "\n");
}

RunManifest read_manifest(const std::filesystem::path& path) {
    json j;
    try {
        j = json::parse(read_text(path));
    } catch (const json::parse_error& e) {
        throw ParseError(path.string(), 0, 0, e.what());
    }
    if (j.value("format", std::string()) != kManifestFormat) throw ParseError(path.string(), 0, 0, "not a run manifest");
    RunManifest m;
    m.command = j.at("command").get<std::string>();
    m.tool_version = j.at("tool_version").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.options = j.at("options").get<std::map<std::string, std::string>>();
    for (const auto& f : j.at("inputs")) m.inputs.push_back({f.at("path"), f.at("sha256")});
    for (const auto& f : j.at("outputs")) m.outputs.push_back({f.at("path"), f.at("sha256")});
    m.wall_time_s = j.at("wall_time_s").get<double>();
    return m;
}

std::vector<std::string> verify_manifest(const RunManifest& m) {
    std::vector<std::string> bad;
    for (const auto* list : {&m.inputs, &m.outputs})
        for (const auto& f : *list) {
            try {
                if (sha256_file(f.path) != f.sha256) bad.push_back(f.path);
            } catch (const std::exception&) {
                bad.push_back(f.path);
            }
        }
    return bad;
}

}  // namespace stochuc
