#include "manifest.hpp"

#include <cstdio>

#include "fairtrack/errors.hpp"
#include "fairtrack/file_util.hpp"

namespace fairtrack::cli {

nlohmann::json to_json(const RunManifest& m) {
    nlohmann::json outputs = nlohmann::json::array();
    for (const auto& o : m.outputs) outputs.push_back({{"path", o.path}, {"size", o.size}, {"fnv1a64", o.fnv1a64}});
    nlohmann::json j = {
        {"subcommand", m.subcommand},
        {"args", m.args},
        {"config", m.config},
        {"inputs", m.inputs},
        {"outputs", outputs},
        {"version", m.version},
        {"simd", m.simd},
        {"wall_seconds", m.wall_seconds},
    };
    j["seed"] = m.seed ? nlohmann::json(*m.seed) : nlohmann::json(nullptr);
    return j;
}

RunManifest manifest_from_json(const nlohmann::json& j) {
    try {
        RunManifest m;
        m.subcommand = j.at("subcommand").get<std::string>();
        m.args = j.at("args").get<std::vector<std::string>>();
        m.config = j.value("config", nlohmann::json::object());
        m.inputs = j.value("inputs", std::vector<std::string>{});
        for (const auto& o : j.at("outputs")) {
            m.outputs.push_back({o.at("path").get<std::string>(), o.at("size").get<std::uint64_t>(),
                                 o.at("fnv1a64").get<std::string>()});
        }
        if (j.contains("seed") && !j["seed"].is_null()) m.seed = j["seed"].get<std::uint64_t>();
        m.version = j.value("version", std::string{});
        m.simd = j.value("simd", std::string{});
        m.wall_seconds = j.value("wall_seconds", 0.0);
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("manifest: ") + e.what(), 0);
    }
}

void write_manifest(const std::filesystem::path& path, const RunManifest& m) {
    write_file_atomic(path, to_json(m).dump(2) + "\n");
}

RunManifest read_manifest(const std::filesystem::path& path) {
    const std::string text = read_file_text(path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(std::string("manifest is not valid JSON: ") + e.what(), e.byte);
    }
    return manifest_from_json(j);
}

OutputRecord fingerprint(const std::filesystem::path& path) {
    const auto bytes = read_file_bytes(path);
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(fnv1a64(bytes)));
    return {path.string(), bytes.size(), hex};
}

}  // namespace fairtrack::cli
