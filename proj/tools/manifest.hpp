#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace fairtrack::cli {

inline constexpr std::string_view kToolkitVersion = "1.0.0";

struct OutputRecord {
    std::string path;
    std::uint64_t size = 0;
    std::string fnv1a64;  ///< 16 lowercase hex digits
};

/// Record of one CLI run, written next to its outputs.
struct RunManifest {
    std::string subcommand;
    std::vector<std::string> args;  ///< argv after the program name; replayable
    nlohmann::json config = nlohmann::json::object();
    std::vector<std::string> inputs;
    std::vector<OutputRecord> outputs;
    std::optional<std::uint64_t> seed;
    std::string version{kToolkitVersion};
    std::string simd;
    double wall_seconds = 0.0;
};

nlohmann::json to_json(const RunManifest& m);
RunManifest manifest_from_json(const nlohmann::json& j);

void write_manifest(const std::filesystem::path& path, const RunManifest& m);
RunManifest read_manifest(const std::filesystem::path& path);

/// Size and digest of a file as it is on disk now.
OutputRecord fingerprint(const std::filesystem::path& path);

}  // namespace fairtrack::cli
