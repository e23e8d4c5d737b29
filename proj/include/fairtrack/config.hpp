#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "fairtrack/sim.hpp"
#include "fairtrack/tracker.hpp"

namespace fairtrack {

/// Tracker and simulator settings from one flat `key = value` file.
struct ToolkitConfig {
    TrackerConfig tracker;
    SimConfig sim;
};

/// Overlays the keys present in `text` on `base`. `#` starts a comment;
/// `occlusion = target:first-last` may repeat. Unknown keys and values of
/// the wrong type raise ValidationError naming the key and line.
ToolkitConfig parse_config(std::string_view text, ToolkitConfig base = {});
ToolkitConfig load_config(const std::filesystem::path& path, ToolkitConfig base = {});

/// Every key with its current value, in the file format above.
std::string dump_config(const ToolkitConfig& cfg);

}  // namespace fairtrack
