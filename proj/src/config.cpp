#include "fairtrack/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>

#include "fairtrack/errors.hpp"
#include "fairtrack/file_util.hpp"

namespace fairtrack {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

[[noreturn]] void type_error(std::string_view key, std::string_view value, const char* expected, std::size_t line) {
    throw ValidationError("config line " + std::to_string(line) + ": key '" + std::string(key) + "' expects " +
                          expected + ", got '" + std::string(value) + "'");
}

double to_real(std::string_view key, std::string_view value, std::size_t line) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || ptr != value.data() + value.size() || !std::isfinite(v)) {
        type_error(key, value, "a real number", line);
    }
    return v;
}

long long to_integer(std::string_view key, std::string_view value, std::size_t line) {
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || ptr != value.data() + value.size()) type_error(key, value, "an integer", line);
    return v;
}

int to_int(std::string_view key, std::string_view value, std::size_t line) {
    const long long v = to_integer(key, value, line);
    if (v < -2147483647LL || v > 2147483647LL) type_error(key, value, "a 32-bit integer", line);
    return static_cast<int>(v);
}

bool to_bool(std::string_view key, std::string_view value, std::size_t line) {
    if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
    if (value == "false" || value == "0" || value == "no" || value == "off") return false;
    type_error(key, value, "a boolean", line);
}

Occlusion to_occlusion(std::string_view key, std::string_view value, std::size_t line) {
    const auto colon = value.find(':');
    const auto dash = value.find('-', colon == std::string_view::npos ? 0 : colon + 1);
    if (colon == std::string_view::npos || dash == std::string_view::npos) {
        type_error(key, value, "target:first-last", line);
    }
    return {to_int(key, trim(value.substr(0, colon)), line), to_int(key, trim(value.substr(colon + 1, dash - colon - 1)), line),
            to_int(key, trim(value.substr(dash + 1)), line)};
}

using Setter = std::function<void(ToolkitConfig&, std::string_view key, std::string_view value, std::size_t line)>;

const std::map<std::string, Setter, std::less<>>& setters() {
    static const std::map<std::string, Setter, std::less<>> table = [] {
        std::map<std::string, Setter, std::less<>> t;
        auto real = [&](const char* name, auto member) {
            t[name] = [member](ToolkitConfig& c, std::string_view k, std::string_view v, std::size_t l) {
                member(c) = to_real(k, v, l);
            };
        };
        auto integer = [&](const char* name, auto member) {
            t[name] = [member](ToolkitConfig& c, std::string_view k, std::string_view v, std::size_t l) {
                member(c) = to_int(k, v, l);
            };
        };
        auto boolean = [&](const char* name, auto member) {
            t[name] = [member](ToolkitConfig& c, std::string_view k, std::string_view v, std::size_t l) {
                member(c) = to_bool(k, v, l);
            };
        };
        real("det_threshold", [](ToolkitConfig& c) -> double& { return c.tracker.det_threshold; });
        real("emb_match_threshold", [](ToolkitConfig& c) -> double& { return c.tracker.emb_match_threshold; });
        real("iou_match_threshold", [](ToolkitConfig& c) -> double& { return c.tracker.iou_match_threshold; });
        integer("track_buffer", [](ToolkitConfig& c) -> int& { return c.tracker.track_buffer; });
        real("ema_momentum", [](ToolkitConfig& c) -> double& { return c.tracker.ema_momentum; });
        real("gate_chi2", [](ToolkitConfig& c) -> double& { return c.tracker.gate_chi2; });
        boolean("use_reid", [](ToolkitConfig& c) -> bool& { return c.tracker.use_reid; });
        boolean("use_iou", [](ToolkitConfig& c) -> bool& { return c.tracker.use_iou; });
        boolean("use_kalman", [](ToolkitConfig& c) -> bool& { return c.tracker.use_kalman; });

        t["seed"] = [](ToolkitConfig& c, std::string_view k, std::string_view v, std::size_t l) {
            std::uint64_t s = 0;
            const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), s);
            if (ec != std::errc() || ptr != v.data() + v.size()) type_error(k, v, "an unsigned 64-bit integer", l);
            c.sim.seed = s;
        };
        integer("frames", [](ToolkitConfig& c) -> int& { return c.sim.frames; });
        integer("num_targets", [](ToolkitConfig& c) -> int& { return c.sim.num_targets; });
        integer("image_w", [](ToolkitConfig& c) -> int& { return c.sim.image_w; });
        integer("image_h", [](ToolkitConfig& c) -> int& { return c.sim.image_h; });
        real("frame_rate", [](ToolkitConfig& c) -> double& { return c.sim.frame_rate; });
        boolean("crossing", [](ToolkitConfig& c) -> bool& { return c.sim.crossing; });
        real("min_speed", [](ToolkitConfig& c) -> double& { return c.sim.min_speed; });
        real("max_speed", [](ToolkitConfig& c) -> double& { return c.sim.max_speed; });
        real("min_box_w", [](ToolkitConfig& c) -> double& { return c.sim.min_box_w; });
        real("max_box_w", [](ToolkitConfig& c) -> double& { return c.sim.max_box_w; });
        real("min_aspect", [](ToolkitConfig& c) -> double& { return c.sim.min_aspect; });
        real("max_aspect", [](ToolkitConfig& c) -> double& { return c.sim.max_aspect; });
        real("det_dropout_prob", [](ToolkitConfig& c) -> double& { return c.sim.det_dropout_prob; });
        real("fp_rate", [](ToolkitConfig& c) -> double& { return c.sim.fp_rate; });
        real("box_noise_std", [](ToolkitConfig& c) -> double& { return c.sim.box_noise_std; });
        integer("emb_dim", [](ToolkitConfig& c) -> int& { return c.sim.emb_dim; });
        real("emb_noise_std", [](ToolkitConfig& c) -> double& { return c.sim.emb_noise_std; });
        real("anchor_max_cosine", [](ToolkitConfig& c) -> double& { return c.sim.anchor_max_cosine; });
        t["occlusion"] = [](ToolkitConfig& c, std::string_view k, std::string_view v, std::size_t l) {
            c.sim.occlusions.push_back(to_occlusion(k, v, l));
        };
        return t;
    }();
    return table;
}

std::string real_text(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

ToolkitConfig parse_config(std::string_view text, ToolkitConfig base) {
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ValidationError("config line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        const std::string_view key = trim(line.substr(0, eq));
        const std::string_view value = trim(line.substr(eq + 1));
        const auto it = setters().find(key);
        if (it == setters().end()) {
            throw ValidationError("config line " + std::to_string(line_no) + ": unknown key '" + std::string(key) + "'");
        }
        it->second(base, key, value, line_no);
    }
    return base;
}

ToolkitConfig load_config(const std::filesystem::path& path, ToolkitConfig base) {
    return parse_config(read_file_text(path), std::move(base));
}

std::string dump_config(const ToolkitConfig& c) {
    std::string out;
    auto line = [&](const char* k, const std::string& v) { out += std::string(k) + " = " + v + "\n"; };
    auto flag = [](bool b) { return std::string(b ? "true" : "false"); };
    line("det_threshold", real_text(c.tracker.det_threshold));
    line("emb_match_threshold", real_text(c.tracker.emb_match_threshold));
    line("iou_match_threshold", real_text(c.tracker.iou_match_threshold));
    line("track_buffer", std::to_string(c.tracker.track_buffer));
    line("ema_momentum", real_text(c.tracker.ema_momentum));
    line("gate_chi2", real_text(c.tracker.gate_chi2));
    line("use_reid", flag(c.tracker.use_reid));
    line("use_iou", flag(c.tracker.use_iou));
    line("use_kalman", flag(c.tracker.use_kalman));
    line("seed", std::to_string(c.sim.seed));
    line("frames", std::to_string(c.sim.frames));
    line("num_targets", std::to_string(c.sim.num_targets));
    line("image_w", std::to_string(c.sim.image_w));
    line("image_h", std::to_string(c.sim.image_h));
    line("frame_rate", real_text(c.sim.frame_rate));
    line("crossing", flag(c.sim.crossing));
    line("min_speed", real_text(c.sim.min_speed));
    line("max_speed", real_text(c.sim.max_speed));
    line("min_box_w", real_text(c.sim.min_box_w));
    line("max_box_w", real_text(c.sim.max_box_w));
    line("min_aspect", real_text(c.sim.min_aspect));
    line("max_aspect", real_text(c.sim.max_aspect));
    line("det_dropout_prob", real_text(c.sim.det_dropout_prob));
    line("fp_rate", real_text(c.sim.fp_rate));
    line("box_noise_std", real_text(c.sim.box_noise_std));
    line("emb_dim", std::to_string(c.sim.emb_dim));
    line("emb_noise_std", real_text(c.sim.emb_noise_std));
    line("anchor_max_cosine", real_text(c.sim.anchor_max_cosine));
    for (const auto& o : c.sim.occlusions) {
        line("occlusion", std::to_string(o.target) + ":" + std::to_string(o.first_frame) + "-" + std::to_string(o.last_frame));
    }
    return out;
}

}  // namespace fairtrack
