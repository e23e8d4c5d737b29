#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fairtrack/config.hpp"
#include "fairtrack/decode.hpp"
#include "manifest.hpp"

namespace fairtrack::cli {

/// Collects outputs and metadata for one run's manifest.
class RunContext {
public:
    RunContext(std::string subcommand, std::vector<std::string> args, int threads);

    void write_text(const std::filesystem::path& path, std::string_view text);
    void write_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes);
    void add_input(const std::filesystem::path& path);

    int threads() const noexcept { return threads_; }
    RunManifest& manifest() noexcept { return manifest_; }

    /// Writes the manifest (outputs sorted by path) if a location is known.
    void finish(const std::optional<std::filesystem::path>& manifest_path);

private:
    void record(const std::filesystem::path& path);

    RunManifest manifest_;
    int threads_;
    double started_;
};

struct SimOptions {
    std::filesystem::path out;
    std::optional<std::filesystem::path> config;
    std::optional<std::uint64_t> seed;
    std::optional<int> frames;
    std::optional<int> targets;
    std::optional<double> box_noise;
    std::optional<double> emb_noise;
    std::optional<double> dropout;
    std::optional<double> fp_rate;
    std::optional<int> emb_dim;
    bool crossing = false;
    bool maps = false;
};

struct EncodeOptions {
    std::filesystem::path gt;
    std::filesystem::path out;
    int image_w = 1088;
    int image_h = 608;
    int stride = 4;
    std::optional<int> num_ids;
};

struct DecodeOptions {
    std::filesystem::path in;
    std::filesystem::path out;
    int image_w = 1088;
    int image_h = 608;
    int stride = 4;
    double threshold = 0.4;
    int top_k = 128;
    std::string sampling = "center";
};

struct TrackOptions {
    std::optional<std::filesystem::path> in;
    std::optional<std::filesystem::path> dets;
    std::optional<std::filesystem::path> emb;
    std::filesystem::path out;
    std::optional<std::filesystem::path> config;
    bool no_reid = false;
    bool no_iou = false;
    bool no_kalman = false;
};

struct EvalOptions {
    std::filesystem::path gt;
    std::filesystem::path pred;
    std::string metrics = "clear,idf1";
    double iou = 0.5;
    bool json = false;
    std::optional<std::filesystem::path> out;
};

struct GradcheckCliOptions {
    std::uint64_t seed = 0;
    int fixtures = 50;
    int max_size = 8;
    int max_ids = 8;
    double step = 1e-6;
    double tolerance = 1e-4;
};

struct ReidEvalOptions {
    std::filesystem::path in;
    std::vector<double> far{0.1};
    double iou = 0.5;
    std::optional<std::filesystem::path> out;
};

// Each returns the process exit code and leaves manifest bookkeeping to the caller.
int cmd_sim(const SimOptions& o, RunContext& ctx, std::optional<std::filesystem::path>& manifest_path);
int cmd_encode(const EncodeOptions& o, RunContext& ctx, std::optional<std::filesystem::path>& manifest_path);
int cmd_decode(const DecodeOptions& o, RunContext& ctx, std::optional<std::filesystem::path>& manifest_path);
int cmd_track(const TrackOptions& o, RunContext& ctx, std::optional<std::filesystem::path>& manifest_path);
int cmd_eval(const EvalOptions& o, RunContext& ctx, std::optional<std::filesystem::path>& manifest_path);
int cmd_gradcheck(const GradcheckCliOptions& o, RunContext& ctx);
int cmd_reid_eval(const ReidEvalOptions& o, RunContext& ctx, std::optional<std::filesystem::path>& manifest_path);

/// Per-frame detections read from `frame,score,x1,y1,x2,y2` or MOT det
/// lines, with optional per-frame embedding rows from `emb_dir`.
std::map<int, std::vector<Detection>> load_detections(const std::filesystem::path& dets,
                                                      const std::optional<std::filesystem::path>& emb_dir);

/// Frame file stem, e.g. 7 -> "000007".
std::string frame_stem(int frame);

/// Entry point shared by main() and `replay`.
int run_cli(const std::vector<std::string>& args);

}  // namespace fairtrack::cli
