#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "fairtrack/decode.hpp"
#include "fairtrack/metrics.hpp"
#include "fairtrack/tensor.hpp"

namespace fairtrack {

/// Target `target` (0-based) produces no detection in frames [first_frame, last_frame].
struct Occlusion {
    int target = 0;
    int first_frame = 0;
    int last_frame = 0;

    friend bool operator==(const Occlusion&, const Occlusion&) = default;
};

struct SimConfig {
    std::uint64_t seed = 0;
    int frames = 100;
    int num_targets = 10;
    int image_w = 1088;
    int image_h = 608;
    double frame_rate = 30.0;
    /// Targets move in pairs that swap horizontal positions mid-sequence.
    bool crossing = false;
    double min_speed = 1.0;  ///< pixels per frame
    double max_speed = 4.0;
    double min_box_w = 24.0;
    double max_box_w = 48.0;
    double min_aspect = 2.0;  ///< height / width
    double max_aspect = 3.0;
    double det_dropout_prob = 0.0;
    double fp_rate = 0.0;  ///< Poisson mean of false positives per frame
    double box_noise_std = 0.0;
    int emb_dim = 64;
    /// Standard deviation of the whole embedding noise vector (each
    /// component gets emb_noise_std / sqrt(emb_dim)).
    double emb_noise_std = 0.0;
    double anchor_max_cosine = 0.3;
    std::vector<Occlusion> occlusions;

    /// Throws ValidationError naming the offending field.
    void validate() const;
};

struct SimSequence {
    SimConfig config;
    FrameBoxes gt;                                   ///< ids are 1-based
    std::map<int, std::vector<Detection>> detections;  ///< every frame present, possibly empty
    std::map<int, std::vector<int>> detection_ids;   ///< gt id per detection, -1 for false positives
    std::vector<std::vector<double>> anchors;        ///< unit appearance anchor per target
};

/// Deterministic in cfg: equal configs give bit-identical sequences.
SimSequence generate(const SimConfig& cfg);

/// Network-output stand-ins for one frame.
struct SimMaps {
    Tensor2D heat;
    Tensor3D offsets;
    Tensor3D sizes;
    Tensor3D embeddings;
    int collisions = 0;
};

/// Plants the frame's detections as score-height Gaussian peaks with their
/// offsets, sizes and embeddings at the center cells, so decode() on the
/// result recovers them.
SimMaps generate_maps(const SimSequence& seq, int frame, const GridSpec& grid);
SimMaps generate_maps(const SimConfig& cfg, int frame);

/// Folds p into [0, extent], reflecting at both ends.
double reflect(double p, double extent) noexcept;

}  // namespace fairtrack
