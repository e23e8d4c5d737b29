#pragma once

#include <optional>
#include <vector>

#include "fairtrack/tensor.hpp"

namespace fairtrack {

/// A scored box decoded from the heatmap head. `embedding` is empty when no
/// embedding map was supplied; otherwise it has unit L2 norm.
struct Detection {
    BBox box;
    double score = 0.0;
    std::vector<double> embedding;
    double center_feat_x = 0.0;
    double center_feat_y = 0.0;

    bool has_embedding() const noexcept { return !embedding.empty(); }
};

struct Peak {
    int x = 0;
    int y = 0;
    double score = 0.0;

    friend bool operator==(const Peak&, const Peak&) = default;
};

/// Cells equal to the max of their 3x3 neighbourhood (plateaus keep every
/// cell) with score > threshold, sorted by descending score then row-major
/// position, truncated to top_k.
std::vector<Peak> peak_nms(const Tensor2D& heatmap, double threshold, int top_k);

/// Per-channel bilinear sample at feature coordinates (x, y); neighbours past
/// the last row/column replicate the border. Throws ValidationError outside
/// [0, W-1] x [0, H-1].
std::vector<double> bilinear_sample(const Tensor3D& map, double x, double y);

/// Re-ID feature sampling: at the integer peak cell, or bilinearly at the
/// sub-cell center estimated by the offset head.
enum class Sampling { Center, CenterBI };

struct DecodeParams {
    double threshold = 0.4;
    int top_k = 128;
    Sampling sampling = Sampling::Center;
};

/// Boxes are center * stride +- size / 2 (size in image pixels), clipped to
/// the image. Throws ValidationError if the maps disagree with the grid.
std::vector<Detection> decode(const Tensor2D& heat, const Tensor3D& offsets, const Tensor3D& sizes,
                              const Tensor3D* embeddings, const GridSpec& grid, const DecodeParams& params = {});

/// In-place L2 normalisation; returns false (and leaves v unchanged) for a zero vector.
bool normalize(std::vector<double>& v);

}  // namespace fairtrack
