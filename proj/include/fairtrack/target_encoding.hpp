#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fairtrack/tensor.hpp"

namespace fairtrack {

/// Annotated box with its identity class index in [0, K).
struct GtObject {
    BBox box;
    int identity = 0;
};

struct QuantizedCenter {
    int cell_x = 0;
    int cell_y = 0;
    double offset_x = 0.0;  ///< c / stride - floor(c / stride), in [0, 1)
    double offset_y = 0.0;
};

/// Center cell and sub-cell offset of a box. Empty if the center falls
/// outside the image or outside the feature grid.
std::optional<QuantizedCenter> quantize_center(const BBox& box, const GridSpec& grid);

struct GaussianParams {
    double min_overlap = 0.7;
    double min_sigma = 2.0 / 3.0;
};

/// Size-adaptive radius of the CenterNet/CornerNet lineage for a box of
/// (height, width) given in feature cells; the smallest of the three
/// corner-displacement cases.
double gaussian_radius(double height, double width, double min_overlap);

/// Heatmap standard deviation for a box of (w, h) image pixels:
/// sigma = max(min_sigma, floor(max(0, r)) / 3).
double gaussian_sigma(double box_w, double box_h, const GridSpec& grid, const GaussianParams& params = {});

/// heat(y, x) = max(heat(y, x), peak * exp(-((x - cx)^2 + (y - cy)^2) / (2 sigma^2))) over the
/// whole grid, computed separably.
void draw_gaussian_max(Tensor2D& heat, int cx, int cy, double sigma, double peak = 1.0);

/// One supervised object as it was written into the maps.
struct EncodedObject {
    int cell_x = 0;
    int cell_y = 0;
    double offset_x = 0.0;
    double offset_y = 0.0;
    double size_w = 0.0;
    double size_h = 0.0;
    int identity = 0;
    double sigma = 0.0;
};

/// Supervision maps for one frame.
struct TargetMaps {
    Tensor2D heatmap;         ///< feat_h x feat_w, values in [0, 1]
    Tensor3D offsets;         ///< 2 x feat_h x feat_w, written at centers only
    Tensor3D sizes;           ///< 2 x feat_h x feat_w, image pixels, at centers only
    std::vector<char> center_mask;     ///< feat_h x feat_w, row-major
    std::vector<int> identity_index;   ///< feat_h x feat_w, -1 outside the mask
    std::vector<EncodedObject> objects;  ///< retained objects in input order
    int collisions = 0;                ///< objects displaced by a larger box at the same cell
    std::vector<std::string> dropped;  ///< diagnostics for objects rejected outright

    int num_objects() const noexcept { return static_cast<int>(objects.size()); }
    bool masked(int y, int x) const { return center_mask[static_cast<std::size_t>(y) * heatmap.width() + x] != 0; }
};

/// Builds the heatmap, offset, size and identity targets. Throws
/// ValidationError for an identity outside [0, num_identities).
TargetMaps encode_targets(std::span<const GtObject> objects, const GridSpec& grid, int num_identities,
                          const GaussianParams& params = {});

}  // namespace fairtrack
