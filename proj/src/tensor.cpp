#include "fairtrack/tensor.hpp"

#include <algorithm>
#include <string>

#include "fairtrack/errors.hpp"

namespace fairtrack {

namespace {

void require_positive(int v, const char* what) {
    if (v <= 0) {
        throw ValidationError(std::string("tensor ") + what + " must be positive, got " + std::to_string(v));
    }
}

}  // namespace

Tensor2D::Tensor2D(int height, int width, double fill) : height_(height), width_(width) {
    require_positive(height, "height");
    require_positive(width, "width");
    data_.assign(static_cast<std::size_t>(height) * static_cast<std::size_t>(width), fill);
}

Tensor2D::Tensor2D(int height, int width, std::vector<double> data)
    : height_(height), width_(width), data_(std::move(data)) {
    require_positive(height, "height");
    require_positive(width, "width");
    if (data_.size() != static_cast<std::size_t>(height) * static_cast<std::size_t>(width)) {
        throw ValidationError("tensor data length does not match height x width");
    }
}

Tensor3D::Tensor3D(int channels, int height, int width, double fill)
    : channels_(channels), height_(height), width_(width) {
    require_positive(channels, "channels");
    require_positive(height, "height");
    require_positive(width, "width");
    data_.assign(static_cast<std::size_t>(channels) * plane_size(), fill);
}

Tensor3D::Tensor3D(int channels, int height, int width, std::vector<double> data)
    : channels_(channels), height_(height), width_(width), data_(std::move(data)) {
    require_positive(channels, "channels");
    require_positive(height, "height");
    require_positive(width, "width");
    if (data_.size() != static_cast<std::size_t>(channels) * plane_size()) {
        throw ValidationError("tensor data length does not match channels x height x width");
    }
}

double iou(const BBox& a, const BBox& b) noexcept {
    const double iw = std::min(a.x2, b.x2) - std::max(a.x1, b.x1);
    const double ih = std::min(a.y2, b.y2) - std::max(a.y1, b.y1);
    if (iw <= 0.0 || ih <= 0.0) return 0.0;
    const double inter = iw * ih;
    const double uni = a.area() + b.area() - inter;
    if (uni <= 0.0) return 0.0;
    return std::clamp(inter / uni, 0.0, 1.0);
}

void GridSpec::validate() const {
    if (image_w <= 0 || image_h <= 0 || stride <= 0) {
        throw ValidationError("grid: image size and stride must be positive");
    }
    if (feat_w() <= 0 || feat_h() <= 0) {
        throw ValidationError("grid: image smaller than one stride cell");
    }
}

}  // namespace fairtrack
