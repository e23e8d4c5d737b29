#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fairtrack {

/// Dense row-major grid. Element (y, x) lives at y * width + x.
class Tensor2D {
public:
    Tensor2D() = default;
    Tensor2D(int height, int width, double fill = 0.0);
    Tensor2D(int height, int width, std::vector<double> data);

    int height() const noexcept { return height_; }
    int width() const noexcept { return width_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    double& operator()(int y, int x) { return data_[index(y, x)]; }
    double operator()(int y, int x) const { return data_[index(y, x)]; }

    std::span<double> row(int y) { return {data_.data() + index(y, 0), static_cast<std::size_t>(width_)}; }
    std::span<const double> row(int y) const {
        return {data_.data() + index(y, 0), static_cast<std::size_t>(width_)};
    }

    std::span<double> data() noexcept { return data_; }
    std::span<const double> data() const noexcept { return data_; }

    bool same_shape(const Tensor2D& other) const noexcept {
        return height_ == other.height_ && width_ == other.width_;
    }

    friend bool operator==(const Tensor2D&, const Tensor2D&) = default;

private:
    std::size_t index(int y, int x) const noexcept {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
    }

    int height_ = 0;
    int width_ = 0;
    std::vector<double> data_;
};

/// Dense channel-major grid: channel c is a contiguous height x width plane.
class Tensor3D {
public:
    Tensor3D() = default;
    Tensor3D(int channels, int height, int width, double fill = 0.0);
    Tensor3D(int channels, int height, int width, std::vector<double> data);

    int channels() const noexcept { return channels_; }
    int height() const noexcept { return height_; }
    int width() const noexcept { return width_; }
    std::size_t size() const noexcept { return data_.size(); }

    double& operator()(int c, int y, int x) { return data_[index(c, y, x)]; }
    double operator()(int c, int y, int x) const { return data_[index(c, y, x)]; }

    std::span<double> plane(int c) { return {data_.data() + index(c, 0, 0), plane_size()}; }
    std::span<const double> plane(int c) const { return {data_.data() + index(c, 0, 0), plane_size()}; }

    std::span<double> data() noexcept { return data_; }
    std::span<const double> data() const noexcept { return data_; }

    bool same_grid(int height, int width) const noexcept { return height_ == height && width_ == width; }

    friend bool operator==(const Tensor3D&, const Tensor3D&) = default;

private:
    std::size_t plane_size() const noexcept {
        return static_cast<std::size_t>(height_) * static_cast<std::size_t>(width_);
    }
    std::size_t index(int c, int y, int x) const noexcept {
        return static_cast<std::size_t>(c) * plane_size() +
               static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
    }

    int channels_ = 0;
    int height_ = 0;
    int width_ = 0;
    std::vector<double> data_;
};

/// Axis-aligned box in image pixels, top-left / bottom-right corners.
struct BBox {
    double x1 = 0.0;
    double y1 = 0.0;
    double x2 = 0.0;
    double y2 = 0.0;

    double width() const noexcept { return x2 - x1; }
    double height() const noexcept { return y2 - y1; }
    double area() const noexcept { return width() * height(); }
    double center_x() const noexcept { return 0.5 * (x1 + x2); }
    double center_y() const noexcept { return 0.5 * (y1 + y2); }
    bool valid() const noexcept { return x2 >= x1 && y2 >= y1; }

    static BBox from_tlwh(double left, double top, double w, double h) noexcept {
        return {left, top, left + w, top + h};
    }

    friend bool operator==(const BBox&, const BBox&) = default;
};

/// Intersection over union; 0 when the union is empty.
double iou(const BBox& a, const BBox& b) noexcept;

/// Image size and the down-sampling stride of the output feature maps.
struct GridSpec {
    int image_w = 1088;
    int image_h = 608;
    int stride = 4;

    int feat_w() const noexcept { return image_w / stride; }
    int feat_h() const noexcept { return image_h / stride; }

    /// Throws ValidationError unless all dimensions are positive and the grid is non-empty.
    void validate() const;
};

}  // namespace fairtrack
