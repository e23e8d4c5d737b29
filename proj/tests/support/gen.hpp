#pragma once

// Hand-rolled generators for property tests. Independent of the library's
// own Rng so a bug there cannot hide a bug in a test.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "fairtrack/tensor.hpp"
#include "fairtrack/target_encoding.hpp"

namespace gen {

class Source {
public:
    explicit Source(std::uint64_t seed) : engine_(seed * 0x9e3779b97f4a7c15ULL + 1) {}

    double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
    double gauss(double sd) { return std::normal_distribution<double>(0.0, sd)(engine_); }
    bool coin(double p = 0.5) { return real(0.0, 1.0) < p; }
    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

inline fairtrack::BBox box(Source& s, double extent = 100.0, double max_side = 30.0) {
    const double x = s.real(0.0, extent);
    const double y = s.real(0.0, extent);
    return {x, y, x + s.real(0.5, max_side), y + s.real(0.5, max_side)};
}

inline fairtrack::Tensor2D tensor2d(Source& s, int h, int w, double lo = -1.0, double hi = 1.0) {
    fairtrack::Tensor2D t(h, w);
    for (auto& v : t.data()) v = s.real(lo, hi);
    return t;
}

inline fairtrack::Tensor3D tensor3d(Source& s, int c, int h, int w, double lo = -1.0, double hi = 1.0) {
    fairtrack::Tensor3D t(c, h, w);
    for (auto& v : t.data()) v = s.real(lo, hi);
    return t;
}

/// Objects whose centers land on distinct cells at least `min_gap` cells apart
/// (Chebyshev distance) and whose boxes stay inside the image.
inline std::vector<fairtrack::GtObject> separated_objects(Source& s, const fairtrack::GridSpec& grid, int count,
                                                          int min_gap, int num_ids) {
    std::vector<fairtrack::GtObject> out;
    std::vector<std::pair<int, int>> cells;
    for (int attempt = 0; attempt < 2000 && static_cast<int>(out.size()) < count; ++attempt) {
        const double w = s.real(8.0, 60.0);
        const double h = s.real(8.0, 120.0);
        const double cx = s.real(w / 2 + 1, grid.image_w - w / 2 - 1);
        const double cy = s.real(h / 2 + 1, grid.image_h - h / 2 - 1);
        const int gx = static_cast<int>(std::floor(cx / grid.stride));
        const int gy = static_cast<int>(std::floor(cy / grid.stride));
        bool ok = true;
        for (auto [ox, oy] : cells) {
            if (std::max(std::abs(ox - gx), std::abs(oy - gy)) < min_gap) ok = false;
        }
        if (!ok) continue;
        cells.emplace_back(gx, gy);
        out.push_back({{cx - w / 2, cy - h / 2, cx + w / 2, cy + h / 2}, s.integer(0, num_ids - 1)});
    }
    return out;
}

}  // namespace gen
