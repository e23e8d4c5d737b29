#include <algorithm>

#include "fairtrack/simd/kernels.hpp"

namespace fairtrack::simd::scalar {

double dot(const double* a, const double* b, std::size_t n) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += a[i] * b[i];
    return sum;
}

void max3x3(const double* src, double* dst, int height, int width) {
    for (int y = 0; y < height; ++y) {
        const int y0 = std::max(0, y - 1);
        const int y1 = std::min(height - 1, y + 1);
        for (int x = 0; x < width; ++x) {
            const int x0 = std::max(0, x - 1);
            const int x1 = std::min(width - 1, x + 1);
            double m = src[static_cast<std::size_t>(y) * width + x];
            for (int yy = y0; yy <= y1; ++yy) {
                for (int xx = x0; xx <= x1; ++xx) {
                    m = std::max(m, src[static_cast<std::size_t>(yy) * width + xx]);
                }
            }
            dst[static_cast<std::size_t>(y) * width + x] = m;
        }
    }
}

void max_scaled(double* dst, const double* src, double scale, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] = std::max(dst[i], scale * src[i]);
}

void blend(double* dst, const double* src, double keep, std::size_t n) {
    const double take = 1.0 - keep;
    for (std::size_t i = 0; i < n; ++i) dst[i] = keep * dst[i] + take * src[i];
}

}  // namespace fairtrack::simd::scalar
