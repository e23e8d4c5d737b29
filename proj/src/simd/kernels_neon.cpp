#include <arm_neon.h>

#include <algorithm>

#include "fairtrack/simd/kernels.hpp"

namespace fairtrack::simd::neon {

double dot(const double* a, const double* b, std::size_t n) {
    float64x2_t acc0 = vdupq_n_f64(0.0);
    float64x2_t acc1 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc0 = vaddq_f64(acc0, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
        acc1 = vaddq_f64(acc1, vmulq_f64(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2)));
    }
    double sum = vaddvq_f64(vaddq_f64(acc0, acc1));
    for (; i < n; ++i) sum += a[i] * b[i];
    return sum;
}

namespace {

double window_max(const double* src, int height, int width, int y, int x) {
    double m = src[static_cast<std::size_t>(y) * width + x];
    for (int yy = std::max(0, y - 1); yy <= std::min(height - 1, y + 1); ++yy) {
        for (int xx = std::max(0, x - 1); xx <= std::min(width - 1, x + 1); ++xx) {
            m = std::max(m, src[static_cast<std::size_t>(yy) * width + xx]);
        }
    }
    return m;
}

}  // namespace

void max3x3(const double* src, double* dst, int height, int width) {
    for (int y = 0; y < height; ++y) {
        const double* up = src + static_cast<std::size_t>(std::max(0, y - 1)) * width;
        const double* mid = src + static_cast<std::size_t>(y) * width;
        const double* down = src + static_cast<std::size_t>(std::min(height - 1, y + 1)) * width;
        double* out = dst + static_cast<std::size_t>(y) * width;

        out[0] = window_max(src, height, width, y, 0);
        int x = 1;
        for (; x + 2 < width; x += 2) {
            float64x2_t m = vmaxq_f64(vld1q_f64(up + x - 1), vld1q_f64(up + x));
            m = vmaxq_f64(m, vld1q_f64(up + x + 1));
            m = vmaxq_f64(m, vld1q_f64(mid + x - 1));
            m = vmaxq_f64(m, vld1q_f64(mid + x));
            m = vmaxq_f64(m, vld1q_f64(mid + x + 1));
            m = vmaxq_f64(m, vld1q_f64(down + x - 1));
            m = vmaxq_f64(m, vld1q_f64(down + x));
            m = vmaxq_f64(m, vld1q_f64(down + x + 1));
            vst1q_f64(out + x, m);
        }
        for (; x < width; ++x) out[x] = window_max(src, height, width, y, x);
    }
}

void max_scaled(double* dst, const double* src, double scale, std::size_t n) {
    const float64x2_t s = vdupq_n_f64(scale);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        vst1q_f64(dst + i, vmaxq_f64(vld1q_f64(dst + i), vmulq_f64(s, vld1q_f64(src + i))));
    }
    for (; i < n; ++i) dst[i] = std::max(dst[i], scale * src[i]);
}

void blend(double* dst, const double* src, double keep, std::size_t n) {
    const double take = 1.0 - keep;
    const float64x2_t k = vdupq_n_f64(keep);
    const float64x2_t t = vdupq_n_f64(take);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        vst1q_f64(dst + i, vaddq_f64(vmulq_f64(k, vld1q_f64(dst + i)), vmulq_f64(t, vld1q_f64(src + i))));
    }
    for (; i < n; ++i) dst[i] = keep * dst[i] + take * src[i];
}

}  // namespace fairtrack::simd::neon
