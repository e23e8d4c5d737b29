#include <immintrin.h>

#include <algorithm>

#include "fairtrack/simd/kernels.hpp"

namespace fairtrack::simd::avx2 {

double dot(const double* a, const double* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
        acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4)));
    }
    if (i + 4 <= n) {
        acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
        i += 4;
    }
    const __m256d acc = _mm256_add_pd(acc0, acc1);
    const __m128d lo = _mm256_castpd256_pd128(acc);
    const __m128d hi = _mm256_extractf128_pd(acc, 1);
    const __m128d pair = _mm_add_pd(lo, hi);
    double sum = _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
    for (; i < n; ++i) sum += a[i] * b[i];
    return sum;
}

namespace {

// Max over one in-bounds 3x3 window, used for the border cells.
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
        for (; x + 4 < width; x += 4) {
            __m256d m = _mm256_max_pd(_mm256_loadu_pd(up + x - 1), _mm256_loadu_pd(up + x));
            m = _mm256_max_pd(m, _mm256_loadu_pd(up + x + 1));
            m = _mm256_max_pd(m, _mm256_loadu_pd(mid + x - 1));
            m = _mm256_max_pd(m, _mm256_loadu_pd(mid + x));
            m = _mm256_max_pd(m, _mm256_loadu_pd(mid + x + 1));
            m = _mm256_max_pd(m, _mm256_loadu_pd(down + x - 1));
            m = _mm256_max_pd(m, _mm256_loadu_pd(down + x));
            m = _mm256_max_pd(m, _mm256_loadu_pd(down + x + 1));
            _mm256_storeu_pd(out + x, m);
        }
        for (; x < width; ++x) out[x] = window_max(src, height, width, y, x);
    }
}

void max_scaled(double* dst, const double* src, double scale, std::size_t n) {
    const __m256d s = _mm256_set1_pd(scale);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d v = _mm256_mul_pd(s, _mm256_loadu_pd(src + i));
        _mm256_storeu_pd(dst + i, _mm256_max_pd(_mm256_loadu_pd(dst + i), v));
    }
    for (; i < n; ++i) dst[i] = std::max(dst[i], scale * src[i]);
}

void blend(double* dst, const double* src, double keep, std::size_t n) {
    const double take = 1.0 - keep;
    const __m256d k = _mm256_set1_pd(keep);
    const __m256d t = _mm256_set1_pd(take);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d a = _mm256_mul_pd(k, _mm256_loadu_pd(dst + i));
        const __m256d b = _mm256_mul_pd(t, _mm256_loadu_pd(src + i));
        _mm256_storeu_pd(dst + i, _mm256_add_pd(a, b));
    }
    for (; i < n; ++i) dst[i] = keep * dst[i] + take * src[i];
}

}  // namespace fairtrack::simd::avx2
