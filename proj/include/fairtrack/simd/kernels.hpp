#pragma once

// Data-parallel inner loops. Every kernel has a scalar reference in
// fairtrack::simd::scalar; vector variants live in fairtrack::simd::avx2 /
// fairtrack::simd::neon and are selected once at runtime by kernels().
//
// Exactness contract against the scalar reference:
//   dot          reassociated sum, equal within a few ulps of sum |a_i b_i|
//   max3x3       bit-identical
//   max_scaled   bit-identical (one rounding per element, as in scalar)
//   blend        bit-identical (two products and one sum, no fused multiply-add)

#include <cstddef>
#include <string_view>

namespace fairtrack::simd {

enum class Isa { Scalar, Avx2, Neon };

std::string_view isa_name(Isa isa) noexcept;

struct KernelTable {
    Isa isa;
    /// sum_i a[i] * b[i]
    double (*dot)(const double* a, const double* b, std::size_t n);
    /// dst(y,x) = max over the in-bounds 3x3 neighbourhood of src(y,x). src != dst.
    void (*max3x3)(const double* src, double* dst, int height, int width);
    /// dst[i] = max(dst[i], scale * src[i])
    void (*max_scaled)(double* dst, const double* src, double scale, std::size_t n);
    /// dst[i] = keep * dst[i] + (1 - keep) * src[i]
    void (*blend)(double* dst, const double* src, double keep, std::size_t n);
};

/// True if this build contains the variant and the running CPU supports it.
bool isa_available(Isa isa) noexcept;

/// Table for a specific ISA; throws ValidationError if unavailable.
const KernelTable& kernels_for(Isa isa);

/// Best available table, chosen on first use. FAIRTRACK_SIMD=scalar|avx2|neon overrides.
const KernelTable& kernels();

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
void max3x3(const double* src, double* dst, int height, int width);
void max_scaled(double* dst, const double* src, double scale, std::size_t n);
void blend(double* dst, const double* src, double keep, std::size_t n);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define FAIRTRACK_HAVE_AVX2_KERNELS 1
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
void max3x3(const double* src, double* dst, int height, int width);
void max_scaled(double* dst, const double* src, double scale, std::size_t n);
void blend(double* dst, const double* src, double keep, std::size_t n);
}  // namespace avx2
#endif

#if defined(__aarch64__)
#define FAIRTRACK_HAVE_NEON_KERNELS 1
namespace neon {
double dot(const double* a, const double* b, std::size_t n);
void max3x3(const double* src, double* dst, int height, int width);
void max_scaled(double* dst, const double* src, double scale, std::size_t n);
void blend(double* dst, const double* src, double keep, std::size_t n);
}  // namespace neon
#endif

}  // namespace fairtrack::simd
