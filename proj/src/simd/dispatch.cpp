#include <cstdlib>
#include <string>

#include "fairtrack/errors.hpp"
#include "fairtrack/simd/kernels.hpp"

namespace fairtrack::simd {

namespace {

constexpr KernelTable kScalar{Isa::Scalar, &scalar::dot, &scalar::max3x3, &scalar::max_scaled, &scalar::blend};

#ifdef FAIRTRACK_HAVE_AVX2_KERNELS
constexpr KernelTable kAvx2{Isa::Avx2, &avx2::dot, &avx2::max3x3, &avx2::max_scaled, &avx2::blend};
#endif

#ifdef FAIRTRACK_HAVE_NEON_KERNELS
constexpr KernelTable kNeon{Isa::Neon, &neon::dot, &neon::max3x3, &neon::max_scaled, &neon::blend};
#endif

const KernelTable& select() {
    if (const char* env = std::getenv("FAIRTRACK_SIMD")) {
        const std::string want(env);
        if (want == "scalar") return kScalar;
        if (want == "avx2" && isa_available(Isa::Avx2)) return kernels_for(Isa::Avx2);
        if (want == "neon" && isa_available(Isa::Neon)) return kernels_for(Isa::Neon);
    }
    if (isa_available(Isa::Avx2)) return kernels_for(Isa::Avx2);
    if (isa_available(Isa::Neon)) return kernels_for(Isa::Neon);
    return kScalar;
}

}  // namespace

std::string_view isa_name(Isa isa) noexcept {
    switch (isa) {
        case Isa::Scalar: return "scalar";
        case Isa::Avx2: return "avx2";
        case Isa::Neon: return "neon";
    }
    return "unknown";
}

bool isa_available(Isa isa) noexcept {
    switch (isa) {
        case Isa::Scalar: return true;
        case Isa::Avx2:
#ifdef FAIRTRACK_HAVE_AVX2_KERNELS
            return __builtin_cpu_supports("avx2");
#else
            return false;
#endif
        case Isa::Neon:
#ifdef FAIRTRACK_HAVE_NEON_KERNELS
            return true;
#else
            return false;
#endif
    }
    return false;
}

const KernelTable& kernels_for(Isa isa) {
    if (!isa_available(isa)) {
        throw ValidationError(std::string("SIMD variant not available: ") + std::string(isa_name(isa)));
    }
    switch (isa) {
#ifdef FAIRTRACK_HAVE_AVX2_KERNELS
        case Isa::Avx2: return kAvx2;
#endif
#ifdef FAIRTRACK_HAVE_NEON_KERNELS
        case Isa::Neon: return kNeon;
#endif
        default: return kScalar;
    }
}

const KernelTable& kernels() {
    static const KernelTable& table = select();
    return table;
}

}  // namespace fairtrack::simd
