#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fairtrack {

struct GradcheckOptions {
    std::uint64_t seed = 0;
    int fixtures = 50;
    int max_size = 8;        ///< maps are at most max_size x max_size
    int max_identities = 8;  ///< K
    double step = 1e-6;      ///< central-difference half step
    double tolerance = 1e-4;
};

struct GradcheckEntry {
    std::string name;
    double worst_rel_error = 0.0;
    long checked = 0;  ///< gradient components compared
};

struct GradcheckReport {
    std::vector<GradcheckEntry> entries;  ///< heat, box, identity, total
    bool passed = true;
};

/// |a - n| / max(|a|, |n|, kGradFloor). The floor keeps components that
/// are zero up to rounding from dominating the ratio.
inline constexpr double kGradFloor = 1e-6;
double relative_error(double analytic, double numeric) noexcept;

/// Compares every analytic loss gradient against central finite differences
/// on seeded random fixtures.
GradcheckReport run_gradcheck(const GradcheckOptions& opts);

}  // namespace fairtrack
