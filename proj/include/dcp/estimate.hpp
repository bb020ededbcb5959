#pragma once

// Monte Carlo point estimates with Wilson 95% intervals. Wilson rather than
// the normal approximation because the interesting survival probabilities sit
// near 0 and 1.

#include <cmath>
#include <cstdint>
#include <string>

namespace dcp {

struct Estimate {
    double value = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::int64_t replicates = 0;
    std::uint64_t seed = 0;
    std::string method;
};

inline Estimate wilson_estimate(std::int64_t successes, std::int64_t n,
                                std::uint64_t seed, std::string method) {
    constexpr double z = 1.959963984540054;  // 97.5% normal quantile
    Estimate e;
    e.replicates = n;
    e.seed = seed;
    e.method = std::move(method);
    if (n <= 0) return e;
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(successes) / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double center = (p + z2 / (2.0 * nn)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
    e.value = p;
    e.ci_low = successes == 0 ? 0.0 : std::max(0.0, center - half);
    e.ci_high = successes == n ? 1.0 : std::min(1.0, center + half);
    return e;
}

}  // namespace dcp
