#pragma once

#include <cmath>

namespace wapprox {

inline double normal_pdf(double x) {
    return std::exp(-0.5 * x * x) * 0.3989422804014326779;  // 1/sqrt(2 pi)
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x * M_SQRT1_2); }

/// Survival function 1 - Phi(x), accurate in the upper tail.
inline double normal_sf(double x) { return 0.5 * std::erfc(x * M_SQRT1_2); }

}  // namespace wapprox
