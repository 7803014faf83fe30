#pragma once

#include <cmath>

namespace d3f {

// Standard normal upper tail Q(x) = P(Z > x), computed through erfc so the far
// tail keeps full relative accuracy (no 1 - Phi cancellation).
inline double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

// Standard normal CDF.
inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

} // namespace d3f
