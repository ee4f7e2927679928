#pragma once

#include <cmath>
#include <limits>

// Total arithmetic on [0, +inf] with the conventions 0*inf = 0, inf/inf = 0
// and 0/0 = 0.
namespace lorentz_lab::ext {

inline constexpr double inf = std::numeric_limits<double>::infinity();

inline double mul(double a, double b) {
    if (a == 0.0 || b == 0.0) return 0.0;
    return a * b;
}

inline double div(double a, double b) {
    if (a == 0.0) return 0.0;
    if (std::isinf(a) && std::isinf(b)) return 0.0;
    if (b == 0.0) return inf;
    return a / b;
}

/// x^e for x >= 0, with the common exponents short-circuited. 0^e = inf for
/// e < 0 and inf^e = 0 for e < 0.
inline double pow(double x, double e) {
    if (e == 1.0) return x;
    if (e == 2.0) return x * x;
    if (e == 0.5) return std::sqrt(x);
    if (e == -1.0) return x == 0.0 ? inf : 1.0 / x;
    if (e == 0.0) return 1.0;
    return std::pow(x, e);
}

}  // namespace lorentz_lab::ext
