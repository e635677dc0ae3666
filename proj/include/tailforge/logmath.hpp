#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>

namespace tailforge::logmath {

inline constexpr double neg_inf = -std::numeric_limits<double>::infinity();

// log(e^a + e^b)
inline double log_add(double a, double b) {
    if (a < b) std::swap(a, b);
    if (b == neg_inf) return a;
    return a + std::log1p(std::exp(b - a));
}

// log(e^a - e^b), requires a >= b
inline double log_sub(double a, double b) {
    if (b == neg_inf) return a;
    if (b >= a) return neg_inf;
    return a + std::log(-std::expm1(b - a));
}

inline double log_sum_exp(std::span<const double> xs) {
    double m = neg_inf;
    for (double x : xs) m = std::max(m, x);
    if (m == neg_inf || !std::isfinite(m)) return m;
    double s = 0.0;
    for (double x : xs) s += std::exp(x - m);
    return m + std::log(s);
}

// log((e^d - 1) / d), continuous at d = 0
inline double log_expm1_ratio(double d) {
    if (std::abs(d) < 1e-10) return 0.5 * d;
    if (d > 0) return d + std::log(-std::expm1(-d)) - std::log(d);
    return std::log(-std::expm1(d)) - std::log(-d);
}

// e^a - e^b for a >= b, computed without cancellation
inline double exp_diff(double a, double b) {
    if (a == neg_inf) return 0.0;
    if (b >= a) return 0.0;
    return std::exp(a) * -std::expm1(b - a);
}

}  // namespace tailforge::logmath
