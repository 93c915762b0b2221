#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>

namespace sperner {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// log(exp(a) + exp(b)) without overflow; either argument may be -inf.
inline double log_add_exp(double a, double b) noexcept {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    const double hi = std::max(a, b);
    const double lo = std::min(a, b);
    return hi + std::log1p(std::exp(lo - hi));
}

/// log(sum exp(x_i)) with the max-term shift. Empty input gives -inf.
inline double log_sum_exp(std::span<const double> xs) noexcept {
    double hi = kNegInf;
    for (double x : xs) hi = std::max(hi, x);
    if (hi == kNegInf || std::isinf(hi)) return hi;
    double acc = 0.0;
    for (double x : xs) acc += std::exp(x - hi);
    return hi + std::log(acc);
}

/// |exp(log_a - log_b) - 1|, the relative gap between two positive values
/// given as logarithms.
inline double log_relative_gap(double log_a, double log_b) noexcept {
    return std::abs(std::expm1(log_a - log_b));
}

} // namespace sperner
