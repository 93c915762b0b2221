#pragma once

#include <cmath>

namespace sperner {

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    long evaluations = 0;
    /// Some panel hit max_depth before meeting its tolerance.
    bool depth_limited = false;
};

namespace detail {

template <class F>
struct SimpsonState {
    F& f;
    int max_depth;
    QuadratureResult result{};

    double panel(double a, double fa, double m, double fm, double b, double fb, double whole,
                 double tol, int depth) {
        const double lm = 0.5 * (a + m);
        const double rm = 0.5 * (m + b);
        const double flm = f(lm);
        const double frm = f(rm);
        result.evaluations += 2;
        const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        const double delta = left + right - whole;
        if (std::abs(delta) <= 15.0 * tol || depth >= max_depth) {
            if (std::abs(delta) > 15.0 * tol) result.depth_limited = true;
            result.error_estimate += std::abs(delta) / 15.0;
            return left + right + delta / 15.0;
        }
        return panel(a, fa, lm, flm, m, fm, left, 0.5 * tol, depth + 1) +
               panel(m, fm, rm, frm, b, fb, right, 0.5 * tol, depth + 1);
    }
};

} // namespace detail

/// Adaptive Simpson with Richardson correction. Each half-panel inherits half
/// of its parent's absolute tolerance.
template <class F>
QuadratureResult adaptive_simpson(F&& f, double a, double b, double abs_tol, int max_depth = 40) {
    detail::SimpsonState<std::remove_reference_t<F>> state{f, max_depth};
    const double m = 0.5 * (a + b);
    const double fa = f(a);
    const double fm = f(m);
    const double fb = f(b);
    state.result.evaluations = 3;
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    state.result.value = state.panel(a, fa, m, fm, b, fb, whole, abs_tol, 0);
    return state.result;
}

} // namespace sperner
