#pragma once

#include "sperner/measure.hpp"

namespace sperner {

/// Variance of |z| under a product measure and its square root.
struct SigmaValue {
    double sigma2 = 0.0;
    double sigma = 0.0;
};

SigmaValue sigma(const ProductMeasure& measure);
SigmaValue sigma_from_variance(double sigma2);

/// B(sigma) = 2 * int_0^{1/2} exp(-2 sigma^2 sin^2(pi theta)) dtheta.
///
/// This is the average over theta of the bound exp(-2 sigma^2 sin^2(pi theta))
/// on the modulus of the characteristic function of |z|, so it bounds every
/// atom of the level distribution. Adaptive Simpson, abs tol 1e-10.
double bound_quadrature(const SigmaValue& s);

enum class ClosedBoundMode {
    /// sqrt(pi) / sigma: sin^2(pi t) >= pi^2 t^2 / 4 >= t^2, then the full
    /// Gaussian integral of exp(-sigma^2 t^2).
    sqrt_pi,
    /// sqrt(2 / pi) / sigma: keeps the pi^2 / 2 factor in the exponent.
    tight,
};

double bound_closed(const SigmaValue& s, ClosedBoundMode mode);

/// The constant multiplying 1/sigma in bound_closed.
double closed_constant(ClosedBoundMode mode);

struct BoundReport {
    double sigma = 0.0;
    double exact_max = 0.0;
    double quadrature_bound = 0.0;
    /// Closed-form bound in the requested mode.
    double closed_bound = 0.0;
    double constant_used = 0.0;
    /// The other closed form, for the full ordering check.
    double sqrt_pi_bound = 0.0;
    bool ordered = false;
};

/// exact_max = max_l Pr[|z| = l], checked against both relaxations.
/// `ordered` reports exact_max <= quadrature <= tight <= sqrt_pi, 1e-9 slack.
BoundReport level_bound_check(const ProductMeasure& measure,
                              ClosedBoundMode mode = ClosedBoundMode::tight);

/// sigma * max_l Pr[|z| = l] for the uniform measure on n (even) coordinates:
/// (sqrt(n) / 2) * C(n, n/2) / 2^n, via lgamma.
double sharpness_ratio(long long n);

} // namespace sperner
