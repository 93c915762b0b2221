#include "sperner/anticoncentration.hpp"

#include "sperner/error.hpp"
#include "sperner/quadrature.hpp"

#include <cmath>
#include <numbers>

namespace sperner {

namespace {

constexpr double kQuadratureTolerance = 1e-10;
constexpr int kQuadratureDepth = 40;
constexpr double kOrderingSlack = 1e-9;

void require_positive(const SigmaValue& s) {
    if (!(s.sigma > 0.0)) throw InvalidArgument("bound needs sigma > 0");
}

} // namespace

SigmaValue sigma(const ProductMeasure& measure) {
    double total = 0.0;
    for (double p : measure.p()) total += p * (1.0 - p);
    return sigma_from_variance(total);
}

SigmaValue sigma_from_variance(double sigma2) {
    if (!(sigma2 >= 0.0)) throw InvalidArgument("variance must be non-negative");
    return SigmaValue{sigma2, std::sqrt(sigma2)};
}

double bound_quadrature(const SigmaValue& s) {
    require_positive(s);
    const double scale = 2.0 * s.sigma2;
    auto integrand = [scale](double theta) {
        const double sine = std::sin(std::numbers::pi * theta);
        return std::exp(-scale * sine * sine);
    };
    const auto result =
        adaptive_simpson(integrand, 0.0, 0.5, kQuadratureTolerance / 2.0, kQuadratureDepth);
    return 2.0 * result.value;
}

double closed_constant(ClosedBoundMode mode) {
    switch (mode) {
    case ClosedBoundMode::sqrt_pi:
        return std::sqrt(std::numbers::pi);
    case ClosedBoundMode::tight:
        return std::sqrt(2.0 / std::numbers::pi);
    }
    throw InvalidArgument("unknown bound mode");
}

double bound_closed(const SigmaValue& s, ClosedBoundMode mode) {
    require_positive(s);
    return closed_constant(mode) / s.sigma;
}

BoundReport level_bound_check(const ProductMeasure& measure, ClosedBoundMode mode) {
    const SigmaValue s = sigma(measure);
    if (!(s.sigma > 0.0)) throw InvalidArgument("bound check needs a non-deterministic measure");
    BoundReport report;
    report.sigma = s.sigma;
    report.exact_max = level_pmf(measure).max_probability();
    report.quadrature_bound = bound_quadrature(s);
    report.closed_bound = bound_closed(s, mode);
    report.constant_used = closed_constant(mode);
    report.sqrt_pi_bound = bound_closed(s, ClosedBoundMode::sqrt_pi);
    const double tight = bound_closed(s, ClosedBoundMode::tight);
    report.ordered = report.exact_max <= report.quadrature_bound + kOrderingSlack &&
                     report.quadrature_bound <= tight + kOrderingSlack &&
                     tight <= report.sqrt_pi_bound + kOrderingSlack;
    return report;
}

double sharpness_ratio(long long n) {
    if (n <= 0 || n % 2 != 0) throw InvalidArgument("sharpness_ratio needs a positive even n");
    const double x = static_cast<double>(n);
    const double log_central = std::lgamma(x + 1.0) - 2.0 * std::lgamma(x / 2.0 + 1.0) -
                               x * std::numbers::ln2;
    return std::exp(0.5 * std::log(x) - std::numbers::ln2 + log_central);
}

} // namespace sperner
