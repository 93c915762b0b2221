#include "sperner/symfunc.hpp"

#include "sperner/error.hpp"
#include "sperner/logmath.hpp"

#include <cmath>

namespace sperner {

namespace {

bool use_linear(const OddsVector& q, Arithmetic mode) {
    switch (mode) {
    case Arithmetic::linear:
        return true;
    case Arithmetic::log:
        return false;
    case Arithmetic::automatic:
        break;
    }
    return q.linear_safe();
}

// e_k, k = 0..max_degree, over coordinates whose bit is set in `bits`.
// Degrees above the number of selected coordinates come out as 0.
std::vector<double> linear_elementary(const OddsVector& q, std::uint64_t bits, int max_degree) {
    std::vector<double> e(static_cast<std::size_t>(max_degree) + 1, 0.0);
    e[0] = 1.0;
    int seen = 0;
    for (int j = 0; j < q.size(); ++j) {
        if (!((bits >> j) & 1u)) continue;
        ++seen;
        const double qj = q.q()[j];
        for (int k = std::min(seen, max_degree); k >= 1; --k) e[k] += e[k - 1] * qj;
    }
    return e;
}

// Same table in log space; missing degrees are -inf.
std::vector<double> log_elementary(const OddsVector& q, std::uint64_t bits, int max_degree) {
    std::vector<double> e(static_cast<std::size_t>(max_degree) + 1, kNegInf);
    e[0] = 0.0;
    int seen = 0;
    for (int j = 0; j < q.size(); ++j) {
        if (!((bits >> j) & 1u)) continue;
        ++seen;
        const double lq = q.log_q()[j];
        for (int k = std::min(seen, max_degree); k >= 1; --k) {
            e[k] = log_add_exp(e[k], e[k - 1] + lq);
        }
    }
    return e;
}

std::vector<double> to_log(std::vector<double> values) {
    for (double& v : values) v = v > 0.0 ? std::log(v) : kNegInf;
    return values;
}

double linear_h(std::span<const double> inside, std::span<const double> rest, int ell) {
    double acc = 0.0;
    for (int k = 0; k <= ell; ++k) {
        acc += inside[k] * rest[ell - k] / static_cast<double>(ell + 1 - k);
    }
    return acc;
}

double log_h(std::span<const double> inside, std::span<const double> rest, int ell) {
    std::vector<double> terms;
    terms.reserve(static_cast<std::size_t>(ell) + 1);
    for (int k = 0; k <= ell; ++k) {
        terms.push_back(inside[k] + rest[ell - k] - std::log(static_cast<double>(ell + 1 - k)));
    }
    return log_sum_exp(terms);
}

void check_universe(const OddsVector& q, const SubsetMask& s) {
    if (s.universe() != q.size()) {
        throw DimensionMismatch("subset universe does not match odds dimension");
    }
}

} // namespace

double SymPolyTable::g(int ell) const { return std::exp(log_g.at(static_cast<std::size_t>(ell))); }

SymPolyTable elem_sym_all(const OddsVector& q, Arithmetic mode) {
    const int n = q.size();
    if (n <= 64) {
        const std::uint64_t all = universe_bits(n);
        return SymPolyTable{use_linear(q, mode) ? to_log(linear_elementary(q, all, n))
                                                : log_elementary(q, all, n)};
    }
    // Too wide for a mask; the log recursion runs over every coordinate.
    std::vector<double> e(static_cast<std::size_t>(n) + 1, kNegInf);
    e[0] = 0.0;
    for (int j = 0; j < n; ++j) {
        const double lq = q.log_q()[j];
        for (int k = j + 1; k >= 1; --k) e[k] = log_add_exp(e[k], e[k - 1] + lq);
    }
    return SymPolyTable{std::move(e)};
}

std::vector<double> elem_sym_restricted(const OddsVector& q, const SubsetMask& idx,
                                        int max_degree, Arithmetic mode) {
    check_universe(q, idx);
    if (max_degree < 0 || max_degree > idx.size()) {
        throw InvalidArgument("degree " + std::to_string(max_degree) +
                              " out of range for an index set of size " +
                              std::to_string(idx.size()));
    }
    return use_linear(q, mode) ? to_log(linear_elementary(q, idx.bits(), max_degree))
                               : log_elementary(q, idx.bits(), max_degree);
}

double log_h_value(const OddsVector& q, const SubsetMask& s, int j, Arithmetic mode) {
    check_universe(q, s);
    if (j < 0 || j >= q.size()) throw InvalidArgument("coordinate out of range");
    if (s.contains(j)) throw InvalidArgument("h_{s,j} needs j outside s");
    const int ell = s.size();
    if (ell == 0) return 0.0;
    const std::uint64_t rest = universe_bits(q.size()) & ~s.bits() & ~(std::uint64_t{1} << j);
    if (use_linear(q, mode)) {
        return std::log(linear_h(linear_elementary(q, s.bits(), ell),
                                 linear_elementary(q, rest, ell), ell));
    }
    return log_h(log_elementary(q, s.bits(), ell), log_elementary(q, rest, ell), ell);
}

double h_value(const OddsVector& q, const SubsetMask& s, int j, Arithmetic mode) {
    return std::exp(log_h_value(q, s, j, mode));
}

std::vector<ExtensionWeight> extension_weights(const OddsVector& q, const SubsetMask& s,
                                               Arithmetic mode) {
    check_universe(q, s);
    const int n = q.size();
    const int ell = s.size();
    const bool linear = use_linear(q, mode);
    const auto inside = linear ? linear_elementary(q, s.bits(), ell) : log_elementary(q, s.bits(), ell);
    std::vector<ExtensionWeight> row;
    row.reserve(static_cast<std::size_t>(n - ell));
    const std::uint64_t free_bits = universe_bits(n) & ~s.bits();
    for (int j = 0; j < n; ++j) {
        if (s.contains(j)) continue;
        double log_hj = 0.0;
        if (ell > 0) {
            const std::uint64_t rest = free_bits & ~(std::uint64_t{1} << j);
            log_hj = linear ? std::log(linear_h(inside, linear_elementary(q, rest, ell), ell))
                            : log_h(inside, log_elementary(q, rest, ell), ell);
        }
        row.push_back(ExtensionWeight{j, q.log_q()[j] + log_hj});
    }
    return row;
}

} // namespace sperner
