#pragma once

#include "sperner/measure.hpp"

#include <vector>

namespace sperner {

/// log g_l(q) for l = 0..n, where g_l is the l-th elementary symmetric
/// polynomial of the odds. log_g[0] == 0.
struct SymPolyTable {
    std::vector<double> log_g;

    int degree() const noexcept { return static_cast<int>(log_g.size()) - 1; }
    double g(int ell) const;
};

/// All elementary symmetric polynomials of q by the one-coordinate-at-a-time
/// convolution.
SymPolyTable elem_sym_all(const OddsVector& q, Arithmetic mode = Arithmetic::automatic);

/// log e_k over the coordinates in `idx`, k = 0..max_degree.
/// Requires max_degree <= |idx|.
std::vector<double> elem_sym_restricted(const OddsVector& q, const SubsetMask& idx,
                                        int max_degree,
                                        Arithmetic mode = Arithmetic::automatic);

/// log h_{s,j}: the coupling weight for extending s by j (j not in s).
///
/// With l = |s| and t ranging over l-subsets avoiding j,
///     h_{s,j} = sum_t prod_{a in t} q_a / |(s + j) \ t|.
/// Splitting t into its parts inside and outside s gives
///     h_{s,j} = sum_k e_k(q|s) e_{l-k}(q|rest) / (l + 1 - k),
/// rest = [n] \ (s + j). Every term is positive. h_{{},j} == 1.
double log_h_value(const OddsVector& q, const SubsetMask& s, int j,
                   Arithmetic mode = Arithmetic::automatic);

double h_value(const OddsVector& q, const SubsetMask& s, int j,
               Arithmetic mode = Arithmetic::automatic);

struct ExtensionWeight {
    int coordinate;
    /// log(q_j * h_{s,j})
    double log_weight;
};

/// log(q_j h_{s,j}) for every j not in s, ascending by j. Shares the e_k(q|s)
/// table across the row; the complement table is rebuilt for each j.
std::vector<ExtensionWeight> extension_weights(const OddsVector& q, const SubsetMask& s,
                                               Arithmetic mode = Arithmetic::automatic);

} // namespace sperner
