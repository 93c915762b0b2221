#pragma once

#include "sperner/measure.hpp"
#include "sperner/symfunc.hpp"

#include <cstddef>
#include <list>
#include <map>
#include <unordered_map>
#include <vector>

namespace sperner {

struct Successor {
    int coordinate;
    double probability;
};

/// One row of the level-l to level-(l+1) coupling kernel:
///     Pr[next = s + j | current = s] = q_j h_{s,j} / g_{l+1}(q).
struct TransitionRow {
    SubsetMask from;
    /// One entry per j not in `from`, ascending by j.
    std::vector<Successor> successors;
    /// log of sum_j q_j h_{s,j} before normalization; equals log g_{l+1}(q).
    double log_total = 0.0;
};

/// A maximal chain c_0 = {} < c_1 < ... < c_n = [n].
struct ChainSample {
    std::vector<SubsetMask> sets;

    int universe() const noexcept { return static_cast<int>(sets.size()) - 1; }
};

bool is_maximal_chain(const ChainSample& chain) noexcept;

/// Row probabilities are exponentiated after subtracting the row's own
/// log-sum, so they add to 1 up to rounding.
TransitionRow transition_row(const ProductMeasure& measure, const SubsetMask& s,
                             Arithmetic mode = Arithmetic::automatic);

/// Walks the kernel upward from the empty set. Rows are computed on demand
/// and optionally memoized in a bounded LRU cache.
class ChainSampler {
public:
    static constexpr std::size_t kDefaultCacheCapacity = std::size_t{1} << 16;

    explicit ChainSampler(const ProductMeasure& measure,
                          std::size_t cache_capacity = kDefaultCacheCapacity);

    int universe() const noexcept { return odds_.size(); }

    const TransitionRow& row(const SubsetMask& s);
    SubsetMask step(const SubsetMask& s, Rng& rng);
    ChainSample sample_chain(Rng& rng);
    SubsetMask sample_level(int ell, Rng& rng);

    std::size_t cached_rows() const noexcept { return index_.size(); }

private:
    TransitionRow build_row(const SubsetMask& s) const;

    OddsVector odds_;
    SymPolyTable table_;
    std::size_t capacity_;
    std::list<TransitionRow> lru_;
    std::unordered_map<std::uint64_t, std::list<TransitionRow>::iterator> index_;
    TransitionRow scratch_;
};

ChainSample sample_chain(const ProductMeasure& measure, Rng& rng);
SubsetMask sample_level(const ProductMeasure& measure, int ell, Rng& rng);

/// A distribution over the sets of one level.
using LevelDistribution = std::map<SubsetMask, double>;

/// Exact P_l: conditional_point over every set at level l (n <= 16).
LevelDistribution exact_level_distribution(const ProductMeasure& measure, int ell);

/// Exact image of `dist` under one kernel step (n <= 16).
LevelDistribution pushforward_level(const ProductMeasure& measure, const LevelDistribution& dist);

/// Pr[j in z | |z| = l] = q_j g_{l-1}(q without j) / g_l(q), for every j.
std::vector<double> inclusion_probabilities(const ProductMeasure& measure, int ell);

struct KernelResidualReport {
    int level = 0;
    /// max over s at `level` of |sum_{j not in s} q_j h_{s,j} / g_{l+1} - 1|
    double row_residual = 0.0;
    /// max over s' at `level + 1` of |sum_{j in s'} h_{s'-j,j} / g_l - 1|
    double column_residual = 0.0;
    std::size_t sets_checked = 0;
    bool exhaustive = true;

    double max_residual() const noexcept { return std::max(row_residual, column_residual); }
};

/// Exhaustive over the level for n <= 16; otherwise `samples` random sets
/// per identity drawn from `seed`.
KernelResidualReport verify_kernel_identities(const ProductMeasure& measure, int level,
                                              std::size_t samples = 256,
                                              std::uint64_t seed = 0,
                                              Arithmetic mode = Arithmetic::automatic);

} // namespace sperner
