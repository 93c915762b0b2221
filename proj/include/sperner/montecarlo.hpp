#pragma once

#include "sperner/antichain.hpp"
#include "sperner/chain.hpp"
#include "sperner/measure.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace sperner {

struct McOptions {
    /// Worker w draws from Rng(seed ^ (w * 0x9E3779B97F4A7C15)). Results are
    /// a deterministic function of (seed, workers).
    unsigned workers = 1;
    double alpha = 0.001;
    std::size_t cache_capacity = ChainSampler::kDefaultCacheCapacity;
};

std::uint64_t worker_seed(std::uint64_t seed, unsigned worker) noexcept;

/// Hardware concurrency, capped by SPERNER_LAB_THREADS when set.
unsigned default_worker_count();

enum class GofMode {
    /// Full histogram over the level, chi-square + total variation (n <= 12).
    histogram,
    /// Per-coordinate inclusion z-tests, Bonferroni-combined.
    marginals,
};

struct GofReport {
    GofMode mode = GofMode::histogram;
    int level = 0;
    long long trials = 0;
    /// Chi-square statistic (histogram) or max |z| (marginals).
    double statistic = 0.0;
    int dof = 0;
    double threshold = 0.0;
    bool pass = false;
    std::optional<double> tv_distance;
};

/// Samples c_l through the chain kernel and compares against the exact P_l.
/// Needs trials >= 10 * (number of cells).
GofReport estimate_level_marginal(const ProductMeasure& measure, int ell, long long trials,
                                  std::uint64_t seed, const McOptions& options = {});

struct LymEstimate {
    double mean_hits = 0.0;
    double standard_error = 0.0;
    long long trials = 0;
};

/// Monte Carlo mean of chain_hits over sampled maximal chains; trials >= 1000.
LymEstimate estimate_lym(const ProductMeasure& measure, const AntichainFamily& family,
                         long long trials, std::uint64_t seed, const McOptions& options = {});

/// counts[i][j] = number of sampled chains whose c_{levels[i]} contains j.
struct InclusionCounts {
    std::vector<int> levels;
    std::vector<std::vector<long long>> counts;
    long long trials = 0;
};

InclusionCounts collect_inclusion_counts(const ProductMeasure& measure, std::span<const int> levels,
                                         long long trials, std::uint64_t seed,
                                         const McOptions& options = {});

/// Upper-alpha standard normal quantile.
double normal_upper_quantile(double alpha);

/// Upper-alpha chi-square quantile. Closed forms for dof 1 and 2,
/// Wilson-Hilferty cube-root approximation above (about 1% for dof >= 3).
double chi_square_threshold(int dof, double alpha);

struct TwoSampleChiSquare {
    double statistic = 0.0;
    int dof = 0;
};

/// Homogeneity test for two equal-size samples over the same cells:
/// sum (a - b)^2 / (a + b) over cells with a + b > 0.
TwoSampleChiSquare chi_square_two_sample(std::span<const long long> a, std::span<const long long> b);

} // namespace sperner
