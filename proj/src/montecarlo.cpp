#include "sperner/montecarlo.hpp"

#include "sperner/error.hpp"
#include "sperner/symfunc.hpp"

#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>
#include <unordered_map>

namespace sperner {

namespace {

constexpr int kHistogramMaxUniverse = 12;
constexpr long long kMinLymTrials = 1000;

long long share_of(long long trials, unsigned workers, unsigned w) {
    const long long base = trials / workers;
    return base + (static_cast<long long>(w) < trials % workers ? 1 : 0);
}

// Runs body(worker, rng, share) on `workers` threads; worker 0 runs inline.
template <class Body>
void run_workers(long long trials, std::uint64_t seed, unsigned workers, Body&& body) {
    workers = std::max(1u, workers);
    std::vector<std::thread> threads;
    for (unsigned w = 1; w < workers; ++w) {
        threads.emplace_back([&, w] {
            Rng rng(worker_seed(seed, w));
            body(w, rng, share_of(trials, workers, w));
        });
    }
    Rng rng(worker_seed(seed, 0));
    body(0u, rng, share_of(trials, workers, 0));
    for (auto& t : threads) t.join();
}

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw InvalidArgument("alpha must lie in (0, 1), got " + std::to_string(alpha));
    }
}

std::uint64_t binomial(int n, int k) {
    std::uint64_t out = 1;
    for (int i = 1; i <= k; ++i) out = out * static_cast<std::uint64_t>(n - k + i) / i;
    return out;
}

GofReport histogram_check(const ProductMeasure& measure, int ell, long long trials,
                          std::uint64_t seed, const McOptions& options) {
    const auto exact = exact_level_distribution(measure, ell);
    std::vector<SubsetMask> cells;
    std::vector<double> probs;
    for (const auto& [s, pr] : exact) {
        cells.push_back(s);
        probs.push_back(pr);
    }
    std::unordered_map<std::uint64_t, std::size_t> slot;
    for (std::size_t i = 0; i < cells.size(); ++i) slot.emplace(cells[i].bits(), i);

    const unsigned workers = std::max(1u, options.workers);
    std::vector<std::vector<long long>> partial(workers, std::vector<long long>(cells.size(), 0));
    run_workers(trials, seed, workers, [&](unsigned w, Rng& rng, long long share) {
        ChainSampler sampler(measure, options.cache_capacity);
        auto& counts = partial[w];
        for (long long t = 0; t < share; ++t) ++counts[slot.at(sampler.sample_level(ell, rng).bits())];
    });
    std::vector<long long> counts(cells.size(), 0);
    for (const auto& part : partial) {
        for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += part[i];
    }

    GofReport report;
    report.mode = GofMode::histogram;
    report.level = ell;
    report.trials = trials;
    const auto total = static_cast<double>(trials);
    double chi2 = 0.0;
    double tv = 0.0;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const double expected = total * probs[i];
        const double diff = static_cast<double>(counts[i]) - expected;
        chi2 += diff * diff / expected;
        tv += std::abs(static_cast<double>(counts[i]) / total - probs[i]);
    }
    report.statistic = chi2;
    report.dof = static_cast<int>(cells.size()) - 1;
    report.threshold = report.dof > 0 ? chi_square_threshold(report.dof, options.alpha) : 0.0;
    report.pass = report.statistic <= report.threshold;
    report.tv_distance = std::min(1.0, 0.5 * tv);
    return report;
}

GofReport marginal_check(const ProductMeasure& measure, int ell, long long trials,
                         std::uint64_t seed, const McOptions& options) {
    const int n = measure.size();
    const int levels[] = {ell};
    const auto observed = collect_inclusion_counts(measure, levels, trials, seed, options);
    const auto expected = inclusion_probabilities(measure, ell);
    double worst = 0.0;
    const auto total = static_cast<double>(trials);
    for (int j = 0; j < n; ++j) {
        const double pi = expected[j];
        const double freq = static_cast<double>(observed.counts[0][j]) / total;
        const double var = pi * (1.0 - pi) / total;
        double z = 0.0;
        if (var > 0.0) {
            z = std::abs(freq - pi) / std::sqrt(var);
        } else if (std::abs(freq - pi) > 1e-12) {
            z = std::numeric_limits<double>::infinity();
        }
        worst = std::max(worst, z);
    }
    GofReport report;
    report.mode = GofMode::marginals;
    report.level = ell;
    report.trials = trials;
    report.statistic = worst;
    report.dof = n;
    report.threshold = normal_upper_quantile(options.alpha / (2.0 * n));
    report.pass = report.statistic <= report.threshold;
    return report;
}

} // namespace

std::uint64_t worker_seed(std::uint64_t seed, unsigned worker) noexcept {
    return seed ^ (static_cast<std::uint64_t>(worker) * 0x9E3779B97F4A7C15ull);
}

unsigned default_worker_count() {
    unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    if (const char* cap = std::getenv("SPERNER_LAB_THREADS")) {
        char* end = nullptr;
        const unsigned long v = std::strtoul(cap, &end, 10);
        if (end != cap && *end == '\0' && v > 0) workers = std::min(workers, static_cast<unsigned>(v));
    }
    return workers;
}

GofReport estimate_level_marginal(const ProductMeasure& measure, int ell, long long trials,
                                  std::uint64_t seed, const McOptions& options) {
    const int n = measure.size();
    measure.require_nontrivial();
    check_alpha(options.alpha);
    if (ell < 0 || ell > n) throw InvalidArgument("level out of range");
    const bool histogram = n <= kHistogramMaxUniverse;
    const auto cells = histogram ? binomial(n, ell) : static_cast<std::uint64_t>(n);
    if (trials < 0 || static_cast<std::uint64_t>(trials) < 10 * cells) {
        throw InsufficientTrials("need at least " + std::to_string(10 * cells) + " trials for " +
                                 std::to_string(cells) + " cells, got " + std::to_string(trials));
    }
    return histogram ? histogram_check(measure, ell, trials, seed, options)
                     : marginal_check(measure, ell, trials, seed, options);
}

LymEstimate estimate_lym(const ProductMeasure& measure, const AntichainFamily& family,
                         long long trials, std::uint64_t seed, const McOptions& options) {
    if (family.universe() != measure.size()) throw DimensionMismatch("family universe does not match measure");
    if (!family.is_checked() && !is_antichain(family.members())) {
        throw NotAntichain("family has a member strictly contained in another");
    }
    if (trials < kMinLymTrials) {
        throw InsufficientTrials("estimate_lym needs at least 1000 trials");
    }
    const unsigned workers = std::max(1u, options.workers);
    std::vector<long long> hits(workers, 0);
    std::vector<long long> hits_squared(workers, 0);
    run_workers(trials, seed, workers, [&](unsigned w, Rng& rng, long long share) {
        ChainSampler sampler(measure, options.cache_capacity);
        for (long long t = 0; t < share; ++t) {
            const long long h = chain_hits(sampler.sample_chain(rng), family).count;
            hits[w] += h;
            hits_squared[w] += h * h;
        }
    });
    long long sum = 0;
    long long sum_sq = 0;
    for (unsigned w = 0; w < workers; ++w) {
        sum += hits[w];
        sum_sq += hits_squared[w];
    }
    const auto total = static_cast<double>(trials);
    LymEstimate out;
    out.trials = trials;
    out.mean_hits = static_cast<double>(sum) / total;
    const double var =
        std::max(0.0, (static_cast<double>(sum_sq) - total * out.mean_hits * out.mean_hits) / (total - 1.0));
    out.standard_error = std::sqrt(var / total);
    return out;
}

InclusionCounts collect_inclusion_counts(const ProductMeasure& measure, std::span<const int> levels,
                                         long long trials, std::uint64_t seed,
                                         const McOptions& options) {
    const int n = measure.size();
    for (int ell : levels) {
        if (ell < 0 || ell > n) throw InvalidArgument("level out of range");
    }
    const unsigned workers = std::max(1u, options.workers);
    using Table = std::vector<std::vector<long long>>;
    std::vector<Table> partial(workers, Table(levels.size(), std::vector<long long>(n, 0)));
    run_workers(trials, seed, workers, [&](unsigned w, Rng& rng, long long share) {
        ChainSampler sampler(measure, options.cache_capacity);
        auto& table = partial[w];
        for (long long t = 0; t < share; ++t) {
            const ChainSample chain = sampler.sample_chain(rng);
            for (std::size_t i = 0; i < levels.size(); ++i) {
                const SubsetMask& c = chain.sets[levels[i]];
                for (int j = 0; j < n; ++j) table[i][j] += c.contains(j) ? 1 : 0;
            }
        }
    });
    InclusionCounts out;
    out.levels.assign(levels.begin(), levels.end());
    out.trials = trials;
    out.counts = std::move(partial[0]);
    for (unsigned w = 1; w < workers; ++w) {
        for (std::size_t i = 0; i < levels.size(); ++i) {
            for (int j = 0; j < n; ++j) out.counts[i][j] += partial[w][i][j];
        }
    }
    return out;
}

double normal_upper_quantile(double alpha) {
    check_alpha(alpha);
    return boost::math::quantile(boost::math::complement(boost::math::normal(), alpha));
}

double chi_square_threshold(int dof, double alpha) {
    check_alpha(alpha);
    if (dof < 1) throw InvalidArgument("chi-square threshold needs dof >= 1");
    if (dof == 1) {
        const double z = normal_upper_quantile(alpha / 2.0);
        return z * z;
    }
    if (dof == 2) return -2.0 * std::log(alpha);
    const double k = dof;
    const double z = normal_upper_quantile(alpha);
    const double c = 2.0 / (9.0 * k);
    const double root = 1.0 - c + z * std::sqrt(c);
    return k * root * root * root;
}

TwoSampleChiSquare chi_square_two_sample(std::span<const long long> a, std::span<const long long> b) {
    if (a.size() != b.size()) throw DimensionMismatch("two-sample cells differ in length");
    TwoSampleChiSquare out;
    int used = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double total = static_cast<double>(a[i] + b[i]);
        if (total == 0.0) continue;
        const double diff = static_cast<double>(a[i] - b[i]);
        out.statistic += diff * diff / total;
        ++used;
    }
    out.dof = std::max(0, used - 1);
    return out;
}

} // namespace sperner
