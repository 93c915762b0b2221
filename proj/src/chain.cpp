#include "sperner/chain.hpp"

#include "sperner/error.hpp"
#include "sperner/logmath.hpp"

#include <cmath>
#include <numeric>

namespace sperner {

namespace {

constexpr int kMaxEnumeration = 16;

TransitionRow make_row(const OddsVector& q, const SubsetMask& s, Arithmetic mode) {
    if (s.universe() != q.size()) throw DimensionMismatch("subset universe does not match measure");
    if (s.size() >= q.size()) throw InvalidArgument("the full set has no successors");
    const auto weights = extension_weights(q, s, mode);
    std::vector<double> logs;
    logs.reserve(weights.size());
    for (const auto& w : weights) logs.push_back(w.log_weight);
    TransitionRow row;
    row.from = s;
    row.log_total = log_sum_exp(logs);
    row.successors.reserve(weights.size());
    for (const auto& w : weights) {
        row.successors.push_back(Successor{w.coordinate, std::exp(w.log_weight - row.log_total)});
    }
    return row;
}

int pick(const TransitionRow& row, double u) {
    double cumulative = 0.0;
    for (const auto& succ : row.successors) {
        cumulative += succ.probability;
        if (u < cumulative) return succ.coordinate;
    }
    return row.successors.back().coordinate;
}

// Uniform random l-subset of [n] by partial Fisher-Yates.
SubsetMask random_level_set(int n, int ell, Rng& rng) {
    std::vector<int> items(static_cast<std::size_t>(n));
    std::iota(items.begin(), items.end(), 0);
    std::uint64_t bits = 0;
    for (int i = 0; i < ell; ++i) {
        const auto span = static_cast<std::uint64_t>(n - i);
        const int k = i + static_cast<int>(rng() % span);
        std::swap(items[i], items[k]);
        bits |= std::uint64_t{1} << items[i];
    }
    return SubsetMask(n, bits);
}

} // namespace

bool is_maximal_chain(const ChainSample& chain) noexcept {
    if (chain.sets.empty()) return false;
    const int n = chain.universe();
    for (int ell = 0; ell <= n; ++ell) {
        const auto& c = chain.sets[ell];
        if (c.universe() != n || c.size() != ell) return false;
        if (ell > 0 && !chain.sets[ell - 1].is_proper_subset_of(c)) return false;
    }
    return true;
}

TransitionRow transition_row(const ProductMeasure& measure, const SubsetMask& s, Arithmetic mode) {
    return make_row(OddsVector(measure), s, mode);
}

ChainSampler::ChainSampler(const ProductMeasure& measure, std::size_t cache_capacity)
    : odds_(measure), table_(elem_sym_all(odds_)), capacity_(cache_capacity) {
    if (odds_.size() > SubsetMask::kMaxUniverse) {
        throw InvalidArgument("chain sampling supports n <= 64");
    }
}

TransitionRow ChainSampler::build_row(const SubsetMask& s) const {
    return make_row(odds_, s, Arithmetic::automatic);
}

const TransitionRow& ChainSampler::row(const SubsetMask& s) {
    if (capacity_ == 0) {
        scratch_ = build_row(s);
        return scratch_;
    }
    if (auto it = index_.find(s.bits()); it != index_.end()) {
        lru_.splice(lru_.begin(), lru_, it->second);
        return *it->second;
    }
    if (index_.size() >= capacity_) {
        index_.erase(lru_.back().from.bits());
        lru_.pop_back();
    }
    lru_.push_front(build_row(s));
    index_.emplace(s.bits(), lru_.begin());
    return lru_.front();
}

SubsetMask ChainSampler::step(const SubsetMask& s, Rng& rng) {
    const TransitionRow& r = row(s);
    return s.with(pick(r, uniform01(rng)));
}

ChainSample ChainSampler::sample_chain(Rng& rng) {
    const int n = universe();
    ChainSample chain;
    chain.sets.reserve(static_cast<std::size_t>(n) + 1);
    chain.sets.push_back(SubsetMask::empty(n));
    for (int ell = 0; ell < n; ++ell) chain.sets.push_back(step(chain.sets.back(), rng));
    if (!is_maximal_chain(chain)) throw Error("sampled chain is not maximal");
    return chain;
}

SubsetMask ChainSampler::sample_level(int ell, Rng& rng) {
    if (ell < 0 || ell > universe()) throw InvalidArgument("level out of range");
    SubsetMask s = SubsetMask::empty(universe());
    for (int i = 0; i < ell; ++i) s = step(s, rng);
    return s;
}

ChainSample sample_chain(const ProductMeasure& measure, Rng& rng) {
    return ChainSampler(measure, 0).sample_chain(rng);
}

SubsetMask sample_level(const ProductMeasure& measure, int ell, Rng& rng) {
    return ChainSampler(measure, 0).sample_level(ell, rng);
}

LevelDistribution exact_level_distribution(const ProductMeasure& measure, int ell) {
    const int n = measure.size();
    if (n > kMaxEnumeration) throw InvalidArgument("level enumeration supports n <= 16");
    const OddsVector q(measure);
    const SymPolyTable g = elem_sym_all(q);
    LevelDistribution out;
    for (const auto& s : level_sets(n, ell)) {
        double log_weight = 0.0;
        for (int j = 0; j < n; ++j) {
            if (s.contains(j)) log_weight += q.log_q()[j];
        }
        out.emplace(s, std::exp(log_weight - g.log_g[ell]));
    }
    return out;
}

LevelDistribution pushforward_level(const ProductMeasure& measure, const LevelDistribution& dist) {
    const int n = measure.size();
    if (n > kMaxEnumeration) throw InvalidArgument("pushforward supports n <= 16");
    if (dist.empty()) throw InvalidArgument("empty level distribution");
    const int ell = dist.begin()->first.size();
    double total = 0.0;
    for (const auto& [s, mass] : dist) {
        if (s.universe() != n) throw DimensionMismatch("distribution universe does not match measure");
        if (s.size() != ell) throw InvalidArgument("distribution mixes levels");
        if (mass < 0.0) throw InvalidArgument("negative probability in level distribution");
        total += mass;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw InvalidArgument("level distribution sums to " + std::to_string(total));
    }
    const OddsVector q(measure);
    LevelDistribution out;
    for (const auto& [s, mass] : dist) {
        if (mass == 0.0) continue;
        const TransitionRow row = make_row(q, s, Arithmetic::automatic);
        for (const auto& succ : row.successors) out[s.with(succ.coordinate)] += mass * succ.probability;
    }
    return out;
}

std::vector<double> inclusion_probabilities(const ProductMeasure& measure, int ell) {
    const int n = measure.size();
    if (ell < 0 || ell > n) throw InvalidArgument("level out of range");
    const OddsVector q(measure);
    const SymPolyTable g = elem_sym_all(q);
    std::vector<double> out(static_cast<std::size_t>(n), 0.0);
    if (ell == 0) return out;
    const SubsetMask all = SubsetMask::full(n);
    for (int j = 0; j < n; ++j) {
        const auto others = elem_sym_restricted(q, all.without(j), ell - 1);
        out[j] = std::exp(q.log_q()[j] + others[ell - 1] - g.log_g[ell]);
    }
    return out;
}

KernelResidualReport verify_kernel_identities(const ProductMeasure& measure, int level,
                                              std::size_t samples, std::uint64_t seed,
                                              Arithmetic mode) {
    const int n = measure.size();
    if (level < 0 || level > n) throw InvalidArgument("level out of range");
    if (n > SubsetMask::kMaxUniverse) throw InvalidArgument("kernel verification supports n <= 64");
    const OddsVector q(measure);
    const SymPolyTable g = elem_sym_all(q, mode);

    KernelResidualReport report;
    report.level = level;
    report.exhaustive = n <= kMaxEnumeration;
    Rng rng(seed);

    auto sets_at = [&](int ell) {
        if (report.exhaustive) return level_sets(n, ell);
        std::vector<SubsetMask> out;
        out.reserve(samples);
        for (std::size_t i = 0; i < samples; ++i) out.push_back(random_level_set(n, ell, rng));
        return out;
    };

    if (level < n) {
        for (const auto& s : sets_at(level)) {
            const auto weights = extension_weights(q, s, mode);
            std::vector<double> logs;
            for (const auto& w : weights) logs.push_back(w.log_weight);
            report.row_residual = std::max(report.row_residual,
                                           log_relative_gap(log_sum_exp(logs), g.log_g[level + 1]));
            ++report.sets_checked;
        }
        for (const auto& sp : sets_at(level + 1)) {
            std::vector<double> logs;
            for (int j = 0; j < n; ++j) {
                if (sp.contains(j)) logs.push_back(log_h_value(q, sp.without(j), j, mode));
            }
            report.column_residual = std::max(
                report.column_residual, log_relative_gap(log_sum_exp(logs), g.log_g[level]));
            ++report.sets_checked;
        }
    }
    return report;
}

} // namespace sperner
