#include "sperner/antichain.hpp"

#include "min_flow.hpp"
#include "sperner/error.hpp"
#include "sperner/symfunc.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace sperner {

namespace {

constexpr int kMaxFlowUniverse = 14;
constexpr int kMaxEnumerationUniverse = 5;
constexpr double kTheoremSlack = 1e-9;

void require_universe(int expected, int actual, const char* what) {
    if (expected != actual) {
        throw DimensionMismatch(std::string(what) + ": universe " + std::to_string(actual) +
                                " does not match " + std::to_string(expected));
    }
}

void require_antichain(const AntichainFamily& family) {
    if (!family.is_checked() && !is_antichain(family.members())) {
        throw NotAntichain("family has a member strictly contained in another");
    }
}

void enumerate_from(int n, std::uint64_t next, std::vector<SubsetMask>& current,
                    const std::function<void(const AntichainFamily&)>& visit) {
    const std::uint64_t end = std::uint64_t{1} << n;
    if (next == end) {
        visit(AntichainFamily(n, current));
        return;
    }
    enumerate_from(n, next + 1, current, visit);
    const SubsetMask candidate(n, next);
    const bool comparable = std::any_of(current.begin(), current.end(), [&](const SubsetMask& m) {
        return m.is_proper_subset_of(candidate) || candidate.is_proper_subset_of(m);
    });
    if (!comparable) {
        current.push_back(candidate);
        enumerate_from(n, next + 1, current, visit);
        current.pop_back();
    }
}

} // namespace

bool is_antichain(std::span<const SubsetMask> family) {
    if (family.empty()) return true;
    const int n = family.front().universe();
    for (const auto& m : family) require_universe(n, m.universe(), "is_antichain");
    for (std::size_t i = 0; i < family.size(); ++i) {
        for (std::size_t k = i + 1; k < family.size(); ++k) {
            const std::uint64_t a = family[i].bits();
            const std::uint64_t b = family[k].bits();
            if (a == b) continue;
            const std::uint64_t both = a & b;
            if (both == a || both == b) return false;
        }
    }
    return true;
}

AntichainFamily::AntichainFamily(int n, std::vector<SubsetMask> members)
    : n_(n), members_(std::move(members)) {
    for (const auto& m : members_) require_universe(n_, m.universe(), "family member");
    std::sort(members_.begin(), members_.end());
    if (std::adjacent_find(members_.begin(), members_.end()) != members_.end()) {
        throw InvalidArgument("family has duplicate members");
    }
}

AntichainFamily AntichainFamily::checked(int n, std::vector<SubsetMask> members) {
    AntichainFamily family(n, std::move(members));
    if (!family.verify()) throw NotAntichain("family has a member strictly contained in another");
    return family;
}

AntichainFamily AntichainFamily::level(int n, int ell) {
    AntichainFamily family(n, level_sets(n, ell));
    family.checked_ = true;
    return family;
}

bool AntichainFamily::verify() {
    if (!checked_) checked_ = is_antichain(members_);
    return checked_;
}

double lym_sum(const ProductMeasure& measure, const AntichainFamily& family) {
    require_universe(measure.size(), family.universe(), "lym_sum");
    require_antichain(family);
    const OddsVector q(measure);
    const SymPolyTable g = elem_sym_all(q);
    double total = 0.0;
    for (const auto& a : family.members()) {
        double log_weight = -g.log_g[a.size()];
        for (int j = 0; j < q.size(); ++j) {
            if (a.contains(j)) log_weight += q.log_q()[j];
        }
        total += std::exp(log_weight);
    }
    if (total > 1.0 + kTheoremSlack) {
        throw TheoremViolation("LYM sum " + std::to_string(total) + " exceeds 1 on an antichain");
    }
    return total;
}

double family_weight(const ProductMeasure& measure, const AntichainFamily& family) {
    require_universe(measure.size(), family.universe(), "family_weight");
    double total = 0.0;
    for (const auto& a : family.members()) total += point_mass(measure, a);
    return total;
}

SpernerReport sperner_check(const ProductMeasure& measure, const AntichainFamily& family) {
    require_universe(measure.size(), family.universe(), "sperner_check");
    require_antichain(family);
    SpernerReport report;
    report.measure = family_weight(measure, family);
    report.max_level = level_pmf(measure).max_probability();
    report.satisfied = report.measure <= report.max_level + kTheoremSlack;
    return report;
}

ChainHitCount chain_hits(const ChainSample& chain, const AntichainFamily& family) {
    require_universe(family.universe(), chain.universe(), "chain_hits");
    std::unordered_set<std::uint64_t> members;
    members.reserve(family.size());
    for (const auto& m : family.members()) members.insert(m.bits());
    ChainHitCount hits;
    for (const auto& c : chain.sets) {
        if (members.count(c.bits()) != 0) ++hits.count;
    }
    return hits;
}

MaxAntichainResult max_weight_antichain(const ProductMeasure& measure) {
    const int n = measure.size();
    if (n > kMaxFlowUniverse) {
        throw InvalidArgument("max_weight_antichain supports n <= 14, got " + std::to_string(n));
    }
    const std::uint64_t count = std::uint64_t{1} << n;
    const std::uint64_t full = count - 1;

    std::vector<double> weight(count);
    for (std::uint64_t s = 0; s < count; ++s) weight[s] = point_mass(measure, SubsetMask(n, s));

    // Feasible flow: send w(s) along the chain that adds the elements of s in
    // ascending order, then the remaining elements in ascending order.
    std::vector<double> node_flow(count, 0.0);
    std::vector<double> cover_flow(count * static_cast<std::uint64_t>(n), 0.0);
    double total = 0.0;
    for (std::uint64_t s = 0; s < count; ++s) {
        const double w = weight[s];
        if (w == 0.0) continue;
        total += w;
        std::uint64_t at = 0;
        node_flow[at] += w;
        auto climb = [&](std::uint64_t pool) {
            for (int j = 0; j < n; ++j) {
                if (!((pool >> j) & 1u)) continue;
                cover_flow[at * n + j] += w;
                at |= std::uint64_t{1} << j;
                node_flow[at] += w;
            }
        };
        climb(s);
        climb(full & ~s);
    }

    // Node s splits into in = 2s and out = 2s + 1. Every arc has infinite
    // upper bound; only node arcs carry a lower bound w(s). Reducing the
    // feasible flow is a max flow from sink to source where arc (u, v) can
    // give back flow - lower and absorb unlimited extra flow.
    const int source = static_cast<int>(2 * count);
    const int sink = source + 1;
    detail::FlowNetwork net(sink + 1, 1e-15);
    const double inf = detail::FlowNetwork::kInfinity;
    auto in = [](std::uint64_t s) { return static_cast<int>(2 * s); };
    auto out = [](std::uint64_t s) { return static_cast<int>(2 * s + 1); };
    net.add_pair(source, in(0), inf, total);
    net.add_pair(out(full), sink, inf, total);
    for (std::uint64_t s = 0; s < count; ++s) {
        net.add_pair(in(s), out(s), inf, node_flow[s] - weight[s]);
        for (int j = 0; j < n; ++j) {
            if ((s >> j) & 1u) continue;
            net.add_pair(out(s), in(s | (std::uint64_t{1} << j)), inf, cover_flow[s * n + j]);
        }
    }
    const double reduction = net.max_flow(sink, source);
    const double flow_value = total - reduction;

    // Sets reachable from the sink form an up-set; the node arcs leaving it
    // downward are tight and their sets form an optimal antichain.
    const auto upper = net.reachable(sink);
    std::vector<SubsetMask> cut;
    for (std::uint64_t s = 0; s < count; ++s) {
        if (upper[out(s)] && !upper[in(s)]) cut.emplace_back(n, s);
    }

    std::vector<AntichainFamily> candidates;
    if (AntichainFamily cut_family(n, std::move(cut)); cut_family.verify()) {
        candidates.push_back(std::move(cut_family));
    }
    for (int ell = 0; ell <= n; ++ell) candidates.push_back(AntichainFamily::level(n, ell));
    std::vector<double> weights;
    double best = 0.0;
    for (const auto& c : candidates) {
        weights.push_back(family_weight(measure, c));
        best = std::max(best, weights.back());
    }
    // Near-ties go to the lexicographically smallest member list.
    const double tie = 1e-12 * std::max(1.0, best);
    std::size_t chosen = candidates.size();
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (weights[i] < best - tie) continue;
        if (chosen == candidates.size() ||
            std::lexicographical_compare(candidates[i].members().begin(), candidates[i].members().end(),
                                         candidates[chosen].members().begin(),
                                         candidates[chosen].members().end())) {
            chosen = i;
        }
    }
    return MaxAntichainResult{std::move(candidates[chosen]), weights[chosen], flow_value};
}

void for_each_antichain(int n, const std::function<void(const AntichainFamily&)>& visit) {
    if (n < 0 || n > kMaxEnumerationUniverse) {
        throw InvalidArgument("antichain enumeration supports 0 <= n <= 5, got " + std::to_string(n));
    }
    std::vector<SubsetMask> current;
    enumerate_from(n, 0, current, visit);
}

std::vector<AntichainFamily> enumerate_antichains(int n) {
    std::vector<AntichainFamily> out;
    for_each_antichain(n, [&](const AntichainFamily& f) { out.push_back(f); });
    return out;
}

} // namespace sperner
