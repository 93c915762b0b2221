#include "oracles.hpp"

#include "sperner/antichain.hpp"
#include "sperner/error.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

using namespace sperner;

namespace {

// Every family of {0,1}^n checked pairwise; feasible for n <= 4 (2^16 families).
std::vector<std::vector<std::uint64_t>> antichains_by_subset_scan(int n) {
    const std::uint64_t points = std::uint64_t{1} << n;
    std::vector<std::vector<std::uint64_t>> out;
    for (std::uint64_t family = 0; family < (std::uint64_t{1} << points); ++family) {
        std::vector<std::uint64_t> members;
        for (std::uint64_t s = 0; s < points; ++s) {
            if ((family >> s) & 1u) members.push_back(s);
        }
        bool ok = true;
        for (std::size_t i = 0; i < members.size() && ok; ++i) {
            for (std::size_t k = 0; k < members.size() && ok; ++k) {
                if (i != k && (members[i] & members[k]) == members[i]) ok = false;
            }
        }
        if (ok) out.push_back(members);
    }
    return out;
}

std::vector<std::uint64_t> bits_of(const AntichainFamily& f) {
    std::vector<std::uint64_t> out;
    for (const auto& m : f.members()) out.push_back(m.bits());
    return out;
}

ChainSample chain_from(int n, std::initializer_list<int> order) {
    ChainSample c;
    SubsetMask s(n, 0);
    c.sets.push_back(s);
    for (int j : order) {
        s = s.with(j);
        c.sets.push_back(s);
    }
    return c;
}

} // namespace

TEST_SUITE("antichain") {

TEST_CASE("is_antichain examples") {
    const auto level = level_sets(4, 2);
    CHECK(is_antichain(level));
    const std::vector<SubsetMask> nested{SubsetMask::of(2, {0}), SubsetMask::of(2, {0, 1})};
    CHECK_FALSE(is_antichain(nested));
    const std::vector<SubsetMask> apart{SubsetMask::of(3, {0}), SubsetMask::of(3, {1, 2})};
    CHECK(is_antichain(apart));
    const std::vector<SubsetMask> mixed{SubsetMask(3, 1), SubsetMask(4, 2)};
    CHECK_THROWS_AS(is_antichain(mixed), DimensionMismatch);
    CHECK(is_antichain(std::vector<SubsetMask>{}));
}

TEST_CASE("family construction") {
    CHECK_THROWS_AS(AntichainFamily(3, {SubsetMask(3, 1), SubsetMask(3, 1)}), InvalidArgument);
    CHECK_THROWS_AS(AntichainFamily(3, {SubsetMask(2, 1)}), DimensionMismatch);
    CHECK_THROWS_AS(AntichainFamily::checked(2, {SubsetMask(2, 1), SubsetMask(2, 3)}), NotAntichain);
    const AntichainFamily sorted(3, {SubsetMask(3, 6), SubsetMask(3, 1)});
    CHECK(sorted.members()[0].bits() == 1);
    CHECK_FALSE(sorted.is_checked());
    CHECK(AntichainFamily::level(3, 1).is_checked());
}

TEST_CASE("lym_sum examples") {
    const ProductMeasure m({0.2, 0.5, 0.7});
    for (int ell = 0; ell <= 3; ++ell) CHECK(std::abs(lym_sum(m, AntichainFamily::level(3, ell)) - 1.0) < 1e-12);
    CHECK(lym_sum(m, AntichainFamily(3, {SubsetMask(3, 0)})) == doctest::Approx(1.0).epsilon(1e-15));
    const AntichainFamily f(3, {SubsetMask::of(3, {0}), SubsetMask::of(3, {1, 2})});
    CHECK(lym_sum(m, f) == doctest::Approx(0.03 / 0.43 + 0.28 / 0.38).epsilon(1e-13));
    CHECK(lym_sum(m, f) == doctest::Approx(0.806609).epsilon(1e-6));

    CHECK_THROWS_AS(lym_sum(m, AntichainFamily(3, {SubsetMask(3, 1), SubsetMask(3, 3)})), NotAntichain);
    CHECK_THROWS_AS(lym_sum(ProductMeasure({0.2, 1.0, 0.7}), f), TrivialMeasure);
}

TEST_CASE("sperner_check examples") {
    const auto r = sperner_check(ProductMeasure::uniform(4), AntichainFamily::level(4, 2));
    CHECK(r.measure == doctest::Approx(0.375).epsilon(1e-15));
    CHECK(r.max_level == doctest::Approx(0.375).epsilon(1e-15));
    CHECK(r.satisfied);

    const ProductMeasure m({0.2, 0.5, 0.7});
    const auto s = sperner_check(m, AntichainFamily(3, {SubsetMask::of(3, {0}), SubsetMask::of(3, {1, 2})}));
    CHECK(s.measure == doctest::Approx(0.31).epsilon(1e-14));
    CHECK(s.max_level == doctest::Approx(0.43).epsilon(1e-14));
    CHECK(s.satisfied);

    const auto none = sperner_check(m, AntichainFamily(3, {}));
    CHECK(none.measure == 0.0);
    CHECK(none.satisfied);
    CHECK_THROWS_AS(sperner_check(m, AntichainFamily(3, {SubsetMask(3, 1), SubsetMask(3, 3)})), NotAntichain);
}

TEST_CASE("chain_hits examples") {
    const ChainSample c = chain_from(3, {0, 1, 2});
    for (int ell = 0; ell <= 3; ++ell) CHECK(chain_hits(c, AntichainFamily::level(3, ell)).count == 1);
    CHECK(chain_hits(c, AntichainFamily(3, {})).count == 0);
    CHECK(chain_hits(c, AntichainFamily(3, {SubsetMask::of(3, {0}), SubsetMask::of(3, {0, 1})})).count == 2);
}

TEST_CASE("enumerate_antichains counts and agrees with a pairwise scan") {
    const auto one = enumerate_antichains(1);
    REQUIRE(one.size() == 3);
    CHECK(one[0].size() + one[1].size() + one[2].size() == 2);

    const std::size_t dedekind[] = {2, 3, 6, 20, 168, 7581};
    for (int n = 0; n <= 5; ++n) CHECK(enumerate_antichains(n).size() == dedekind[n]);

    for (int n = 0; n <= 4; ++n) {
        std::set<std::vector<std::uint64_t>> from_enumerator;
        for (const auto& f : enumerate_antichains(n)) from_enumerator.insert(bits_of(f));
        const auto scanned = antichains_by_subset_scan(n);
        CHECK(from_enumerator.size() == scanned.size());
        for (const auto& f : scanned) CHECK(from_enumerator.count(f) == 1);
    }

    std::set<std::vector<std::uint64_t>> distinct;
    for (const auto& f : enumerate_antichains(5)) {
        CHECK(is_antichain(f.members()));
        distinct.insert(bits_of(f));
    }
    CHECK(distinct.size() == 7581);
    CHECK_THROWS_AS(enumerate_antichains(6), InvalidArgument);
}

TEST_CASE("max_weight_antichain examples") {
    const auto u = max_weight_antichain(ProductMeasure::uniform(4));
    CHECK(u.weight == doctest::Approx(0.375).epsilon(1e-14));
    CHECK(u.flow_value == doctest::Approx(0.375).epsilon(1e-12));
    CHECK(u.family == AntichainFamily::level(4, 2));

    const auto m = max_weight_antichain(ProductMeasure({0.2, 0.5, 0.7}));
    CHECK(m.weight == doctest::Approx(0.43).epsilon(1e-14));
    CHECK(m.family == AntichainFamily::level(3, 1));

    // levels 2 and 3 tie at 10/32; level 2 has the smaller first mask
    const auto odd = max_weight_antichain(ProductMeasure::uniform(5));
    CHECK(odd.family == AntichainFamily::level(5, 2));

    CHECK_THROWS_AS(max_weight_antichain(ProductMeasure::uniform(15)), InvalidArgument);
}

TEST_CASE("max_weight_antichain equals the brute-force optimum (n <= 5)") {
    Rng rng(41);
    for (int n = 1; n <= 5; ++n) {
        const auto all = enumerate_antichains(n);
        for (int trial = 0; trial < 8; ++trial) {
            const ProductMeasure m = oracle::random_measure(n, rng);
            double best = -1.0;
            for (const auto& f : all) {
                double w = 0.0;
                for (const auto& s : f.members()) w += oracle::mass(m.p(), s.bits());
                best = std::max(best, w);
            }
            const auto r = max_weight_antichain(m);
            CHECK(std::abs(r.weight - best) < 1e-14);
            CHECK(std::abs(r.flow_value - best) < 1e-12);
            CHECK(is_antichain(r.family.members()));
        }
    }
}

TEST_CASE("max_weight_antichain dominates every level and matches the best one (n <= 12)") {
    Rng rng(42);
    for (int n = 6; n <= 12; n += 2) {
        const ProductMeasure m = oracle::random_measure(n, rng, 0.001, 0.999);
        const auto r = max_weight_antichain(m);
        const auto pmf = level_pmf(m);
        CHECK(r.family.is_checked());
        for (double pl : pmf.probs) CHECK(r.weight >= pl - 1e-12);
        CHECK(std::abs(r.flow_value - pmf.max_probability()) < 1e-9);
    }
}

TEST_CASE("LYM holds and L <= 1 for every antichain at n <= 4") {
    Rng rng(43);
    for (int n = 1; n <= 4; ++n) {
        const auto all = enumerate_antichains(n);
        for (int trial = 0; trial < 10; ++trial) {
            const ProductMeasure m = oracle::random_measure(n, rng);
            Rng chain_rng(trial);
            std::vector<ChainSample> chains;
            for (int i = 0; i < 20; ++i) chains.push_back(sample_chain(m, chain_rng));
            for (const auto& f : all) {
                CHECK(lym_sum(m, f) <= 1.0 + 1e-9);
                for (const auto& c : chains) CHECK(chain_hits(c, f).count <= 1);
            }
        }
    }
}

}
