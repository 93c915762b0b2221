#include "oracles.hpp"

#include "sperner/error.hpp"
#include "sperner/measure.hpp"

#include <doctest.h>

#include <cmath>
#include <map>

using namespace sperner;

TEST_SUITE("measure") {

TEST_CASE("point_mass examples") {
    CHECK(point_mass(ProductMeasure({0.5, 0.5}), SubsetMask(2, 0)) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(point_mass(ProductMeasure({1.0, 0.3}), SubsetMask::of(2, {0})) == doctest::Approx(0.7).epsilon(1e-15));
    // 0.8 * 0.5 * 0.7
    CHECK(point_mass(ProductMeasure({0.2, 0.5, 0.7}), SubsetMask::of(3, {1, 2})) ==
          doctest::Approx(0.28).epsilon(1e-14));
    CHECK(std::exp(log_point_mass(ProductMeasure({0.2, 0.5, 0.7}), SubsetMask::of(3, {1, 2}))) ==
          doctest::Approx(0.28).epsilon(1e-14));
    CHECK_THROWS_AS(point_mass(ProductMeasure({0.5, 0.5}), SubsetMask(3, 0)), DimensionMismatch);
}

TEST_CASE("level_pmf examples") {
    auto check = [](const std::vector<double>& p, const std::vector<double>& want) {
        const LevelPMF pmf = level_pmf(ProductMeasure(p));
        REQUIRE(pmf.probs.size() == want.size());
        for (std::size_t i = 0; i < want.size(); ++i) CHECK(pmf.probs[i] == doctest::Approx(want[i]).epsilon(1e-13));
    };
    check({0.5, 0.5}, {0.25, 0.5, 0.25});
    // enumeration of the 8 subsets
    check({0.2, 0.5, 0.7}, {0.12, 0.43, 0.38, 0.07});
    check({1.0, 0.3}, {0.0, 0.7, 0.3});
    const LevelPMF forced = level_pmf(ProductMeasure({1.0, 0.3}));
    CHECK(forced.probs[0] == 0.0);
    CHECK(forced.log_probs[0] == -INFINITY);
}

TEST_CASE("conditional_point examples") {
    CHECK(conditional_point(ProductMeasure::uniform(4), SubsetMask::of(4, {0, 2})) ==
          doctest::Approx(1.0 / 6.0).epsilon(1e-14));
    CHECK(conditional_point(ProductMeasure({0.2, 0.5}), SubsetMask::of(2, {0})) ==
          doctest::Approx(0.2).epsilon(1e-14));
    CHECK(conditional_point(ProductMeasure({0.2, 0.5, 0.7}), SubsetMask::of(3, {1, 2})) ==
          doctest::Approx(0.28 / 0.38).epsilon(1e-13));
    CHECK_THROWS_AS(conditional_point(ProductMeasure({1.0, 0.5}), SubsetMask(2, 1)), TrivialMeasure);
}

TEST_CASE("odds examples and errors") {
    const OddsVector half = odds(ProductMeasure({0.5, 0.5}));
    CHECK(half.q()[0] == 1.0);
    CHECK(half.q()[1] == 1.0);
    CHECK(odds(ProductMeasure({0.2})).q()[0] == doctest::Approx(0.25).epsilon(1e-15));
    const OddsVector q = odds(ProductMeasure({0.2, 0.5, 0.7}));
    CHECK(q.q()[2] == doctest::Approx(7.0 / 3.0).epsilon(1e-14));
    CHECK(std::exp(q.log_q()[2]) == doctest::Approx(7.0 / 3.0).epsilon(1e-14));

    try {
        odds(ProductMeasure({0.3, 0.0, 0.4}));
        FAIL("expected TrivialMeasure");
    } catch (const TrivialMeasure& e) {
        CHECK(e.coordinate() == 1);
    }
    CHECK_THROWS_AS(OddsVector::from_values({1.0, 0.0}), InvalidArgument);
}

TEST_CASE("input validation clamps round-off and rejects garbage") {
    const ProductMeasure m({-1e-13, 1.0 + 1e-13});
    CHECK(m[0] == 0.0);
    CHECK(m[1] == 1.0);
    CHECK_THROWS_AS(ProductMeasure({1.1}), InvalidArgument);
    CHECK_THROWS_AS(ProductMeasure({-0.01}), InvalidArgument);
    CHECK_THROWS_AS(ProductMeasure({NAN}), InvalidArgument);
    CHECK_THROWS_AS(ProductMeasure(std::vector<double>{}), InvalidArgument);
    CHECK_THROWS_AS(SubsetMask(3, 0x8), InvalidArgument);
}

TEST_CASE("reduce_trivial examples") {
    const auto same = reduce_trivial(ProductMeasure({0.3, 0.6}));
    CHECK(same.reduced.size() == 2);
    CHECK(same.forced_in.bits() == 0);
    CHECK(same.forced_out.bits() == 0);

    const auto mixed = reduce_trivial(ProductMeasure({1.0, 0.5, 0.0}));
    REQUIRE(mixed.reduced.size() == 1);
    CHECK(mixed.reduced[0] == 0.5);
    CHECK(mixed.forced_in == SubsetMask::of(3, {0}));
    CHECK(mixed.forced_out == SubsetMask::of(3, {2}));

    const auto gone = reduce_trivial(ProductMeasure({1.0, 1.0}));
    CHECK(gone.reduced.size() == 0);
    CHECK(gone.forced_in == SubsetMask::of(2, {0, 1}));
    CHECK(gone.forced_out.bits() == 0);
}

TEST_CASE("sample_point") {
    Rng rng(7);
    const ProductMeasure fixed({1.0, 1.0, 0.0});
    for (int i = 0; i < 100; ++i) CHECK(sample_point(fixed, rng) == SubsetMask::of(3, {0, 1}));

    const int draws = 100000;
    std::map<std::uint64_t, int> counts;
    for (int i = 0; i < draws; ++i) ++counts[sample_point(ProductMeasure({0.5, 0.5}), rng).bits()];
    for (std::uint64_t s = 0; s < 4; ++s) CHECK(std::abs(counts[s] / double(draws) - 0.25) < 0.01);

    const ProductMeasure m({0.2, 0.5, 0.7});
    const auto exact = level_pmf(m);
    std::vector<double> hist(4, 0.0);
    for (int i = 0; i < draws; ++i) hist[sample_point(m, rng).size()] += 1.0 / draws;
    double tv = 0.0;
    for (int ell = 0; ell <= 3; ++ell) tv += 0.5 * std::abs(hist[ell] - exact.probs[ell]);
    CHECK(tv < 0.01);
}

TEST_CASE("level_sets enumerates each level in ascending order") {
    CHECK(level_sets(4, 2).size() == 6);
    CHECK(level_sets(4, 0).front().bits() == 0);
    CHECK(level_sets(4, 4).front().bits() == 0xF);
    const auto mid = level_sets(5, 2);
    for (std::size_t i = 1; i < mid.size(); ++i) CHECK(mid[i - 1] < mid[i]);
    CHECK(level_sets(64, 64).size() == 1);
    CHECK(level_sets(64, 1).size() == 64);
}

TEST_CASE("point masses sum to one and reproduce level_pmf (n <= 12)") {
    Rng rng(11);
    for (int n = 1; n <= 12; ++n) {
        const ProductMeasure m = oracle::random_measure(n, rng, 0.0, 1.0);
        double total = 0.0;
        std::vector<double> per_level(static_cast<std::size_t>(n) + 1, 0.0);
        for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s) {
            const double w = point_mass(m, SubsetMask(n, s));
            total += w;
            per_level[std::popcount(s)] += w;
        }
        CHECK(std::abs(total - 1.0) < 1e-10);
        const auto pmf = level_pmf(m);
        for (int ell = 0; ell <= n; ++ell) CHECK(std::abs(pmf.probs[ell] - per_level[ell]) < 1e-12);
    }
}

TEST_CASE("conditional_point times level mass is the point mass (n <= 10)") {
    Rng rng(12);
    for (int n = 1; n <= 10; ++n) {
        const ProductMeasure m = oracle::random_measure(n, rng);
        const auto pmf = level_pmf(m);
        std::vector<double> level_total(static_cast<std::size_t>(n) + 1, 0.0);
        for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s) {
            const SubsetMask set(n, s);
            const double c = conditional_point(m, set);
            level_total[set.size()] += c;
            CHECK(oracle::relative_error(c * pmf.probs[set.size()], point_mass(m, set)) < 1e-10);
        }
        for (double t : level_total) CHECK(std::abs(t - 1.0) < 1e-10);
    }
}

TEST_CASE("log-space level_pmf agrees with direct mode") {
    Rng rng(13);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 1000);
        const ProductMeasure m = oracle::random_measure(n, rng, 0.0, 1.0);
        const auto direct = level_pmf(m, Arithmetic::linear);
        const auto logged = level_pmf(m, Arithmetic::log);
        double total = 0.0;
        for (int ell = 0; ell <= n; ++ell) {
            total += direct.probs[ell];
            // Entries below 1e-280 lose relative precision in the linear DP.
            if (direct.probs[ell] > 1e-280) {
                CHECK(oracle::relative_error(logged.probs[ell], direct.probs[ell]) < 1e-10);
            }
        }
        CHECK(std::abs(total - 1.0) < 1e-12);
    }
}

}
