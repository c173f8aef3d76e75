#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "support/fixtures.hpp"
#include "support/rng.hpp"
#include "tzopt/dp_quantizer.hpp"
#include "tzopt/errors.hpp"

using namespace tzopt;
using tzopt::testing::close_rel;
using tzopt::testing::profile_of;
using tzopt::testing::random_profile;

TEST_CASE("two-spike world: boundaries land at the spikes, zero cost") {
    const PopulationProfile p = profile_of({0, 0, 0, 10, 0, 0, 0, 10});
    const Partition dp = design_fixed_k(p, 2, ObjectiveConfig{});
    CHECK(dp.boundaries == std::vector<std::size_t>{3, 7});
    CHECK(dp.total_cost == 0.0);

    const Partition bf = brute_force_design(p, 2, ObjectiveConfig{});
    CHECK(bf.boundaries == dp.boundaries);
    CHECK(bf.total_cost == dp.total_cost);
}

TEST_CASE("k=1: the single region is the whole circle at the best anchor") {
    const PopulationProfile p = profile_of({0, 0, 5, 0, 0, 0, 1, 0});
    const Partition dp = design_fixed_k(p, 1, ObjectiveConfig{});
    CHECK(dp.k == 1);
    CHECK(dp.boundaries.size() == 1);
    // exhaustive anchor check
    double best = 0.0;
    std::size_t best_a = 0;
    for (std::size_t a = 0; a < 8; ++a) {
        const double c = segment_cost(p, a, 8, ObjectiveConfig{}).total;
        if (a == 0 || c < best) {
            best = c;
            best_a = a;
        }
    }
    CHECK(dp.rotation == best_a);
    CHECK(close_rel(dp.total_cost, best, 1e-12));
}

TEST_CASE("uniform mass, k=4, N=16: four width-4 regions at the smallest anchor") {
    const PopulationProfile p = profile_of(std::vector<double>(16, 1.0));
    const Partition dp = design_fixed_k(p, 4, ObjectiveConfig{});
    CHECK(dp.rotation == 0);
    CHECK(dp.boundaries == std::vector<std::size_t>{0, 4, 8, 12});
    for (const auto& sc : dp.segment_costs) {
        CHECK(close_rel(sc.total, dp.segment_costs[0].total, 1e-12));
    }
    const Partition bf = brute_force_design(p, 4, ObjectiveConfig{});
    CHECK(bf.boundaries == dp.boundaries);
    CHECK(bf.total_cost == dp.total_cost);
}

TEST_CASE("infeasible k is rejected") {
    const PopulationProfile p = profile_of(std::vector<double>(8, 1.0));
    CHECK_THROWS_WITH_AS(design_fixed_k(p, 5, ObjectiveConfig{}), doctest::Contains("infeasible"),
                         InputError);
    CHECK_THROWS_AS(design_fixed_k(p, 0, ObjectiveConfig{}), InputError);
}

TEST_CASE("brute force guard rails") {
    const PopulationProfile big = profile_of(std::vector<double>(30, 1.0));
    CHECK_THROWS_WITH_AS(brute_force_design(big, 2, ObjectiveConfig{}),
                         doctest::Contains("N <= 24"), InputError);
    const PopulationProfile p = profile_of(std::vector<double>(12, 1.0));
    CHECK_THROWS_WITH_AS(brute_force_design(p, 5, ObjectiveConfig{}),
                         doctest::Contains("k <= 4"), InputError);
}

TEST_CASE("N=8, k=4 leaves exactly one width pattern") {
    tzopt::testing::Rng rng(42);
    const PopulationProfile p = random_profile(rng, 8);
    const Partition dp = design_fixed_k(p, 4, ObjectiveConfig{});
    const Partition bf = brute_force_design(p, 4, ObjectiveConfig{});
    CHECK(dp.boundaries == bf.boundaries);
    // all widths forced to 2
    for (std::size_t l = 0; l < 4; ++l) {
        const std::size_t next = dp.boundaries[(l + 1) % 4];
        CHECK((next + 8 - dp.boundaries[l]) % 8 == 2);
    }
}

TEST_CASE("DP equals brute force on 200 random instances") {
    tzopt::testing::Rng rng(20250810);
    for (int rep = 0; rep < 200; ++rep) {
        const std::size_t n = 8 + rng.integer(0, 8);   // 8..16
        const std::size_t k = 1 + rng.integer(0, 2);   // 1..3
        const PopulationProfile p = random_profile(rng, n);
        const Partition dp = design_fixed_k(p, k, ObjectiveConfig{});
        const Partition bf = brute_force_design(p, k, ObjectiveConfig{});
        REQUIRE(close_rel(dp.total_cost, bf.total_cost, 1e-12));
        REQUIRE(dp.boundaries == bf.boundaries);
    }
}

TEST_CASE("rotation equivariance with deterministic tie-breaking") {
    tzopt::testing::Rng rng(777);
    for (int rep = 0; rep < 25; ++rep) {
        const std::size_t n = 8 + rng.integer(0, 6);
        const std::size_t k = 1 + rng.integer(0, 2);
        const std::size_t a = rng.integer(0, n - 1);
        const PopulationProfile p = random_profile(rng, n);
        const PopulationProfile q = rotate(p, a);

        const Partition dp_p = design_fixed_k(p, k, ObjectiveConfig{});
        const Partition dp_q = design_fixed_k(q, k, ObjectiveConfig{});
        CHECK(dp_p.total_cost == dp_q.total_cost);

        // boundary cells shifted by a (as sets; the anchor may differ
        // only when optima tie, which random masses rule out)
        std::vector<std::size_t> shifted;
        for (std::size_t b : dp_q.boundaries) shifted.push_back((b + a) % n);
        std::sort(shifted.begin(), shifted.end());
        std::vector<std::size_t> orig(dp_p.boundaries);
        std::sort(orig.begin(), orig.end());
        CHECK(orig == shifted);
    }
}

TEST_CASE("scaling masses and eta by c > 0 leaves the argmin unchanged") {
    tzopt::testing::Rng rng(888);
    const std::size_t n = 12;
    std::vector<double> cells(n);
    for (auto& c : cells) c = rng.uniform();
    const PopulationProfile p = profile_of(cells);
    std::vector<double> scaled(cells);
    for (auto& c : scaled) c *= 8.0;
    const PopulationProfile q = profile_of(scaled);

    ObjectiveConfig cfg;
    cfg.eta = 0.125;
    ObjectiveConfig cfg_scaled = cfg;
    cfg_scaled.eta = 1.0;  // eta scaled by the same factor 8

    const Partition a = design_open_k(p, 1, 3, cfg);
    const Partition b = design_open_k(q, 1, 3, cfg_scaled);
    CHECK(a.k == b.k);
    CHECK(a.boundaries == b.boundaries);
    CHECK(b.total_cost == 8.0 * a.total_cost);
}

TEST_CASE("memoized table reuse does not change any cost") {
    tzopt::testing::Rng rng(999);
    const PopulationProfile p = random_profile(rng, 14);
    const ObjectiveConfig cfg;
    const SegmentCostTable t1(p, cfg);
    const SegmentCostTable t2(p, cfg);
    for (std::size_t s = 0; s < 14; ++s) {
        for (std::size_t w = 2; w <= 14; ++w) {
            CHECK(t1.total(s, w) == t2.total(s, w));
            CHECK(t1.total(s, w) == segment_cost(p, s, w, cfg).total);
        }
    }
    const Partition with_table = design_fixed_k(p, t1, 3, cfg, {});
    const Partition fresh = design_fixed_k(p, 3, cfg);
    CHECK(with_table.total_cost == fresh.total_cost);
    CHECK(with_table.boundaries == fresh.boundaries);
}

TEST_CASE("threaded anchor sweep is deterministic") {
    tzopt::testing::Rng rng(1234);
    const PopulationProfile p = random_profile(rng, 16);
    DesignOptions one;
    one.threads = 1;
    DesignOptions four;
    four.threads = 4;
    const Partition a = design_fixed_k(p, 3, ObjectiveConfig{}, one);
    const Partition b = design_fixed_k(p, 3, ObjectiveConfig{}, four);
    CHECK(a.boundaries == b.boundaries);
    CHECK(a.total_cost == b.total_cost);
}

TEST_CASE("open k: a huge eta forces k_min") {
    tzopt::testing::Rng rng(555);
    const PopulationProfile p = random_profile(rng, 12);
    ObjectiveConfig cfg;
    cfg.eta = p.total_mass() * 12.0;
    const Partition part = design_open_k(p, 1, 3, cfg);
    CHECK(part.k == 1);
}

TEST_CASE("open k: eta = 0 returns k_max on random instances") {
    tzopt::testing::Rng rng(556);
    for (int rep = 0; rep < 20; ++rep) {
        const std::size_t n = 8 + rng.integer(0, 8);
        const PopulationProfile p = random_profile(rng, n);
        ObjectiveConfig cfg;
        cfg.eta = 0.0;
        const Partition part = design_open_k(p, 1, 3, cfg);
        CHECK(part.k == 3);
        // monotonicity via brute force
        const double d1 = brute_force_design(p, 1, cfg).total_cost;
        const double d2 = brute_force_design(p, 2, cfg).total_cost;
        const double d3 = brute_force_design(p, 3, cfg).total_cost;
        CHECK(d2 <= d1 + 1e-12);
        CHECK(d3 <= d2 + 1e-12);
    }
}

TEST_CASE("open k: sweep equals the explicit per-k brute-force sweep") {
    tzopt::testing::Rng rng(557);
    for (int rep = 0; rep < 10; ++rep) {
        const std::size_t n = 8 + rng.integer(0, 6);
        const PopulationProfile p = random_profile(rng, n);
        ObjectiveConfig cfg;
        cfg.eta = 1.194;
        const Partition part = design_open_k(p, 1, 3, cfg);
        double best = 0.0;
        std::size_t best_k = 0;
        for (std::size_t k = 1; k <= 3; ++k) {
            const double total = brute_force_design(p, k, cfg).total_cost;
            if (best_k == 0 || total < best) {
                best = total;
                best_k = k;
            }
        }
        CHECK(part.k == best_k);
        CHECK(close_rel(part.total_cost, best, 1e-12));
    }
}

TEST_CASE("prime meridian: uniform mass ties to offset 0") {
    const PopulationProfile p = profile_of(std::vector<double>(16, 1.0));
    std::vector<double> curve;
    CHECK(choose_prime_meridian_uniform(p, 4, ObjectiveConfig{}, &curve) == 0);
    for (double c : curve) CHECK(close_rel(c, curve[0], 1e-12));
}

TEST_CASE("prime meridian: point mass gets a boundary at its east edge") {
    for (std::size_t spike = 0; spike < 16; ++spike) {
        std::vector<double> cells(16, 0.0);
        cells[spike] = 3.0;
        const PopulationProfile p = profile_of(cells);
        const std::size_t offset = choose_prime_meridian_uniform(p, 4, ObjectiveConfig{});
        // brute force over all 16 offsets with the same tie rule
        double best = 0.0;
        std::size_t expect = 0;
        for (std::size_t o = 0; o < 16; ++o) {
            double cost = 0.0;
            for (std::size_t l = 0; l < 4; ++l) {
                cost += segment_cost(p, (o + 4 * l) % 16, 4, ObjectiveConfig{}).total;
            }
            if (o == 0 || cost < best) {
                best = cost;
                expect = o;
            }
        }
        CHECK(offset == expect);
        CHECK(offset == spike % 4);  // smallest offset putting a boundary at the spike
        CHECK(best == 0.0);
    }
}

TEST_CASE("prime meridian: indivisible k is rejected with guidance") {
    const PopulationProfile p = profile_of(std::vector<double>(16, 1.0));
    CHECK_THROWS_WITH_AS(choose_prime_meridian_uniform(p, 3, ObjectiveConfig{}),
                         doctest::Contains("divisible"), InputError);
}
