#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "support/fixtures.hpp"
#include "support/rng.hpp"
#include "tzopt/distortion.hpp"
#include "tzopt/errors.hpp"
#include "tzopt/partition.hpp"

using namespace tzopt;
using tzopt::testing::close_rel;
using tzopt::testing::direct_segment_cost;
using tzopt::testing::profile_of;
using tzopt::testing::random_profile;

TEST_CASE("hand-enumerated uniform segment: circadian 1.0, edge 1.5, total 2.5") {
    // masses on cells 1..4 of a 5-cell... domain floor is N >= 4; use N=8
    // with the segment east of boundary cell 0, width 4 (cells 1..4).
    const PopulationProfile p = profile_of({0, 1, 1, 1, 1, 0, 0, 0});
    const ObjectiveConfig cfg;
    const SegmentCost sc = segment_cost(p, 0, 4, cfg);
    CHECK(sc.circadian == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sc.edge == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(sc.total == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(sc.rep_point == 3);  // tie between cells 2 and 3 broken east
}

TEST_CASE("all mass at the easternmost cell costs nothing") {
    const PopulationProfile p = profile_of({0, 0, 0, 0, 5, 0, 0, 0});
    const SegmentCost sc = segment_cost(p, 0, 4, ObjectiveConfig{});
    CHECK(sc.circadian == 0.0);
    CHECK(sc.edge == 0.0);
    CHECK(sc.total == 0.0);
    CHECK(sc.rep_point == 4);
}

TEST_CASE("zero-mass segment: total 0, rep point at the eastern edge") {
    const PopulationProfile p = profile_of({9, 0, 0, 0, 0, 0, 0, 9});
    const SegmentCost sc = segment_cost(p, 0, 4, ObjectiveConfig{});
    CHECK(sc.total == 0.0);
    CHECK(sc.rep_point == 4);
}

TEST_CASE("width validation") {
    const PopulationProfile p = profile_of({1, 1, 1, 1, 1, 1, 1, 1});
    CHECK_THROWS_WITH_AS(segment_cost(p, 0, 1, ObjectiveConfig{}),
                         doctest::Contains("below the floor"), InputError);
    CHECK_THROWS_WITH_AS(segment_cost(p, 0, 9, ObjectiveConfig{}),
                         doctest::Contains("exceeds the circle"), InputError);
    CHECK_NOTHROW(segment_cost(p, 0, 8, ObjectiveConfig{}));  // whole circle = k=1 segment
}

TEST_CASE("config validation") {
    ObjectiveConfig cfg;
    cfg.alpha = 0.5;
    CHECK_THROWS_AS(cfg.validate(), InputError);
    cfg = ObjectiveConfig{};
    cfg.min_width = 1;
    CHECK_THROWS_AS(cfg.validate(), InputError);
    cfg = ObjectiveConfig{};
    cfg.lambda = -1;
    CHECK_THROWS_AS(cfg.validate(), InputError);
}

TEST_CASE("evaluator matches the direct-sum oracle within 1e-9 relative") {
    tzopt::testing::Rng rng(101);
    for (double alpha : {1.0, 2.0, 1.7}) {
        for (double beta : {1.0, 2.0, 2.3}) {
            ObjectiveConfig cfg;
            cfg.alpha = alpha;
            cfg.beta = beta;
            cfg.lambda = 0.7;
            for (int rep = 0; rep < 12; ++rep) {
                const std::size_t n = 6 + rng.integer(0, 18);
                const PopulationProfile p = random_profile(rng, n);
                const SegmentCostTable table(p, cfg);
                for (std::size_t s = 0; s < n; ++s) {
                    for (std::size_t w = 2; w <= n; ++w) {
                        const auto direct = direct_segment_cost(p, s, w, cfg);
                        const SegmentCost sc = segment_cost(p, s, w, cfg);
                        CHECK(close_rel(sc.circadian, direct.circadian, 1e-9));
                        CHECK(close_rel(sc.edge, direct.edge, 1e-9));
                        CHECK(close_rel(sc.total, direct.total, 1e-9));
                        // table entries and per-call evaluation share the
                        // arithmetic path bit for bit
                        CHECK(table.total(s, w) == sc.total);
                    }
                }
            }
        }
    }
}

TEST_CASE("alpha=1: rep point is a weighted median (exhaustive widths <= 32)") {
    tzopt::testing::Rng rng(202);
    const std::size_t n = 36;
    const PopulationProfile p = random_profile(rng, n);
    const ObjectiveConfig cfg;
    for (std::size_t s = 0; s < n; s += 5) {
        for (std::size_t w = 2; w <= 32; ++w) {
            const SegmentCost sc = segment_cost(p, s, w, cfg);
            const auto direct = direct_segment_cost(p, s, w, cfg);
            CHECK(close_rel(sc.circadian, direct.circadian, 1e-9));
            CHECK(sc.rep_point == direct.rep_point);
            // weighted median property: mass strictly west and strictly
            // east of the rep point each hold at most half the segment
            double west = 0.0, east = 0.0, total = 0.0;
            const std::size_t rep_offset = (sc.rep_point + n - (s + 1)) % n;
            for (std::size_t t = 0; t < w; ++t) {
                const double m = p.cells[(s + 1 + t) % n];
                total += m;
                if (t < rep_offset) west += m;
                if (t > rep_offset) east += m;
            }
            CHECK(west <= total / 2 + 1e-12);
            CHECK(east <= total / 2 + 1e-12);
        }
    }
}

TEST_CASE("alpha=2: optimum matches the mass-weighted mean rounded to a cell") {
    tzopt::testing::Rng rng(303);
    const std::size_t n = 36;
    const PopulationProfile p = random_profile(rng, n);
    ObjectiveConfig cfg;
    cfg.alpha = 2.0;
    for (std::size_t s = 0; s < n; s += 7) {
        for (std::size_t w = 2; w <= 32; ++w) {
            const SegmentCost sc = segment_cost(p, s, w, cfg);
            double mass = 0.0, wsum = 0.0;
            for (std::size_t t = 0; t < w; ++t) {
                const double m = p.cells[(s + 1 + t) % n];
                mass += m;
                wsum += m * static_cast<double>(t);
            }
            const double mean = wsum / mass;
            const double rounded = std::min(static_cast<double>(w - 1),
                                            std::max(0.0, std::round(mean)));
            // cost at the rounded mean equals the scanned optimum
            const double jd = static_cast<double>(w);
            double cost_rounded = 0.0;
            for (std::size_t t = 0; t < w; ++t) {
                const double m = p.cells[(s + 1 + t) % n];
                const double z = (static_cast<double>(t) - rounded) / jd;
                cost_rounded += m * z * z;
            }
            CHECK(close_rel(cost_rounded, sc.circadian, 1e-9));
        }
    }
}

TEST_CASE("mass scaling by c scales all cost terms by exactly c") {
    tzopt::testing::Rng rng(404);
    const std::size_t n = 16;
    std::vector<double> cells(n);
    for (auto& c : cells) c = rng.uniform();
    const PopulationProfile p = profile_of(cells);
    std::vector<double> scaled(cells);
    for (auto& c : scaled) c *= 4.0;  // power of two: exact
    const PopulationProfile q = profile_of(scaled);
    ObjectiveConfig cfg;
    cfg.alpha = 2.0;
    cfg.lambda = 1.0;
    for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t w = 2; w <= n; w += 3) {
            const SegmentCost a = segment_cost(p, s, w, cfg);
            const SegmentCost b = segment_cost(q, s, w, cfg);
            CHECK(b.circadian == 4.0 * a.circadian);
            CHECK(b.edge == 4.0 * a.edge);
            CHECK(b.rep_point == a.rep_point);
        }
    }
}

TEST_CASE("edge term ignores the rep point and mass at the east edge adds nothing") {
    const PopulationProfile base = profile_of({0, 2, 1, 0, 3, 0, 1, 1});
    const ObjectiveConfig cfg;
    const SegmentCost before = segment_cost(base, 0, 5, cfg);

    std::vector<double> bumped = base.cells;
    bumped[5] += 7.0;  // easternmost cell of the segment east of boundary 0, width 5
    const SegmentCost after = segment_cost(profile_of(bumped), 0, 5, cfg);
    CHECK(after.edge == before.edge);
    CHECK(after.circadian >= before.circadian - 1e-12);
}

TEST_CASE("partition cost: two zero-cost segments plus the boundary penalty") {
    const PopulationProfile p = profile_of({0, 0, 0, 10, 0, 0, 0, 10});
    ObjectiveConfig cfg;

    Partition part = make_partition(p, 3, {4, 4}, cfg);
    CHECK(part.total_cost == 0.0);
    CHECK(part.boundaries == std::vector<std::size_t>{3, 7});

    cfg.eta = 1.194;
    const double with_eta = partition_cost(p, part, cfg);
    CHECK(with_eta == doctest::Approx(2.388).epsilon(1e-12));
}

TEST_CASE("partition cost equals the sum of independent segment costs on random instances") {
    tzopt::testing::Rng rng(505);
    for (int rep = 0; rep < 50; ++rep) {
        const std::size_t n = 8 + rng.integer(0, 8);
        const PopulationProfile p = random_profile(rng, n);
        ObjectiveConfig cfg;
        cfg.eta = rng.uniform();
        const std::size_t k = 1 + rng.integer(0, 2);
        if (k * 2 > n) continue;

        // random feasible widths
        std::vector<std::size_t> widths(k, 2);
        std::size_t spare = n - 2 * k;
        for (std::size_t l = 0; l + 1 < k && spare > 0; ++l) {
            const std::size_t add = rng.integer(0, spare);
            widths[l] += add;
            spare -= add;
        }
        widths[k - 1] += spare;
        const std::size_t anchor = rng.integer(0, n - 1);
        const Partition part = make_partition(p, anchor, widths, cfg);

        double expect = cfg.eta * static_cast<double>(k);
        std::size_t b = anchor;
        for (std::size_t l = 0; l < k; ++l) {
            expect += segment_cost(p, b, widths[l], cfg).total;
            b = (b + widths[l]) % n;
        }
        CHECK(close_rel(part.total_cost, expect, 1e-12));
        CHECK(close_rel(partition_cost(p, part, cfg), part.total_cost, 1e-12));
    }
}

TEST_CASE("partition validation rejects overlaps and narrow regions") {
    const PopulationProfile p = profile_of({1, 1, 1, 1, 1, 1, 1, 1});
    const ObjectiveConfig cfg;
    Partition bad;
    bad.k = 2;
    bad.rotation = 0;
    bad.boundaries = {0, 1};  // second region width 1 < floor
    CHECK_THROWS_WITH_AS(partition_cost(p, bad, cfg), doctest::Contains("below the floor"),
                         InputError);
    bad.boundaries = {0, 0};
    CHECK_THROWS_WITH_AS(partition_cost(p, bad, cfg), doctest::Contains("strictly increasing"),
                         InputError);
}

TEST_CASE("segment totals and the eta term line up for whole partitions") {
    // total_cost = sum of segment totals + eta*k at 1e-9 relative
    tzopt::testing::Rng rng(606);
    const PopulationProfile p = random_profile(rng, 12);
    ObjectiveConfig cfg;
    cfg.eta = 0.25;
    const Partition part = make_partition(p, 5, {3, 4, 5}, cfg);
    double seg_sum = 0.0;
    for (const auto& sc : part.segment_costs) seg_sum += sc.total;
    CHECK(close_rel(part.total_cost, seg_sum + 0.25 * 3, 1e-9));
}
