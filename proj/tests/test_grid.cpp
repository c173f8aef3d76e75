#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "support/fixtures.hpp"
#include "support/rng.hpp"
#include "tzopt/errors.hpp"
#include "tzopt/grid.hpp"

using namespace tzopt;
using tzopt::testing::profile_of;

namespace {

std::string temp_path(const std::string& name) {
    return "grid_test_" + name;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

std::string pop_csv(const std::vector<double>& masses, double origin = -180.0,
                    int skip_index = -1, int dup_index = -1) {
    const double width = 360.0 / static_cast<double>(masses.size());
    std::string s = "index,longitude_deg,population\n";
    for (std::size_t i = 0; i < masses.size(); ++i) {
        if (static_cast<int>(i) == skip_index) continue;
        const std::size_t idx = static_cast<int>(i) == dup_index ? i - 1 : i;
        s += std::to_string(idx) + "," +
             format_double(wrap_longitude(origin + static_cast<double>(idx) * width)) + "," +
             format_double(masses[i]) + "\n";
    }
    return s;
}

}  // namespace

TEST_CASE("load: 8-row two-spike file") {
    const std::string path = temp_path("spikes.csv");
    write_file(path, pop_csv({0, 0, 0, 10, 0, 0, 0, 10}));
    const PopulationProfile p = load_population_profile(path);
    CHECK(p.size() == 8);
    CHECK(p.total_mass() == 20.0);
    CHECK(p.cells[3] == 10.0);
    CHECK(p.cell_width_deg == doctest::Approx(45.0));
    std::remove(path.c_str());
}

TEST_CASE("load: missing index is named") {
    const std::string path = temp_path("missing.csv");
    write_file(path, pop_csv({1, 1, 1, 1, 1, 1, 1, 1}, -180.0, /*skip_index=*/5));
    CHECK_THROWS_WITH_AS(load_population_profile(path), doctest::Contains("index 5 absent"),
                         InputError);
    std::remove(path.c_str());
}

TEST_CASE("load: duplicate index rejected") {
    const std::string path = temp_path("dup.csv");
    write_file(path, pop_csv({1, 1, 1, 1, 1, 1, 1, 1}, -180.0, -1, /*dup_index=*/3));
    CHECK_THROWS_AS(load_population_profile(path), InputError);
    std::remove(path.c_str());
}

TEST_CASE("load: negative mass and too-small domain rejected") {
    const std::string path = temp_path("bad.csv");
    write_file(path, pop_csv({1, 1, -2, 1}));
    CHECK_THROWS_WITH_AS(load_population_profile(path), doctest::Contains("negative mass"),
                         InputError);
    write_file(path, "index,longitude_deg,population\n0,-180,1\n1,-60,1\n2,60,1\n");
    CHECK_THROWS_WITH_AS(load_population_profile(path), doctest::Contains("domain too small"),
                         InputError);
    std::remove(path.c_str());
}

TEST_CASE("make_profile rejects NaN and all-zero mass") {
    CHECK_THROWS_AS(profile_of({1.0, std::nan(""), 1.0, 1.0}), InputError);
    CHECK_THROWS_WITH_AS(profile_of({0.0, 0.0, 0.0, 0.0}),
                         doctest::Contains("no positive mass"), InputError);
}

TEST_CASE("rotate: identity and cyclic shift") {
    const PopulationProfile p = profile_of({1, 2, 3, 4});
    CHECK(rotate(p, 0).cells == std::vector<double>{1, 2, 3, 4});
    CHECK(rotate(p, 2).cells == std::vector<double>{3, 4, 1, 2});
    CHECK_THROWS_AS(rotate(p, 4), InputError);
}

TEST_CASE("rotate: round-trip is exact for all N <= 16") {
    tzopt::testing::Rng rng(7);
    for (std::size_t n = 4; n <= 16; ++n) {
        const PopulationProfile p = tzopt::testing::random_profile(rng, n);
        for (std::size_t a = 0; a < n; ++a) {
            const PopulationProfile back = rotate(rotate(p, a), (n - a) % n);
            CHECK(back.cells == p.cells);
            CHECK(back.origin_deg == doctest::Approx(p.origin_deg).epsilon(1e-12));
        }
    }
}

TEST_CASE("rotate preserves total mass exactly and keeps physical longitudes") {
    tzopt::testing::Rng rng(11);
    const PopulationProfile p = tzopt::testing::random_profile(rng, 12);
    for (std::size_t a = 0; a < 12; ++a) {
        const PopulationProfile r = rotate(p, a);
        CHECK(r.total_mass() == p.total_mass());
        for (std::size_t i = 0; i < 12; ++i) {
            CHECK(index_to_longitude(r, i) ==
                  doctest::Approx(index_to_longitude(p, (a + i) % 12)).epsilon(1e-12));
        }
    }
}

TEST_CASE("index_to_longitude: edges and wrap") {
    const PopulationProfile world = profile_of(std::vector<double>(720, 1.0), -180.0);
    CHECK(index_to_longitude(world, 0) == -180.0);
    CHECK(index_to_longitude(world, 719) == doctest::Approx(179.5));
    CHECK_THROWS_AS(index_to_longitude(world, 720), InputError);

    // wrap case: origin 170, width 15 (N=24), i=2 -> -160
    const PopulationProfile p = profile_of(std::vector<double>(24, 1.0), 170.0);
    CHECK(index_to_longitude(p, 2) == doctest::Approx(-160.0));
}

TEST_CASE("index_to_longitude is injective over the grid") {
    const PopulationProfile p = profile_of(std::vector<double>(48, 1.0), 37.0);
    std::vector<double> lons;
    for (std::size_t i = 0; i < 48; ++i) lons.push_back(index_to_longitude(p, i));
    std::sort(lons.begin(), lons.end());
    CHECK(std::adjacent_find(lons.begin(), lons.end()) == lons.end());
}

TEST_CASE("save/load round-trips masses bit-exactly") {
    tzopt::testing::Rng rng(13);
    std::vector<double> cells(36);
    for (auto& c : cells) c = rng.uniform() * 1e6;
    const PopulationProfile p = profile_of(std::move(cells), -177.5);
    const std::string path = temp_path("roundtrip.csv");
    save_population_profile(p, path);
    const PopulationProfile q = load_population_profile(path);
    CHECK(q.cells == p.cells);
    CHECK(q.cell_width_deg == p.cell_width_deg);
    CHECK(q.origin_deg == p.origin_deg);
    std::remove(path.c_str());
}
