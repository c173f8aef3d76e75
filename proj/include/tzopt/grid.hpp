#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace tzopt {

/// Circular population-by-longitude profile. Cell i covers the half-open
/// longitude interval [origin + i*w, origin + i*w + w) in degrees; indices
/// increase eastward and wrap modulo N. Immutable after construction.
struct PopulationProfile {
    std::vector<double> cells;  // nonnegative mass per cell
    double cell_width_deg;
    double origin_deg;  // west edge of cell 0, in [-180, 180)

    std::size_t size() const { return cells.size(); }
    double total_mass() const;
};

/// Validates invariants (N >= 4, masses finite and nonnegative with at
/// least one positive, N * width == 360 to 1e-9 relative) and normalizes
/// origin into [-180, 180). Throws InputError.
PopulationProfile make_profile(std::vector<double> cells, double cell_width_deg,
                               double origin_deg);

/// CSV format: header `index,longitude_deg,population`; one row per cell,
/// any order, indices 0..N-1 exactly once; longitude_deg is the cell's
/// west edge.
PopulationProfile load_population_profile(const std::string& path);
void save_population_profile(const PopulationProfile& profile, const std::string& path);

/// New profile whose cell 0 is the input's cell `offset`; physical
/// longitudes unchanged.
PopulationProfile rotate(const PopulationProfile& profile, std::size_t offset);

/// West edge of cell i, wrapped into [-180, 180).
double index_to_longitude(const PopulationProfile& profile, std::size_t i);

/// East edge of cell i (for boundary cells: the boundary's longitude).
double boundary_longitude(const PopulationProfile& profile, std::size_t i);

/// Midpoint of cell i (for representation points).
double cell_center_longitude(const PopulationProfile& profile, std::size_t i);

/// Wraps into [-180, 180).
double wrap_longitude(double deg);

}  // namespace tzopt
