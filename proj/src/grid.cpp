#include "tzopt/grid.hpp"

#include <cmath>

#include "tzopt/csv.hpp"
#include "tzopt/errors.hpp"

namespace tzopt {

double PopulationProfile::total_mass() const {
    double total = 0.0;
    for (double m : cells) total += m;
    return total;
}

double wrap_longitude(double deg) {
    double w = std::fmod(deg + 180.0, 360.0);
    if (w < 0) w += 360.0;
    return w - 180.0;
}

PopulationProfile make_profile(std::vector<double> cells, double cell_width_deg,
                               double origin_deg) {
    const std::size_t n = cells.size();
    if (n < 4) {
        throw InputError("domain too small: need at least 4 cells, got " + std::to_string(n));
    }
    if (!(cell_width_deg > 0.0) || !std::isfinite(cell_width_deg)) {
        throw InputError("cell width must be positive and finite");
    }
    if (std::abs(static_cast<double>(n) * cell_width_deg - 360.0) > 1e-9 * 360.0) {
        throw InputError("cells do not tile the circle: N*width = " +
                         format_double(static_cast<double>(n) * cell_width_deg) +
                         ", expected 360");
    }
    if (!std::isfinite(origin_deg)) throw InputError("origin must be finite");
    bool any_positive = false;
    for (std::size_t i = 0; i < n; ++i) {
        const double m = cells[i];
        if (!std::isfinite(m)) {
            throw InputError("mass at index " + std::to_string(i) + " is not finite");
        }
        if (m < 0.0) {
            throw InputError("negative mass at index " + std::to_string(i));
        }
        if (m > 0.0) any_positive = true;
    }
    if (!any_positive) throw InputError("profile has no positive mass");
    return PopulationProfile{std::move(cells), cell_width_deg, wrap_longitude(origin_deg)};
}

PopulationProfile load_population_profile(const std::string& path) {
    const CsvTable table = read_csv(path);
    auto idx_col = table.column("index");
    auto lon_col = table.column("longitude_deg");
    auto pop_col = table.column("population");
    if (!idx_col || !lon_col || !pop_col) {
        throw InputError(path + ": expected header index,longitude_deg,population");
    }
    const std::size_t n = table.rows.size();
    if (n < 4) {
        throw InputError(path + ": domain too small, need at least 4 rows, got " +
                         std::to_string(n));
    }
    std::vector<double> cells(n, 0.0);
    std::vector<double> lons(n, 0.0);
    std::vector<bool> seen(n, false);
    for (std::size_t r = 0; r < n; ++r) {
        const auto& row = table.rows[r];
        const std::string ctx = path + " row " + std::to_string(r + 2);
        const long idx = parse_long_field(row[*idx_col], ctx);
        if (idx < 0 || static_cast<std::size_t>(idx) >= n) {
            throw InputError(path + ": index " + std::to_string(idx) + " out of range 0.." +
                             std::to_string(n - 1));
        }
        if (seen[idx]) {
            throw InputError(path + ": index " + std::to_string(idx) + " duplicated");
        }
        seen[idx] = true;
        auto lon = parse_double_field(row[*lon_col], ctx);
        auto pop = parse_double_field(row[*pop_col], ctx);
        if (!lon || !pop) throw InputError(ctx + ": blank longitude or population");
        lons[idx] = *lon;
        cells[idx] = *pop;
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!seen[i]) throw InputError(path + ": index " + std::to_string(i) + " absent");
    }
    const double width = 360.0 / static_cast<double>(n);
    const double origin = lons[0];
    for (std::size_t i = 0; i < n; ++i) {
        const double expect = wrap_longitude(origin + static_cast<double>(i) * width);
        if (std::abs(wrap_longitude(lons[i]) - expect) > 1e-6) {
            throw InputError(path + ": longitude at index " + std::to_string(i) + " is " +
                             format_double(lons[i]) + ", expected " + format_double(expect));
        }
    }
    return make_profile(std::move(cells), width, origin);
}

void save_population_profile(const PopulationProfile& profile, const std::string& path) {
    std::vector<std::vector<std::string>> rows;
    rows.reserve(profile.size());
    for (std::size_t i = 0; i < profile.size(); ++i) {
        rows.push_back({std::to_string(i), format_double(index_to_longitude(profile, i)),
                        format_double(profile.cells[i])});
    }
    write_csv(path, {"index", "longitude_deg", "population"}, rows);
}

PopulationProfile rotate(const PopulationProfile& profile, std::size_t offset) {
    const std::size_t n = profile.size();
    if (offset >= n) {
        throw InputError("rotate offset " + std::to_string(offset) + " out of range 0.." +
                         std::to_string(n - 1));
    }
    std::vector<double> cells(n);
    for (std::size_t i = 0; i < n; ++i) cells[i] = profile.cells[(offset + i) % n];
    PopulationProfile out{std::move(cells), profile.cell_width_deg,
                          wrap_longitude(profile.origin_deg +
                                         static_cast<double>(offset) * profile.cell_width_deg)};
    return out;
}

double index_to_longitude(const PopulationProfile& profile, std::size_t i) {
    if (i >= profile.size()) {
        throw InputError("cell index " + std::to_string(i) + " out of range 0.." +
                         std::to_string(profile.size() - 1));
    }
    return wrap_longitude(profile.origin_deg + static_cast<double>(i) * profile.cell_width_deg);
}

double boundary_longitude(const PopulationProfile& profile, std::size_t i) {
    return index_to_longitude(profile, (i + 1) % profile.size());
}

double cell_center_longitude(const PopulationProfile& profile, std::size_t i) {
    return wrap_longitude(index_to_longitude(profile, i) + 0.5 * profile.cell_width_deg);
}

}  // namespace tzopt
