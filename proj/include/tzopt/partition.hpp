#pragma once

#include <cstddef>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "tzopt/distortion.hpp"
#include "tzopt/grid.hpp"

namespace tzopt {

/// A k-region circular partition. boundaries[l] is the eastern-edge cell
/// of region l-1's... more precisely: region l covers the cells
/// (boundaries[l], boundaries[(l+1) % k]] going east, so each boundary
/// cell's eastern edge is where one region ends. boundaries[0] is the
/// rotation anchor and the list is strictly increasing in the rotated
/// frame.
struct Partition {
    std::size_t k = 0;
    std::size_t rotation = 0;
    std::vector<std::size_t> boundaries;     // size k
    std::vector<std::size_t> rep_points;     // size k; rep_points[l] lies in region l
    std::vector<SegmentCost> segment_costs;  // size k; segment_costs[l] is region l's cost
    double eta = 0.0;
    double total_cost = 0.0;  // sum of segment totals + eta * k
};

/// Builds the partition anchored at `anchor` with the given region widths
/// (must sum to N, each >= min_width); computes per-segment costs and the
/// total. The total accumulates segment totals last-to-first so it matches
/// the DP recursion's association exactly.
Partition make_partition(const PopulationProfile& profile, std::size_t anchor,
                         const std::vector<std::size_t>& widths, const ObjectiveConfig& cfg);

/// Validates the partition against the profile (boundaries strictly
/// increasing in the rotated frame, widths >= min_width, regions tile the
/// circle) and returns the recomputed total including eta * k.
double partition_cost(const PopulationProfile& profile, const Partition& partition,
                      const ObjectiveConfig& cfg);

nlohmann::ordered_json partition_to_json(const Partition& partition,
                                         const PopulationProfile& profile);
Partition partition_from_json(const nlohmann::json& j);

}  // namespace tzopt
