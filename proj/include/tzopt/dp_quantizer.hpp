#pragma once

#include <cstddef>
#include <vector>

#include "tzopt/distortion.hpp"
#include "tzopt/partition.hpp"

namespace tzopt {

struct DesignOptions {
    int threads = 1;  // anchors are independent; results identical for any count
};

/// Globally optimal k-region circular partition. Every cell is tried as
/// the rotation anchor; each anchor is solved by an exact linear DP over
/// segment widths sharing one precomputed cost table. Ties break to the
/// smallest anchor, then the lexicographically smallest boundary sequence.
Partition design_fixed_k(const PopulationProfile& profile, std::size_t k,
                         const ObjectiveConfig& cfg, const DesignOptions& opts = {});
Partition design_fixed_k(const PopulationProfile& profile, const SegmentCostTable& table,
                         std::size_t k, const ObjectiveConfig& cfg,
                         const DesignOptions& opts = {});

/// Best k in [k_min, k_max] including the eta * k penalty; ties toward
/// smaller k.
Partition design_open_k(const PopulationProfile& profile, std::size_t k_min, std::size_t k_max,
                        const ObjectiveConfig& cfg, const DesignOptions& opts = {});
Partition design_open_k(const PopulationProfile& profile, const SegmentCostTable& table,
                        std::size_t k_min, std::size_t k_max, const ObjectiveConfig& cfg,
                        const DesignOptions& opts = {});

/// Rotation offset minimizing the cost of the uniform k-region partition
/// (requires k | N). Ties toward the smallest offset. When `cost_curve`
/// is given it receives the distortion of every offset (eta excluded).
std::size_t choose_prime_meridian_uniform(const PopulationProfile& profile, std::size_t k,
                                          const ObjectiveConfig& cfg,
                                          std::vector<double>* cost_curve = nullptr);

/// Exhaustive enumeration oracle with the same tie-breaking as
/// design_fixed_k. Guarded to N <= 24 and k <= 4.
Partition brute_force_design(const PopulationProfile& profile, std::size_t k,
                             const ObjectiveConfig& cfg);

}  // namespace tzopt
