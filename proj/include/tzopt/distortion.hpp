#pragma once

#include <cstddef>
#include <vector>

#include "tzopt/grid.hpp"

namespace tzopt {

/// Objective knobs shared by the segment cost and both solvers.
struct ObjectiveConfig {
    double alpha = 1.0;   // circadian mismatch exponent, >= 1
    double beta = 1.0;    // eastern-edge exponent, >= 1
    double lambda = 1.0;  // weight of the edge term, >= 0
    double eta = 0.0;     // per-boundary penalty, >= 0
    int min_width = 2;    // segment width floor in cells, >= 2

    void validate() const;  // throws InputError
};

/// Cost of one segment. The segment east of boundary cell `i` with width
/// `j` covers cells i+1 .. i+j (mod N). circadian is the minimum over
/// in-segment representation points r of sum_w Z_w * (|w-r|/j)^alpha;
/// edge is sum_w Z_w * ((i+j-w)/j)^beta and does not depend on r.
struct SegmentCost {
    std::size_t rep_point;  // easternmost minimizing r, as a cell index
    double circadian;
    double edge;
    double total;  // circadian + lambda * edge
};

/// Throws InputError when width < cfg.min_width or width > N (a width-N
/// segment is the whole circle and is allowed: it is the k=1 design).
SegmentCost segment_cost(const PopulationProfile& profile, std::size_t start, std::size_t width,
                         const ObjectiveConfig& cfg);

/// Precomputed segment totals for every (boundary cell, width) pair,
/// shared by all rotations of the DP and the MDP rewards. Entries are
/// computed once, eagerly, with the same arithmetic as segment_cost, so
/// table lookups and per-call evaluations agree bit for bit.
class SegmentCostTable {
public:
    SegmentCostTable(const PopulationProfile& profile, const ObjectiveConfig& cfg);

    /// Table with explicit totals (testing hook; rewards need not come
    /// from a profile).
    static SegmentCostTable from_costs(std::size_t n, int min_width, std::vector<double> totals);

    std::size_t size() const { return n_; }
    int min_width() const { return min_width_; }

    /// Total cost of the segment east of boundary cell `start`, width j.
    double total(std::size_t start, std::size_t width) const {
        return totals_[start * (n_ + 1) + width];
    }

    /// Row for one boundary cell, indexed by width 0..N (widths below the
    /// floor hold +inf).
    const double* row(std::size_t start) const { return &totals_[start * (n_ + 1)]; }

private:
    SegmentCostTable() = default;
    std::size_t n_ = 0;
    int min_width_ = 2;
    std::vector<double> totals_;  // (n) x (n+1)
};

namespace detail {

/// Representation-point scan for one segment, in segment-local
/// coordinates t = 0..width-1 (west to east).
struct SegmentTerms {
    std::size_t rep_offset;
    double circadian;
    double edge;
};

/// Normalized distance powers (d/j)^e for every width j up to n; flat[
/// offset[j] + d ] caches pow once per width. Only built for exponents
/// outside {1, 2}.
struct PowTables {
    std::vector<double> flat;
    std::vector<std::size_t> offset;
    void build(std::size_t n, double exponent);
    const double* width_row(std::size_t j) const { return &flat[offset[j]]; }
};

/// Prefix moments of one segment start, local coordinates, reusable
/// across widths. p0/p1/p2 are prefix sums of m, t*m, t^2*m.
struct TermScan {
    std::vector<double> p0, p1, p2;
    const double* mass = nullptr;

    void reset(const double* mass, std::size_t max_width, bool need_p2);
    SegmentTerms eval(std::size_t width, const ObjectiveConfig& cfg, const double* pow_alpha,
                      const double* pow_beta) const;
};

}  // namespace detail

}  // namespace tzopt
