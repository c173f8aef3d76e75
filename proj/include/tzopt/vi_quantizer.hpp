#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

#include "tzopt/distortion.hpp"
#include "tzopt/partition.hpp"

namespace tzopt {

/// Layered deterministic MDP for one rotation anchor. A state (t, level)
/// means `level` segments already placed and the next boundary cut at
/// unrolled position t; an action picks the next segment's width, moving
/// to (t + width, level + 1) with reward equal to that segment's cost.
/// The graph is a DAG layered by level; episodes correspond one-to-one
/// with feasible boundary sequences for the anchor. Terminal state is
/// (N, k), pinned at value 0.
class Mdp {
public:
    Mdp(std::shared_ptr<const SegmentCostTable> table, std::size_t k, std::size_t anchor);

    std::size_t n() const { return table_->size(); }
    std::size_t k() const { return k_; }
    std::size_t anchor() const { return anchor_; }
    std::size_t min_width() const { return static_cast<std::size_t>(table_->min_width()); }
    const SegmentCostTable& table() const { return *table_; }

    struct ActionRange {
        std::size_t width_lo, width_hi;  // inclusive; empty when hi < lo
        bool empty() const { return width_hi < width_lo; }
        std::size_t count() const { return empty() ? 0 : width_hi - width_lo + 1; }
    };

    /// Feasible next-segment widths at (t, level); the bound leaves room
    /// for the remaining segments at min_width each, and the last level
    /// must close the rotation exactly.
    ActionRange actions(std::size_t t, std::size_t level) const;

    /// Reachable cut positions at a level.
    std::size_t level_t_lo(std::size_t level) const { return level * min_width(); }
    std::size_t level_t_hi(std::size_t level) const { return n() - (k_ - level) * min_width(); }

    double reward(std::size_t t, std::size_t width) const {
        return table_->total((anchor_ + t) % n(), width);
    }
    const double* reward_row(std::size_t t) const { return table_->row((anchor_ + t) % n()); }

private:
    std::shared_ptr<const SegmentCostTable> table_;
    std::size_t k_;
    std::size_t anchor_;
};

Mdp build_mdp(const PopulationProfile& profile, std::size_t k, std::size_t anchor,
              const ObjectiveConfig& cfg);
Mdp build_mdp(std::shared_ptr<const SegmentCostTable> table, std::size_t k, std::size_t anchor);

/// Double-buffered state values: `values` holds the final sweep,
/// `prev_values` the one before it; greedy actions are recomputed from
/// the final values.
struct ValueTable {
    std::size_t n = 0, k = 0;
    std::vector<double> values;        // (k+1) x (n+1)
    std::vector<double> prev_values;   // (k+1) x (n+1)
    std::vector<std::int32_t> greedy;  // k x (n+1); chosen width, -1 unset
    double gamma = 1.0;
    std::size_t sweeps_run = 0;
    double sup_delta = 0.0;
    bool converged = false;

    double value_at(std::size_t level, std::size_t t) const { return values[level * (n + 1) + t]; }
    double root_value() const { return value_at(0, 0); }
    std::int32_t greedy_at(std::size_t level, std::size_t t) const {
        return greedy[level * (n + 1) + t];
    }
};

/// Least sweep count T >= (log||V1-V0|| + log 2 - log(eps(1-gamma))) /
/// log(1/gamma), clamped below at 1. Requires gamma strictly inside
/// (0,1); at gamma=1 the layered DAG converges within K+1 sweeps instead.
std::size_t horizon_bound(double v1_minus_v0_sup, double gamma, double epsilon);

/// Jacobi sweeps V_t(s) = min_a R(s,a) + gamma * V_{t-1}(s') over all
/// states, levels processed in reverse topological order, until
/// sup_delta < epsilon or the sweep budget runs out. max_sweeps == 0
/// auto-sizes: k+1 for gamma == 1, the horizon bound from sweep-1
/// statistics otherwise. epsilon == 0 disables early stopping. With
/// gamma < 1 an exhausted budget returns the table flagged unconverged.
ValueTable value_iteration(const Mdp& mdp, double gamma = 1.0, double epsilon = 1e-9,
                           std::size_t max_sweeps = 0);

/// Follows greedy actions from the root to the terminal and assembles the
/// partition; ties in greedy actions already resolve toward the smallest
/// boundary index, matching the DP.
Partition extract_policy(const ValueTable& vt, const Mdp& mdp, const PopulationProfile& profile,
                         const ObjectiveConfig& cfg);

struct ViDesignDiagnostics {
    bool converged = true;
    std::size_t sweeps_run = 0;
    double sup_delta = 0.0;
};

/// Anchor sweep analogous to design_fixed_k but solving each rotation by
/// value iteration; with gamma == 1 the result matches the DP exactly.
Partition design_fixed_k_vi(const PopulationProfile& profile, std::size_t k,
                            const ObjectiveConfig& cfg, double gamma, double epsilon,
                            int threads = 1, ViDesignDiagnostics* diag = nullptr);
Partition design_fixed_k_vi(const PopulationProfile& profile,
                            std::shared_ptr<const SegmentCostTable> table, std::size_t k,
                            const ObjectiveConfig& cfg, double gamma, double epsilon,
                            int threads = 1, ViDesignDiagnostics* diag = nullptr);

}  // namespace tzopt
