#include "tzopt/vi_quantizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <thread>

#include "tzopt/errors.hpp"
#include "tzopt/kernels.hpp"

namespace tzopt {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

Mdp::Mdp(std::shared_ptr<const SegmentCostTable> table, std::size_t k, std::size_t anchor)
    : table_(std::move(table)), k_(k), anchor_(anchor) {
    if (table_ == nullptr) throw InputError("Mdp needs a cost table");
    const std::size_t n = table_->size();
    if (anchor_ >= n) {
        throw InputError("anchor " + std::to_string(anchor_) + " out of range 0.." +
                         std::to_string(n - 1));
    }
    if (k_ < 1 || k_ * min_width() > n) {
        throw InputError("infeasible: k=" + std::to_string(k_) + " regions of at least " +
                         std::to_string(min_width()) + " cells do not fit in N=" +
                         std::to_string(n));
    }
}

Mdp::ActionRange Mdp::actions(std::size_t t, std::size_t level) const {
    const std::size_t mw = min_width();
    if (level + 1 == k_) {
        // closing segment: must end the rotation exactly
        const std::size_t w = n() - t;
        if (w < mw || w > n()) return {1, 0};
        return {w, w};
    }
    const std::size_t remaining = (k_ - level - 1) * mw;
    if (t + mw + remaining > n()) return {1, 0};
    return {mw, n() - t - remaining};
}

Mdp build_mdp(const PopulationProfile& profile, std::size_t k, std::size_t anchor,
              const ObjectiveConfig& cfg) {
    cfg.validate();
    return Mdp(std::make_shared<const SegmentCostTable>(profile, cfg), k, anchor);
}

Mdp build_mdp(std::shared_ptr<const SegmentCostTable> table, std::size_t k, std::size_t anchor) {
    return Mdp(std::move(table), k, anchor);
}

std::size_t horizon_bound(double v1_minus_v0_sup, double gamma, double epsilon) {
    if (!(gamma > 0.0) || gamma >= 1.0) {
        throw InputError("horizon bound needs gamma strictly inside (0,1); at gamma=1 the "
                         "layered DAG converges within K+1 sweeps instead");
    }
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
        throw InputError("horizon bound needs epsilon > 0");
    }
    if (!(v1_minus_v0_sup >= 0.0) || !std::isfinite(v1_minus_v0_sup)) {
        throw InputError("horizon bound needs a finite nonnegative sup norm");
    }
    if (v1_minus_v0_sup == 0.0) return 1;  // already converged
    const double t = (std::log(v1_minus_v0_sup) + std::log(2.0) -
                      std::log(epsilon * (1.0 - gamma))) /
                     std::log(1.0 / gamma);
    if (!(t >= 1.0)) return 1;
    return static_cast<std::size_t>(std::ceil(t));
}

ValueTable value_iteration(const Mdp& mdp, double gamma, double epsilon,
                           std::size_t max_sweeps) {
    if (!(gamma > 0.0) || gamma > 1.0) throw InputError("gamma must be in (0, 1]");
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw InputError("epsilon must be >= 0");
    if (max_sweeps == 0 && gamma < 1.0 && epsilon == 0.0) {
        throw InputError("cannot auto-size sweeps with gamma < 1 and epsilon = 0");
    }

    const std::size_t n = mdp.n();
    const std::size_t k = mdp.k();
    const std::size_t stride = n + 1;

    ValueTable vt;
    vt.n = n;
    vt.k = k;
    vt.gamma = gamma;
    std::vector<double> prev((k + 1) * stride, 0.0);
    std::vector<double> cur((k + 1) * stride, 0.0);

    const auto& bellman = kernels::active().bellman_min;
    std::size_t budget = max_sweeps > 0 ? max_sweeps : (gamma == 1.0 ? k + 1 : 0);

    while (true) {
        double delta = 0.0;
        for (std::size_t level = k; level-- > 0;) {
            const double* next = &prev[(level + 1) * stride];
            double* out = &cur[level * stride];
            const std::size_t t_lo = mdp.level_t_lo(level);
            const std::size_t t_hi = mdp.level_t_hi(level);
            for (std::size_t t = t_lo; t <= t_hi; ++t) {
                const Mdp::ActionRange ar = mdp.actions(t, level);
                const auto r = bellman(mdp.reward_row(t) + ar.width_lo, next + t + ar.width_lo,
                                       ar.count(), gamma);
                out[t] = r.value;
                const double d = std::abs(r.value - prev[level * stride + t]);
                if (d > delta) delta = d;
            }
        }
        ++vt.sweeps_run;
        vt.sup_delta = delta;
        std::swap(prev, cur);  // prev now holds the newest sweep

        if (budget == 0) {
            // auto mode, gamma < 1: size the run from sweep-1 statistics
            budget = std::max<std::size_t>(horizon_bound(delta, gamma, epsilon), 1);
        }
        if (delta == 0.0 || (epsilon > 0.0 && delta < epsilon)) {
            vt.converged = true;
            break;
        }
        if (vt.sweeps_run >= budget) {
            vt.converged = false;
            break;
        }
    }

    vt.values = std::move(prev);
    vt.prev_values = std::move(cur);

    // Greedy actions from the final values.
    vt.greedy.assign(k * stride, -1);
    for (std::size_t level = 0; level < k; ++level) {
        const double* next = &vt.values[(level + 1) * stride];
        const std::size_t t_lo = mdp.level_t_lo(level);
        const std::size_t t_hi = mdp.level_t_hi(level);
        for (std::size_t t = t_lo; t <= t_hi; ++t) {
            const Mdp::ActionRange ar = mdp.actions(t, level);
            const auto r = bellman(mdp.reward_row(t) + ar.width_lo, next + t + ar.width_lo,
                                   ar.count(), gamma);
            if (r.index >= 0) {
                vt.greedy[level * stride + t] =
                    static_cast<std::int32_t>(ar.width_lo + static_cast<std::size_t>(r.index));
            }
        }
    }
    return vt;
}

Partition extract_policy(const ValueTable& vt, const Mdp& mdp, const PopulationProfile& profile,
                         const ObjectiveConfig& cfg) {
    if (vt.n != mdp.n() || vt.k != mdp.k()) {
        throw InputError("value table does not match the MDP");
    }
    std::vector<std::size_t> widths;
    widths.reserve(mdp.k());
    std::size_t t = 0;
    for (std::size_t level = 0; level < mdp.k(); ++level) {
        const std::int32_t w = vt.greedy_at(level, t);
        if (w < 0) {
            throw ComputeError("internal inconsistency: no greedy action at reachable state (t=" +
                               std::to_string(t) + ", level=" + std::to_string(level) + ")");
        }
        widths.push_back(static_cast<std::size_t>(w));
        t += static_cast<std::size_t>(w);
    }
    if (t != mdp.n()) {
        throw ComputeError("internal inconsistency: greedy episode does not close the rotation");
    }
    return make_partition(profile, mdp.anchor(), widths, cfg);
}

Partition design_fixed_k_vi(const PopulationProfile& profile,
                            std::shared_ptr<const SegmentCostTable> table, std::size_t k,
                            const ObjectiveConfig& cfg, double gamma, double epsilon,
                            int threads, ViDesignDiagnostics* diag) {
    cfg.validate();
    const std::size_t n = table->size();
    std::vector<double> roots(n, kInf);
    const int nthreads = std::max(1, threads);
    auto work = [&](std::size_t a_begin, std::size_t a_end) {
        for (std::size_t a = a_begin; a < a_end; ++a) {
            const Mdp mdp(table, k, a);
            const ValueTable vt = value_iteration(mdp, gamma, epsilon, 0);
            roots[a] = vt.root_value();
        }
    };
    if (nthreads == 1 || n < 2) {
        work(0, n);
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (n + nthreads - 1) / nthreads;
        for (int w = 0; w < nthreads; ++w) {
            const std::size_t lo = std::min(n, w * chunk);
            const std::size_t hi = std::min(n, lo + chunk);
            if (lo < hi) pool.emplace_back(work, lo, hi);
        }
        for (auto& th : pool) th.join();
    }

    std::size_t best_anchor = 0;
    double best = kInf;
    for (std::size_t a = 0; a < n; ++a) {
        if (roots[a] < best) {
            best = roots[a];
            best_anchor = a;
        }
    }
    const Mdp mdp(table, k, best_anchor);
    const ValueTable vt = value_iteration(mdp, gamma, epsilon, 0);
    if (diag != nullptr) {
        diag->converged = vt.converged;
        diag->sweeps_run = vt.sweeps_run;
        diag->sup_delta = vt.sup_delta;
    }
    return extract_policy(vt, mdp, profile, cfg);
}

Partition design_fixed_k_vi(const PopulationProfile& profile, std::size_t k,
                            const ObjectiveConfig& cfg, double gamma, double epsilon,
                            int threads, ViDesignDiagnostics* diag) {
    cfg.validate();
    auto table = std::make_shared<const SegmentCostTable>(profile, cfg);
    return design_fixed_k_vi(profile, std::move(table), k, cfg, gamma, epsilon, threads, diag);
}

}  // namespace tzopt
