#include "tzopt/dp_quantizer.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>
#include <thread>

#include "tzopt/errors.hpp"
#include "tzopt/kernels.hpp"

namespace tzopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// best[l][t]: minimal cost of covering unrolled positions (t, N] with
// exactly l segments, each at least min_width wide. Level 1 has no
// choice; levels above minimize over the first segment's width with the
// shared bellman kernel (gamma = 1).
struct LinearDp {
    std::size_t n = 0;
    std::size_t kmax = 0;
    std::vector<double> best;        // (kmax+1) x (n+1)
    std::vector<std::int32_t> back;  // width chosen per state (traceback runs only)

    double& at(std::size_t l, std::size_t t) { return best[l * (n + 1) + t]; }
    const double* level(std::size_t l) const { return &best[l * (n + 1)]; }
};

void run_linear_dp(const SegmentCostTable& table, std::size_t anchor, std::size_t kmax,
                   LinearDp& dp, bool with_traceback) {
    const std::size_t n = table.size();
    const std::size_t mw = static_cast<std::size_t>(table.min_width());
    dp.n = n;
    dp.kmax = kmax;
    dp.best.assign((kmax + 1) * (n + 1), kInf);
    if (with_traceback) dp.back.assign((kmax + 1) * (n + 1), -1);

    for (std::size_t t = 0; t + mw <= n; ++t) {
        dp.at(1, t) = table.total((anchor + t) % n, n - t);
    }
    const auto& bellman = kernels::active().bellman_min;
    for (std::size_t l = 2; l <= kmax; ++l) {
        if (l * mw > n) break;  // deeper levels infeasible
        const std::size_t t_hi = n - l * mw;
        const double* prev_level = dp.level(l - 1);
        for (std::size_t t = 0; t <= t_hi; ++t) {
            const std::size_t j_hi = n - t - (l - 1) * mw;
            const double* row = table.row((anchor + t) % n);
            const auto r = bellman(row + mw, prev_level + t + mw, j_hi - mw + 1, 1.0);
            dp.at(l, t) = r.value;
            if (with_traceback) {
                dp.back[l * (n + 1) + t] = static_cast<std::int32_t>(mw + r.index);
            }
        }
    }
}

std::vector<std::size_t> traceback_widths(const LinearDp& dp, std::size_t k) {
    std::vector<std::size_t> widths;
    widths.reserve(k);
    std::size_t t = 0;
    for (std::size_t l = k; l >= 2; --l) {
        const std::int32_t j = dp.back[l * (dp.n + 1) + t];
        widths.push_back(static_cast<std::size_t>(j));
        t += static_cast<std::size_t>(j);
    }
    widths.push_back(dp.n - t);
    return widths;
}

// roots[a * (kmax+1) + l] = optimal cost for anchor a at exactly l
// regions. Anchors are independent; chunked across threads.
std::vector<double> sweep_anchor_roots(const SegmentCostTable& table, std::size_t kmax,
                                       int threads) {
    const std::size_t n = table.size();
    std::vector<double> roots(n * (kmax + 1), kInf);
    const int nthreads = std::max(1, threads);
    auto work = [&](std::size_t a_begin, std::size_t a_end) {
        LinearDp dp;
        for (std::size_t a = a_begin; a < a_end; ++a) {
            run_linear_dp(table, a, kmax, dp, false);
            for (std::size_t l = 1; l <= kmax; ++l) {
                roots[a * (kmax + 1) + l] = dp.at(l, 0);
            }
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
    return roots;
}

void check_feasible(std::size_t k, std::size_t n, const ObjectiveConfig& cfg) {
    if (k < 1) throw InputError("k must be at least 1");
    if (k * static_cast<std::size_t>(cfg.min_width) > n) {
        throw InputError("infeasible: k=" + std::to_string(k) + " regions of at least " +
                         std::to_string(cfg.min_width) + " cells do not fit in N=" +
                         std::to_string(n));
    }
}

Partition finish_design(const PopulationProfile& profile, const SegmentCostTable& table,
                        std::size_t anchor, std::size_t k, const ObjectiveConfig& cfg) {
    LinearDp dp;
    run_linear_dp(table, anchor, k, dp, true);
    return make_partition(profile, anchor, traceback_widths(dp, k), cfg);
}

}  // namespace

Partition design_fixed_k(const PopulationProfile& profile, const SegmentCostTable& table,
                         std::size_t k, const ObjectiveConfig& cfg, const DesignOptions& opts) {
    cfg.validate();
    check_feasible(k, table.size(), cfg);
    const std::vector<double> roots = sweep_anchor_roots(table, k, opts.threads);
    std::size_t best_anchor = 0;
    double best_cost = kInf;
    for (std::size_t a = 0; a < table.size(); ++a) {
        const double c = roots[a * (k + 1) + k];
        if (c < best_cost) {
            best_cost = c;
            best_anchor = a;
        }
    }
    return finish_design(profile, table, best_anchor, k, cfg);
}

Partition design_fixed_k(const PopulationProfile& profile, std::size_t k,
                         const ObjectiveConfig& cfg, const DesignOptions& opts) {
    cfg.validate();
    const SegmentCostTable table(profile, cfg);
    return design_fixed_k(profile, table, k, cfg, opts);
}

Partition design_open_k(const PopulationProfile& profile, const SegmentCostTable& table,
                        std::size_t k_min, std::size_t k_max, const ObjectiveConfig& cfg,
                        const DesignOptions& opts) {
    cfg.validate();
    if (k_min < 1 || k_min > k_max) {
        throw InputError("need 1 <= k_min <= k_max (got " + std::to_string(k_min) + ".." +
                         std::to_string(k_max) + ")");
    }
    check_feasible(k_max, table.size(), cfg);
    const std::vector<double> roots = sweep_anchor_roots(table, k_max, opts.threads);

    std::size_t best_k = 0, best_anchor = 0;
    double best_total = kInf;
    for (std::size_t l = k_min; l <= k_max; ++l) {
        std::size_t anchor = 0;
        double dist = kInf;
        for (std::size_t a = 0; a < table.size(); ++a) {
            const double c = roots[a * (k_max + 1) + l];
            if (c < dist) {
                dist = c;
                anchor = a;
            }
        }
        const double total = dist + cfg.eta * static_cast<double>(l);
        if (total < best_total) {  // strict: ties go to smaller k
            best_total = total;
            best_k = l;
            best_anchor = anchor;
        }
    }
    return finish_design(profile, table, best_anchor, best_k, cfg);
}

Partition design_open_k(const PopulationProfile& profile, std::size_t k_min, std::size_t k_max,
                        const ObjectiveConfig& cfg, const DesignOptions& opts) {
    cfg.validate();
    const SegmentCostTable table(profile, cfg);
    return design_open_k(profile, table, k_min, k_max, cfg, opts);
}

std::size_t choose_prime_meridian_uniform(const PopulationProfile& profile, std::size_t k,
                                          const ObjectiveConfig& cfg,
                                          std::vector<double>* cost_curve) {
    cfg.validate();
    const std::size_t n = profile.size();
    if (k < 1 || n % k != 0) {
        throw InputError("uniform partition needs N divisible by k (N=" + std::to_string(n) +
                         ", k=" + std::to_string(k) + "); use the design command for "
                         "non-uniform widths");
    }
    const std::size_t width = n / k;
    check_feasible(k, n, cfg);

    if (cost_curve != nullptr) cost_curve->assign(n, 0.0);
    std::size_t best_offset = 0;
    double best = kInf;
    for (std::size_t o = 0; o < n; ++o) {
        double cost = 0.0;
        for (std::size_t l = 0; l < k; ++l) {
            cost += segment_cost(profile, (o + l * width) % n, width, cfg).total;
        }
        if (cost_curve != nullptr) (*cost_curve)[o] = cost;
        if (cost < best) {
            best = cost;
            best_offset = o;
        }
    }
    return best_offset;
}

namespace {

// Exhaustive search over the first segment widths; right-associated
// accumulation and ascending enumeration mirror the DP exactly.
double brute_force_rec(const PopulationProfile& profile, const ObjectiveConfig& cfg,
                       std::size_t anchor, std::size_t levels, std::size_t t,
                       std::vector<std::size_t>* widths) {
    const std::size_t n = profile.size();
    const std::size_t mw = static_cast<std::size_t>(cfg.min_width);
    if (levels == 1) {
        const std::size_t w = n - t;
        if (w < mw) return kInf;
        if (widths != nullptr) widths->push_back(w);
        return segment_cost(profile, (anchor + t) % n, w, cfg).total;
    }
    double best = kInf;
    std::size_t best_j = 0;
    const std::size_t j_hi = n - t - (levels - 1) * mw;
    for (std::size_t j = mw; j <= j_hi; ++j) {
        const double c = segment_cost(profile, (anchor + t) % n, j, cfg).total;
        const double sub = brute_force_rec(profile, cfg, anchor, levels - 1, t + j, nullptr);
        const double v = c + sub;
        if (v < best) {
            best = v;
            best_j = j;
        }
    }
    if (widths != nullptr && best_j != 0) {
        widths->push_back(best_j);
        brute_force_rec(profile, cfg, anchor, levels - 1, t + best_j, widths);
    }
    return best;
}

}  // namespace

Partition brute_force_design(const PopulationProfile& profile, std::size_t k,
                             const ObjectiveConfig& cfg) {
    cfg.validate();
    const std::size_t n = profile.size();
    if (n > 24 || k > 4) {
        throw InputError("brute_force_design is limited to N <= 24 and k <= 4 (got N=" +
                         std::to_string(n) + ", k=" + std::to_string(k) + ")");
    }
    check_feasible(k, n, cfg);

    std::size_t best_anchor = 0;
    double best = kInf;
    for (std::size_t a = 0; a < n; ++a) {
        const double v = brute_force_rec(profile, cfg, a, k, 0, nullptr);
        if (v < best) {
            best = v;
            best_anchor = a;
        }
    }
    std::vector<std::size_t> widths;
    brute_force_rec(profile, cfg, best_anchor, k, 0, &widths);
    return make_partition(profile, best_anchor, widths, cfg);
}

}  // namespace tzopt
