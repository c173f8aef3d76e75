#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "rng.hpp"
#include "tzopt/distortion.hpp"
#include "tzopt/grid.hpp"
#include "tzopt/rdd.hpp"

namespace tzopt::testing {

inline PopulationProfile profile_of(std::vector<double> cells, double origin = -180.0) {
    const double width = 360.0 / static_cast<double>(cells.size());
    return make_profile(std::move(cells), width, origin);
}

inline PopulationProfile random_profile(Rng& rng, std::size_t n) {
    std::vector<double> cells(n);
    for (auto& c : cells) c = rng.uniform();
    return profile_of(std::move(cells));
}

/// World with Gaussian population spikes on a low uniform background.
inline PopulationProfile spike_world(std::size_t n, const std::vector<std::size_t>& centers,
                                     double amplitude, double sigma_cells,
                                     double background = 0.01) {
    std::vector<double> cells(n, background);
    for (std::size_t c : centers) {
        for (int d = -4; d <= 4; ++d) {
            const std::size_t i = (c + n + static_cast<std::size_t>(d + static_cast<int>(n))) % n;
            const double z = static_cast<double>(d) / sigma_cells;
            cells[i] += amplitude * std::exp(-0.5 * z * z);
        }
    }
    return profile_of(std::move(cells));
}

/// Direct-sum oracle for one segment: plain O(width^2) loops with
/// std::pow, independent of the production evaluator.
struct DirectSegment {
    std::size_t rep_point;
    double circadian;
    double edge;
    double total;
};

inline DirectSegment direct_segment_cost(const PopulationProfile& profile, std::size_t start,
                                         std::size_t width, const ObjectiveConfig& cfg) {
    const std::size_t n = profile.size();
    const double jd = static_cast<double>(width);
    double best = 0.0;
    std::size_t best_r = 0;
    for (std::size_t r = 0; r < width; ++r) {
        double c = 0.0;
        for (std::size_t t = 0; t < width; ++t) {
            const double mass = profile.cells[(start + 1 + t) % n];
            const double dist = std::abs(static_cast<double>(t) - static_cast<double>(r)) / jd;
            c += mass * std::pow(dist, cfg.alpha);
        }
        if (r == 0 || c <= best) {
            best = c;
            best_r = r;
        }
    }
    double edge = 0.0;
    for (std::size_t t = 0; t < width; ++t) {
        const double mass = profile.cells[(start + 1 + t) % n];
        const double dist = static_cast<double>(width - 1 - t) / jd;
        edge += mass * std::pow(dist, cfg.beta);
    }
    return DirectSegment{(start + 1 + best_r) % n, best, edge, best + cfg.lambda * edge};
}

inline bool close_rel(double a, double b, double tol) {
    const double scale = std::max({1.0, std::abs(a), std::abs(b)});
    return std::abs(a - b) <= tol * scale;
}

/// Planted sharp design: Y = b0 + b1*h + b2*d + b3*h*d + noise.
inline RddDataset planted_dataset(Rng& rng, std::size_t n, double b0, double b1, double b2,
                                  double b3, double noise_sd, double d_max = 1.0) {
    RddDataset data;
    data.cutoff = 0.0;
    data.rows.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        double d = rng.uniform(-d_max, d_max);
        if (d == 0.0) d = d_max / 2;
        const double h = d >= 0.0 ? 1.0 : 0.0;
        const double y = b0 + b1 * h + b2 * d + b3 * h * d +
                         (noise_sd > 0.0 ? rng.normal(0.0, noise_sd) : 0.0);
        data.rows.push_back(RddRow{"u" + std::to_string(i), d, y, {}});
    }
    return data;
}

}  // namespace tzopt::testing
