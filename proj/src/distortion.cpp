#include "tzopt/distortion.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "tzopt/errors.hpp"
#include "tzopt/kernels.hpp"

namespace tzopt {

void ObjectiveConfig::validate() const {
    if (!std::isfinite(alpha) || alpha < 1.0) throw InputError("alpha must be finite and >= 1");
    if (!std::isfinite(beta) || beta < 1.0) throw InputError("beta must be finite and >= 1");
    if (!std::isfinite(lambda) || lambda < 0.0) throw InputError("lambda must be finite and >= 0");
    if (!std::isfinite(eta) || eta < 0.0) throw InputError("eta must be finite and >= 0");
    if (min_width < 2) throw InputError("min_width must be at least 2 cells");
}

namespace detail {

void PowTables::build(std::size_t n, double exponent) {
    offset.assign(n + 1, 0);
    flat.clear();
    flat.reserve(n * (n + 1) / 2);
    for (std::size_t j = 1; j <= n; ++j) {
        offset[j] = flat.size();
        const double jd = static_cast<double>(j);
        for (std::size_t d = 0; d < j; ++d) {
            flat.push_back(std::pow(static_cast<double>(d) / jd, exponent));
        }
    }
}

void TermScan::reset(const double* m, std::size_t max_width, bool need_p2) {
    mass = m;
    p0.resize(max_width + 1);
    p1.resize(max_width + 1);
    p0[0] = p1[0] = 0.0;
    for (std::size_t t = 0; t < max_width; ++t) {
        p0[t + 1] = p0[t] + m[t];
        p1[t + 1] = p1[t] + static_cast<double>(t) * m[t];
    }
    if (need_p2) {
        p2.resize(max_width + 1);
        p2[0] = 0.0;
        for (std::size_t t = 0; t < max_width; ++t) {
            p2[t + 1] = p2[t] + static_cast<double>(t) * static_cast<double>(t) * m[t];
        }
    }
}

SegmentTerms TermScan::eval(std::size_t j, const ObjectiveConfig& cfg, const double* pow_alpha,
                            const double* pow_beta) const {
    const auto& k = kernels::active();
    const double jd = static_cast<double>(j);
    const double w_all = p0[j];
    const double s_all = p1[j];

    double edge;
    if (pow_beta != nullptr) {
        edge = k.dot_rev(mass, pow_beta, j);
    } else if (cfg.beta == 1.0) {
        const double east = static_cast<double>(j - 1);
        edge = (east * w_all - s_all) / jd;
    } else {  // beta == 2
        const double east = static_cast<double>(j - 1);
        edge = (east * east * w_all - 2.0 * east * s_all + p2[j]) / (jd * jd);
    }

    // Easternmost minimizing representation point: ascending scan with a
    // <= update keeps the last cell attaining the minimum.
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_r = 0;
    for (std::size_t r = 0; r < j; ++r) {
        const double rd = static_cast<double>(r);
        double c;
        if (pow_alpha != nullptr) {
            const double left = k.dot_rev(mass, pow_alpha + 1, r);
            const double right = k.dot(mass + r, pow_alpha, j - r);
            c = left + right;
        } else if (cfg.alpha == 1.0) {
            const double wl = p0[r + 1];
            const double sl = p1[r + 1];
            c = (rd * wl - sl + (s_all - sl) - rd * (w_all - wl)) / jd;
        } else {  // alpha == 2
            c = (p2[j] - 2.0 * rd * s_all + rd * rd * w_all) / (jd * jd);
        }
        if (c <= best) {
            best = c;
            best_r = r;
        }
    }

    if (best < 0.0) best = 0.0;
    if (edge < 0.0) edge = 0.0;
    return SegmentTerms{best_r, best, edge};
}

}  // namespace detail

namespace {

void check_width(std::size_t width, std::size_t n, const ObjectiveConfig& cfg) {
    if (width < static_cast<std::size_t>(cfg.min_width)) {
        throw InputError("segment width " + std::to_string(width) + " is below the floor of " +
                         std::to_string(cfg.min_width) + " cells");
    }
    if (width > n) {
        throw InputError("segment width " + std::to_string(width) + " exceeds the circle (N=" +
                         std::to_string(n) + ")");
    }
}

}  // namespace

SegmentCost segment_cost(const PopulationProfile& profile, std::size_t start, std::size_t width,
                         const ObjectiveConfig& cfg) {
    cfg.validate();
    const std::size_t n = profile.size();
    if (start >= n) {
        throw InputError("segment start " + std::to_string(start) + " out of range 0.." +
                         std::to_string(n - 1));
    }
    check_width(width, n, cfg);

    std::vector<double> m(width);
    for (std::size_t t = 0; t < width; ++t) m[t] = profile.cells[(start + 1 + t) % n];

    const bool gen_a = cfg.alpha != 1.0 && cfg.alpha != 2.0;
    const bool gen_b = cfg.beta != 1.0 && cfg.beta != 2.0;
    std::vector<double> pa, pb;
    if (gen_a) {
        pa.resize(width);
        for (std::size_t d = 0; d < width; ++d) {
            pa[d] = std::pow(static_cast<double>(d) / static_cast<double>(width), cfg.alpha);
        }
    }
    if (gen_b) {
        pb.resize(width);
        for (std::size_t d = 0; d < width; ++d) {
            pb[d] = std::pow(static_cast<double>(d) / static_cast<double>(width), cfg.beta);
        }
    }

    detail::TermScan scan;
    scan.reset(m.data(), width, cfg.alpha == 2.0 || cfg.beta == 2.0);
    const detail::SegmentTerms terms =
        scan.eval(width, cfg, gen_a ? pa.data() : nullptr, gen_b ? pb.data() : nullptr);

    SegmentCost out;
    out.rep_point = (start + 1 + terms.rep_offset) % n;
    out.circadian = terms.circadian;
    out.edge = terms.edge;
    out.total = terms.circadian + cfg.lambda * terms.edge;
    return out;
}

SegmentCostTable::SegmentCostTable(const PopulationProfile& profile, const ObjectiveConfig& cfg) {
    cfg.validate();
    n_ = profile.size();
    min_width_ = cfg.min_width;
    if (static_cast<std::size_t>(min_width_) > n_) {
        throw InputError("min_width " + std::to_string(min_width_) + " exceeds the domain (N=" +
                         std::to_string(n_) + ")");
    }

    std::vector<double> mass2(2 * n_);
    for (std::size_t u = 0; u < 2 * n_; ++u) mass2[u] = profile.cells[u % n_];

    const bool gen_a = cfg.alpha != 1.0 && cfg.alpha != 2.0;
    const bool gen_b = cfg.beta != 1.0 && cfg.beta != 2.0;
    detail::PowTables pow_a, pow_b;
    if (gen_a) pow_a.build(n_, cfg.alpha);
    if (gen_b) pow_b.build(n_, cfg.beta);

    totals_.assign(n_ * (n_ + 1), std::numeric_limits<double>::infinity());
    detail::TermScan scan;
    for (std::size_t s = 0; s < n_; ++s) {
        // Same local arithmetic as segment_cost: entries [0..j] of the
        // prefix arrays do not depend on the build width.
        scan.reset(&mass2[s + 1], n_, cfg.alpha == 2.0 || cfg.beta == 2.0);
        double* row = &totals_[s * (n_ + 1)];
        for (std::size_t j = static_cast<std::size_t>(min_width_); j <= n_; ++j) {
            const detail::SegmentTerms terms =
                scan.eval(j, cfg, gen_a ? pow_a.width_row(j) : nullptr,
                          gen_b ? pow_b.width_row(j) : nullptr);
            row[j] = terms.circadian + cfg.lambda * terms.edge;
        }
    }
}

SegmentCostTable SegmentCostTable::from_costs(std::size_t n, int min_width,
                                              std::vector<double> totals) {
    if (totals.size() != n * (n + 1)) {
        throw InputError("from_costs: need n*(n+1) totals");
    }
    SegmentCostTable t;
    t.n_ = n;
    t.min_width_ = min_width;
    t.totals_ = std::move(totals);
    return t;
}

}  // namespace tzopt
