#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "tzopt/grid.hpp"
#include "tzopt/partition.hpp"

namespace tzopt {

/// Unit-level sharp-discontinuity data. distance is signed: positive
/// east of the boundary; treatment is 1{distance >= cutoff}.
struct RddRow {
    std::string unit_id;
    double distance;
    double outcome;
    std::vector<double> controls;
};

struct RddDataset {
    std::vector<RddRow> rows;
    std::vector<std::string> control_names;
    double cutoff = 0.0;
    std::size_t dropped_rows = 0;  // rows removed for missing fields at load

    std::size_t n_left() const;   // distance < cutoff
    std::size_t n_right() const;  // distance >= cutoff
};

enum class FitKind { local, global };

/// Fitted discontinuity model. Coefficient layout:
///   [intercept, treated, d^1..d^p, treated*d^1..treated*d^p, controls...]
/// with d the distance centered at the cutoff; beta1 = coefficient 1.
struct RddFit {
    FitKind kind = FitKind::local;
    std::vector<double> coef;
    std::vector<double> se;  // HC1 robust
    std::vector<std::string> coef_names;
    int poly_order = 1;
    double bandwidth = 0.0;  // 0 for global fits
    double cutoff = 0.0;
    std::size_t n_left = 0, n_right = 0;  // in the fitted sample
    std::vector<double> control_means;    // of the fitted sample
    double support_lo = 0.0, support_hi = 0.0;  // fitted distance range
};

struct EffectEstimate {
    double beta1 = 0.0;
    double se = 0.0;
    double p_value = 1.0;
    double significant_at = 0.0;  // 0.01, 0.05, 0.1, or 0 for none
};

EffectEstimate effect_of(const RddFit& fit);

/// Conventional uniform-kernel local-linear fit on |d - C| <= bandwidth.
RddFit fit_local(const RddDataset& data, double bandwidth);

/// Global polynomial fit of order 1..5 on all rows.
RddFit fit_global(const RddDataset& data, int poly_order);

/// Grid bandwidth minimizing the per-side mean squared leave-one-out
/// prediction error of the local fit, summed over the two sides; ties
/// toward the smaller bandwidth.
double select_bandwidth_cv(const RddDataset& data, const std::vector<double>& grid);

struct MccraryResult {
    double log_ratio = 0.0;  // discontinuity in log density at the cutoff
    double se = 0.0;
    double p_value = 1.0;
    bool manipulated = false;  // p < 0.05
    std::size_t bins_left = 0, bins_right = 0;
};

/// Density manipulation check: equal-width bins per side (none straddles
/// the cutoff), weighted local-linear fit to log(count + 0.5) per side.
MccraryResult mccrary_test(const RddDataset& data, int n_bins);

struct CurvePoint {
    double distance;
    double observed;        // prediction from the unit's own side
    double counterfactual;  // extrapolation of the opposite side's curve
    bool in_support;
};

std::vector<CurvePoint> counterfactual_lines(const RddFit& fit,
                                             const std::vector<double>& eval_grid);

struct EtaResult {
    double value = 0.0;
    std::string note;  // set when the estimate is not significant
};

/// |beta1|, with a status note when significant_at is none.
EtaResult effect_to_eta(const EffectEstimate& estimate);

/// A unit with a physical longitude, before boundary assignment.
struct GeoUnit {
    std::string unit_id;
    double longitude_deg;
    double outcome;
    std::vector<double> controls;
};

/// Assigns each unit to its nearest partition boundary (wrap-aware
/// longitude distance; ties toward the lower boundary index) and emits a
/// dataset with signed distances, positive east of the boundary, scaled
/// by distance_scale (e.g. miles per degree). Out-of-range longitudes are
/// normalized with a warning.
RddDataset reassign_units(const std::vector<GeoUnit>& units,
                          const std::vector<std::string>& control_names,
                          const Partition& partition, const PopulationProfile& profile,
                          double distance_scale = 1.0,
                          std::vector<std::string>* warnings = nullptr);

/// CSV loaders. RDD CSV: header unit_id,distance,outcome[,control...];
/// units-geo CSV: header unit_id,longitude_deg,outcome[,control...].
/// Rows with missing named fields are dropped and counted.
RddDataset load_rdd_dataset(const std::string& path, const std::string& outcome_col,
                            const std::string& distance_col,
                            const std::vector<std::string>& control_cols, double cutoff,
                            std::size_t min_side = 10);
std::vector<GeoUnit> load_geo_units(const std::string& path, const std::string& outcome_col,
                                    const std::vector<std::string>& control_cols,
                                    std::size_t* dropped_rows = nullptr);

}  // namespace tzopt
