#include "tzopt/rdd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>

#include "tzopt/csv.hpp"
#include "tzopt/errors.hpp"
#include "tzopt/ols.hpp"

namespace tzopt {

std::size_t RddDataset::n_left() const {
    std::size_t n = 0;
    for (const auto& r : rows) n += r.distance < cutoff ? 1 : 0;
    return n;
}

std::size_t RddDataset::n_right() const { return rows.size() - n_left(); }

EffectEstimate effect_of(const RddFit& fit) {
    EffectEstimate e;
    e.beta1 = fit.coef[1];
    e.se = fit.se[1];
    if (e.se == 0.0) {
        e.p_value = e.beta1 == 0.0 ? 1.0 : 0.0;
    } else {
        e.p_value = normal_two_sided_p(e.beta1 / e.se);
    }
    if (e.p_value < 0.01) e.significant_at = 0.01;
    else if (e.p_value < 0.05) e.significant_at = 0.05;
    else if (e.p_value < 0.1) e.significant_at = 0.1;
    else e.significant_at = 0.0;
    return e;
}

namespace {

RddFit fit_design(const std::vector<const RddRow*>& rows, FitKind kind, int poly_order,
                  double cutoff, double bandwidth,
                  const std::vector<std::string>& control_names) {
    const std::size_t n = rows.size();
    const std::size_t nc = control_names.size();
    const std::size_t p = 2 + 2 * static_cast<std::size_t>(poly_order) + nc;

    std::vector<std::string> names;
    names.reserve(p);
    names.push_back("(intercept)");
    names.push_back("treated");
    for (int m = 1; m <= poly_order; ++m) {
        names.push_back(m == 1 ? "distance" : "distance^" + std::to_string(m));
    }
    for (int m = 1; m <= poly_order; ++m) {
        names.push_back(m == 1 ? "treated_x_distance"
                               : "treated_x_distance^" + std::to_string(m));
    }
    for (const auto& c : control_names) names.push_back(c);

    std::vector<double> X(n * p), y(n);
    RddFit fit;
    fit.kind = kind;
    fit.poly_order = poly_order;
    fit.bandwidth = bandwidth;
    fit.cutoff = cutoff;
    fit.control_means.assign(nc, 0.0);
    fit.support_lo = std::numeric_limits<double>::infinity();
    fit.support_hi = -std::numeric_limits<double>::infinity();

    for (std::size_t i = 0; i < n; ++i) {
        const RddRow& r = *rows[i];
        const double dc = r.distance - cutoff;
        const double h = dc >= 0.0 ? 1.0 : 0.0;
        fit.n_left += dc < 0.0 ? 1 : 0;
        fit.n_right += dc >= 0.0 ? 1 : 0;
        fit.support_lo = std::min(fit.support_lo, r.distance);
        fit.support_hi = std::max(fit.support_hi, r.distance);
        double* row = &X[i * p];
        row[0] = 1.0;
        row[1] = h;
        double dm = 1.0;
        for (int m = 1; m <= poly_order; ++m) {
            dm *= dc;
            row[1 + m] = dm;
            row[1 + poly_order + m] = h * dm;
        }
        for (std::size_t c = 0; c < nc; ++c) {
            row[2 + 2 * poly_order + c] = r.controls[c];
            fit.control_means[c] += r.controls[c];
        }
        y[i] = r.outcome;
    }
    for (std::size_t c = 0; c < nc; ++c) fit.control_means[c] /= static_cast<double>(n);

    const OlsFit ols = ols_fit(X, n, p, y, nullptr, &names);
    fit.coef = ols.beta;
    fit.se = ols.se;
    fit.coef_names = std::move(names);
    return fit;
}

}  // namespace

RddFit fit_local(const RddDataset& data, double bandwidth) {
    if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
        throw InputError("bandwidth must be positive and finite");
    }
    std::vector<const RddRow*> in_window;
    std::size_t nl = 0, nr = 0;
    for (const auto& r : data.rows) {
        if (std::abs(r.distance - data.cutoff) <= bandwidth) {
            in_window.push_back(&r);
            (r.distance - data.cutoff < 0.0 ? nl : nr) += 1;
        }
    }
    if (nl < 4 || nr < 4) {
        throw ComputeError("bandwidth too small: " + format_double(bandwidth) + " leaves " +
                           std::to_string(nl) + " west and " + std::to_string(nr) +
                           " east observations in the window (need at least 4 per side)");
    }
    return fit_design(in_window, FitKind::local, 1, data.cutoff, bandwidth, data.control_names);
}

RddFit fit_global(const RddDataset& data, int poly_order) {
    if (poly_order < 1 || poly_order > 5) {
        throw InputError("poly_order must be in 1..5, got " + std::to_string(poly_order));
    }
    std::vector<const RddRow*> all;
    all.reserve(data.rows.size());
    for (const auto& r : data.rows) all.push_back(&r);
    return fit_design(all, FitKind::global, poly_order, data.cutoff, 0.0, data.control_names);
}

namespace {

// Mean squared leave-one-out prediction error of the one-sided linear
// fit. Throws ComputeError when the side is too thin for the bandwidth.
double loo_mse_side(const RddDataset& data, double bandwidth, bool left) {
    const double C = data.cutoff;
    const std::size_t nc = data.control_names.size();
    const std::size_t p = 2 + nc;
    std::vector<double> X, y;
    for (const auto& r : data.rows) {
        const double dc = r.distance - C;
        if (std::abs(dc) > bandwidth) continue;
        if (left != (dc < 0.0)) continue;
        X.push_back(1.0);
        X.push_back(dc);
        for (std::size_t c = 0; c < nc; ++c) X.push_back(r.controls[c]);
        y.push_back(r.outcome);
    }
    const std::size_t n = y.size();
    if (n < p + 1) {
        throw ComputeError(std::string(left ? "west" : "east") + " side has only " +
                           std::to_string(n) + " in-window observations (need " +
                           std::to_string(p + 1) + ")");
    }
    const OlsFit fit = ols_fit(X, n, p, y);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double denom = 1.0 - fit.hat_diag[i];
        if (denom < 1e-8) {
            throw ComputeError(std::string(left ? "west" : "east") +
                               " side has a leverage-one observation; bandwidth too small");
        }
        const double loo = fit.residuals[i] / denom;
        acc += loo * loo;
    }
    return acc / static_cast<double>(n);
}

}  // namespace

double select_bandwidth_cv(const RddDataset& data, const std::vector<double>& grid) {
    if (grid.empty()) throw InputError("bandwidth grid is empty");
    for (double b : grid) {
        if (!(b > 0.0) || !std::isfinite(b)) {
            throw InputError("bandwidth grid values must be positive and finite");
        }
    }
    std::vector<double> sorted(grid);
    std::sort(sorted.begin(), sorted.end());

    double y2 = 0.0;
    for (const auto& r : data.rows) y2 += r.outcome * r.outcome;
    y2 /= static_cast<double>(std::max<std::size_t>(1, data.rows.size()));
    // CV below the fp noise floor of the outcome scale counts as zero so
    // exact-fit ties resolve by bandwidth.
    const double zero_floor = 1e-18 * (1.0 + y2);

    double best_cv = std::numeric_limits<double>::infinity();
    double best_b = 0.0;
    bool any = false;
    std::string failures;
    for (double b : sorted) {
        double cv;
        try {
            cv = loo_mse_side(data, b, true) + loo_mse_side(data, b, false);
        } catch (const ComputeError& e) {
            failures += (failures.empty() ? "" : "; ") + format_double(b) + ": " + e.what();
            continue;
        }
        if (cv <= zero_floor) cv = 0.0;
        if (cv < best_cv) {
            best_cv = cv;
            best_b = b;
        }
        any = true;
    }
    if (!any) {
        throw ComputeError("no feasible bandwidth in the grid: " + failures);
    }
    return best_b;
}

MccraryResult mccrary_test(const RddDataset& data, int n_bins) {
    if (n_bins < 10) throw InputError("n_bins must be at least 10");
    double min_x = std::numeric_limits<double>::infinity();
    double max_x = -std::numeric_limits<double>::infinity();
    std::size_t nl = 0, nr = 0;
    for (const auto& r : data.rows) {
        const double dc = r.distance - data.cutoff;
        min_x = std::min(min_x, dc);
        max_x = std::max(max_x, dc);
        (dc < 0.0 ? nl : nr) += 1;
    }
    if (nl == 0 || nr == 0) {
        throw InputError("insufficient data: both sides of the cutoff must be populated");
    }
    const double range = max_x - min_x;
    if (!(range > 0.0)) throw InputError("degenerate distances: zero range");
    const double w = range / static_cast<double>(n_bins);

    const std::size_t m_left =
        static_cast<std::size_t>(std::max(1.0, std::ceil(-min_x / w)));
    const std::size_t m_right =
        static_cast<std::size_t>(std::max(1.0, std::floor(max_x / w) + 1.0));
    if (m_left < 3 || m_right < 3) {
        throw InputError("too few bins on one side of the cutoff; increase n_bins");
    }

    std::vector<double> count_left(m_left, 0.0), count_right(m_right, 0.0);
    for (const auto& r : data.rows) {
        const double dc = r.distance - data.cutoff;
        if (dc < 0.0) {
            const std::size_t b =
                std::min(m_left - 1, static_cast<std::size_t>(std::floor(-dc / w)));
            count_left[b] += 1.0;
        } else {
            const std::size_t b =
                std::min(m_right - 1, static_cast<std::size_t>(std::floor(dc / w)));
            count_right[b] += 1.0;
        }
    }

    // Weighted linear fit of log counts per side; the intercept estimates
    // log density at the cutoff (binwidth constant cancels in the
    // difference).
    auto side_fit = [&](const std::vector<double>& counts, bool left, double* intercept,
                        double* se) {
        const std::size_t m = counts.size();
        std::vector<double> X(m * 2), y(m), wt(m);
        for (std::size_t b = 0; b < m; ++b) {
            const double mid = (static_cast<double>(b) + 0.5) * w * (left ? -1.0 : 1.0);
            X[b * 2] = 1.0;
            X[b * 2 + 1] = mid;
            y[b] = std::log(counts[b] + 0.5);
            wt[b] = 1.0 - (static_cast<double>(b) + 0.5) / static_cast<double>(m);
        }
        const OlsFit fit = ols_fit(X, m, 2, y, &wt);
        *intercept = fit.beta[0];
        *se = fit.se[0];
    };

    MccraryResult res;
    res.bins_left = m_left;
    res.bins_right = m_right;
    double al = 0.0, sl = 0.0, ar = 0.0, sr = 0.0;
    side_fit(count_left, true, &al, &sl);
    side_fit(count_right, false, &ar, &sr);
    res.log_ratio = ar - al;
    res.se = std::sqrt(sl * sl + sr * sr);
    res.p_value = res.se == 0.0 ? (res.log_ratio == 0.0 ? 1.0 : 0.0)
                                : normal_two_sided_p(res.log_ratio / res.se);
    res.manipulated = res.p_value < 0.05;
    return res;
}

std::vector<CurvePoint> counterfactual_lines(const RddFit& fit,
                                             const std::vector<double>& eval_grid) {
    const int p = fit.poly_order;
    const std::size_t nc = fit.control_means.size();
    auto predict = [&](double dc, double h) {
        double acc = fit.coef[0] + fit.coef[1] * h;
        double dm = 1.0;
        for (int m = 1; m <= p; ++m) {
            dm *= dc;
            acc += fit.coef[1 + m] * dm + h * fit.coef[1 + p + m] * dm;
        }
        for (std::size_t c = 0; c < nc; ++c) {
            acc += fit.coef[2 + 2 * static_cast<std::size_t>(p) + c] * fit.control_means[c];
        }
        return acc;
    };

    std::vector<CurvePoint> out;
    out.reserve(eval_grid.size());
    for (double d : eval_grid) {
        const double dc = d - fit.cutoff;
        const double h = dc >= 0.0 ? 1.0 : 0.0;
        CurvePoint pt;
        pt.distance = d;
        pt.observed = predict(dc, h);
        pt.counterfactual = predict(dc, 1.0 - h);
        pt.in_support = fit.kind == FitKind::local
                            ? std::abs(dc) <= fit.bandwidth
                            : (d >= fit.support_lo && d <= fit.support_hi);
        out.push_back(pt);
    }
    return out;
}

EtaResult effect_to_eta(const EffectEstimate& estimate) {
    EtaResult r;
    r.value = std::abs(estimate.beta1);
    if (estimate.significant_at == 0.0) {
        r.note = "estimate is not significant at the 10% level; eta returned regardless";
    }
    return r;
}

RddDataset reassign_units(const std::vector<GeoUnit>& units,
                          const std::vector<std::string>& control_names,
                          const Partition& partition, const PopulationProfile& profile,
                          double distance_scale, std::vector<std::string>* warnings) {
    if (partition.k == 0 || partition.boundaries.size() != partition.k) {
        throw InputError("partition has no boundaries");
    }
    if (!(distance_scale > 0.0) || !std::isfinite(distance_scale)) {
        throw InputError("distance scale must be positive and finite");
    }
    std::vector<double> blons;
    blons.reserve(partition.k);
    for (std::size_t b : partition.boundaries) blons.push_back(boundary_longitude(profile, b));

    RddDataset out;
    out.cutoff = 0.0;
    out.control_names = control_names;
    out.rows.reserve(units.size());
    for (const GeoUnit& u : units) {
        double lon = u.longitude_deg;
        if (!std::isfinite(lon)) {
            throw InputError("unit '" + u.unit_id + "' has a non-finite longitude");
        }
        if (lon < -180.0 || lon >= 180.0) {
            const double fixed = wrap_longitude(lon);
            if (warnings != nullptr) {
                warnings->push_back("unit '" + u.unit_id + "' longitude " + format_double(lon) +
                                    " normalized to " + format_double(fixed));
            }
            lon = fixed;
        }
        double best_delta = 0.0;
        double best_abs = std::numeric_limits<double>::infinity();
        for (double blon : blons) {
            const double delta = wrap_longitude(lon - blon);
            if (std::abs(delta) < best_abs) {
                best_abs = std::abs(delta);
                best_delta = delta;
            }
        }
        out.rows.push_back(RddRow{u.unit_id, best_delta * distance_scale, u.outcome, u.controls});
    }
    return out;
}

namespace {

std::vector<std::size_t> resolve_columns(const CsvTable& table, const std::string& path,
                                         const std::vector<std::string>& cols) {
    std::vector<std::size_t> idx;
    idx.reserve(cols.size());
    for (const auto& name : cols) {
        auto c = table.column(name);
        if (!c) {
            std::string have;
            for (const auto& h : table.header) have += (have.empty() ? "" : ", ") + h;
            throw InputError(path + ": unknown column '" + name + "' (have: " + have + ")");
        }
        idx.push_back(*c);
    }
    return idx;
}

}  // namespace

RddDataset load_rdd_dataset(const std::string& path, const std::string& outcome_col,
                            const std::string& distance_col,
                            const std::vector<std::string>& control_cols, double cutoff,
                            std::size_t min_side) {
    const CsvTable table = read_csv(path);
    std::vector<std::string> need{"unit_id", distance_col, outcome_col};
    for (const auto& c : control_cols) need.push_back(c);
    const std::vector<std::size_t> cols = resolve_columns(table, path, need);

    RddDataset data;
    data.cutoff = cutoff;
    data.control_names = control_cols;
    std::set<std::string> seen;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const std::string ctx = path + " row " + std::to_string(r + 2);
        RddRow rec;
        rec.unit_id = row[cols[0]];
        auto dist = parse_double_field(row[cols[1]], ctx);
        auto outc = parse_double_field(row[cols[2]], ctx);
        bool ok = rec.unit_id.size() > 0 && dist && outc && std::isfinite(*dist) &&
                  std::isfinite(*outc);
        rec.controls.reserve(control_cols.size());
        for (std::size_t c = 0; c < control_cols.size(); ++c) {
            auto v = parse_double_field(row[cols[3 + c]], ctx);
            if (!v || !std::isfinite(*v)) {
                ok = false;
                break;
            }
            rec.controls.push_back(*v);
        }
        if (!ok) {
            ++data.dropped_rows;
            continue;
        }
        if (!seen.insert(rec.unit_id).second) {
            throw InputError(path + ": duplicate unit_id '" + rec.unit_id + "'");
        }
        rec.distance = *dist;
        rec.outcome = *outc;
        data.rows.push_back(std::move(rec));
    }

    const std::size_t nl = data.n_left();
    const std::size_t nr = data.rows.size() - nl;
    if (nl < min_side || nr < min_side) {
        throw InputError(path + ": insufficient data: need at least " + std::to_string(min_side) +
                         " rows on each side of the cutoff (have " + std::to_string(nl) +
                         " west, " + std::to_string(nr) + " east)");
    }
    return data;
}

std::vector<GeoUnit> load_geo_units(const std::string& path, const std::string& outcome_col,
                                    const std::vector<std::string>& control_cols,
                                    std::size_t* dropped_rows) {
    const CsvTable table = read_csv(path);
    std::vector<std::string> need{"unit_id", "longitude_deg", outcome_col};
    for (const auto& c : control_cols) need.push_back(c);
    const std::vector<std::size_t> cols = resolve_columns(table, path, need);

    std::vector<GeoUnit> units;
    std::size_t dropped = 0;
    std::set<std::string> seen;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const std::string ctx = path + " row " + std::to_string(r + 2);
        GeoUnit u;
        u.unit_id = row[cols[0]];
        auto lon = parse_double_field(row[cols[1]], ctx);
        auto outc = parse_double_field(row[cols[2]], ctx);
        bool ok = u.unit_id.size() > 0 && lon && outc && std::isfinite(*lon) &&
                  std::isfinite(*outc);
        for (std::size_t c = 0; c < control_cols.size(); ++c) {
            auto v = parse_double_field(row[cols[3 + c]], ctx);
            if (!v || !std::isfinite(*v)) {
                ok = false;
                break;
            }
            u.controls.push_back(*v);
        }
        if (!ok) {
            ++dropped;
            continue;
        }
        if (!seen.insert(u.unit_id).second) {
            throw InputError(path + ": duplicate unit_id '" + u.unit_id + "'");
        }
        u.longitude_deg = *lon;
        u.outcome = *outc;
        units.push_back(std::move(u));
    }
    if (dropped_rows != nullptr) *dropped_rows = dropped;
    return units;
}

}  // namespace tzopt
