#include "tzopt/partition.hpp"

#include <algorithm>
#include <string>

#include <nlohmann/json.hpp>

#include "tzopt/errors.hpp"

namespace tzopt {

namespace {

/// Region widths in circle order starting at boundaries[0]; validates
/// ordering and the width floor.
std::vector<std::size_t> widths_of(const Partition& p, std::size_t n,
                                   const ObjectiveConfig& cfg) {
    if (p.k == 0 || p.boundaries.size() != p.k) {
        throw InputError("partition must have k >= 1 boundaries");
    }
    const std::size_t anchor = p.boundaries[0];
    std::size_t prev_pos = 0;
    std::vector<std::size_t> widths;
    widths.reserve(p.k);
    for (std::size_t l = 0; l < p.k; ++l) {
        if (p.boundaries[l] >= n) {
            throw InputError("boundary cell " + std::to_string(p.boundaries[l]) +
                             " out of range 0.." + std::to_string(n - 1));
        }
        const std::size_t pos = (p.boundaries[l] + n - anchor) % n;
        if (l > 0) {
            if (pos <= prev_pos) {
                throw InputError("boundaries must be strictly increasing in the rotated frame");
            }
            widths.push_back(pos - prev_pos);
        }
        prev_pos = pos;
    }
    widths.push_back(n - prev_pos);  // closing region back to the anchor
    for (std::size_t w : widths) {
        if (w < static_cast<std::size_t>(cfg.min_width)) {
            throw InputError("region width " + std::to_string(w) + " is below the floor of " +
                             std::to_string(cfg.min_width) + " cells");
        }
    }
    return widths;
}

}  // namespace

Partition make_partition(const PopulationProfile& profile, std::size_t anchor,
                         const std::vector<std::size_t>& widths, const ObjectiveConfig& cfg) {
    const std::size_t n = profile.size();
    std::size_t total_width = 0;
    for (std::size_t w : widths) total_width += w;
    if (widths.empty() || total_width != n) {
        throw InputError("region widths must sum to N");
    }

    Partition p;
    p.k = widths.size();
    p.rotation = anchor;
    p.eta = cfg.eta;
    p.boundaries.resize(p.k);
    p.rep_points.resize(p.k);
    p.segment_costs.resize(p.k);

    std::size_t b = anchor;
    for (std::size_t l = 0; l < p.k; ++l) {
        p.boundaries[l] = b;
        p.segment_costs[l] = segment_cost(profile, b, widths[l], cfg);
        p.rep_points[l] = p.segment_costs[l].rep_point;
        b = (b + widths[l]) % n;
    }

    double acc = 0.0;
    for (std::size_t l = p.k; l-- > 0;) acc = p.segment_costs[l].total + acc;
    p.total_cost = acc + cfg.eta * static_cast<double>(p.k);
    return p;
}

double partition_cost(const PopulationProfile& profile, const Partition& partition,
                      const ObjectiveConfig& cfg) {
    cfg.validate();
    const std::vector<std::size_t> widths = widths_of(partition, profile.size(), cfg);
    double acc = 0.0;
    std::size_t b = partition.boundaries[0];
    std::vector<double> totals(partition.k);
    for (std::size_t l = 0; l < partition.k; ++l) {
        totals[l] = segment_cost(profile, b, widths[l], cfg).total;
        b = (b + widths[l]) % profile.size();
    }
    for (std::size_t l = partition.k; l-- > 0;) acc = totals[l] + acc;
    return acc + cfg.eta * static_cast<double>(partition.k);
}

nlohmann::ordered_json partition_to_json(const Partition& partition,
                                         const PopulationProfile& profile) {
    nlohmann::ordered_json j;
    j["k"] = partition.k;
    j["rotation"] = partition.rotation;
    j["boundaries"] = partition.boundaries;
    std::vector<double> bdeg;
    bdeg.reserve(partition.k);
    for (std::size_t b : partition.boundaries) bdeg.push_back(boundary_longitude(profile, b));
    j["boundaries_deg"] = bdeg;
    j["rep_points"] = partition.rep_points;
    std::vector<double> rdeg;
    rdeg.reserve(partition.k);
    for (std::size_t r : partition.rep_points) rdeg.push_back(cell_center_longitude(profile, r));
    j["rep_points_deg"] = rdeg;
    nlohmann::ordered_json costs = nlohmann::ordered_json::array();
    for (const SegmentCost& sc : partition.segment_costs) {
        costs.push_back({{"circadian", sc.circadian}, {"edge", sc.edge}, {"total", sc.total}});
    }
    j["segment_costs"] = costs;
    j["eta"] = partition.eta;
    j["total_cost"] = partition.total_cost;
    return j;
}

Partition partition_from_json(const nlohmann::json& j) {
    try {
        Partition p;
        p.k = j.at("k").get<std::size_t>();
        p.rotation = j.at("rotation").get<std::size_t>();
        p.boundaries = j.at("boundaries").get<std::vector<std::size_t>>();
        if (j.contains("rep_points")) {
            p.rep_points = j.at("rep_points").get<std::vector<std::size_t>>();
        }
        if (j.contains("segment_costs")) {
            for (const auto& item : j.at("segment_costs")) {
                SegmentCost sc{};
                sc.circadian = item.at("circadian").get<double>();
                sc.edge = item.at("edge").get<double>();
                sc.total = item.at("total").get<double>();
                p.segment_costs.push_back(sc);
            }
        }
        p.eta = j.value("eta", 0.0);
        p.total_cost = j.value("total_cost", 0.0);
        if (p.boundaries.size() != p.k || p.k == 0) {
            throw InputError("partition JSON: boundaries do not match k");
        }
        return p;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed partition JSON: ") + e.what());
    }
}

}  // namespace tzopt
