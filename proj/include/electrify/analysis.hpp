#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "electrify/error.hpp"
#include "electrify/valuation.hpp"

namespace electrify::analysis {

struct RouteRatios {
    std::string route_id;
    double tco_ratio = 0;  // electric / diesel net TCO
    double ghg_ratio = 0;  // electric / diesel CO2
};

struct HealthCurvePoint {
    std::size_t rank = 0;
    std::string route_id;
    double cumulative_savings_pct = 0;

    bool operator==(const HealthCurvePoint&) const = default;
};

inline RouteRatios route_ratios(const valuation::RouteValuation& rv) {
    if (!(rv.diesel.tco_npv_usd > 0) || !(rv.diesel.co2_t_yr > 0)) {
        throw Error(ErrorCategory::InvalidInput, "route '" + rv.route_id + "' has a non-positive diesel baseline");
    }
    return RouteRatios{rv.route_id, rv.electric.tco_npv_usd / rv.diesel.tco_npv_usd,
                       rv.electric.co2_t_yr / rv.diesel.co2_t_yr};
}

// True when a is no worse than b in both ratios and better in at least one.
inline bool dominates(const RouteRatios& a, const RouteRatios& b) {
    return a.tco_ratio <= b.tco_ratio && a.ghg_ratio <= b.ghg_ratio &&
           (a.tco_ratio < b.tco_ratio || a.ghg_ratio < b.ghg_ratio);
}

// Routes not strictly dominated by any other (both ratios minimized).
// Identical points are all kept. Sorted by tco_ratio, then ghg_ratio, then id.
inline std::vector<std::string> pareto_frontier(std::span<const RouteRatios> points) {
    if (points.empty()) throw Error(ErrorCategory::InvalidInput, "no points for the Pareto frontier");
    std::vector<std::size_t> order(points.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto& pa = points[a];
        const auto& pb = points[b];
        if (pa.tco_ratio != pb.tco_ratio) return pa.tco_ratio < pb.tco_ratio;
        if (pa.ghg_ratio != pb.ghg_ratio) return pa.ghg_ratio < pb.ghg_ratio;
        return pa.route_id < pb.route_id;
    });

    // Sweep groups of equal tco_ratio. Within a group only the lowest ghg
    // survives, and only if it beats every ghg seen at a lower tco_ratio.
    std::vector<std::string> out;
    double best_earlier = INFINITY;
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        const double tco = points[order[i]].tco_ratio;
        while (j < order.size() && points[order[j]].tco_ratio == tco) ++j;
        const double group_min = points[order[i]].ghg_ratio;
        if (group_min < best_earlier) {
            for (std::size_t k = i; k < j && points[order[k]].ghg_ratio == group_min; ++k) {
                out.push_back(points[order[k]].route_id);
            }
        }
        best_earlier = std::min(best_earlier, group_min);
        i = j;
    }
    return out;
}

// Cumulative share of total health cost avoided when routes are electrified in
// order of decreasing impact (ties by route id).
inline std::vector<HealthCurvePoint> health_savings_curve(const std::map<std::string, double>& impacts) {
    double total = 0;
    for (const auto& [id, v] : impacts) {
        if (!(v >= 0)) throw Error(ErrorCategory::InvalidInput, "health impact of '" + id + "' is negative");
        total += v;
    }
    if (!(total > 0)) throw Error(ErrorCategory::AllZeroImpacts, "total health impact is zero");

    std::vector<std::pair<std::string, double>> sorted(impacts.begin(), impacts.end());
    std::stable_sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.second > b.second; });

    std::vector<HealthCurvePoint> out;
    double running = 0;
    for (std::size_t k = 0; k < sorted.size(); ++k) {
        running += sorted[k].second;
        const double pct = k + 1 == sorted.size() ? 100.0 : 100.0 * running / total;
        out.push_back(HealthCurvePoint{k + 1, sorted[k].first, pct});
    }
    return out;
}

struct Analysis {
    std::vector<RouteRatios> ratios;
    std::vector<std::string> pareto_frontier;
    std::vector<HealthCurvePoint> health_curve;
};

inline Analysis analyze(std::span<const valuation::RouteValuation> valuations) {
    if (valuations.empty()) throw Error(ErrorCategory::InvalidInput, "no route valuations");
    Analysis a;
    std::map<std::string, double> impacts;
    for (const auto& rv : valuations) {
        a.ratios.push_back(route_ratios(rv));
        impacts[rv.route_id] = rv.diesel.health_usd_yr;
    }
    a.pareto_frontier = pareto_frontier(a.ratios);
    a.health_curve = health_savings_curve(impacts);
    return a;
}

}  // namespace electrify::analysis
