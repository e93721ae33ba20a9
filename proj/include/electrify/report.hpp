#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "electrify/analysis.hpp"
#include "electrify/csv.hpp"
#include "electrify/engine.hpp"
#include "electrify/error.hpp"
#include "electrify/io.hpp"
#include "electrify/params.hpp"
#include "electrify/valuation.hpp"

namespace electrify::report {

using json = nlohmann::ordered_json;

inline constexpr const char* kFormat = "electrify-report";

// Conventions where the implemented formula differs from a literal reading of
// the underlying equations. Emitted with every report.
inline std::vector<std::string> formula_notes() {
    return {
        "route speed uses mean trip distance over mean cycle length",
        "chargers = ceil(sum of daily cluster energy / (P_c * T_c * eta_c)) with no extra unit factor",
        "diesel well-to-tank CO2 converts g to tonnes with a factor of 1e-6",
        "daily cluster energy is mean trip energy times the representative-day trip count",
        "energy, demand-charge and fuel costs are summed undiscounted; O&M is annuitized; salvage is discounted",
        "fractional bus and charger counts are rounded up",
    };
}

inline json to_json(const fleet::ClusterEstimate& c) {
    return {{"cluster_id", c.cluster_id},
            {"direction", gtfs::to_string(c.direction)},
            {"trips_total", c.trips_total},
            {"trips_on_day", c.trips_on_day},
            {"distance_km", c.distance_km},
            {"mean_cycle_min", c.mean_cycle_min},
            {"speed_kmh", c.speed_kmh},
            {"trip_energy_kwh", c.trip_energy_kwh},
            {"daily_energy_kwh", c.daily_energy_kwh},
            {"daily_energy_lowest_temp_kwh", c.daily_energy_lowest_temp_kwh},
            {"buses", c.buses},
            {"feasible", c.feasible}};
}

inline json to_json(const fleet::FleetEstimate& f) {
    json clusters = json::array();
    for (const auto& c : f.clusters) clusters.push_back(to_json(c));
    return {{"buses_inbound", f.buses_inbound},
            {"buses_outbound", f.buses_outbound},
            {"buses_total", f.buses_total},
            {"chargers", f.chargers},
            {"route_speed_kmh", f.route_speed_kmh},
            {"annual_vkt_km", f.annual_vkt_km},
            {"annual_energy_kwh", f.annual_energy_kwh},
            {"feasible", f.feasible},
            {"needs_fast_charging", f.needs_fast_charging},
            {"clusters", std::move(clusters)}};
}

inline json to_json(const valuation::ElectricValuation& e) {
    return {{"tco_npv_usd", e.tco_npv_usd},
            {"capex_usd", e.capex_usd},
            {"energy_cost_usd", e.energy_cost_usd},
            {"demand_charge_usd", e.demand_charge_usd},
            {"om_usd_per_year", e.om_usd_per_year},
            {"om_npv_usd", e.om_npv_usd},
            {"salvage_usd", e.salvage_usd},
            {"salvage_npv_usd", e.salvage_npv_usd},
            {"energy_kwh_yr", e.energy_kwh_yr},
            {"co2_t_yr", e.co2_t_yr},
            {"energy_cost_by_year", e.energy_cost_by_year},
            {"demand_charge_by_year", e.demand_charge_by_year}};
}

inline json to_json(const valuation::DieselValuation& d) {
    return {{"tco_npv_usd", d.tco_npv_usd},
            {"capex_usd", d.capex_usd},
            {"fuel_cost_usd", d.fuel_cost_usd},
            {"om_usd_per_year", d.om_usd_per_year},
            {"om_npv_usd", d.om_npv_usd},
            {"salvage_usd", d.salvage_usd},
            {"salvage_npv_usd", d.salvage_npv_usd},
            {"fuel_economy_mpg", d.fuel_economy_mpg},
            {"fuel_gal_yr", d.fuel_gal_yr},
            {"co2_t_yr", d.co2_t_yr},
            {"pm25_g_yr", d.pm25_g_yr},
            {"health_usd_yr", d.health_usd_yr},
            {"fuel_cost_by_year", d.fuel_cost_by_year}};
}

inline json to_json(const engine::Report& r) {
    if (r.valuations.empty()) throw Error(ErrorCategory::InvalidInput, "report has no route valuations");

    std::map<std::string, const analysis::RouteRatios*> ratios;
    for (const auto& x : r.analysis.ratios) ratios[x.route_id] = &x;
    std::map<std::string, const analysis::HealthCurvePoint*> health;
    for (const auto& h : r.analysis.health_curve) health[h.route_id] = &h;
    const auto& frontier = r.analysis.pareto_frontier;

    json j;
    j["format"] = kFormat;
    j["version"] = 1;
    j["metadata"] = {{"city", r.city_id},
                     {"profile", r.profile.name},
                     {"bus_size", r.profile.bus_size},
                     {"seed", r.seed},
                     {"model_hash", r.model_hash},
                     {"representative_day", r.representative_day},
                     {"feasibility_bus_apportionment", "trip_share"},
                     {"formula_notes", formula_notes()},
                     {"parameters", params::to_json(r.profile)}};
    j["overrides"] = r.overrides;

    json routes = json::array();
    for (const auto& rv : r.valuations) {
        const auto* ratio = ratios.at(rv.route_id);
        const auto* point = health.at(rv.route_id);
        routes.push_back(
            {{"route_id", rv.route_id},
             {"short_name", rv.short_name},
             {"fleet", to_json(rv.fleet)},
             {"electric", to_json(rv.electric)},
             {"diesel", to_json(rv.diesel)},
             {"tco_ratio", ratio->tco_ratio},
             {"ghg_ratio", ratio->ghg_ratio},
             {"pareto_frontier", std::find(frontier.begin(), frontier.end(), rv.route_id) != frontier.end()},
             {"health_rank", point->rank},
             {"health_cumulative_pct", point->cumulative_savings_pct}});
    }
    j["routes"] = std::move(routes);

    json curve = json::array();
    for (const auto& h : r.analysis.health_curve) {
        curve.push_back({{"rank", h.rank}, {"route_id", h.route_id}, {"cumulative_savings_pct", h.cumulative_savings_pct}});
    }
    j["analysis"] = {{"pareto_frontier", frontier}, {"health_curve", std::move(curve)}};
    return j;
}

// ---------------------------------------------------------------------------
// CSV summary: one row per route, columns in this fixed order.

struct Column {
    const char* name;
    const char* section;  // "" for top-level route fields
    const char* key;
};

inline const std::vector<Column>& csv_columns() {
    static const std::vector<Column> kColumns = {
        {"route_id", "", "route_id"},
        {"short_name", "", "short_name"},
        {"buses_total", "fleet", "buses_total"},
        {"buses_inbound", "fleet", "buses_inbound"},
        {"buses_outbound", "fleet", "buses_outbound"},
        {"chargers", "fleet", "chargers"},
        {"feasible", "fleet", "feasible"},
        {"needs_fast_charging", "fleet", "needs_fast_charging"},
        {"route_speed_kmh", "fleet", "route_speed_kmh"},
        {"annual_vkt_km", "fleet", "annual_vkt_km"},
        {"annual_energy_kwh", "fleet", "annual_energy_kwh"},
        {"electric_capex_usd", "electric", "capex_usd"},
        {"electric_energy_cost_usd", "electric", "energy_cost_usd"},
        {"electric_demand_charge_usd", "electric", "demand_charge_usd"},
        {"electric_om_npv_usd", "electric", "om_npv_usd"},
        {"electric_salvage_npv_usd", "electric", "salvage_npv_usd"},
        {"electric_tco_npv_usd", "electric", "tco_npv_usd"},
        {"diesel_capex_usd", "diesel", "capex_usd"},
        {"diesel_fuel_cost_usd", "diesel", "fuel_cost_usd"},
        {"diesel_om_npv_usd", "diesel", "om_npv_usd"},
        {"diesel_salvage_npv_usd", "diesel", "salvage_npv_usd"},
        {"diesel_tco_npv_usd", "diesel", "tco_npv_usd"},
        {"diesel_fuel_economy_mpg", "diesel", "fuel_economy_mpg"},
        {"electric_co2_t_yr", "electric", "co2_t_yr"},
        {"diesel_co2_t_yr", "diesel", "co2_t_yr"},
        {"pm25_g_yr", "diesel", "pm25_g_yr"},
        {"health_usd_yr", "diesel", "health_usd_yr"},
        {"tco_ratio", "", "tco_ratio"},
        {"ghg_ratio", "", "ghg_ratio"},
        {"pareto_frontier", "", "pareto_frontier"},
        {"health_rank", "", "health_rank"},
        {"health_cumulative_pct", "", "health_cumulative_pct"},
    };
    return kColumns;
}

inline std::string csv_cell(const json& v) {
    if (v.is_string()) return csv::escape(v.get<std::string>());
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_integer()) return v.dump();
    if (v.is_number()) return csv::format_double(v.get<double>());
    throw Error(ErrorCategory::InvalidInput, "unexpected report value " + v.dump());
}

inline std::string to_csv(const json& report) {
    std::string out;
    const auto& cols = csv_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) out += (i ? "," : "") + std::string(cols[i].name);
    out += "\n";
    try {
        for (const auto& route : report.at("routes")) {
            for (std::size_t i = 0; i < cols.size(); ++i) {
                const auto& c = cols[i];
                const json& v = *c.section ? route.at(c.section).at(c.key) : route.at(c.key);
                out += (i ? "," : "") + csv_cell(v);
            }
            out += "\n";
        }
    } catch (const json::exception& e) {
        throw Error(ErrorCategory::InvalidInput, std::string("malformed report: ") + e.what());
    }
    return out;
}

inline std::string dump(const json& report) { return report.dump(2) + "\n"; }

inline json read_report(const std::filesystem::path& path) {
    auto j = io::read_json(path);
    if (j.value("format", std::string()) != kFormat) throw Error(ErrorCategory::InvalidInput, "not a report file");
    return j;
}

// Writes report.json and report.csv into out_dir.
inline void emit_report(const json& report, const std::filesystem::path& out_dir) {
    if (!report.contains("routes") || report.at("routes").empty()) {
        throw Error(ErrorCategory::InvalidInput, "report has no route valuations");
    }
    const auto csv_text = to_csv(report);
    try {
        std::filesystem::create_directories(out_dir);
    } catch (const std::filesystem::filesystem_error& e) {
        throw Error(ErrorCategory::WriteFailure, e.what());
    }
    io::write_text(out_dir / "report.json", dump(report));
    io::write_text(out_dir / "report.csv", csv_text);
}

inline void emit_report(const engine::Report& r, const std::filesystem::path& out_dir) {
    emit_report(to_json(r), out_dir);
}

}  // namespace electrify::report
