#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "electrify/drive.hpp"
#include "electrify/error.hpp"
#include "electrify/fleet.hpp"
#include "electrify/valuation.hpp"

namespace electrify::params {

using json = nlohmann::ordered_json;

struct Climate {
    std::vector<double> monthly_mean_temp_c;
    double temp_stddev_c = 3.0;
    double yearly_avg_temp_c = 11.0;
    double yearly_lowest_temp_c = -5.0;

    bool operator==(const Climate&) const = default;
};

// Everything a valuation run needs besides the feed, geo data and model.
struct ParameterProfile {
    std::string name = "boston";
    std::string bus_size = "40ft";
    valuation::TcoParams tco;
    valuation::EmissionFactors emissions;
    valuation::HealthParams health;
    drive::BusSpec bus;
    drive::HvacModel hvac;
    fleet::ChargerSpec charger;
    Climate climate;
    double mean_passengers = 20.0;
    int passenger_max = 40;
    double air_density_kgpm3 = 1.2;
    double gravity_mps2 = 9.81;
    // Per-route mean ridership, keyed by route_id; falls back to mean_passengers.
    std::map<std::string, double> route_passengers;

    double passengers_for(const std::string& route_id) const {
        auto it = route_passengers.find(route_id);
        return it == route_passengers.end() ? mean_passengers : it->second;
    }

    bool operator==(const ParameterProfile&) const = default;
};

inline ParameterProfile boston_profile() {
    ParameterProfile p;
    p.name = "boston";
    // Monthly normals for Boston, January first.
    p.climate.monthly_mean_temp_c = {-1.5, -0.6, 3.3, 9.0, 14.6, 19.9, 23.3, 22.6, 18.6, 12.4, 6.9, 1.8};
    p.climate.yearly_avg_temp_c = 11.0;
    p.climate.yearly_lowest_temp_c = -5.0;
    return p;
}

inline ParameterProfile milan_profile() {
    ParameterProfile p;
    p.name = "milan";
    p.tco.energy_price_usd_per_kwh = 0.232;
    p.tco.energy_price_growth = 0.011;
    p.tco.fuel_price_usd_per_gal = 5.8;
    p.tco.fuel_price_growth = 0.043;
    p.tco.ebus_cost_usd = 450000.0;
    p.tco.dbus_cost_usd = 360000.0;
    p.emissions.diesel_w2t_g_per_km = 149.1;
    p.emissions.electric_w2t_kg_per_kwh = 0.483;
    p.health.intake_fraction_ppm = 35.3;
    p.health.effect_factor_daly_per_kg = 79.802;
    p.health.vsl_musd = 4.303;
    p.climate.monthly_mean_temp_c = {2.5, 4.7, 9.3, 13.3, 17.7, 21.9, 24.4, 23.6, 19.3, 13.8, 7.9, 3.3};
    p.climate.yearly_avg_temp_c = 14.5;
    p.climate.yearly_lowest_temp_c = 0.0;
    return p;
}

inline std::vector<std::string> profile_names() { return {"boston", "milan"}; }

inline ParameterProfile profile(std::string_view name) {
    if (name == "boston") return boston_profile();
    if (name == "milan") return milan_profile();
    throw Error(ErrorCategory::InvalidParameter, "unknown parameter profile '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// Field registry: one entry per scalar parameter, shared by JSON output,
// override parsing and validation.

enum class Constraint { Any, NonNegative, Positive, Fraction, GrowthRate, AtLeastOne };

struct Field {
    const char* group;
    const char* name;
    Constraint constraint;
    std::function<double&(ParameterProfile&)> ref;
};

inline const std::vector<Field>& fields() {
    using P = ParameterProfile;
    using C = Constraint;
    static const std::vector<Field> kFields = {
        {"tco", "energy_price_usd_per_kwh", C::NonNegative, [](P& p) -> double& { return p.tco.energy_price_usd_per_kwh; }},
        {"tco", "energy_price_growth", C::GrowthRate, [](P& p) -> double& { return p.tco.energy_price_growth; }},
        {"tco", "demand_charge_usd_per_kw", C::NonNegative, [](P& p) -> double& { return p.tco.demand_charge_usd_per_kw; }},
        {"tco", "demand_charge_growth", C::GrowthRate, [](P& p) -> double& { return p.tco.demand_charge_growth; }},
        {"tco", "fuel_price_usd_per_gal", C::NonNegative, [](P& p) -> double& { return p.tco.fuel_price_usd_per_gal; }},
        {"tco", "fuel_price_growth", C::GrowthRate, [](P& p) -> double& { return p.tco.fuel_price_growth; }},
        {"tco", "ebus_cost_usd", C::NonNegative, [](P& p) -> double& { return p.tco.ebus_cost_usd; }},
        {"tco", "dbus_cost_usd", C::NonNegative, [](P& p) -> double& { return p.tco.dbus_cost_usd; }},
        {"tco", "charger_unit_usd", C::NonNegative, [](P& p) -> double& { return p.tco.charger_unit_usd; }},
        {"tco", "charger_install_usd", C::NonNegative, [](P& p) -> double& { return p.tco.charger_install_usd; }},
        {"tco", "om_electric_usd_per_mile", C::NonNegative, [](P& p) -> double& { return p.tco.om_electric_usd_per_mile; }},
        {"tco", "om_diesel_usd_per_mile", C::NonNegative, [](P& p) -> double& { return p.tco.om_diesel_usd_per_mile; }},
        {"tco", "om_charger_usd_per_year", C::NonNegative, [](P& p) -> double& { return p.tco.om_charger_usd_per_year; }},
        {"tco", "residual_bus", C::NonNegative, [](P& p) -> double& { return p.tco.residual_bus; }},
        {"tco", "residual_charger", C::NonNegative, [](P& p) -> double& { return p.tco.residual_charger; }},
        {"tco", "discount_rate", C::Positive, [](P& p) -> double& { return p.tco.discount_rate; }},
        {"tco", "km_to_miles", C::Positive, [](P& p) -> double& { return p.tco.km_to_miles; }},

        {"emissions", "diesel_w2t_g_per_km", C::NonNegative, [](P& p) -> double& { return p.emissions.diesel_w2t_g_per_km; }},
        {"emissions", "diesel_t2w_kg_per_gal", C::NonNegative, [](P& p) -> double& { return p.emissions.diesel_t2w_kg_per_gal; }},
        {"emissions", "electric_w2t_kg_per_kwh", C::NonNegative, [](P& p) -> double& { return p.emissions.electric_w2t_kg_per_kwh; }},
        {"emissions", "pm25_t2w_g_per_km", C::NonNegative, [](P& p) -> double& { return p.emissions.pm25_t2w_g_per_km; }},

        {"health", "intake_fraction_ppm", C::NonNegative, [](P& p) -> double& { return p.health.intake_fraction_ppm; }},
        {"health", "effect_factor_daly_per_kg", C::NonNegative, [](P& p) -> double& { return p.health.effect_factor_daly_per_kg; }},
        {"health", "vsl_musd", C::NonNegative, [](P& p) -> double& { return p.health.vsl_musd; }},

        {"bus", "mass_kg", C::Positive, [](P& p) -> double& { return p.bus.mass_kg; }},
        {"bus", "frontal_area_m2", C::Positive, [](P& p) -> double& { return p.bus.frontal_area_m2; }},
        {"bus", "drag_coeff", C::Positive, [](P& p) -> double& { return p.bus.drag_coeff; }},
        {"bus", "rolling_coeff", C::Positive, [](P& p) -> double& { return p.bus.rolling_coeff; }},
        {"bus", "motor_eff", C::Fraction, [](P& p) -> double& { return p.bus.motor_eff; }},
        {"bus", "battery_eff", C::Fraction, [](P& p) -> double& { return p.bus.battery_eff; }},
        {"bus", "motor_power_w", C::Positive, [](P& p) -> double& { return p.bus.motor_power_w; }},
        {"bus", "battery_kwh", C::Positive, [](P& p) -> double& { return p.bus.battery_kwh; }},
        {"bus", "aux_power_w", C::Positive, [](P& p) -> double& { return p.bus.aux_power_w; }},
        {"bus", "hvac_cop", C::AtLeastOne, [](P& p) -> double& { return p.bus.hvac_cop; }},
        {"bus", "passenger_mass_kg", C::Positive, [](P& p) -> double& { return p.bus.passenger_mass_kg; }},

        {"hvac", "setpoint_c", C::Any, [](P& p) -> double& { return p.hvac.setpoint_c; }},
        {"hvac", "heat_w_per_deg", C::NonNegative, [](P& p) -> double& { return p.hvac.heat_w_per_deg; }},
        {"hvac", "cool_w_per_deg", C::NonNegative, [](P& p) -> double& { return p.hvac.cool_w_per_deg; }},

        {"charger", "power_kw", C::Positive, [](P& p) -> double& { return p.charger.power_kw; }},
        {"charger", "fastest_charge_h", C::Positive, [](P& p) -> double& { return p.charger.fastest_charge_h; }},
        {"charger", "efficiency", C::Fraction, [](P& p) -> double& { return p.charger.efficiency; }},

        {"climate", "temp_stddev_c", C::Positive, [](P& p) -> double& { return p.climate.temp_stddev_c; }},
        {"climate", "yearly_avg_temp_c", C::Any, [](P& p) -> double& { return p.climate.yearly_avg_temp_c; }},
        {"climate", "yearly_lowest_temp_c", C::Any, [](P& p) -> double& { return p.climate.yearly_lowest_temp_c; }},

        {"operations", "mean_passengers", C::NonNegative, [](P& p) -> double& { return p.mean_passengers; }},
        {"physics", "air_density_kgpm3", C::Positive, [](P& p) -> double& { return p.air_density_kgpm3; }},
        {"physics", "gravity_mps2", C::Positive, [](P& p) -> double& { return p.gravity_mps2; }},
    };
    return kFields;
}

inline void check(Constraint c, double v, const std::string& field) {
    auto fail = [&](const char* rule) {
        throw Error(ErrorCategory::InvalidParameter, field + " must be " + rule);
    };
    if (!std::isfinite(v)) fail("finite");
    switch (c) {
        case Constraint::Any: break;
        case Constraint::NonNegative: if (!(v >= 0)) fail(">= 0"); break;
        case Constraint::Positive: if (!(v > 0)) fail("> 0"); break;
        case Constraint::Fraction: if (!(v > 0 && v <= 1)) fail("in (0, 1]"); break;
        case Constraint::GrowthRate: if (!(v > -1)) fail("> -1"); break;
        case Constraint::AtLeastOne: if (!(v >= 1)) fail(">= 1"); break;
    }
}

inline void validate(const ParameterProfile& profile) {
    auto p = profile;
    for (const auto& f : fields()) check(f.constraint, f.ref(p), std::string(f.group) + "." + f.name);
    if (profile.tco.horizon_years < 1) {
        throw Error(ErrorCategory::InvalidParameter, "tco.horizon_years must be an integer >= 1");
    }
    if (profile.passenger_max < 0) {
        throw Error(ErrorCategory::InvalidParameter, "operations.passenger_max must be an integer >= 0");
    }
    if (profile.bus.max_charge_power_kw && !(*profile.bus.max_charge_power_kw > 0)) {
        throw Error(ErrorCategory::InvalidParameter, "bus.max_charge_power_kw must be > 0");
    }
    if (profile.climate.monthly_mean_temp_c.empty()) {
        throw Error(ErrorCategory::InvalidParameter, "climate.monthly_mean_temp_c must not be empty");
    }
    for (const auto& [route, n] : profile.route_passengers) {
        check(Constraint::NonNegative, n, "operations.route_passengers." + route);
    }
}

inline json to_json(const ParameterProfile& profile) {
    auto p = profile;
    json out;
    out["name"] = p.name;
    out["bus_size"] = p.bus_size;
    for (const auto& f : fields()) out[f.group][f.name] = f.ref(p);
    out["tco"]["horizon_years"] = p.tco.horizon_years;
    out["bus"]["max_charge_power_kw"] = p.bus.max_charge_power_kw ? json(*p.bus.max_charge_power_kw) : json(nullptr);
    out["climate"]["monthly_mean_temp_c"] = p.climate.monthly_mean_temp_c;
    out["operations"]["passenger_max"] = p.passenger_max;
    out["operations"]["route_passengers"] = json::object();
    for (const auto& [route, n] : p.route_passengers) out["operations"]["route_passengers"][route] = n;
    return out;
}

namespace detail {

inline double number_at(const json& v, const std::string& field) {
    if (!v.is_number()) throw Error(ErrorCategory::InvalidParameter, field + " must be a number");
    return v.get<double>();
}

inline int integer_at(const json& v, const std::string& field) {
    double d = number_at(v, field);
    if (d != std::floor(d) || std::abs(d) > 1e9) {
        throw Error(ErrorCategory::InvalidParameter, field + " must be an integer");
    }
    return static_cast<int>(d);
}

}  // namespace detail

// Applies grouped overrides such as {"tco": {"fuel_price_usd_per_gal": 5.8}}
// and validates the result. Unknown groups or fields are rejected by name.
inline ParameterProfile apply_overrides(ParameterProfile profile, const json& overrides) {
    if (overrides.is_null()) return profile;
    if (!overrides.is_object()) throw Error(ErrorCategory::InvalidParameter, "overrides must be an object");
    for (const auto& [group, entries] : overrides.items()) {
        if (group == "name" || group == "bus_size") {
            if (!entries.is_string()) throw Error(ErrorCategory::InvalidParameter, group + " must be a string");
            (group == "name" ? profile.name : profile.bus_size) = entries.get<std::string>();
            continue;
        }
        if (!entries.is_object()) throw Error(ErrorCategory::InvalidParameter, group + " must be an object");
        for (const auto& [name, value] : entries.items()) {
            const std::string field = group + "." + name;
            if (field == "tco.horizon_years") {
                profile.tco.horizon_years = detail::integer_at(value, field);
                continue;
            }
            if (field == "operations.passenger_max") {
                profile.passenger_max = detail::integer_at(value, field);
                continue;
            }
            if (field == "bus.max_charge_power_kw") {
                if (value.is_null()) {
                    profile.bus.max_charge_power_kw.reset();
                } else {
                    profile.bus.max_charge_power_kw = detail::number_at(value, field);
                }
                continue;
            }
            if (field == "climate.monthly_mean_temp_c") {
                if (!value.is_array()) throw Error(ErrorCategory::InvalidParameter, field + " must be an array");
                std::vector<double> temps;
                for (const auto& t : value) temps.push_back(detail::number_at(t, field));
                profile.climate.monthly_mean_temp_c = std::move(temps);
                continue;
            }
            if (field == "operations.route_passengers") {
                if (!value.is_object()) throw Error(ErrorCategory::InvalidParameter, field + " must be an object");
                for (const auto& [route, n] : value.items()) {
                    profile.route_passengers[route] = detail::number_at(n, field + "." + route);
                }
                continue;
            }
            bool found = false;
            for (const auto& f : fields()) {
                if (group == f.group && name == f.name) {
                    f.ref(profile) = detail::number_at(value, field);
                    found = true;
                    break;
                }
            }
            if (!found) throw Error(ErrorCategory::InvalidParameter, "unknown parameter " + field);
        }
    }
    validate(profile);
    return profile;
}

inline ParameterProfile from_json(const json& j) {
    std::string name = j.value("name", std::string("boston"));
    ParameterProfile base = name == "boston" || name == "milan" ? profile(name) : boston_profile();
    return apply_overrides(base, j);
}

inline valuation::ValuationInputs valuation_inputs(const ParameterProfile& p) {
    return valuation::ValuationInputs{p.tco, p.emissions, p.health, p.charger, p.bus};
}

}  // namespace electrify::params
