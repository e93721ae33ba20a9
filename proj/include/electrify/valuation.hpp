#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "electrify/drive.hpp"
#include "electrify/error.hpp"
#include "electrify/fleet.hpp"

namespace electrify::valuation {

inline constexpr double kKmToMiles = 0.621371;

// Cost inputs for the NPV total cost of ownership. Rates are fractions
// (0.035 is 3.5 %). Defaults are the Boston profile.
struct TcoParams {
    double energy_price_usd_per_kwh = 0.098;
    double energy_price_growth = -0.001;
    double demand_charge_usd_per_kw = 8.0;
    double demand_charge_growth = 0.0;
    double fuel_price_usd_per_gal = 2.546;
    double fuel_price_growth = 0.007;
    double ebus_cost_usd = 750000.0;
    double dbus_cost_usd = 485000.0;
    double charger_unit_usd = 27549.0;
    double charger_install_usd = 17692.0;
    double om_electric_usd_per_mile = 0.64;
    double om_diesel_usd_per_mile = 0.88;
    double om_charger_usd_per_year = 500.0;
    double residual_bus = 0.15;
    double residual_charger = 0.15;
    double discount_rate = 0.035;
    int horizon_years = 12;
    double km_to_miles = kKmToMiles;

    bool operator==(const TcoParams&) const = default;
};

struct EmissionFactors {
    double diesel_w2t_g_per_km = 310.0;
    double diesel_t2w_kg_per_gal = 10.21;
    double electric_w2t_kg_per_kwh = 0.2369;
    double pm25_t2w_g_per_km = 0.583;

    bool operator==(const EmissionFactors&) const = default;
};

struct HealthParams {
    double intake_fraction_ppm = 25.8;
    double effect_factor_daly_per_kg = 260.110;
    double vsl_musd = 6.267;

    bool operator==(const HealthParams&) const = default;
};

// Diesel-bus fuel economy (MPG) as a quadratic in average speed in mph.
inline double fuel_economy(double avg_speed_kmh, double km_to_miles = kKmToMiles) {
    if (!(avg_speed_kmh > 0)) {
        throw Error(ErrorCategory::NonPositiveSpeed, "average speed must be positive");
    }
    const double mph = km_to_miles * avg_speed_kmh;
    const double fe = -0.0032 * mph * mph + 0.2143 * mph + 0.9726;
    if (!(fe > 0)) {
        throw Error(ErrorCategory::NonPositiveFE, "fuel economy is not positive at " + csv::format_double(mph) + " mph");
    }
    return fe;
}

// Well-to-wheel diesel CO2 in tonnes per year: a per-km upstream factor plus
// tailpipe emissions from the gallons burned.
inline double co2_diesel_t(double annual_vkt_km, double fe_mpg, const EmissionFactors& ef,
                           double km_to_miles = kKmToMiles) {
    if (!(fe_mpg > 0)) throw Error(ErrorCategory::NonPositiveFE, "fuel economy must be positive");
    const double upstream_t = annual_vkt_km * ef.diesel_w2t_g_per_km / 1e6;
    const double gallons = annual_vkt_km * km_to_miles / fe_mpg;
    return upstream_t + gallons * ef.diesel_t2w_kg_per_gal / 1000.0;
}

// Electric CO2 in tonnes per year from the grid emission factor.
inline double co2_electric_t(std::span<const double> cluster_daily_energies_kwh, const EmissionFactors& ef) {
    const double daily = std::accumulate(cluster_daily_energies_kwh.begin(), cluster_daily_energies_kwh.end(), 0.0);
    return daily * ef.electric_w2t_kg_per_kwh * 365.0 / 1000.0;
}

struct HealthImpact {
    double pm25_g_yr = 0;
    double intake_kg_yr = 0;
    double usd_yr = 0;
};

// Monetized PM2.5 exhaust damage of a diesel fleet. Intake fraction is in ppm
// and VSL in millions of USD.
inline HealthImpact health_impact(double annual_vkt_km, const EmissionFactors& ef, const HealthParams& hp) {
    HealthImpact h;
    h.pm25_g_yr = annual_vkt_km * ef.pm25_t2w_g_per_km;
    h.intake_kg_yr = hp.intake_fraction_ppm * 1e-6 * h.pm25_g_yr / 1000.0;
    h.usd_yr = h.intake_kg_yr * hp.effect_factor_daly_per_kg * hp.vsl_musd * 1e6;
    return h;
}

// Present value of one unit paid at the end of each year over the horizon.
inline double annuity_factor(double discount_rate, int years) {
    if (discount_rate == 0.0) return static_cast<double>(years);
    const double growth = std::expm1(static_cast<double>(years) * std::log1p(discount_rate));  // (1+r)^n - 1
    return growth / (discount_rate * (growth + 1.0));
}

inline double discount_factor(double discount_rate, int years) {
    return std::exp(-static_cast<double>(years) * std::log1p(discount_rate));
}

struct ElectricValuation {
    double energy_kwh_yr = 0;
    double co2_t_yr = 0;
    double capex_usd = 0;
    std::vector<double> energy_cost_by_year;
    std::vector<double> demand_charge_by_year;
    double energy_cost_usd = 0;   // summed over the horizon
    double demand_charge_usd = 0;  // summed over the horizon
    double om_usd_per_year = 0;
    double om_npv_usd = 0;
    double salvage_usd = 0;  // credit at end of horizon, <= 0
    double salvage_npv_usd = 0;
    double tco_npv_usd = 0;
};

struct DieselValuation {
    double fuel_economy_mpg = 0;
    double fuel_gal_yr = 0;
    double co2_t_yr = 0;
    double pm25_g_yr = 0;
    double health_usd_yr = 0;
    double capex_usd = 0;
    std::vector<double> fuel_cost_by_year;
    double fuel_cost_usd = 0;
    double om_usd_per_year = 0;
    double om_npv_usd = 0;
    double salvage_usd = 0;
    double salvage_npv_usd = 0;
    double tco_npv_usd = 0;
};

// Inputs the TCO formulas take from the fleet estimate.
struct FleetInputs {
    std::int64_t buses = 0;
    std::int64_t chargers = 0;
    double annual_vkt_km = 0;
    double annual_energy_kwh = 0;
};

inline void validate(const TcoParams& p) {
    auto nonneg = [](double v, const char* field) {
        if (!(v >= 0) || !std::isfinite(v)) {
            throw Error(ErrorCategory::InvalidParameter, std::string("tco.") + field + " must be >= 0");
        }
    };
    auto rate = [](double v, const char* field) {
        if (!(v > -1) || !std::isfinite(v)) {
            throw Error(ErrorCategory::InvalidParameter, std::string("tco.") + field + " must be > -1");
        }
    };
    nonneg(p.energy_price_usd_per_kwh, "energy_price_usd_per_kwh");
    nonneg(p.demand_charge_usd_per_kw, "demand_charge_usd_per_kw");
    nonneg(p.fuel_price_usd_per_gal, "fuel_price_usd_per_gal");
    nonneg(p.ebus_cost_usd, "ebus_cost_usd");
    nonneg(p.dbus_cost_usd, "dbus_cost_usd");
    nonneg(p.charger_unit_usd, "charger_unit_usd");
    nonneg(p.charger_install_usd, "charger_install_usd");
    nonneg(p.om_electric_usd_per_mile, "om_electric_usd_per_mile");
    nonneg(p.om_diesel_usd_per_mile, "om_diesel_usd_per_mile");
    nonneg(p.om_charger_usd_per_year, "om_charger_usd_per_year");
    nonneg(p.residual_bus, "residual_bus");
    nonneg(p.residual_charger, "residual_charger");
    rate(p.energy_price_growth, "energy_price_growth");
    rate(p.demand_charge_growth, "demand_charge_growth");
    rate(p.fuel_price_growth, "fuel_price_growth");
    if (!(p.discount_rate > 0) || !std::isfinite(p.discount_rate)) {
        throw Error(ErrorCategory::InvalidParameter, "tco.discount_rate must be > 0");
    }
    if (p.horizon_years < 1) throw Error(ErrorCategory::InvalidParameter, "tco.horizon_years must be >= 1");
    if (!(p.km_to_miles > 0)) throw Error(ErrorCategory::InvalidParameter, "tco.km_to_miles must be > 0");
}

// NPV TCO of the electric fleet. O&M is annuitized and salvage discounted;
// the yearly energy and demand-charge costs are summed without discounting.
inline ElectricValuation tco_npv_electric(const FleetInputs& fleet, const TcoParams& p,
                                          const fleet::ChargerSpec& charger, const drive::BusSpec& bus) {
    ElectricValuation v;
    const double buses = static_cast<double>(fleet.buses);
    const double chargers = static_cast<double>(fleet.chargers);
    const double charge_kw = fleet::effective_charge_power_kw(charger, bus);

    v.energy_kwh_yr = fleet.annual_energy_kwh;
    v.capex_usd = p.ebus_cost_usd * buses + (p.charger_install_usd + p.charger_unit_usd) * chargers;
    for (int y = 1; y <= p.horizon_years; ++y) {
        const double energy =
            p.energy_price_usd_per_kwh * std::pow(1.0 + p.energy_price_growth, y) * fleet.annual_energy_kwh /
            charger.efficiency;
        const double demand =
            p.demand_charge_usd_per_kw * chargers * charge_kw * std::pow(1.0 + p.demand_charge_growth, y) * 12.0;
        v.energy_cost_by_year.push_back(energy);
        v.demand_charge_by_year.push_back(demand);
        v.energy_cost_usd += energy;
        v.demand_charge_usd += demand;
    }
    v.om_usd_per_year = p.om_electric_usd_per_mile * buses * p.km_to_miles * fleet.annual_vkt_km +
                        p.om_charger_usd_per_year * chargers;
    v.om_npv_usd = annuity_factor(p.discount_rate, p.horizon_years) * v.om_usd_per_year;
    v.salvage_usd = -(p.residual_bus * p.ebus_cost_usd * buses + p.residual_charger * p.charger_unit_usd * chargers);
    v.salvage_npv_usd = discount_factor(p.discount_rate, p.horizon_years) * v.salvage_usd;
    v.tco_npv_usd = v.capex_usd + v.om_npv_usd + v.energy_cost_usd + v.demand_charge_usd + v.salvage_npv_usd;
    return v;
}

inline DieselValuation tco_npv_diesel(const FleetInputs& fleet, double fe_mpg, const TcoParams& p) {
    if (!(fe_mpg > 0)) throw Error(ErrorCategory::NonPositiveFE, "fuel economy must be positive");
    DieselValuation v;
    const double buses = static_cast<double>(fleet.buses);
    v.fuel_economy_mpg = fe_mpg;
    v.fuel_gal_yr = p.km_to_miles * fleet.annual_vkt_km / fe_mpg;
    v.capex_usd = p.dbus_cost_usd * buses;
    for (int y = 1; y <= p.horizon_years; ++y) {
        const double fuel = p.fuel_price_usd_per_gal * std::pow(1.0 + p.fuel_price_growth, y) * v.fuel_gal_yr;
        v.fuel_cost_by_year.push_back(fuel);
        v.fuel_cost_usd += fuel;
    }
    v.om_usd_per_year = p.om_diesel_usd_per_mile * buses * p.km_to_miles * fleet.annual_vkt_km;
    v.om_npv_usd = annuity_factor(p.discount_rate, p.horizon_years) * v.om_usd_per_year;
    v.salvage_usd = -(p.residual_bus * p.dbus_cost_usd * buses);
    v.salvage_npv_usd = discount_factor(p.discount_rate, p.horizon_years) * v.salvage_usd;
    v.tco_npv_usd = v.capex_usd + v.om_npv_usd + v.fuel_cost_usd + v.salvage_npv_usd;
    return v;
}

struct RouteValuation {
    std::string route_id;
    std::string short_name;
    ElectricValuation electric;
    DieselValuation diesel;
    fleet::FleetEstimate fleet;
};

struct ValuationInputs {
    TcoParams tco;
    EmissionFactors emissions;
    HealthParams health;
    fleet::ChargerSpec charger;
    drive::BusSpec bus;
};

// Both powertrains for one route, given its fleet estimate.
inline RouteValuation valuate_route(const fleet::FleetEstimate& est, const ValuationInputs& in) {
    validate(in.tco);
    RouteValuation rv;
    rv.route_id = est.route_id;
    rv.fleet = est;

    FleetInputs fi{est.buses_total, est.chargers, est.annual_vkt_km, est.annual_energy_kwh};
    rv.electric = tco_npv_electric(fi, in.tco, in.charger, in.bus);
    rv.electric.co2_t_yr = co2_electric_t(est.cluster_daily_energies(), in.emissions);

    const double fe = fuel_economy(est.route_speed_kmh, in.tco.km_to_miles);
    rv.diesel = tco_npv_diesel(fi, fe, in.tco);
    rv.diesel.co2_t_yr = co2_diesel_t(est.annual_vkt_km, fe, in.emissions, in.tco.km_to_miles);
    auto hi = health_impact(est.annual_vkt_km, in.emissions, in.health);
    rv.diesel.pm25_g_yr = hi.pm25_g_yr;
    rv.diesel.health_usd_yr = hi.usd_yr;
    return rv;
}

}  // namespace electrify::valuation
