#include "electrify/valuation.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace electrify;
using namespace electrify::valuation;

namespace {

TcoParams zero_prices() {
    TcoParams p;
    p.energy_price_usd_per_kwh = 0;
    p.demand_charge_usd_per_kw = 0;
    p.fuel_price_usd_per_gal = 0;
    p.ebus_cost_usd = 0;
    p.dbus_cost_usd = 0;
    p.charger_unit_usd = 0;
    p.charger_install_usd = 0;
    p.om_electric_usd_per_mile = 0;
    p.om_diesel_usd_per_mile = 0;
    p.om_charger_usd_per_year = 0;
    return p;
}

const FleetInputs kFleet{5, 2, 250000, 410000};

}  // namespace

TEST(FuelEconomy, Examples) {
    EXPECT_NEAR(fuel_economy(20.0 / kKmToMiles), 3.9786, 1e-10);
    EXPECT_NEAR(fuel_economy(10.0 / kKmToMiles), 2.7956, 1e-10);
    EXPECT_NEAR(fuel_economy(1e-9), 0.9726, 1e-8);
    try {
        fuel_economy(0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.category(), ErrorCategory::NonPositiveSpeed);
    }
    try {
        fuel_economy(200);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.category(), ErrorCategory::NonPositiveFE);
    }
}

TEST(Co2, Diesel) {
    EmissionFactors ef;
    EXPECT_NEAR(co2_diesel_t(100000, 3.9786, ef), 190.46, 0.01);
    EXPECT_EQ(co2_diesel_t(0, 3.9786, ef), 0.0);
    EmissionFactors upstream_only = ef;
    upstream_only.diesel_t2w_kg_per_gal = 0;
    EXPECT_NEAR(co2_diesel_t(1000, 3.9786, upstream_only), 0.31, 1e-12);
    EXPECT_THROW(co2_diesel_t(1, 0, ef), Error);
}

TEST(Co2, Electric) {
    EmissionFactors ef;
    EXPECT_NEAR(co2_electric_t(std::vector<double>{500}, ef), 43.234, 1e-3);
    EXPECT_NEAR(co2_electric_t(std::vector<double>{200, 300}, ef), 43.234, 1e-3);
    ef.electric_w2t_kg_per_kwh = 0.483;
    EXPECT_NEAR(co2_electric_t(std::vector<double>{500}, ef), 88.147, 1e-3);
    ef.electric_w2t_kg_per_kwh = 0;
    EXPECT_EQ(co2_electric_t(std::vector<double>{500}, ef), 0.0);
}

TEST(Health, HundredThousandKm) {
    auto h = health_impact(100000, EmissionFactors{}, HealthParams{});
    EXPECT_NEAR(h.pm25_g_yr, 58300, 1e-9);
    EXPECT_NEAR(h.intake_kg_yr, 1.50414e-3, 1e-9);
    EXPECT_NEAR(h.usd_yr, 2.4519e6, 2.4519e6 * 1e-3);
    auto zero = health_impact(0, EmissionFactors{}, HealthParams{});
    EXPECT_EQ(zero.pm25_g_yr, 0.0);
    EXPECT_EQ(zero.usd_yr, 0.0);
}

TEST(Health, LinearInVkt) {
    EmissionFactors ef;
    HealthParams hp;
    for (double k : {0.5, 2.0, 7.0}) {
        EXPECT_NEAR(health_impact(k * 12345, ef, hp).usd_yr, k * health_impact(12345, ef, hp).usd_yr, 1e-6);
        EXPECT_NEAR(co2_diesel_t(k * 12345, 3.1, ef), k * co2_diesel_t(12345, 3.1, ef), 1e-9);
    }
}

TEST(Annuity, ClosedForm) {
    EXPECT_NEAR(annuity_factor(0.035, 12), 9.66335, 1e-4);
    EXPECT_NEAR(annuity_factor(1e-9, 12), 12.0, 1e-6);
    EXPECT_EQ(annuity_factor(0.0, 12), 12.0);
    EXPECT_NEAR(1.0 / discount_factor(0.035, 12), 1.511069, 1e-6);
}

TEST(Tco, ElectricCapexFixture) {
    auto p = zero_prices();
    p.ebus_cost_usd = 750000;
    p.charger_unit_usd = 27549;
    p.charger_install_usd = 17692;
    auto v = tco_npv_electric(FleetInputs{1, 1, 0, 0}, p, fleet::ChargerSpec{}, drive::BusSpec{});
    EXPECT_NEAR(v.capex_usd, 795241, 1e-6);
    EXPECT_NEAR(v.salvage_npv_usd, -77185, 1.0);
    EXPECT_NEAR(v.tco_npv_usd, 718056, 1.0);
}

TEST(Tco, DieselFixture) {
    auto p = zero_prices();
    p.dbus_cost_usd = 485000;
    auto v = tco_npv_diesel(FleetInputs{1, 0, 0, 0}, 3.0, p);
    EXPECT_NEAR(v.tco_npv_usd, 436855, 1.0);
    EXPECT_LE(v.salvage_usd, 0);
}

TEST(Tco, ZeroPricesGiveZero) {
    auto p = zero_prices();
    EXPECT_EQ(tco_npv_electric(kFleet, p, fleet::ChargerSpec{}, drive::BusSpec{}).tco_npv_usd, 0.0);
    EXPECT_EQ(tco_npv_diesel(kFleet, 3.0, p).tco_npv_usd, 0.0);
}

TEST(Tco, FlatFuelGrowthSumsEqualYears) {
    TcoParams p;
    p.fuel_price_growth = 0;
    auto v = tco_npv_diesel(kFleet, 3.2, p);
    ASSERT_EQ(v.fuel_cost_by_year.size(), 12u);
    EXPECT_NEAR(v.fuel_cost_usd, 12 * v.fuel_cost_by_year[0], 1e-6);
}

TEST(Tco, ComponentsAddUp) {
    TcoParams p;
    auto e = tco_npv_electric(kFleet, p, fleet::ChargerSpec{}, drive::BusSpec{});
    EXPECT_NEAR(e.tco_npv_usd, e.capex_usd + e.om_npv_usd + e.energy_cost_usd + e.demand_charge_usd + e.salvage_npv_usd,
                1e-6);
    EXPECT_NEAR(e.energy_cost_by_year[0], 0.098 * (1 - 0.001) * 410000 / 0.95, 1e-9);
    EXPECT_NEAR(e.demand_charge_by_year[0], 8.0 * 2 * 50 * 12, 1e-9);
    EXPECT_NEAR(e.om_usd_per_year, 0.64 * 5 * kKmToMiles * 250000 + 500 * 2, 1e-6);
    auto d = tco_npv_diesel(kFleet, 3.2, p);
    EXPECT_NEAR(d.tco_npv_usd, d.capex_usd + d.om_npv_usd + d.fuel_cost_usd + d.salvage_npv_usd, 1e-6);
    EXPECT_NEAR(d.fuel_gal_yr, kKmToMiles * 250000 / 3.2, 1e-9);
}

TEST(Tco, Monotone) {
    TcoParams base;
    const auto e0 = tco_npv_electric(kFleet, base, fleet::ChargerSpec{}, drive::BusSpec{}).tco_npv_usd;
    const auto d0 = tco_npv_diesel(kFleet, 3.2, base).tco_npv_usd;
    for (double TcoParams::*field : {&TcoParams::ebus_cost_usd, &TcoParams::energy_price_usd_per_kwh,
                                     &TcoParams::demand_charge_usd_per_kw}) {
        auto p = base;
        p.*field *= 1.3;
        EXPECT_GE(tco_npv_electric(kFleet, p, fleet::ChargerSpec{}, drive::BusSpec{}).tco_npv_usd, e0);
    }
    for (double TcoParams::*field : {&TcoParams::fuel_price_usd_per_gal, &TcoParams::dbus_cost_usd}) {
        auto p = base;
        p.*field *= 1.3;
        EXPECT_GE(tco_npv_diesel(kFleet, 3.2, p).tco_npv_usd, d0);
    }
}

TEST(Tco, HomogeneousInMoney) {
    TcoParams base;
    auto scaled = base;
    const double k = 2.75;
    for (double TcoParams::*field :
         {&TcoParams::energy_price_usd_per_kwh, &TcoParams::demand_charge_usd_per_kw, &TcoParams::fuel_price_usd_per_gal,
          &TcoParams::ebus_cost_usd, &TcoParams::dbus_cost_usd, &TcoParams::charger_unit_usd,
          &TcoParams::charger_install_usd, &TcoParams::om_electric_usd_per_mile, &TcoParams::om_diesel_usd_per_mile,
          &TcoParams::om_charger_usd_per_year}) {
        scaled.*field *= k;
    }
    const fleet::ChargerSpec c;
    const drive::BusSpec b;
    EXPECT_NEAR(tco_npv_electric(kFleet, scaled, c, b).tco_npv_usd, k * tco_npv_electric(kFleet, base, c, b).tco_npv_usd,
                1e-6);
    EXPECT_NEAR(tco_npv_diesel(kFleet, 3.2, scaled).tco_npv_usd, k * tco_npv_diesel(kFleet, 3.2, base).tco_npv_usd,
                1e-6);
}

TEST(Tco, PowertrainSymmetry) {
    auto p = zero_prices();
    p.ebus_cost_usd = p.dbus_cost_usd = 600000;
    p.om_electric_usd_per_mile = p.om_diesel_usd_per_mile = 0.75;
    FleetInputs f{3, 0, 180000, 0};
    EXPECT_NEAR(tco_npv_electric(f, p, fleet::ChargerSpec{}, drive::BusSpec{}).tco_npv_usd,
                tco_npv_diesel(f, 3.0, p).tco_npv_usd, 1e-6);
}

TEST(Tco, ParameterValidation) {
    TcoParams p;
    p.discount_rate = 0;
    try {
        validate(p);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.category(), ErrorCategory::InvalidParameter);
        EXPECT_NE(e.detail().find("tco.discount_rate"), std::string::npos);
    }
    p = TcoParams{};
    p.fuel_price_growth = -1;
    EXPECT_THROW(validate(p), Error);
    p = TcoParams{};
    p.ebus_cost_usd = -5;
    EXPECT_THROW(validate(p), Error);
}

TEST(ValuateRoute, ElectricHasNoTailpipe) {
    fleet::FleetEstimate est;
    est.route_id = "R";
    est.buses_total = 4;
    est.chargers = 2;
    est.route_speed_kmh = 18;
    est.annual_vkt_km = 200000;
    fleet::ClusterEstimate c;
    c.daily_energy_kwh = 400;
    est.clusters.push_back(c);
    est.annual_energy_kwh = 400 * 365.0;
    auto rv = valuate_route(est, ValuationInputs{});
    EXPECT_GT(rv.diesel.pm25_g_yr, 0);
    EXPECT_NEAR(rv.electric.co2_t_yr, 400 * 0.2369 * 365 / 1000, 1e-9);
    EXPECT_NEAR(rv.diesel.fuel_economy_mpg, fuel_economy(18), 0);
    EXPECT_LE(rv.electric.salvage_usd, 0);
    EXPECT_TRUE(std::isfinite(rv.electric.tco_npv_usd));
}
