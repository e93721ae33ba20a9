#include "electrify/drive.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "test_util.hpp"

using namespace electrify;
using namespace electrify::drive;
using testutil::TempDir;

namespace {

EnvConditions flat_env(double temp = 20.0) {
    EnvConditions env;
    env.ambient_temp_c = temp;
    return env;
}

DriveCycle constant(double v, double seconds, double dt = 0.1) {
    return make_cycle(dt, std::vector<double>(static_cast<std::size_t>(std::lround(seconds / dt)) + 1, v));
}

}  // namespace

TEST(TractivePower, FlatCruiseEmptyBus) {
    BusSpec bus;
    EXPECT_NEAR(tractive_power(10, 0, flat_env(), bus, bus.mass_kg), 13031.0, 1.0);
    EXPECT_EQ(tractive_power(0, 0.5, flat_env(), bus, bus.mass_kg), 0.0);
}

TEST(TractivePower, Downhill) {
    BusSpec bus;
    auto env = flat_env();
    env.grade_rad = std::asin(-0.01);
    // -1378.305 N grade, 960.6306 N rolling (cos = sqrt(0.9999)), 342.42 N drag.
    EXPECT_NEAR(tractive_power(10, 0, env, bus, bus.mass_kg), -752.545, 0.01);
}

TEST(Hvac, PiecewiseLinear) {
    HvacModel m;
    EXPECT_EQ(hvac_power(m, 20.0, 2.0), 0.0);
    EXPECT_DOUBLE_EQ(hvac_power(m, -5.0, 2.0), 5000.0);
    EXPECT_DOUBLE_EQ(hvac_power(m, 30.0, 2.0), 1500.0);
    EXPECT_EQ(hvac_power(HvacModel{20, 0, 0}, -30, 2.0), 0.0);
    HvacModel sym{20, 350, 350};
    for (double x : {0.5, 3.0, 17.0}) EXPECT_DOUBLE_EQ(hvac_power(sym, 20 + x, 2), hvac_power(sym, 20 - x, 2));
}

TEST(StepEnergy, IdleAndClamp) {
    BusSpec bus;
    HvacModel hvac;
    EXPECT_NEAR(step_energy(0, 0, 0.1, flat_env(), bus, hvac).delta_kwh, 5.8479e-5, 1e-9);
    auto brake = step_energy(20, 0, 0.1, flat_env(), bus, hvac);
    EXPECT_LT(brake.tractive_w / (bus.battery_eff * bus.motor_eff), -10 * bus.motor_power_w);
    EXPECT_EQ(brake.delta_kwh, -0.1 * 300000.0 / 3.6e6);
    bus.aux_power_w = 0;
    EXPECT_EQ(step_energy(0, 0, 0.1, flat_env(), bus, HvacModel{20, 0, 0}).delta_kwh, 0.0);
}

TEST(StepEnergy, ClampHoldsOnEveryStep) {
    BusSpec bus;
    HvacModel hvac;
    auto cycle = load_drive_cycle(testutil::data_dir() / "cycles" / "synthetic_stop_and_go.csv");
    auto env = flat_env(-5);
    env.grade_rad = -0.08;
    const double floor = -cycle.dt_s * bus.motor_power_w / 3.6e6;
    for (std::size_t i = 0; i + 1 < cycle.speeds_mps.size(); ++i) {
        auto s = step_energy(cycle.speeds_mps[i], cycle.speeds_mps[i + 1], cycle.dt_s, env, bus, hvac);
        EXPECT_GE(s.delta_kwh, floor);
    }
}

TEST(Efficiency, ConstantCruise) {
    BusSpec bus;
    auto ee = segment_energy_efficiency(constant(10, 100), flat_env(), bus, HvacModel{});
    const double tractive = 10 * (0.5 * 1.2 * 8.78 * 0.65 * 100 + 14050 * 9.81 * 0.00697);
    const double expected = 100 * (tractive / (0.95 * 0.85) + 2000 / 0.95) / 3.6e6;
    EXPECT_NEAR(ee, expected, 1e-9);
    EXPECT_NEAR(ee, 0.5067, 1e-4);
}

TEST(Efficiency, MatchesSumOfSteps) {
    BusSpec bus;
    HvacModel hvac;
    auto cycle = load_drive_cycle(testutil::data_dir() / "cycles" / "synthetic_stop_and_go.csv");
    auto env = flat_env(3);
    env.passengers = 17;
    env.grade_rad = 0.02;
    double e = 0, d = 0;
    for (std::size_t i = 0; i + 1 < cycle.speeds_mps.size(); ++i) {
        e += step_energy(cycle.speeds_mps[i], cycle.speeds_mps[i + 1], cycle.dt_s, env, bus, hvac).delta_kwh;
        d += cycle.speeds_mps[i] * cycle.dt_s;
    }
    EXPECT_NEAR(segment_energy_efficiency(cycle, env, bus, hvac), 1000 * e / d, 1e-12);
}

TEST(Efficiency, ZeroDistance) {
    try {
        segment_energy_efficiency(constant(0, 10), flat_env(), BusSpec{}, HvacModel{});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.category(), ErrorCategory::ZeroDistanceCycle);
    }
}

TEST(Efficiency, MonotoneInLoadAndGrade) {
    BusSpec bus;
    HvacModel hvac;
    auto cycle = load_drive_cycle(testutil::data_dir() / "cycles" / "synthetic_stop_and_go.csv");
    double prev = -INFINITY;
    for (int p = 0; p <= 40; p += 5) {
        auto env = flat_env(10);
        env.passengers = p;
        double ee = segment_energy_efficiency(cycle, env, bus, hvac);
        EXPECT_GE(ee, prev);
        prev = ee;
    }
    auto cruise = constant(12, 60);
    prev = -INFINITY;
    for (double g = 0; g <= 0.1 + 1e-12; g += 0.01) {
        auto env = flat_env(10);
        env.grade_rad = g;
        double ee = segment_energy_efficiency(cruise, env, bus, hvac);
        EXPECT_GE(ee, prev);
        prev = ee;
    }
}

// Flat, Milan-like terrain across the monthly mean temperatures.
TEST(Efficiency, SyntheticCycleInPlausibleBand) {
    BusSpec bus;
    HvacModel hvac;
    auto cycle = load_drive_cycle(testutil::data_dir() / "cycles" / "synthetic_stop_and_go.csv");
    for (double t : {2.5, 4.7, 9.3, 13.3, 17.7, 21.9, 24.4}) {
        for (double p : {0.0, 40.0}) {
            for (double g : {-0.015, 0.0, 0.015}) {
                auto env = flat_env(t);
                env.passengers = p;
                env.grade_rad = g;
                double ee = segment_energy_efficiency(cycle, env, bus, hvac);
                EXPECT_GE(ee, -0.349);
                EXPECT_LE(ee, 2.185);
            }
        }
    }
}

TEST(DriveCycle, FixtureShape) {
    auto cycle = load_drive_cycle(testutil::data_dir() / "cycles" / "synthetic_stop_and_go.csv");
    EXPECT_NEAR(cycle.dt_s, 0.1, 1e-12);
    EXPECT_EQ(cycle.speeds_mps.size(), 4552u);
    double vmax = 0;
    for (double v : cycle.speeds_mps) vmax = std::max(vmax, v);
    EXPECT_DOUBLE_EQ(vmax, 12.0);
    for (std::size_t i = 0; i + 1 < cycle.speeds_mps.size(); ++i) {
        double a = (cycle.speeds_mps[i + 1] - cycle.speeds_mps[i]) / cycle.dt_s;
        EXPECT_NEAR(cycle.speeds_mps[i] + a * cycle.dt_s, cycle.speeds_mps[i + 1], 1e-12);
    }
}

TEST(DriveCycle, LoaderErrors) {
    TempDir dir;
    auto category = [&](const std::string& text) {
        testutil::write_file(dir / "c.csv", text);
        try {
            load_drive_cycle(dir / "c.csv");
        } catch (const Error& e) {
            return e.category();
        }
        return ErrorCategory::InvalidInput;
    };
    EXPECT_EQ(category("time_s,speed_mps\n0,1\n0.1,1\n0.3,1\n0.4,1\n"), ErrorCategory::NonUniformTimestep);
    EXPECT_EQ(category("time_s,speed_mps\n0,1\n"), ErrorCategory::InvalidCycle);
    EXPECT_EQ(category("time_s,speed_mps\n0,1\n0.1,-1\n"), ErrorCategory::NegativeSpeed);
    EXPECT_EQ(category("time_s,speed_mps\n0,x\n0.1,1\n"), ErrorCategory::MalformedRow);
    EXPECT_THROW(make_cycle(0, {1, 2}), Error);
}
