#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "electrify/csv.hpp"
#include "electrify/error.hpp"

namespace electrify::drive {

inline constexpr double kJoulesPerKwh = 3.6e6;

// Physical parameters of an electric bus. Defaults describe a 40-foot bus.
struct BusSpec {
    double mass_kg = 14050.0;
    double frontal_area_m2 = 8.78;
    double drag_coeff = 0.65;
    double rolling_coeff = 0.00697;
    double motor_eff = 0.85;
    double battery_eff = 0.95;
    double motor_power_w = 300000.0;
    double battery_kwh = 352.0;
    double aux_power_w = 2000.0;
    double hvac_cop = 2.0;
    double passenger_mass_kg = 70.0;
    // Upper bound on the power the bus accepts from a charger; unset means the
    // charger's rating is the only limit.
    std::optional<double> max_charge_power_kw;

    bool operator==(const BusSpec&) const = default;
};

struct EnvConditions {
    double passengers = 0;
    double ambient_temp_c = 20.0;
    double grade_rad = 0.0;
    double air_density_kgpm3 = 1.2;
    double gravity_mps2 = 9.81;
};

// Piecewise-linear heating/cooling demand around a setpoint.
struct HvacModel {
    double setpoint_c = 20.0;
    double heat_w_per_deg = 400.0;
    double cool_w_per_deg = 300.0;

    bool operator==(const HvacModel&) const = default;
};

struct StepEnergy {
    double tractive_w = 0;
    double nontractive_w = 0;
    double delta_kwh = 0;
};

struct DriveCycle {
    double dt_s = 0.1;
    std::vector<double> speeds_mps;
};

inline double total_mass_kg(const BusSpec& spec, double passengers) {
    return spec.mass_kg + spec.passenger_mass_kg * passengers;
}

// Power at the wheels to hold speed v while accelerating at a on grade env.grade_rad.
// Negative when braking or descending.
inline double tractive_power(double v_mps, double a_mps2, const EnvConditions& env, const BusSpec& spec,
                             double total_mass) {
    const double g = env.gravity_mps2;
    const double f_accel = total_mass * a_mps2;
    const double f_grade = total_mass * g * std::sin(env.grade_rad);
    const double f_roll = total_mass * g * spec.rolling_coeff * std::cos(env.grade_rad);
    const double f_drag = 0.5 * env.air_density_kgpm3 * spec.frontal_area_m2 * spec.drag_coeff * v_mps * v_mps;
    return v_mps * (f_accel + f_grade + f_roll + f_drag);
}

// Electrical draw of the HVAC unit.
inline double hvac_power(const HvacModel& model, double ambient_temp_c, double cop) {
    const double heat = model.heat_w_per_deg * std::max(0.0, model.setpoint_c - ambient_temp_c);
    const double cool = model.cool_w_per_deg * std::max(0.0, ambient_temp_c - model.setpoint_c);
    return (heat + cool) / cop;
}

inline double nontractive_power(const HvacModel& hvac, const EnvConditions& env, const BusSpec& spec) {
    return hvac_power(hvac, env.ambient_temp_c, spec.hvac_cop) + spec.aux_power_w;
}

// Battery energy for one timestep from speed v_i to v_j. Both motoring and
// regenerative power are divided by the drivetrain efficiencies; regeneration
// is floored at the motor power rating.
inline StepEnergy step_energy(double v_i, double v_j, double dt_s, const EnvConditions& env, const BusSpec& spec,
                              const HvacModel& hvac) {
    StepEnergy out;
    const double a = (v_j - v_i) / dt_s;
    out.tractive_w = tractive_power(v_i, a, env, spec, total_mass_kg(spec, env.passengers));
    out.nontractive_w = nontractive_power(hvac, env, spec);
    const double demand =
        out.tractive_w / (spec.battery_eff * spec.motor_eff) + out.nontractive_w / spec.battery_eff;
    out.delta_kwh = dt_s * std::max(-spec.motor_power_w, demand) / kJoulesPerKwh;
    return out;
}

// kWh per km over the whole cycle.
inline double segment_energy_efficiency(const DriveCycle& cycle, const EnvConditions& env, const BusSpec& spec,
                                        const HvacModel& hvac) {
    const auto& v = cycle.speeds_mps;
    double energy_kwh = 0;
    double distance_m = 0;
    // Everything but the step itself is constant across the cycle.
    const double mass = total_mass_kg(spec, env.passengers);
    const double nontrac = nontractive_power(hvac, env, spec) / spec.battery_eff;
    const double drivetrain = spec.battery_eff * spec.motor_eff;
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
        const double a = (v[i + 1] - v[i]) / cycle.dt_s;
        const double demand = tractive_power(v[i], a, env, spec, mass) / drivetrain + nontrac;
        energy_kwh += cycle.dt_s * std::max(-spec.motor_power_w, demand) / kJoulesPerKwh;
        distance_m += v[i] * cycle.dt_s;
    }
    if (!(distance_m > 0)) {
        throw Error(ErrorCategory::ZeroDistanceCycle, "drive cycle covers no distance");
    }
    return 1000.0 * energy_kwh / distance_m;
}

inline DriveCycle make_cycle(double dt_s, std::vector<double> speeds) {
    if (!(dt_s > 0)) throw Error(ErrorCategory::InvalidCycle, "timestep must be positive");
    if (speeds.size() < 2) throw Error(ErrorCategory::InvalidCycle, "a drive cycle needs at least two samples");
    for (std::size_t i = 0; i < speeds.size(); ++i) {
        if (!(speeds[i] >= 0)) {
            throw Error(ErrorCategory::NegativeSpeed, "negative speed at sample " + std::to_string(i));
        }
    }
    return DriveCycle{dt_s, std::move(speeds)};
}

// Reads a `time_s,speed_mps` CSV. Timestamps must be uniformly spaced to
// within 1e-6 s.
inline DriveCycle load_drive_cycle(const std::filesystem::path& path) {
    auto t = csv::Table::read(path);
    auto c_t = t.require_column("time_s");
    auto c_v = t.require_column("speed_mps");
    std::vector<double> times;
    std::vector<double> speeds;
    for (const auto& row : t.rows()) {
        auto ts = csv::parse_double(t.get(row, c_t));
        auto v = csv::parse_double(t.get(row, c_v));
        if (!ts || !v) t.fail(row, "time_s and speed_mps must be numeric");
        if (*v < 0) throw Error(ErrorCategory::NegativeSpeed, t.where(row) + ": negative speed");
        times.push_back(*ts);
        speeds.push_back(*v);
    }
    if (times.size() < 2) {
        throw Error(ErrorCategory::InvalidCycle, path.string() + ": a drive cycle needs at least two samples");
    }
    const double dt = times[1] - times[0];
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (std::abs((times[i] - times[i - 1]) - dt) > 1e-6) {
            throw Error(ErrorCategory::NonUniformTimestep,
                        t.where(t.rows()[i]) + ": timestep differs from " + csv::format_double(dt) + " s");
        }
    }
    return make_cycle(dt, std::move(speeds));
}

}  // namespace electrify::drive
