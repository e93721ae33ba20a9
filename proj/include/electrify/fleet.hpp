#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "electrify/drive.hpp"
#include "electrify/error.hpp"
#include "electrify/geo.hpp"
#include "electrify/gtfs.hpp"
#include "electrify/surrogate.hpp"

namespace electrify::fleet {

struct ChargerSpec {
    double power_kw = 50.0;
    double fastest_charge_h = 5.0;
    double efficiency = 0.95;

    bool operator==(const ChargerSpec&) const = default;
};

// Charging power actually delivered: the lower of the charger rating and what
// the bus accepts.
inline double effective_charge_power_kw(const ChargerSpec& charger, const drive::BusSpec& bus) {
    if (bus.max_charge_power_kw) return std::min(charger.power_kw, *bus.max_charge_power_kw);
    return charger.power_kw;
}

// Ceiling that treats values within rounding noise of an integer as that
// integer, so exact boundaries such as 237.5 / 237.5 do not round up.
inline std::int64_t ceil_count(double x) {
    if (!(x > 0)) return 0;
    const double r = std::round(x);
    if (std::abs(x - r) <= 1e-9 * std::max(1.0, x)) return static_cast<std::int64_t>(r);
    return static_cast<std::int64_t>(std::ceil(x));
}

struct BusCount {
    std::int64_t inbound = 0;
    std::int64_t outbound = 0;
    std::int64_t total = 0;
};

// One observed arrival: when a bus reaches a stop, and the full first-departure
// to last-arrival duration of the trip it is serving.
struct Arrival {
    gtfs::ServiceSeconds time = 0;
    gtfs::ServiceSeconds cycle_length = 0;
};

// Peak buses needed in one direction: for every stop, each arrival after the
// first gives cycle_length / headway; the direction needs the ceiling of the
// largest ratio. Simultaneous arrivals (zero headway) give no ratio. A
// direction with trips but no observable headway needs one bus.
inline std::int64_t buses_for_direction(const std::map<std::string, std::vector<Arrival>>& arrivals_by_stop) {
    bool any_trip = false;
    // Largest ratio kept as an exact fraction num/den.
    std::int64_t best_num = 0;
    std::int64_t best_den = 1;
    for (const auto& [stop, raw] : arrivals_by_stop) {
        if (raw.empty()) continue;
        any_trip = true;
        auto arrivals = raw;
        std::stable_sort(arrivals.begin(), arrivals.end(),
                         [](const Arrival& a, const Arrival& b) { return a.time < b.time; });
        for (std::size_t k = 1; k < arrivals.size(); ++k) {
            const std::int64_t headway = arrivals[k].time - arrivals[k - 1].time;
            if (headway <= 0) continue;
            const std::int64_t cycle = arrivals[k].cycle_length;
            if (cycle * best_den > best_num * headway) {
                best_num = cycle;
                best_den = headway;
            }
        }
    }
    if (!any_trip) return 0;
    const std::int64_t count = (best_num + best_den - 1) / best_den;
    return std::max<std::int64_t>(1, count);
}

// Bus count for a route on one service day, per direction.
inline BusCount buses_required(const gtfs::GtfsFeed& feed, const std::string& route_id, gtfs::Date day) {
    std::map<std::string, std::vector<Arrival>> by_dir[2];
    bool any = false;
    for (const auto& trip : feed.trips) {
        if (trip.route_id != route_id || !feed.runs_on(trip, day)) continue;
        any = true;
        auto filtered = gtfs::filter_skipped_stops(trip);
        const auto cycle = filtered.cycle_length();
        auto& target = by_dir[trip.direction == gtfs::Direction::Inbound ? 1 : 0];
        for (const auto& ev : filtered.stop_events) target[ev.stop_id].push_back(Arrival{ev.arrival, cycle});
    }
    if (!any) {
        throw Error(ErrorCategory::NoTrips,
                    "route '" + route_id + "' has no trips on " + gtfs::format_date(day));
    }
    BusCount out;
    out.outbound = buses_for_direction(by_dir[0]);
    out.inbound = buses_for_direction(by_dir[1]);
    out.total = out.inbound + out.outbound;
    return out;
}

// Average speed of a cluster: mean trip distance over mean cycle length.
// (The distance is averaged rather than summed over trips so the result is a
// speed.)
inline double cluster_speed_kmh(std::span<const double> trip_distances_km, std::span<const double> cycle_lengths_min) {
    if (trip_distances_km.empty() || cycle_lengths_min.empty()) {
        throw Error(ErrorCategory::NoTrips, "cluster has no trips");
    }
    const double mean_d = std::accumulate(trip_distances_km.begin(), trip_distances_km.end(), 0.0) /
                          static_cast<double>(trip_distances_km.size());
    const double mean_c = std::accumulate(cycle_lengths_min.begin(), cycle_lengths_min.end(), 0.0) /
                          static_cast<double>(cycle_lengths_min.size());
    if (!(mean_c > 0)) throw Error(ErrorCategory::ZeroCycleLength, "mean cycle length is not positive");
    return mean_d / mean_c * 60.0;
}

inline double route_speed_kmh(std::span<const double> cluster_speeds_kmh) {
    if (cluster_speeds_kmh.empty()) throw Error(ErrorCategory::NoTrips, "route has no clusters");
    return std::accumulate(cluster_speeds_kmh.begin(), cluster_speeds_kmh.end(), 0.0) /
           static_cast<double>(cluster_speeds_kmh.size());
}

// Annual kilometers from the distances of every trip run on the
// representative day.
inline double annual_vkt_km(std::span<const double> day_trip_distances_km) {
    return std::accumulate(day_trip_distances_km.begin(), day_trip_distances_km.end(), 0.0) * 365.0;
}

inline double path_distance_km(std::span<const geo::StopPairGeo> pairs) {
    double d = 0;
    for (const auto& p : pairs) d += p.distance_km;
    return d;
}

// Trip energy: surrogate efficiency at each stop pair's grade times the pair
// distance, summed over the trip.
inline double trip_energy_kwh(std::span<const geo::StopPairGeo> pairs, const surrogate::SurrogateModel& model,
                              double passengers, double ambient_temp_c) {
    if (!model.fitted()) throw Error(ErrorCategory::ModelMissing, "no fitted surrogate model");
    double e = 0;
    for (const auto& p : pairs) {
        e += surrogate::predict(model, surrogate::ScenarioSample{passengers, ambient_temp_c, p.grade_rad}) *
             p.distance_km;
    }
    return e;
}

// Total daily energy of a cluster: mean trip energy times the number of the
// cluster's trips on the representative day.
inline double daily_cluster_energy_kwh(std::span<const double> day_trip_energies_kwh) {
    if (day_trip_energies_kwh.empty()) return 0.0;
    const double mean = std::accumulate(day_trip_energies_kwh.begin(), day_trip_energies_kwh.end(), 0.0) /
                        static_cast<double>(day_trip_energies_kwh.size());
    return mean * static_cast<double>(day_trip_energies_kwh.size());
}

// Overnight depot chargers needed to replenish the route's daily energy.
inline std::int64_t chargers_required(std::span<const double> cluster_daily_energies_kwh, const ChargerSpec& charger,
                                      const drive::BusSpec& bus) {
    if (!(charger.power_kw > 0) || !(charger.fastest_charge_h > 0) || !(charger.efficiency > 0)) {
        throw Error(ErrorCategory::InvalidParameter, "charger power, time and efficiency must be positive");
    }
    const double total = std::accumulate(cluster_daily_energies_kwh.begin(), cluster_daily_energies_kwh.end(), 0.0);
    const double per_charger = effective_charge_power_kw(charger, bus) * charger.fastest_charge_h * charger.efficiency;
    return ceil_count(total / per_charger);
}

// Route buses attributed to one cluster by its share of the day's trips.
inline std::int64_t apportion_buses(std::int64_t route_buses, std::size_t cluster_trips, std::size_t route_trips) {
    if (route_trips == 0 || cluster_trips == 0) return 0;
    return ceil_count(static_cast<double>(route_buses) * static_cast<double>(cluster_trips) /
                      static_cast<double>(route_trips));
}

// Strict: a cluster using exactly its fleet's battery capacity is infeasible.
inline bool range_feasible(double cluster_daily_energy_kwh, const drive::BusSpec& bus, std::int64_t buses) {
    if (!(bus.battery_kwh > 0)) throw Error(ErrorCategory::InvalidParameter, "battery_kwh must be positive");
    return cluster_daily_energy_kwh < bus.battery_kwh * static_cast<double>(buses);
}

// ---------------------------------------------------------------------------
// Route-level estimate

struct EnrichedCluster {
    gtfs::TripCluster cluster;
    std::vector<geo::StopPairGeo> pairs;
};

struct ClusterEstimate {
    std::string cluster_id;
    gtfs::Direction direction = gtfs::Direction::Outbound;
    std::size_t trips_total = 0;
    std::size_t trips_on_day = 0;
    double distance_km = 0;
    double mean_cycle_min = 0;
    double speed_kmh = 0;
    double trip_energy_kwh = 0;
    double daily_energy_kwh = 0;
    double daily_energy_lowest_temp_kwh = 0;
    std::int64_t buses = 0;
    bool feasible = true;
};

struct FleetEstimate {
    std::string route_id;
    std::string representative_day;
    std::int64_t buses_inbound = 0;
    std::int64_t buses_outbound = 0;
    std::int64_t buses_total = 0;
    std::int64_t chargers = 0;
    double route_speed_kmh = 0;
    double annual_vkt_km = 0;
    double annual_energy_kwh = 0;
    std::vector<ClusterEstimate> clusters;
    bool feasible = true;
    bool needs_fast_charging = false;

    std::vector<double> cluster_daily_energies() const {
        std::vector<double> out;
        for (const auto& c : clusters) out.push_back(c.daily_energy_kwh);
        return out;
    }
};

struct OperatingConditions {
    double passengers = 20.0;
    double yearly_avg_temp_c = 11.0;
    double yearly_lowest_temp_c = -5.0;
};

inline FleetEstimate estimate_fleet(const gtfs::GtfsFeed& feed, const std::string& route_id,
                                    std::span<const EnrichedCluster> clusters, const surrogate::SurrogateModel& model,
                                    const OperatingConditions& ops, const drive::BusSpec& bus,
                                    const ChargerSpec& charger, gtfs::Date day) {
    FleetEstimate est;
    est.route_id = route_id;
    est.representative_day = gtfs::format_date(day);

    auto buses = buses_required(feed, route_id, day);
    est.buses_inbound = buses.inbound;
    est.buses_outbound = buses.outbound;
    est.buses_total = buses.total;

    std::size_t route_day_trips = 0;
    std::vector<double> day_distances;
    std::vector<double> speeds;
    for (const auto& ec : clusters) {
        ClusterEstimate ce;
        ce.cluster_id = ec.cluster.cluster_id;
        ce.direction = ec.cluster.direction;
        ce.trips_total = ec.cluster.trips.size();
        ce.distance_km = path_distance_km(ec.pairs);

        std::vector<double> distances;
        std::vector<double> cycles_min;
        for (const auto& trip_id : ec.cluster.trips) {
            const auto* trip = feed.find_trip(trip_id);
            if (!trip) throw Error(ErrorCategory::DanglingReference, "cluster references unknown trip " + trip_id);
            distances.push_back(ce.distance_km);
            cycles_min.push_back(static_cast<double>(trip->cycle_length()) / 60.0);
            if (feed.runs_on(*trip, day)) ++ce.trips_on_day;
        }
        ce.mean_cycle_min = std::accumulate(cycles_min.begin(), cycles_min.end(), 0.0) /
                            static_cast<double>(cycles_min.size());
        ce.speed_kmh = cluster_speed_kmh(distances, cycles_min);
        speeds.push_back(ce.speed_kmh);

        ce.trip_energy_kwh = trip_energy_kwh(ec.pairs, model, ops.passengers, ops.yearly_avg_temp_c);
        const double cold_trip = trip_energy_kwh(ec.pairs, model, ops.passengers, ops.yearly_lowest_temp_c);
        ce.daily_energy_kwh = daily_cluster_energy_kwh(std::vector<double>(ce.trips_on_day, ce.trip_energy_kwh));
        ce.daily_energy_lowest_temp_kwh = daily_cluster_energy_kwh(std::vector<double>(ce.trips_on_day, cold_trip));

        for (std::size_t i = 0; i < ce.trips_on_day; ++i) day_distances.push_back(ce.distance_km);
        route_day_trips += ce.trips_on_day;
        est.clusters.push_back(ce);
    }

    for (auto& ce : est.clusters) {
        if (ce.trips_on_day == 0) continue;  // not operated on the representative day
        ce.buses = apportion_buses(est.buses_total, ce.trips_on_day, route_day_trips);
        ce.feasible = range_feasible(ce.daily_energy_lowest_temp_kwh, bus, ce.buses);
        est.feasible = est.feasible && ce.feasible;
    }
    est.needs_fast_charging = !est.feasible;
    est.route_speed_kmh = route_speed_kmh(speeds);
    est.annual_vkt_km = annual_vkt_km(day_distances);
    const auto energies = est.cluster_daily_energies();
    est.annual_energy_kwh = std::accumulate(energies.begin(), energies.end(), 0.0) * 365.0;
    est.chargers = chargers_required(energies, charger, bus);
    return est;
}

}  // namespace electrify::fleet
