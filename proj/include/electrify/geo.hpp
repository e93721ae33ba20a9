#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "electrify/csv.hpp"
#include "electrify/error.hpp"
#include "electrify/gtfs.hpp"

namespace electrify::geo {

using StopPair = std::pair<std::string, std::string>;

struct StopPairGeo {
    std::string from_stop;
    std::string to_stop;
    double distance_km = 0;
    double elevation_change_m = 0;
    double grade_rad = 0;

    bool operator==(const StopPairGeo&) const = default;
};

using ElevationTable = std::map<std::string, double>;
// Directed: (A, B) and (B, A) are separate entries.
using DistanceTable = std::map<StopPair, double>;

// Road grade angle from an elevation change (m) over a path length (km).
inline double compute_grade(double delta_e_m, double distance_km) {
    if (!(distance_km > 0)) {
        throw Error(ErrorCategory::DegenerateSegment,
                    "segment distance must be positive, got " + csv::format_double(distance_km) + " km");
    }
    double ratio = delta_e_m / (1000.0 * distance_km);
    if (!(std::abs(ratio) <= 1.0)) {
        throw Error(ErrorCategory::GradeOutOfRange, "elevation change " + csv::format_double(delta_e_m) +
                                                        " m exceeds segment length " +
                                                        csv::format_double(distance_km) + " km");
    }
    return std::asin(ratio);
}

inline std::vector<StopPair> consecutive_pairs(const std::vector<std::string>& stop_sequence) {
    std::vector<StopPair> pairs;
    for (std::size_t i = 1; i < stop_sequence.size(); ++i) pairs.emplace_back(stop_sequence[i - 1], stop_sequence[i]);
    return pairs;
}

inline std::vector<StopPairGeo> enrich_cluster(const gtfs::TripCluster& cluster, const DistanceTable& distances,
                                               const ElevationTable& elevations) {
    std::vector<StopPairGeo> out;
    for (const auto& [from, to] : consecutive_pairs(cluster.stop_sequence)) {
        auto d = distances.find({from, to});
        if (d == distances.end()) {
            throw Error(ErrorCategory::MissingGeoData, "no distance for stop pair (" + from + ", " + to + ")");
        }
        auto ef = elevations.find(from);
        auto et = elevations.find(to);
        if (ef == elevations.end() || et == elevations.end()) {
            throw Error(ErrorCategory::MissingGeoData, "no elevation for stop pair (" + from + ", " + to + ")");
        }
        double de = et->second - ef->second;
        out.push_back(StopPairGeo{from, to, d->second, de, compute_grade(de, d->second)});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Providers

class GeoProvider {
public:
    virtual ~GeoProvider() = default;
    // Elevation of a stop in meters. Returns nullopt when the provider cannot
    // resolve the point; throws ProviderUnavailable when it cannot answer at all.
    virtual std::optional<double> elevation_m(const gtfs::Stop& stop) = 0;
    // Path distance in km along the road network from one stop to the next.
    virtual std::optional<double> distance_km(const gtfs::Stop& from, const gtfs::Stop& to) = 0;
};

inline constexpr double kEarthRadiusKm = 6371.0;

inline double haversine_km(double lat1, double lon1, double lat2, double lon2) {
    constexpr double deg = std::numbers::pi / 180.0;
    double dlat = (lat2 - lat1) * deg;
    double dlon = (lon2 - lon1) * deg;
    double a = std::sin(dlat / 2) * std::sin(dlat / 2) +
               std::cos(lat1 * deg) * std::cos(lat2 * deg) * std::sin(dlon / 2) * std::sin(dlon / 2);
    return 2 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(a)));
}

// Deterministic provider for offline runs: great-circle distances and a flat
// terrain at a fixed elevation unless a stop is listed in `overrides`.
class OfflineProvider : public GeoProvider {
public:
    explicit OfflineProvider(double base_elevation_m = 0.0, ElevationTable overrides = {})
        : base_elevation_m_(base_elevation_m), overrides_(std::move(overrides)) {}

    std::optional<double> elevation_m(const gtfs::Stop& stop) override {
        ++calls_;
        auto it = overrides_.find(stop.stop_id);
        return it == overrides_.end() ? base_elevation_m_ : it->second;
    }

    std::optional<double> distance_km(const gtfs::Stop& from, const gtfs::Stop& to) override {
        ++calls_;
        double d = haversine_km(from.lat, from.lon, to.lat, to.lon);
        if (!(d > 0)) return std::nullopt;
        return d;
    }

    std::size_t calls() const { return calls_; }

private:
    double base_elevation_m_;
    ElevationTable overrides_;
    std::size_t calls_ = 0;
};

// Replays nothing: every query is unresolved. Used when the caches alone must
// cover the feed, so gaps surface as PartialCoverage instead of new lookups.
class CacheOnlyProvider : public GeoProvider {
public:
    std::optional<double> elevation_m(const gtfs::Stop&) override { return std::nullopt; }
    std::optional<double> distance_km(const gtfs::Stop&, const gtfs::Stop&) override { return std::nullopt; }
};

// ---------------------------------------------------------------------------
// Cache files

inline ElevationTable read_elevations(const std::filesystem::path& path) {
    auto t = csv::Table::read(path);
    auto c_id = t.require_column("stop_id");
    auto c_e = t.require_column("elevation_m");
    ElevationTable out;
    for (const auto& row : t.rows()) {
        auto id = csv::Table::trim(t.get(row, c_id));
        auto e = csv::parse_double(t.get(row, c_e));
        if (id.empty() || !e || !std::isfinite(*e)) t.fail(row, "invalid elevation row");
        out[id] = *e;
    }
    return out;
}

inline DistanceTable read_distances(const std::filesystem::path& path) {
    auto t = csv::Table::read(path);
    auto c_from = t.require_column("from_stop");
    auto c_to = t.require_column("to_stop");
    auto c_d = t.require_column("distance_km");
    DistanceTable out;
    for (const auto& row : t.rows()) {
        auto from = csv::Table::trim(t.get(row, c_from));
        auto to = csv::Table::trim(t.get(row, c_to));
        auto d = csv::parse_double(t.get(row, c_d));
        if (from.empty() || to.empty() || !d) t.fail(row, "invalid distance row");
        if (!(*d > 0)) t.fail(row, "distance_km must be positive");
        out[{from, to}] = *d;
    }
    return out;
}

inline void write_elevations(const std::filesystem::path& path, const ElevationTable& table) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCategory::WriteFailure, "cannot write " + path.string());
    out << "stop_id,elevation_m\n";
    for (const auto& [id, e] : table) out << csv::escape(id) << ',' << csv::format_double(e) << '\n';
}

inline void write_distances(const std::filesystem::path& path, const DistanceTable& table) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCategory::WriteFailure, "cannot write " + path.string());
    out << "from_stop,to_stop,distance_km\n";
    for (const auto& [pair, d] : table) {
        out << csv::escape(pair.first) << ',' << csv::escape(pair.second) << ',' << csv::format_double(d) << '\n';
    }
}

struct CachePaths {
    std::filesystem::path distances;
    std::filesystem::path elevations;
};

struct GeoTables {
    DistanceTable distances;
    ElevationTable elevations;
};

// Resolves every requested pair and stop, consulting the cache files first and
// the provider only for entries the caches lack. Newly resolved entries are
// written back to the caches before any coverage error is raised, so a retry
// only re-queries what is still missing.
inline GeoTables fetch_and_cache(GeoProvider& provider, const std::vector<StopPair>& pairs,
                                 const std::map<std::string, gtfs::Stop>& stops, const CachePaths& cache) {
    GeoTables tables;
    if (std::filesystem::exists(cache.distances)) tables.distances = read_distances(cache.distances);
    if (std::filesystem::exists(cache.elevations)) tables.elevations = read_elevations(cache.elevations);

    auto stop_of = [&](const std::string& id) -> const gtfs::Stop& {
        auto it = stops.find(id);
        if (it == stops.end()) throw Error(ErrorCategory::DanglingReference, "unknown stop '" + id + "'");
        return it->second;
    };

    std::vector<std::string> unresolved;
    bool dirty_d = false;
    bool dirty_e = false;

    std::vector<std::string> wanted_stops;
    for (const auto& [from, to] : pairs) {
        wanted_stops.push_back(from);
        wanted_stops.push_back(to);
    }
    std::sort(wanted_stops.begin(), wanted_stops.end());
    wanted_stops.erase(std::unique(wanted_stops.begin(), wanted_stops.end()), wanted_stops.end());

    for (const auto& id : wanted_stops) {
        if (tables.elevations.count(id)) continue;
        if (auto e = provider.elevation_m(stop_of(id))) {
            tables.elevations[id] = *e;
            dirty_e = true;
        } else {
            unresolved.push_back("elevation(" + id + ")");
        }
    }
    for (const auto& p : pairs) {
        if (tables.distances.count(p)) continue;
        auto d = provider.distance_km(stop_of(p.first), stop_of(p.second));
        if (d && *d > 0) {
            tables.distances[p] = *d;
            dirty_d = true;
        } else {
            unresolved.push_back("(" + p.first + ", " + p.second + ")");
        }
    }

    if (dirty_d) write_distances(cache.distances, tables.distances);
    if (dirty_e) write_elevations(cache.elevations, tables.elevations);

    if (!unresolved.empty()) {
        std::string list;
        for (const auto& u : unresolved) list += (list.empty() ? "" : ", ") + u;
        throw Error(ErrorCategory::PartialCoverage, "provider could not resolve: " + list);
    }
    return tables;
}

}  // namespace electrify::geo
