#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "electrify/csv.hpp"
#include "electrify/error.hpp"

namespace electrify::gtfs {

using Date = std::chrono::sys_days;

// Seconds since midnight of the service day. GTFS allows values past 24:00:00
// for trips that run after midnight, so this is not wrapped at 86400.
using ServiceSeconds = std::int64_t;

struct Stop {
    std::string stop_id;
    std::string name;
    double lat = 0;
    double lon = 0;

    bool operator==(const Stop&) const = default;
};

enum class RouteMode { Tram, Subway, Rail, Bus, Ferry, CableTram, AerialLift, Funicular, Trolleybus, Monorail, Other };

struct Route {
    std::string route_id;
    std::string short_name;
    std::string long_name;
    int route_type = 3;

    bool operator==(const Route&) const = default;
};

enum class Direction { Outbound, Inbound };

struct StopEvent {
    std::string stop_id;
    ServiceSeconds arrival = 0;
    ServiceSeconds departure = 0;

    bool operator==(const StopEvent&) const = default;
};

struct Trip {
    std::string trip_id;
    std::string route_id;
    std::string service_id;
    Direction direction = Direction::Outbound;
    bool direction_inferred = false;
    std::vector<StopEvent> stop_events;

    bool operator==(const Trip&) const = default;

    // First departure to last arrival.
    ServiceSeconds cycle_length() const {
        if (stop_events.empty()) return 0;
        return stop_events.back().arrival - stop_events.front().departure;
    }
};

struct FeedWindow {
    Date start;
    Date end;

    bool operator==(const FeedWindow&) const = default;
};

struct GtfsFeed {
    std::map<std::string, Stop> stops;
    std::map<std::string, Route> routes;
    std::vector<Trip> trips;
    // service_id -> sorted active dates
    std::map<std::string, std::vector<Date>> services;
    FeedWindow feed_window{};
    std::vector<std::string> warnings;

    bool operator==(const GtfsFeed& o) const {
        return stops == o.stops && routes == o.routes && trips == o.trips && services == o.services &&
               feed_window == o.feed_window;
    }

    const Trip* find_trip(std::string_view trip_id) const {
        for (const auto& t : trips) {
            if (t.trip_id == trip_id) return &t;
        }
        return nullptr;
    }

    bool runs_on(const Trip& trip, Date day) const {
        auto it = services.find(trip.service_id);
        if (it == services.end()) return false;
        return std::binary_search(it->second.begin(), it->second.end(), day);
    }
};

struct TripCluster {
    std::string cluster_id;
    std::string route_id;
    Direction direction = Direction::Outbound;
    std::vector<std::string> stop_sequence;
    std::vector<std::string> trips;

    bool operator==(const TripCluster&) const = default;
};

inline RouteMode route_mode(int route_type) {
    switch (route_type) {
        case 0: return RouteMode::Tram;
        case 1: return RouteMode::Subway;
        case 2: return RouteMode::Rail;
        case 3: return RouteMode::Bus;
        case 4: return RouteMode::Ferry;
        case 5: return RouteMode::CableTram;
        case 6: return RouteMode::AerialLift;
        case 7: return RouteMode::Funicular;
        case 11: return RouteMode::Trolleybus;
        case 12: return RouteMode::Monorail;
        default: break;
    }
    // Extended route types.
    if (route_type == 800) return RouteMode::Trolleybus;
    if (route_type >= 700 && route_type < 800) return RouteMode::Bus;
    if (route_type >= 900 && route_type < 1000) return RouteMode::Tram;
    if (route_type >= 400 && route_type < 500) return RouteMode::Subway;
    if (route_type >= 100 && route_type < 200) return RouteMode::Rail;
    return RouteMode::Other;
}

inline std::string_view to_string(RouteMode m) {
    switch (m) {
        case RouteMode::Tram: return "tram";
        case RouteMode::Subway: return "subway";
        case RouteMode::Rail: return "rail";
        case RouteMode::Bus: return "bus";
        case RouteMode::Ferry: return "ferry";
        case RouteMode::CableTram: return "cable_tram";
        case RouteMode::AerialLift: return "aerial_lift";
        case RouteMode::Funicular: return "funicular";
        case RouteMode::Trolleybus: return "trolleybus";
        case RouteMode::Monorail: return "monorail";
        case RouteMode::Other: return "other";
    }
    return "other";
}

inline std::string_view to_string(Direction d) { return d == Direction::Outbound ? "outbound" : "inbound"; }

inline Direction parse_direction(std::string_view s) {
    if (s == "outbound") return Direction::Outbound;
    if (s == "inbound") return Direction::Inbound;
    throw Error(ErrorCategory::InvalidInput, "unknown direction '" + std::string(s) + "'");
}

// ---------------------------------------------------------------------------
// Time and date text forms

inline std::optional<ServiceSeconds> parse_time(std::string_view text) {
    std::string s = csv::Table::trim(text);
    auto c1 = s.find(':');
    if (c1 == std::string::npos) return std::nullopt;
    auto c2 = s.find(':', c1 + 1);
    if (c2 == std::string::npos) return std::nullopt;
    auto h = csv::parse_int(std::string_view(s).substr(0, c1));
    auto m = csv::parse_int(std::string_view(s).substr(c1 + 1, c2 - c1 - 1));
    auto sec = csv::parse_int(std::string_view(s).substr(c2 + 1));
    if (!h || !m || !sec || *h < 0 || *m < 0 || *m > 59 || *sec < 0 || *sec > 59) return std::nullopt;
    return *h * 3600 + *m * 60 + *sec;
}

inline std::string format_time(ServiceSeconds t) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%02lld:%02lld:%02lld", static_cast<long long>(t / 3600),
                  static_cast<long long>((t / 60) % 60), static_cast<long long>(t % 60));
    return buf;
}

inline std::optional<Date> parse_date(std::string_view text) {
    std::string s = csv::Table::trim(text);
    if (s.size() != 8) return std::nullopt;
    auto v = csv::parse_int(s);
    if (!v) return std::nullopt;
    std::chrono::year_month_day ymd{std::chrono::year{static_cast<int>(*v / 10000)},
                                    std::chrono::month{static_cast<unsigned>((*v / 100) % 100)},
                                    std::chrono::day{static_cast<unsigned>(*v % 100)}};
    if (!ymd.ok()) return std::nullopt;
    return Date{ymd};
}

inline std::string format_date(Date d) {
    std::chrono::year_month_day ymd{d};
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d%02u%02u", static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                  static_cast<unsigned>(ymd.day()));
    return buf;
}

// Date used when a feed ships no calendar: every service runs on it.
inline Date nominal_service_day() { return Date{std::chrono::year{1970} / 1 / 1}; }

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

inline std::string row_text(const csv::Row& row) {
    std::string out;
    for (std::size_t i = 0; i < row.fields.size(); ++i) {
        if (i) out.push_back(',');
        out += row.fields[i];
    }
    return out;
}

[[noreturn]] inline void dangling(const csv::Table& t, const csv::Row& row, const std::string& what) {
    throw Error(ErrorCategory::DanglingReference, t.where(row) + ": " + what + " in row '" + row_text(row) + "'");
}

inline csv::Table read_required(const std::filesystem::path& dir, const char* name) {
    auto path = dir / name;
    if (!std::filesystem::exists(path)) {
        throw Error(ErrorCategory::MissingFile, "mandatory GTFS file " + path.string() + " is absent");
    }
    return csv::Table::read(path);
}

inline void read_services(const std::filesystem::path& dir, GtfsFeed& feed) {
    std::map<std::string, std::set<Date>> active;
    bool have_calendar = false;

    if (auto path = dir / "calendar.txt"; std::filesystem::exists(path)) {
        have_calendar = true;
        auto t = csv::Table::read(path);
        static constexpr const char* kDays[] = {"sunday",   "monday", "tuesday", "wednesday",
                                                "thursday", "friday", "saturday"};
        std::size_t c_service = t.require_column("service_id");
        std::size_t c_start = t.require_column("start_date");
        std::size_t c_end = t.require_column("end_date");
        std::size_t c_day[7];
        for (int i = 0; i < 7; ++i) c_day[i] = t.require_column(kDays[i]);
        for (const auto& row : t.rows()) {
            std::string sid = csv::Table::trim(t.get(row, c_service));
            auto start = parse_date(t.get(row, c_start));
            auto end = parse_date(t.get(row, c_end));
            if (sid.empty() || !start || !end || *end < *start) t.fail(row, "invalid calendar row");
            bool runs[7];
            for (int i = 0; i < 7; ++i) {
                auto flag = csv::parse_int(t.get(row, c_day[i]));
                if (!flag || (*flag != 0 && *flag != 1)) t.fail(row, "weekday flag must be 0 or 1");
                runs[i] = *flag == 1;
            }
            auto& days = active[sid];
            for (Date d = *start; d <= *end; d += std::chrono::days{1}) {
                if (runs[std::chrono::weekday{d}.c_encoding()]) days.insert(d);
            }
        }
    }

    if (auto path = dir / "calendar_dates.txt"; std::filesystem::exists(path)) {
        have_calendar = true;
        auto t = csv::Table::read(path);
        std::size_t c_service = t.require_column("service_id");
        std::size_t c_date = t.require_column("date");
        std::size_t c_type = t.require_column("exception_type");
        for (const auto& row : t.rows()) {
            std::string sid = csv::Table::trim(t.get(row, c_service));
            auto d = parse_date(t.get(row, c_date));
            auto type = csv::parse_int(t.get(row, c_type));
            if (sid.empty() || !d || !type || (*type != 1 && *type != 2)) t.fail(row, "invalid calendar_dates row");
            if (*type == 1) {
                active[sid].insert(*d);
            } else {
                active[sid].erase(*d);
            }
        }
    }

    if (!have_calendar) {
        for (const auto& trip : feed.trips) active[trip.service_id].insert(nominal_service_day());
        feed.warnings.push_back("no calendar.txt or calendar_dates.txt; all services assigned to one nominal day");
    }

    std::optional<Date> lo, hi;
    for (auto& [sid, days] : active) {
        feed.services[sid] = std::vector<Date>(days.begin(), days.end());
        if (!days.empty()) {
            if (!lo || *days.begin() < *lo) lo = *days.begin();
            if (!hi || *days.rbegin() > *hi) hi = *days.rbegin();
        }
    }
    feed.feed_window = FeedWindow{lo.value_or(nominal_service_day()), hi.value_or(nominal_service_day())};
}

}  // namespace detail

// Parses the mandatory GTFS tables (stops, routes, trips, stop_times) plus the
// optional calendar tables from a feed directory into a cross-referenced feed.
inline GtfsFeed parse_feed(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) {
        throw Error(ErrorCategory::MissingFile, "feed directory " + dir.string() + " does not exist");
    }
    auto stops_t = detail::read_required(dir, "stops.txt");
    auto routes_t = detail::read_required(dir, "routes.txt");
    auto trips_t = detail::read_required(dir, "trips.txt");
    auto times_t = detail::read_required(dir, "stop_times.txt");

    GtfsFeed feed;

    {
        const auto& t = stops_t;
        auto c_id = t.require_column("stop_id");
        auto c_name = t.column("stop_name");
        auto c_lat = t.require_column("stop_lat");
        auto c_lon = t.require_column("stop_lon");
        for (const auto& row : t.rows()) {
            Stop s;
            s.stop_id = csv::Table::trim(t.get(row, c_id));
            if (s.stop_id.empty()) t.fail(row, "empty stop_id");
            if (c_name) s.name = std::string(t.get(row, *c_name));
            auto lat = csv::parse_double(t.get(row, c_lat));
            auto lon = csv::parse_double(t.get(row, c_lon));
            if (!lat || !lon) t.fail(row, "stop_lat/stop_lon must be numeric");
            if (*lat < -90 || *lat > 90 || *lon < -180 || *lon > 180) t.fail(row, "coordinates out of range");
            s.lat = *lat;
            s.lon = *lon;
            if (!feed.stops.emplace(s.stop_id, s).second) t.fail(row, "duplicate stop_id '" + s.stop_id + "'");
        }
    }

    {
        const auto& t = routes_t;
        auto c_id = t.require_column("route_id");
        auto c_short = t.column("route_short_name");
        auto c_long = t.column("route_long_name");
        auto c_type = t.require_column("route_type");
        for (const auto& row : t.rows()) {
            Route r;
            r.route_id = csv::Table::trim(t.get(row, c_id));
            if (r.route_id.empty()) t.fail(row, "empty route_id");
            if (c_short) r.short_name = csv::Table::trim(t.get(row, *c_short));
            if (c_long) r.long_name = std::string(t.get(row, *c_long));
            auto type = csv::parse_int(t.get(row, c_type));
            if (!type) t.fail(row, "route_type must be an integer");
            r.route_type = static_cast<int>(*type);
            if (!feed.routes.emplace(r.route_id, r).second) t.fail(row, "duplicate route_id '" + r.route_id + "'");
        }
    }

    std::unordered_map<std::string, std::size_t> trip_index;
    std::vector<bool> direction_given;
    {
        const auto& t = trips_t;
        auto c_route = t.require_column("route_id");
        auto c_service = t.require_column("service_id");
        auto c_trip = t.require_column("trip_id");
        auto c_dir = t.column("direction_id");
        for (const auto& row : t.rows()) {
            Trip trip;
            trip.trip_id = csv::Table::trim(t.get(row, c_trip));
            trip.route_id = csv::Table::trim(t.get(row, c_route));
            trip.service_id = csv::Table::trim(t.get(row, c_service));
            if (trip.trip_id.empty()) t.fail(row, "empty trip_id");
            if (!feed.routes.count(trip.route_id)) {
                detail::dangling(t, row, "unknown route_id '" + trip.route_id + "'");
            }
            bool given = false;
            if (c_dir) {
                std::string d = csv::Table::trim(t.get(row, *c_dir));
                if (d == "0") {
                    trip.direction = Direction::Outbound;
                    given = true;
                } else if (d == "1") {
                    trip.direction = Direction::Inbound;
                    given = true;
                } else if (!d.empty()) {
                    t.fail(row, "direction_id must be 0 or 1");
                }
            }
            if (!trip_index.emplace(trip.trip_id, feed.trips.size()).second) {
                t.fail(row, "duplicate trip_id '" + trip.trip_id + "'");
            }
            direction_given.push_back(given);
            feed.trips.push_back(std::move(trip));
        }
    }

    {
        const auto& t = times_t;
        auto c_trip = t.require_column("trip_id");
        auto c_arr = t.require_column("arrival_time");
        auto c_dep = t.require_column("departure_time");
        auto c_stop = t.require_column("stop_id");
        auto c_seq = t.require_column("stop_sequence");

        struct Pending {
            long long seq;
            std::size_t line;
            StopEvent ev;
        };
        std::vector<std::vector<Pending>> per_trip(feed.trips.size());
        for (const auto& row : t.rows()) {
            std::string trip_id = csv::Table::trim(t.get(row, c_trip));
            std::string stop_id = csv::Table::trim(t.get(row, c_stop));
            auto it = trip_index.find(trip_id);
            if (it == trip_index.end()) detail::dangling(t, row, "unknown trip_id '" + trip_id + "'");
            if (!feed.stops.count(stop_id)) detail::dangling(t, row, "unknown stop_id '" + stop_id + "'");
            auto seq = csv::parse_int(t.get(row, c_seq));
            if (!seq || *seq < 0) t.fail(row, "stop_sequence must be a non-negative integer");
            std::string arr_s = csv::Table::trim(t.get(row, c_arr));
            std::string dep_s = csv::Table::trim(t.get(row, c_dep));
            if (arr_s.empty() && dep_s.empty()) t.fail(row, "untimed stop_times rows are not supported");
            auto arr = parse_time(arr_s.empty() ? dep_s : arr_s);
            auto dep = parse_time(dep_s.empty() ? arr_s : dep_s);
            if (!arr || !dep) t.fail(row, "times must be HH:MM:SS");
            if (*dep < *arr) t.fail(row, "departure_time precedes arrival_time");
            per_trip[it->second].push_back(Pending{*seq, row.line, StopEvent{stop_id, *arr, *dep}});
        }

        std::vector<Trip> kept;
        for (std::size_t i = 0; i < feed.trips.size(); ++i) {
            auto& events = per_trip[i];
            auto& trip = feed.trips[i];
            if (events.empty()) {
                feed.warnings.push_back("trip '" + trip.trip_id + "' has no stop_times and was dropped");
                continue;
            }
            std::sort(events.begin(), events.end(), [](const Pending& a, const Pending& b) { return a.seq < b.seq; });
            for (std::size_t k = 1; k < events.size(); ++k) {
                std::string where = t.source() + ":" + std::to_string(events[k].line);
                if (events[k].seq == events[k - 1].seq) {
                    throw Error(ErrorCategory::MalformedRow, where + ": duplicate stop_sequence in trip '" +
                                                                 trip.trip_id + "'");
                }
                if (events[k].ev.arrival < events[k - 1].ev.departure) {
                    throw Error(ErrorCategory::MalformedRow,
                                where + ": arrival precedes previous departure in trip '" + trip.trip_id + "'");
                }
            }
            for (auto& p : events) trip.stop_events.push_back(std::move(p.ev));
            if (!direction_given[i]) {
                trip.direction_inferred = true;
                trip.direction = trip.stop_events.front().stop_id <= trip.stop_events.back().stop_id
                                     ? Direction::Outbound
                                     : Direction::Inbound;
            }
            kept.push_back(std::move(trip));
        }
        feed.trips = std::move(kept);
    }

    detail::read_services(dir, feed);
    return feed;
}

// Writes the canonical feed back out as GTFS text files. Service days are
// written as explicit calendar_dates.txt additions.
inline void write_gtfs(const GtfsFeed& feed, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    auto open = [&](const char* name) {
        std::ofstream out(dir / name, std::ios::binary);
        if (!out) throw Error(ErrorCategory::WriteFailure, "cannot write " + (dir / name).string());
        return out;
    };
    {
        auto out = open("stops.txt");
        out << "stop_id,stop_name,stop_lat,stop_lon\n";
        for (const auto& [id, s] : feed.stops) {
            out << csv::escape(id) << ',' << csv::escape(s.name) << ',' << csv::format_double(s.lat) << ','
                << csv::format_double(s.lon) << '\n';
        }
    }
    {
        auto out = open("routes.txt");
        out << "route_id,route_short_name,route_long_name,route_type\n";
        for (const auto& [id, r] : feed.routes) {
            out << csv::escape(id) << ',' << csv::escape(r.short_name) << ',' << csv::escape(r.long_name) << ','
                << r.route_type << '\n';
        }
    }
    {
        auto trips = open("trips.txt");
        auto times = open("stop_times.txt");
        trips << "route_id,service_id,trip_id,direction_id\n";
        times << "trip_id,arrival_time,departure_time,stop_id,stop_sequence\n";
        for (const auto& trip : feed.trips) {
            trips << csv::escape(trip.route_id) << ',' << csv::escape(trip.service_id) << ','
                  << csv::escape(trip.trip_id) << ',';
            if (!trip.direction_inferred) trips << (trip.direction == Direction::Outbound ? '0' : '1');
            trips << '\n';
            for (std::size_t k = 0; k < trip.stop_events.size(); ++k) {
                const auto& ev = trip.stop_events[k];
                times << csv::escape(trip.trip_id) << ',' << format_time(ev.arrival) << ','
                      << format_time(ev.departure) << ',' << csv::escape(ev.stop_id) << ',' << k + 1 << '\n';
            }
        }
    }
    {
        auto out = open("calendar_dates.txt");
        out << "service_id,date,exception_type\n";
        for (const auto& [sid, days] : feed.services) {
            for (auto d : days) out << csv::escape(sid) << ',' << format_date(d) << ",1\n";
        }
    }
}

// ---------------------------------------------------------------------------
// Route selection and clustering

// Collapses runs of consecutive events with identical arrival times to their
// first event; the remaining events of such a run are taken as skipped stops.
inline Trip filter_skipped_stops(const Trip& trip) {
    Trip out = trip;
    out.stop_events.clear();
    for (const auto& ev : trip.stop_events) {
        if (!out.stop_events.empty() && out.stop_events.back().arrival == ev.arrival) continue;
        out.stop_events.push_back(ev);
    }
    return out;
}

struct SelectionCriteria {
    // Route short names (or route ids when a route has no short name).
    std::vector<std::string> allow_list;
};

struct SelectionResult {
    std::vector<std::string> route_ids;
    std::vector<std::string> warnings;
};

inline SelectionResult select_routes(const GtfsFeed& feed, const SelectionCriteria& criteria) {
    SelectionResult result;
    std::set<std::string> seen;
    for (const auto& name : criteria.allow_list) {
        bool matched = false;
        for (const auto& [id, route] : feed.routes) {
            if (route.short_name != name && id != name) continue;
            matched = true;
            auto mode = route_mode(route.route_type);
            if (mode != RouteMode::Bus) {
                result.warnings.push_back("route '" + name + "' is a " + std::string(to_string(mode)) +
                                          " route and was excluded");
                continue;
            }
            if (seen.insert(id).second) result.route_ids.push_back(id);
        }
        if (!matched) {
            throw Error(ErrorCategory::UnknownRouteName, "route '" + name + "' is not present in the feed");
        }
    }
    return result;
}

inline std::vector<std::string> read_allow_list(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCategory::MissingFile, path.string() + " not found");
    std::vector<std::string> names;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        for (std::string_view rest = line; !rest.empty();) {
            auto comma = rest.find(',');
            auto item = csv::Table::trim(rest.substr(0, comma));
            if (!item.empty()) names.push_back(item);
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
    }
    return names;
}

// Groups a route's trips by (direction, filtered stop sequence). Clusters are
// ordered by descending size; equal sizes keep first-seen order.
inline std::vector<TripCluster> cluster_trips(const GtfsFeed& feed, const std::string& route_id,
                                              std::size_t min_trips = 1) {
    if (!feed.routes.count(route_id)) {
        throw Error(ErrorCategory::UnknownRouteName, "route id '" + route_id + "' is not present in the feed");
    }
    std::vector<TripCluster> clusters;
    std::map<std::pair<Direction, std::vector<std::string>>, std::size_t> index;
    for (const auto& trip : feed.trips) {
        if (trip.route_id != route_id) continue;
        Trip filtered = filter_skipped_stops(trip);
        std::vector<std::string> seq;
        seq.reserve(filtered.stop_events.size());
        for (const auto& ev : filtered.stop_events) seq.push_back(ev.stop_id);
        auto key = std::make_pair(trip.direction, seq);
        auto it = index.find(key);
        if (it == index.end()) {
            index.emplace(key, clusters.size());
            clusters.push_back(TripCluster{"", route_id, trip.direction, std::move(seq), {trip.trip_id}});
        } else {
            clusters[it->second].trips.push_back(trip.trip_id);
        }
    }
    std::stable_sort(clusters.begin(), clusters.end(),
                     [](const TripCluster& a, const TripCluster& b) { return a.trips.size() > b.trips.size(); });
    std::erase_if(clusters, [&](const TripCluster& c) { return c.trips.size() < min_trips; });
    for (std::size_t k = 0; k < clusters.size(); ++k) clusters[k].cluster_id = route_id + "#" + std::to_string(k + 1);
    return clusters;
}

// The service day on which the most trips of the given routes run. Ties go to
// the earliest date.
inline Date representative_day(const GtfsFeed& feed, const std::vector<std::string>& route_ids) {
    std::set<std::string> wanted(route_ids.begin(), route_ids.end());
    std::map<Date, std::size_t> counts;
    for (const auto& trip : feed.trips) {
        if (!wanted.count(trip.route_id)) continue;
        auto it = feed.services.find(trip.service_id);
        if (it == feed.services.end()) continue;
        for (auto d : it->second) ++counts[d];
    }
    if (counts.empty()) return feed.feed_window.start;
    auto best = counts.begin();
    for (auto it = counts.begin(); it != counts.end(); ++it) {
        if (it->second > best->second) best = it;
    }
    return best->first;
}

}  // namespace electrify::gtfs
