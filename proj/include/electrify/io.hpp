#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>
#include <openssl/evp.h>

#include "electrify/error.hpp"
#include "electrify/fleet.hpp"
#include "electrify/geo.hpp"
#include "electrify/gtfs.hpp"
#include "electrify/surrogate.hpp"

namespace electrify::io {

using json = nlohmann::ordered_json;

inline std::string sha256_hex(std::string_view data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw Error(ErrorCategory::InvalidInput, "SHA-256 digest failed");
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(kHex[digest[i] >> 4]);
        out.push_back(kHex[digest[i] & 0xF]);
    }
    return out;
}

inline json read_json(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCategory::MissingFile, path.string() + " not found");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw Error(ErrorCategory::InvalidInput, path.string() + ": " + e.what());
    }
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    try {
        if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    } catch (const std::filesystem::filesystem_error& e) {
        throw Error(ErrorCategory::WriteFailure, e.what());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCategory::WriteFailure, "cannot write " + path.string());
    out << text;
    if (!out) throw Error(ErrorCategory::WriteFailure, "write to " + path.string() + " failed");
}

inline void write_json(const std::filesystem::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

// ---------------------------------------------------------------------------
// Feed archive

inline json to_json(const gtfs::GtfsFeed& feed) {
    json j;
    j["stops"] = json::array();
    for (const auto& [id, s] : feed.stops) {
        j["stops"].push_back({{"stop_id", s.stop_id}, {"name", s.name}, {"lat", s.lat}, {"lon", s.lon}});
    }
    j["routes"] = json::array();
    for (const auto& [id, r] : feed.routes) {
        j["routes"].push_back({{"route_id", r.route_id},
                               {"short_name", r.short_name},
                               {"long_name", r.long_name},
                               {"route_type", r.route_type}});
    }
    j["trips"] = json::array();
    for (const auto& t : feed.trips) {
        json events = json::array();
        for (const auto& ev : t.stop_events) events.push_back(json::array({ev.stop_id, ev.arrival, ev.departure}));
        j["trips"].push_back({{"trip_id", t.trip_id},
                              {"route_id", t.route_id},
                              {"service_id", t.service_id},
                              {"direction", gtfs::to_string(t.direction)},
                              {"direction_inferred", t.direction_inferred},
                              {"stop_events", std::move(events)}});
    }
    j["services"] = json::object();
    for (const auto& [sid, days] : feed.services) {
        json arr = json::array();
        for (auto d : days) arr.push_back(gtfs::format_date(d));
        j["services"][sid] = std::move(arr);
    }
    j["feed_window"] = {{"start", gtfs::format_date(feed.feed_window.start)},
                        {"end", gtfs::format_date(feed.feed_window.end)}};
    j["warnings"] = feed.warnings;
    return j;
}

inline gtfs::Date date_from(const json& j) {
    auto d = gtfs::parse_date(j.get<std::string>());
    if (!d) throw Error(ErrorCategory::InvalidInput, "invalid date '" + j.get<std::string>() + "' in archive");
    return *d;
}

inline gtfs::GtfsFeed feed_from_json(const json& j) {
    try {
        gtfs::GtfsFeed feed;
        for (const auto& s : j.at("stops")) {
            gtfs::Stop stop{s.at("stop_id"), s.at("name"), s.at("lat"), s.at("lon")};
            feed.stops.emplace(stop.stop_id, stop);
        }
        for (const auto& r : j.at("routes")) {
            gtfs::Route route{r.at("route_id"), r.at("short_name"), r.at("long_name"), r.at("route_type")};
            feed.routes.emplace(route.route_id, route);
        }
        for (const auto& t : j.at("trips")) {
            gtfs::Trip trip;
            trip.trip_id = t.at("trip_id");
            trip.route_id = t.at("route_id");
            trip.service_id = t.at("service_id");
            trip.direction = gtfs::parse_direction(t.at("direction").get<std::string>());
            trip.direction_inferred = t.at("direction_inferred");
            for (const auto& ev : t.at("stop_events")) {
                trip.stop_events.push_back(gtfs::StopEvent{ev.at(0), ev.at(1), ev.at(2)});
            }
            feed.trips.push_back(std::move(trip));
        }
        for (const auto& [sid, days] : j.at("services").items()) {
            auto& out = feed.services[sid];
            for (const auto& d : days) out.push_back(date_from(d));
        }
        feed.feed_window = {date_from(j.at("feed_window").at("start")), date_from(j.at("feed_window").at("end"))};
        if (j.contains("warnings")) feed.warnings = j.at("warnings").get<std::vector<std::string>>();
        return feed;
    } catch (const json::exception& e) {
        throw Error(ErrorCategory::InvalidInput, std::string("malformed feed archive: ") + e.what());
    }
}

inline json to_json(const geo::StopPairGeo& p) {
    return {{"from_stop", p.from_stop},
            {"to_stop", p.to_stop},
            {"distance_km", p.distance_km},
            {"elevation_change_m", p.elevation_change_m},
            {"grade_rad", p.grade_rad}};
}

inline json to_json(const gtfs::TripCluster& c) {
    return {{"cluster_id", c.cluster_id},
            {"route_id", c.route_id},
            {"direction", gtfs::to_string(c.direction)},
            {"stop_sequence", c.stop_sequence},
            {"trips", c.trips}};
}

// A parsed feed plus the routes chosen for study and, once enriched, the
// per-cluster stop-pair geometry.
struct FeedArchive {
    gtfs::GtfsFeed feed;
    std::vector<std::string> selected_routes;
    std::map<std::string, std::vector<fleet::EnrichedCluster>> enrichment;

    bool enriched() const { return !enrichment.empty(); }

    std::vector<double> grades() const {
        std::vector<double> out;
        for (const auto& [route, clusters] : enrichment) {
            for (const auto& c : clusters) {
                for (const auto& p : c.pairs) out.push_back(p.grade_rad);
            }
        }
        return out;
    }
};

inline json to_json(const FeedArchive& a) {
    json j;
    j["format"] = "electrify-feed-archive";
    j["version"] = 1;
    j["feed"] = to_json(a.feed);
    j["selected_routes"] = a.selected_routes;
    json enrichment = json::object();
    for (const auto& [route, clusters] : a.enrichment) {
        json arr = json::array();
        for (const auto& c : clusters) {
            json pairs = json::array();
            for (const auto& p : c.pairs) pairs.push_back(to_json(p));
            arr.push_back({{"cluster", to_json(c.cluster)}, {"pairs", std::move(pairs)}});
        }
        enrichment[route] = std::move(arr);
    }
    j["enrichment"] = std::move(enrichment);
    return j;
}

inline FeedArchive archive_from_json(const json& j) {
    if (j.value("format", std::string()) != "electrify-feed-archive") {
        throw Error(ErrorCategory::InvalidInput, "not a feed archive");
    }
    FeedArchive a;
    a.feed = feed_from_json(j.at("feed"));
    try {
        a.selected_routes = j.at("selected_routes").get<std::vector<std::string>>();
        if (j.contains("enrichment")) {
            for (const auto& [route, arr] : j.at("enrichment").items()) {
                auto& clusters = a.enrichment[route];
                for (const auto& e : arr) {
                    fleet::EnrichedCluster ec;
                    const auto& c = e.at("cluster");
                    ec.cluster.cluster_id = c.at("cluster_id");
                    ec.cluster.route_id = c.at("route_id");
                    ec.cluster.direction = gtfs::parse_direction(c.at("direction").get<std::string>());
                    ec.cluster.stop_sequence = c.at("stop_sequence").get<std::vector<std::string>>();
                    ec.cluster.trips = c.at("trips").get<std::vector<std::string>>();
                    for (const auto& p : e.at("pairs")) {
                        ec.pairs.push_back(geo::StopPairGeo{p.at("from_stop"), p.at("to_stop"), p.at("distance_km"),
                                                            p.at("elevation_change_m"), p.at("grade_rad")});
                    }
                    clusters.push_back(std::move(ec));
                }
            }
        }
    } catch (const json::exception& e) {
        throw Error(ErrorCategory::InvalidInput, std::string("malformed feed archive: ") + e.what());
    }
    return a;
}

inline FeedArchive read_archive(const std::filesystem::path& path) { return archive_from_json(read_json(path)); }

inline void write_archive(const std::filesystem::path& path, const FeedArchive& a) { write_json(path, to_json(a)); }

// Clusters every selected route and attaches stop-pair geometry from the tables.
inline void enrich_archive(FeedArchive& a, const geo::DistanceTable& distances, const geo::ElevationTable& elevations) {
    a.enrichment.clear();
    for (const auto& route : a.selected_routes) {
        auto& out = a.enrichment[route];
        for (auto& cluster : gtfs::cluster_trips(a.feed, route)) {
            auto pairs = geo::enrich_cluster(cluster, distances, elevations);
            out.push_back(fleet::EnrichedCluster{std::move(cluster), std::move(pairs)});
        }
    }
}

// Every consecutive stop pair used by the selected routes' clusters.
inline std::vector<geo::StopPair> required_pairs(const FeedArchive& a) {
    std::vector<geo::StopPair> out;
    for (const auto& route : a.selected_routes) {
        for (const auto& cluster : gtfs::cluster_trips(a.feed, route)) {
            for (auto& p : geo::consecutive_pairs(cluster.stop_sequence)) out.push_back(std::move(p));
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// ---------------------------------------------------------------------------
// Surrogate model file

inline json model_body(const surrogate::SurrogateModel& m) {
    json j;
    j["format"] = "electrify-surrogate";
    j["version"] = 1;
    j["degree"] = m.degree;
    j["variables"] = json::array({"passengers", "ambient_temp_c", "grade_rad"});
    j["intercept"] = m.intercept;
    j["features"] = json::array();
    for (std::size_t f = 0; f < m.exponents.size(); ++f) {
        j["features"].push_back({{"exponents", m.exponents[f]},
                                 {"coefficient", m.coefficients[f]},
                                 {"mean", m.feature_mean[f]},
                                 {"scale", m.feature_scale[f]}});
    }
    j["train_rmse"] = m.train_rmse;
    j["test_rmse"] = m.test_rmse ? json(*m.test_rmse) : json(nullptr);
    j["seed"] = m.seed;
    j["n_samples"] = m.n_samples;
    j["l1_weight"] = m.l1_weight;
    j["l2_weight"] = m.l2_weight;
    j["sweeps"] = m.sweeps;
    return j;
}

inline std::string model_hash(const surrogate::SurrogateModel& m) {
    return "sha256:" + sha256_hex(model_body(m).dump());
}

inline json to_json(const surrogate::SurrogateModel& m) {
    json j = model_body(m);
    j["hash"] = model_hash(m);
    return j;
}

inline surrogate::SurrogateModel model_from_json(const json& j) {
    if (j.value("format", std::string()) != "electrify-surrogate") {
        throw Error(ErrorCategory::ModelMissing, "not a surrogate model file");
    }
    try {
        surrogate::SurrogateModel m;
        m.degree = j.at("degree");
        m.intercept = j.at("intercept");
        for (const auto& f : j.at("features")) {
            m.exponents.push_back(f.at("exponents").get<surrogate::Exponents>());
            m.coefficients.push_back(f.at("coefficient"));
            m.feature_mean.push_back(f.at("mean"));
            double scale = f.at("scale");
            if (!(scale > 0)) throw Error(ErrorCategory::InvalidInput, "feature scale must be positive");
            m.feature_scale.push_back(scale);
        }
        m.train_rmse = j.at("train_rmse");
        if (!j.at("test_rmse").is_null()) m.test_rmse = j.at("test_rmse").get<double>();
        m.seed = j.at("seed");
        m.n_samples = j.at("n_samples");
        m.l1_weight = j.at("l1_weight");
        m.l2_weight = j.at("l2_weight");
        m.sweeps = j.at("sweeps");
        m.content_hash = model_hash(m);
        if (j.contains("hash") && j.at("hash") != m.content_hash) {
            throw Error(ErrorCategory::InvalidInput, "model hash does not match its content");
        }
        return m;
    } catch (const json::exception& e) {
        throw Error(ErrorCategory::InvalidInput, std::string("malformed model file: ") + e.what());
    }
}

inline surrogate::SurrogateModel read_model(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) throw Error(ErrorCategory::ModelMissing, path.string() + " not found");
    return model_from_json(read_json(path));
}

inline void write_model(const std::filesystem::path& path, const surrogate::SurrogateModel& m) {
    write_json(path, to_json(m));
}

}  // namespace electrify::io
