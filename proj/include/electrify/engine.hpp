#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <future>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "electrify/analysis.hpp"
#include "electrify/drive.hpp"
#include "electrify/error.hpp"
#include "electrify/fleet.hpp"
#include "electrify/gtfs.hpp"
#include "electrify/io.hpp"
#include "electrify/params.hpp"
#include "electrify/surrogate.hpp"
#include "electrify/valuation.hpp"

namespace electrify::engine {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Run configuration

struct TrainingConfig {
    std::size_t samples = 20000;
    int degree = 6;
    surrogate::ElasticNetConfig elastic_net;
};

struct ServeConfig {
    std::string host = "127.0.0.1";
    int port = 8080;
    std::string cors_origin = "*";
};

struct RunConfig {
    std::string city_id = "default";
    std::string city_name = "Default city";
    std::optional<std::filesystem::path> feed;
    std::optional<std::filesystem::path> distances;
    std::optional<std::filesystem::path> elevations;
    std::optional<std::filesystem::path> cycle;
    std::optional<std::filesystem::path> model;
    std::string profile = "boston";
    std::string bus_size = "40ft";
    json overrides = json::object();
    std::uint64_t seed = 7;
    TrainingConfig training;
    ServeConfig serve;

    params::ParameterProfile parameters() const {
        auto p = params::apply_overrides(params::profile(profile), overrides);
        p.bus_size = bus_size;
        return p;
    }
};

namespace detail {

template <class T>
T config_value(const json& v, const std::string& key) {
    try {
        return v.get<T>();
    } catch (const json::exception&) {
        throw Error(ErrorCategory::InvalidParameter, "config key '" + key + "' has the wrong type");
    }
}

}  // namespace detail

// Parses a configuration object. Relative paths resolve against base_dir.
inline RunConfig config_from_json(const json& j, const std::filesystem::path& base_dir = {}) {
    if (!j.is_object()) throw Error(ErrorCategory::InvalidParameter, "configuration must be a JSON object");
    RunConfig c;
    auto path = [&](const json& v, const std::string& key) {
        std::filesystem::path p = detail::config_value<std::string>(v, key);
        return p.is_relative() && !base_dir.empty() ? base_dir / p : p;
    };
    for (const auto& [key, v] : j.items()) {
        if (key == "city") {
            c.city_id = detail::config_value<std::string>(v.at("id"), "city.id");
            c.city_name = v.contains("name") ? detail::config_value<std::string>(v.at("name"), "city.name") : c.city_id;
        } else if (key == "feed") {
            c.feed = path(v, key);
        } else if (key == "distances") {
            c.distances = path(v, key);
        } else if (key == "elevations") {
            c.elevations = path(v, key);
        } else if (key == "cycle") {
            c.cycle = path(v, key);
        } else if (key == "model") {
            c.model = path(v, key);
        } else if (key == "profile") {
            c.profile = detail::config_value<std::string>(v, key);
        } else if (key == "bus_size") {
            c.bus_size = detail::config_value<std::string>(v, key);
        } else if (key == "overrides") {
            c.overrides = v;
        } else if (key == "seed") {
            c.seed = detail::config_value<std::uint64_t>(v, key);
        } else if (key == "training") {
            for (const auto& [tk, tv] : v.items()) {
                const std::string name = "training." + tk;
                auto& en = c.training.elastic_net;
                if (tk == "samples") c.training.samples = detail::config_value<std::size_t>(tv, name);
                else if (tk == "degree") c.training.degree = detail::config_value<int>(tv, name);
                else if (tk == "l1_weight") en.l1_weight = detail::config_value<double>(tv, name);
                else if (tk == "l2_weight") en.l2_weight = detail::config_value<double>(tv, name);
                else if (tk == "max_iterations") en.max_iterations = detail::config_value<std::size_t>(tv, name);
                else if (tk == "tolerance") en.tolerance = detail::config_value<double>(tv, name);
                else if (tk == "test_fraction") en.test_fraction = detail::config_value<double>(tv, name);
                else throw Error(ErrorCategory::InvalidParameter, "unknown config key '" + name + "'");
            }
        } else if (key == "serve") {
            for (const auto& [sk, sv] : v.items()) {
                const std::string name = "serve." + sk;
                if (sk == "host") c.serve.host = detail::config_value<std::string>(sv, name);
                else if (sk == "port") c.serve.port = detail::config_value<int>(sv, name);
                else if (sk == "cors_origin") c.serve.cors_origin = detail::config_value<std::string>(sv, name);
                else throw Error(ErrorCategory::InvalidParameter, "unknown config key '" + name + "'");
            }
        } else {
            throw Error(ErrorCategory::InvalidParameter, "unknown config key '" + key + "'");
        }
    }
    c.parameters();  // validates profile name and overrides early
    return c;
}

inline RunConfig load_config(const std::filesystem::path& path) {
    return config_from_json(io::read_json(path), path.parent_path());
}

// --config wins; otherwise ELECTRIFY_CONFIG; otherwise built-in defaults.
inline RunConfig resolve_config(const std::optional<std::filesystem::path>& explicit_path) {
    if (explicit_path) return load_config(*explicit_path);
    if (const char* env = std::getenv("ELECTRIFY_CONFIG"); env && *env) return load_config(env);
    return RunConfig{};
}

// ---------------------------------------------------------------------------
// Training

inline surrogate::ScenarioDistributions scenario_distributions(const params::ParameterProfile& p,
                                                               std::vector<double> grades) {
    surrogate::ScenarioDistributions d;
    d.passenger_max = p.passenger_max;
    d.temp_mixture = surrogate::ScenarioDistributions::monthly_mixture(p.climate.monthly_mean_temp_c,
                                                                       p.climate.temp_stddev_c);
    d.grade_source = std::move(grades);
    return d;
}

inline surrogate::PhysicsSetup physics_setup(const params::ParameterProfile& p, drive::DriveCycle cycle) {
    return surrogate::PhysicsSetup{std::move(cycle), p.bus, p.hvac, p.air_density_kgpm3, p.gravity_mps2};
}

inline surrogate::SurrogateModel train(const io::FeedArchive& archive, const drive::DriveCycle& cycle,
                                       const params::ParameterProfile& p, std::size_t samples, std::uint64_t seed,
                                       const TrainingConfig& training = {}) {
    if (!archive.enriched()) throw Error(ErrorCategory::MissingGeoData, "feed archive has not been enriched");
    auto cfg = training.elastic_net;
    cfg.seed = seed;
    auto result = surrogate::train_surrogate(physics_setup(p, cycle), scenario_distributions(p, archive.grades()),
                                             samples, cfg, training.degree);
    result.model.content_hash = io::model_hash(result.model);
    return result.model;
}

// ---------------------------------------------------------------------------
// Loaded city state. Immutable once built; valuation never modifies it.

struct City {
    std::string id;
    std::string name;
    io::FeedArchive archive;
    surrogate::SurrogateModel model;
    params::ParameterProfile profile;
    gtfs::Date day{};
};

inline City make_city(std::string id, std::string name, io::FeedArchive archive, surrogate::SurrogateModel model,
                      params::ParameterProfile profile) {
    if (archive.selected_routes.empty()) throw Error(ErrorCategory::InvalidInput, "no routes selected");
    if (!archive.enriched()) throw Error(ErrorCategory::MissingGeoData, "feed archive has not been enriched");
    if (!model.fitted()) throw Error(ErrorCategory::ModelMissing, "surrogate model has no coefficients");
    if (model.content_hash.empty()) model.content_hash = io::model_hash(model);
    params::validate(profile);
    City c{std::move(id), std::move(name), std::move(archive), std::move(model), std::move(profile), {}};
    c.day = gtfs::representative_day(c.archive.feed, c.archive.selected_routes);
    return c;
}

inline City load_city(const RunConfig& cfg) {
    if (!cfg.feed) throw Error(ErrorCategory::InvalidParameter, "configuration has no feed");
    if (!cfg.model) throw Error(ErrorCategory::ModelMissing, "configuration has no model");
    return make_city(cfg.city_id, cfg.city_name, io::read_archive(*cfg.feed), io::read_model(*cfg.model),
                     cfg.parameters());
}

struct RouteSummary {
    std::string route_id;
    std::string short_name;
    std::string long_name;
    std::size_t clusters = 0;
    std::size_t trips = 0;
};

inline std::vector<RouteSummary> list_routes(const City& city) {
    std::vector<RouteSummary> out;
    for (const auto& [route_id, clusters] : city.archive.enrichment) {
        RouteSummary s{route_id, {}, {}, clusters.size(), 0};
        if (auto it = city.archive.feed.routes.find(route_id); it != city.archive.feed.routes.end()) {
            s.short_name = it->second.short_name;
            s.long_name = it->second.long_name;
        }
        for (const auto& c : clusters) s.trips += c.cluster.trips.size();
        out.push_back(std::move(s));
    }
    return out;
}

inline std::vector<std::string> unknown_routes(const City& city, const std::vector<std::string>& route_ids) {
    std::vector<std::string> out;
    for (const auto& id : route_ids) {
        if (!city.archive.enrichment.contains(id) && std::find(out.begin(), out.end(), id) == out.end()) {
            out.push_back(id);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Valuation

struct Report {
    std::string city_id;
    params::ParameterProfile profile;
    json overrides = json::object();
    std::uint64_t seed = 0;
    std::string model_hash;
    std::string representative_day;
    std::vector<valuation::RouteValuation> valuations;
    analysis::Analysis analysis;
};

inline valuation::RouteValuation valuate_one(const City& city, const params::ParameterProfile& p,
                                             const std::string& route_id) {
    const auto& clusters = city.archive.enrichment.at(route_id);
    fleet::OperatingConditions ops{p.passengers_for(route_id), p.climate.yearly_avg_temp_c,
                                   p.climate.yearly_lowest_temp_c};
    auto est = fleet::estimate_fleet(city.archive.feed, route_id, clusters, city.model, ops, p.bus, p.charger,
                                     city.day);
    auto rv = valuation::valuate_route(est, params::valuation_inputs(p));
    if (auto it = city.archive.feed.routes.find(route_id); it != city.archive.feed.routes.end()) {
        rv.short_name = it->second.short_name;
    }
    return rv;
}

// Values the requested routes (all selected routes when empty) under the city
// profile with the given overrides. Routes are processed in parallel and
// reported in route_id order.
inline Report valuate(const City& city, std::vector<std::string> route_ids, const json& overrides = json::object()) {
    auto profile = params::apply_overrides(city.profile, overrides);
    if (route_ids.empty()) route_ids = city.archive.selected_routes;
    if (auto unknown = unknown_routes(city, route_ids); !unknown.empty()) {
        std::string list;
        for (const auto& id : unknown) list += (list.empty() ? "" : ", ") + id;
        throw Error(ErrorCategory::UnknownRouteName, "unknown route ids: " + list);
    }
    std::sort(route_ids.begin(), route_ids.end());
    route_ids.erase(std::unique(route_ids.begin(), route_ids.end()), route_ids.end());

    std::vector<std::future<valuation::RouteValuation>> jobs;
    for (const auto& id : route_ids) {
        jobs.push_back(std::async(std::launch::async, [&city, &profile, id] { return valuate_one(city, profile, id); }));
    }
    Report r;
    r.city_id = city.id;
    r.profile = profile;
    r.overrides = overrides.is_null() ? json::object() : overrides;
    r.seed = city.model.seed;
    r.model_hash = city.model.content_hash;
    r.representative_day = gtfs::format_date(city.day);
    for (auto& j : jobs) r.valuations.push_back(j.get());
    r.analysis = analysis::analyze(r.valuations);
    return r;
}

}  // namespace electrify::engine
