#pragma once

#include <map>
#include <regex>
#include <string>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "electrify/engine.hpp"
#include "electrify/error.hpp"
#include "electrify/report.hpp"

namespace electrify::service {

using json = nlohmann::ordered_json;

struct Reply {
    int status = 200;
    json body;
};

inline Reply error_reply(int status, std::string_view category, const std::string& message) {
    return Reply{status, {{"error", category}, {"message", message}}};
}

// Name of the parameter an InvalidParameter message refers to, if any
// ("tco.discount_rate must be > 0" -> "tco.discount_rate").
inline std::string field_of(const std::string& message) {
    static const std::regex kField(R"(([a-z0-9_]+\.[a-z0-9_]+(\.[A-Za-z0-9_\-]+)?))");
    std::smatch m;
    return std::regex_search(message, m, kField) ? m[1].str() : std::string();
}

// Request handling over immutable loaded state. Every handler is const and
// safe to call concurrently.
class Api {
public:
    explicit Api(std::vector<engine::City> cities) : cities_(std::move(cities)) {
        if (cities_.empty()) throw Error(ErrorCategory::InvalidInput, "no cities loaded");
        for (const auto& c : cities_) latest_[c.id] = report::to_json(engine::valuate(c, {}));
    }

    const std::vector<engine::City>& cities() const { return cities_; }

    Reply health() const { return Reply{200, {{"status", "ok"}}}; }

    Reply list_cities() const {
        json out = json::array();
        for (const auto& c : cities_) {
            out.push_back({{"id", c.id},
                           {"name", c.name},
                           {"profile", c.profile.name},
                           {"representative_day", gtfs::format_date(c.day)},
                           {"model_hash", c.model.content_hash},
                           {"routes", c.archive.selected_routes.size()}});
        }
        return Reply{200, {{"cities", std::move(out)}}};
    }

    Reply list_routes(const std::string& city_id) const {
        const auto* city = find(city_id);
        if (!city) return error_reply(404, "UnknownCity", "unknown city '" + city_id + "'");
        json out = json::array();
        for (const auto& r : engine::list_routes(*city)) {
            out.push_back({{"route_id", r.route_id},
                           {"short_name", r.short_name},
                           {"long_name", r.long_name},
                           {"clusters", r.clusters},
                           {"trips", r.trips}});
        }
        return Reply{200, {{"city", city->id}, {"routes", std::move(out)}}};
    }

    Reply latest_report(const std::string& city_id) const {
        const std::string id = city_id.empty() ? cities_.front().id : city_id;
        auto it = latest_.find(id);
        if (it == latest_.end()) return error_reply(404, "UnknownCity", "unknown city '" + id + "'");
        return Reply{200, it->second};
    }

    Reply valuate(const std::string& body) const {
        json req;
        try {
            req = json::parse(body.empty() ? std::string("{}") : body);
        } catch (const json::exception& e) {
            return error_reply(400, "MalformedRequest", std::string("request body is not valid JSON: ") + e.what());
        }
        if (!req.is_object()) return error_reply(400, "MalformedRequest", "request body must be a JSON object");

        std::string city_id = cities_.front().id;
        std::vector<std::string> route_ids;
        json overrides = json::object();
        for (const auto& [key, v] : req.items()) {
            if (key == "city") {
                if (!v.is_string()) return error_reply(400, "MalformedRequest", "city must be a string");
                city_id = v.get<std::string>();
            } else if (key == "route_ids") {
                if (!v.is_array()) return error_reply(400, "MalformedRequest", "route_ids must be an array");
                for (const auto& id : v) {
                    if (!id.is_string()) return error_reply(400, "MalformedRequest", "route_ids must hold strings");
                    route_ids.push_back(id.get<std::string>());
                }
            } else if (key == "overrides") {
                if (!v.is_object() && !v.is_null()) {
                    return error_reply(400, "MalformedRequest", "overrides must be an object");
                }
                if (v.is_object()) overrides = v;
            } else {
                return error_reply(400, "MalformedRequest", "unknown request field '" + key + "'");
            }
        }

        const auto* city = find(city_id);
        if (!city) return error_reply(404, "UnknownCity", "unknown city '" + city_id + "'");
        if (auto unknown = engine::unknown_routes(*city, route_ids); !unknown.empty()) {
            auto reply = error_reply(404, to_string(ErrorCategory::UnknownRouteName), "unknown route ids");
            reply.body["unknown_route_ids"] = unknown;
            return reply;
        }
        try {
            return Reply{200, report::to_json(engine::valuate(*city, route_ids, overrides))};
        } catch (const Error& e) {
            switch (e.category()) {
                case ErrorCategory::InvalidParameter:
                case ErrorCategory::NonPositiveFE:
                case ErrorCategory::NonPositiveSpeed:
                case ErrorCategory::AllZeroImpacts: {
                    auto reply = error_reply(422, to_string(e.category()), e.detail());
                    if (auto f = field_of(e.detail()); !f.empty()) reply.body["field"] = f;
                    return reply;
                }
                default:
                    return error_reply(500, to_string(e.category()), e.detail());
            }
        }
    }

private:
    const engine::City* find(const std::string& id) const {
        for (const auto& c : cities_) {
            if (c.id == id) return &c;
        }
        return nullptr;
    }

    std::vector<engine::City> cities_;
    std::map<std::string, json> latest_;
};

inline void send(httplib::Response& res, const Reply& reply) {
    res.status = reply.status;
    res.set_content(reply.body.dump(), "application/json");
}

// Registers the /api routes on an httplib server.
inline void mount(httplib::Server& server, const Api& api, const std::string& cors_origin = "*") {
    server.set_default_headers({{"Access-Control-Allow-Origin", cors_origin}});
    server.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) {
        res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
        res.set_header("Access-Control-Allow-Headers", "Content-Type");
        res.status = 204;
    });
    server.Get("/api/health", [&api](const httplib::Request&, httplib::Response& res) { send(res, api.health()); });
    server.Get("/api/cities", [&api](const httplib::Request&, httplib::Response& res) {
        send(res, api.list_cities());
    });
    server.Get(R"(/api/cities/([^/]+)/routes)", [&api](const httplib::Request& req, httplib::Response& res) {
        send(res, api.list_routes(req.matches[1]));
    });
    server.Get("/api/report/latest", [&api](const httplib::Request& req, httplib::Response& res) {
        send(res, api.latest_report(req.get_param_value("city")));
    });
    server.Post("/api/valuate", [&api](const httplib::Request& req, httplib::Response& res) {
        send(res, api.valuate(req.body));
    });
}

}  // namespace electrify::service
