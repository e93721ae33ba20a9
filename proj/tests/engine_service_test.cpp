#include "electrify/engine.hpp"
#include "electrify/service.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <future>
#include <thread>

#include "test_util.hpp"

using namespace electrify;
using testutil::TempDir;
using json = nlohmann::ordered_json;

namespace {

const engine::City& mini_city() {
    static const engine::City city = engine::load_city(engine::load_config(testutil::fixtures() / "mini_config.json"));
    return city;
}

json oracle() { return io::read_json(testutil::test_data_dir() / "mini_oracle.json"); }

double route_value(const json& route, const std::string& column) {
    for (const auto& c : report::csv_columns()) {
        if (c.name == column) return (*c.section ? route.at(c.section).at(c.key) : route.at(c.key)).get<double>();
    }
    ADD_FAILURE() << "no column " << column;
    return 0;
}

// Runs the API on an ephemeral port for the lifetime of the fixture.
class HttpService : public ::testing::Test {
protected:
    static void SetUpTestSuite() {
        api_ = new service::Api({mini_city()});
        server_ = new httplib::Server;
        service::mount(*server_, *api_, "http://dash.example");
        port_ = server_->bind_to_any_port("127.0.0.1");
        thread_ = new std::thread([] { server_->listen_after_bind(); });
        server_->wait_until_ready();
    }
    static void TearDownTestSuite() {
        server_->stop();
        thread_->join();
        delete thread_;
        delete server_;
        delete api_;
    }
    httplib::Client client() const { return httplib::Client("127.0.0.1", port_); }

    static service::Api* api_;
    static httplib::Server* server_;
    static std::thread* thread_;
    static int port_;
};
service::Api* HttpService::api_ = nullptr;
httplib::Server* HttpService::server_ = nullptr;
std::thread* HttpService::thread_ = nullptr;
int HttpService::port_ = 0;

}  // namespace

TEST(Config, ResolvesRelativePaths) {
    auto cfg = engine::load_config(testutil::fixtures() / "mini_config.json");
    EXPECT_EQ(cfg.city_id, "mini");
    EXPECT_EQ(*cfg.feed, testutil::fixtures() / "mini" / "feed.json");
    EXPECT_EQ(cfg.training.samples, 2000u);
    EXPECT_EQ(cfg.serve.port, 8080);
}

TEST(Config, RejectsUnknownKeysAndBadOverrides) {
    EXPECT_THROW(engine::config_from_json(json{{"fed", "x"}}), Error);
    EXPECT_THROW(engine::config_from_json(json{{"training", {{"sample", 3}}}}), Error);
    EXPECT_THROW(engine::config_from_json(json{{"seed", "seven"}}), Error);
    EXPECT_THROW(engine::config_from_json(json{{"profile", "paris"}}), Error);
    EXPECT_THROW(engine::config_from_json(json::parse(R"({"overrides": {"tco": {"discount_rate": -1}}})")), Error);
    auto c = engine::config_from_json(json::parse(R"({"overrides": {"tco": {"fuel_price_usd_per_gal": 4}}})"));
    EXPECT_EQ(c.parameters().tco.fuel_price_usd_per_gal, 4.0);
}

TEST(Config, EnvironmentFallback) {
    TempDir dir;
    testutil::write_file(dir / "c.json", R"({"city": {"id": "env"}, "feed": "f.json"})");
    ::setenv("ELECTRIFY_CONFIG", (dir / "c.json").c_str(), 1);
    auto from_env = engine::resolve_config(std::nullopt);
    auto explicit_cfg = engine::resolve_config(testutil::fixtures() / "mini_config.json");
    ::unsetenv("ELECTRIFY_CONFIG");
    EXPECT_EQ(from_env.city_id, "env");
    EXPECT_EQ(*from_env.feed, dir / "f.json");
    EXPECT_EQ(explicit_cfg.city_id, "mini");
    EXPECT_EQ(engine::resolve_config(std::nullopt).city_id, "default");
}

TEST(Engine, MatchesIndependentRecomputation) {
    auto want = oracle();
    auto j = report::to_json(engine::valuate(mini_city(), {}));
    EXPECT_EQ(j["metadata"]["representative_day"], want["representative_day"]);
    for (const auto& route : j["routes"]) {
        const auto& w = want["routes"].at(route["route_id"].get<std::string>());
        EXPECT_EQ(route["fleet"]["buses_total"], w["buses_total"]);
        EXPECT_EQ(route["fleet"]["chargers"], w["chargers"]);
        EXPECT_EQ(route["fleet"]["feasible"], w["feasible"]);
        for (const auto& [key, value] : w.items()) {
            if (!value.is_number_float()) continue;
            const double expected = value.get<double>();
            EXPECT_NEAR(route_value(route, key), expected, 1e-9 * std::max(1.0, std::abs(expected))) << key;
        }
    }
}

TEST(Engine, DeterministicAndOrdered) {
    auto a = report::dump(report::to_json(engine::valuate(mini_city(), {"202", "201"})));
    auto b = report::dump(report::to_json(engine::valuate(mini_city(), {"201", "202", "201"})));
    EXPECT_EQ(a, b);
    auto j = json::parse(a);
    EXPECT_EQ(j["routes"][0]["route_id"], "201");
    EXPECT_EQ(j["routes"][1]["route_id"], "202");
}

TEST(Engine, UnknownRoutesAreListed) {
    try {
        engine::valuate(mini_city(), {"201", "999", "T", "999"});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.category(), ErrorCategory::UnknownRouteName);
        EXPECT_EQ(e.detail(), "unknown route ids: 999, T");
    }
}

TEST(Engine, OverridesAreWhatIfOnly) {
    const auto before = report::dump(report::to_json(engine::valuate(mini_city(), {})));
    auto base = engine::valuate(mini_city(), {});
    auto pricier = engine::valuate(mini_city(), {}, json::parse(R"({"tco": {"fuel_price_usd_per_gal": 5.8}})"));
    for (std::size_t i = 0; i < base.valuations.size(); ++i) {
        EXPECT_GT(pricier.valuations[i].diesel.tco_npv_usd, base.valuations[i].diesel.tco_npv_usd);
        EXPECT_EQ(pricier.valuations[i].electric.tco_npv_usd, base.valuations[i].electric.tco_npv_usd);
    }
    EXPECT_EQ(pricier.overrides["tco"]["fuel_price_usd_per_gal"], 5.8);
    EXPECT_EQ(report::dump(report::to_json(engine::valuate(mini_city(), {}))), before);
}

TEST(Engine, ListRoutes) {
    auto routes = engine::list_routes(mini_city());
    ASSERT_EQ(routes.size(), 2u);
    EXPECT_EQ(routes[0].route_id, "201");
    EXPECT_GT(routes[0].trips, 0u);
}

TEST(Api, ValuateStatusCodes) {
    service::Api api({mini_city()});
    EXPECT_EQ(api.valuate(R"({"route_ids": ["201"]})").status, 200);
    EXPECT_EQ(api.valuate("{not json").status, 400);
    EXPECT_EQ(api.valuate("[1]").status, 400);
    EXPECT_EQ(api.valuate(R"({"routes": ["201"]})").status, 400);
    EXPECT_EQ(api.valuate(R"({"route_ids": "201"})").status, 400);
    EXPECT_EQ(api.valuate(R"({"city": "atlantis"})").status, 404);

    auto missing = api.valuate(R"({"route_ids": ["201", "nope"]})");
    EXPECT_EQ(missing.status, 404);
    EXPECT_EQ(missing.body["unknown_route_ids"], json::array({"nope"}));

    auto bad = api.valuate(R"({"overrides": {"tco": {"energy_price_usd_per_kwh": -0.1}}})");
    EXPECT_EQ(bad.status, 422);
    EXPECT_EQ(bad.body["error"], "InvalidParameter");
    EXPECT_EQ(bad.body["field"], "tco.energy_price_usd_per_kwh");
    EXPECT_EQ(api.valuate(R"({"overrides": {"tco": {"nope": 1}}})").body["field"], "tco.nope");
}

TEST(Api, EmptyBodyValuesEverySelectedRoute) {
    service::Api api({mini_city()});
    auto r = api.valuate("");
    ASSERT_EQ(r.status, 200);
    EXPECT_EQ(r.body["routes"].size(), 2u);
    EXPECT_EQ(api.latest_report("").body, r.body);
    EXPECT_EQ(api.latest_report("mini").status, 200);
    EXPECT_EQ(api.latest_report("x").status, 404);
}

TEST_F(HttpService, HealthCitiesRoutes) {
    auto c = client();
    auto health = c.Get("/api/health");
    ASSERT_TRUE(health);
    EXPECT_EQ(health->status, 200);
    EXPECT_EQ(health->get_header_value("Access-Control-Allow-Origin"), "http://dash.example");
    auto cities = json::parse(c.Get("/api/cities")->body);
    EXPECT_EQ(cities["cities"][0]["id"], "mini");
    auto routes = c.Get("/api/cities/mini/routes");
    EXPECT_EQ(json::parse(routes->body)["routes"].size(), 2u);
    EXPECT_EQ(c.Get("/api/cities/nowhere/routes")->status, 404);
    auto latest = c.Get("/api/report/latest?city=mini");
    EXPECT_EQ(latest->status, 200);
    EXPECT_EQ(json::parse(latest->body)["format"], "electrify-report");
    auto pre = c.Options("/api/valuate");
    EXPECT_EQ(pre->status, 204);
}

TEST_F(HttpService, ValuateMatchesEngine) {
    auto res = client().Post("/api/valuate", R"({"route_ids": ["201"]})", "application/json");
    ASSERT_TRUE(res);
    ASSERT_EQ(res->status, 200);
    EXPECT_EQ(json::parse(res->body), report::to_json(engine::valuate(mini_city(), {"201"})));
    auto bad = client().Post("/api/valuate", R"({"overrides": {"tco": {"discount_rate": -2}}})", "application/json");
    EXPECT_EQ(bad->status, 422);
    EXPECT_EQ(json::parse(bad->body)["field"], "tco.discount_rate");
    auto unknown = client().Post("/api/valuate", R"({"route_ids": ["X9"]})", "application/json");
    EXPECT_EQ(unknown->status, 404);
    EXPECT_EQ(json::parse(unknown->body)["unknown_route_ids"][0], "X9");
    EXPECT_EQ(client().Post("/api/valuate", "{{", "application/json")->status, 400);
}

TEST_F(HttpService, ConcurrentIdenticalRequests) {
    const std::string body = R"({"route_ids": ["202", "201"], "overrides": {"tco": {"fuel_price_usd_per_gal": 3.1}}})";
    std::vector<std::future<std::string>> jobs;
    for (int i = 0; i < 12; ++i) {
        jobs.push_back(std::async(std::launch::async, [&] {
            auto res = client().Post("/api/valuate", body, "application/json");
            return res && res->status == 200 ? res->body : std::string("failed");
        }));
    }
    std::vector<std::string> bodies;
    for (auto& j : jobs) bodies.push_back(j.get());
    for (const auto& b : bodies) EXPECT_EQ(b, bodies.front());
    EXPECT_NE(bodies.front(), "failed");
}
