// Command-line driver: ingest -> enrich -> train -> valuate, plus report
// re-emission, the HTTP service and parameter inspection.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <httplib.h>

#include "electrify/drive.hpp"
#include "electrify/engine.hpp"
#include "electrify/error.hpp"
#include "electrify/geo.hpp"
#include "electrify/gtfs.hpp"
#include "electrify/io.hpp"
#include "electrify/params.hpp"
#include "electrify/report.hpp"
#include "electrify/service.hpp"

namespace fs = std::filesystem;
using namespace electrify;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void log(const std::string& msg) { std::cerr << "[electrify] " << msg << '\n'; }

template <class T>
T require(const std::optional<T>& flag, const std::optional<T>& from_config, const char* name) {
    if (flag) return *flag;
    if (from_config) return *from_config;
    throw UsageError(std::string("--") + name + " is required");
}

int run_ingest(const fs::path& gtfs_dir, const fs::path& routes_file, const fs::path& out) {
    auto feed = gtfs::parse_feed(gtfs_dir);
    auto wanted = gtfs::read_allow_list(routes_file);
    auto selection = gtfs::select_routes(feed, gtfs::SelectionCriteria{wanted});
    for (const auto& w : feed.warnings) log("warning: " + w);
    for (const auto& w : selection.warnings) log("warning: " + w);
    io::FeedArchive archive{std::move(feed), selection.route_ids, {}};
    io::write_archive(out, archive);
    log("ingest: " + std::to_string(archive.feed.trips.size()) + " trips, " +
        std::to_string(archive.selected_routes.size()) + " routes selected -> " + out.string());
    return 0;
}

int run_enrich(const fs::path& feed_path, const fs::path& distances, const fs::path& elevations,
               const std::string& provider_name, const fs::path& out) {
    auto archive = io::read_archive(feed_path);
    const auto pairs = io::required_pairs(archive);
    std::unique_ptr<geo::GeoProvider> provider;
    if (provider_name == "offline") {
        provider = std::make_unique<geo::OfflineProvider>();
    } else if (provider_name == "cache") {
        provider = std::make_unique<geo::CacheOnlyProvider>();
    } else {
        throw UsageError("--provider must be 'offline' or 'cache'");
    }
    auto tables = geo::fetch_and_cache(*provider, pairs, archive.feed.stops, geo::CachePaths{distances, elevations});
    io::enrich_archive(archive, tables.distances, tables.elevations);
    io::write_archive(out, archive);
    std::size_t clusters = 0;
    for (const auto& [r, cs] : archive.enrichment) clusters += cs.size();
    log("enrich: " + std::to_string(pairs.size()) + " stop pairs, " + std::to_string(clusters) + " clusters -> " +
        out.string());
    return 0;
}

int run_train(const engine::RunConfig& cfg, const fs::path& feed_path, const fs::path& cycle_path,
              std::size_t samples, std::uint64_t seed, const fs::path& out) {
    auto archive = io::read_archive(feed_path);
    auto cycle = drive::load_drive_cycle(cycle_path);
    const auto t0 = std::chrono::steady_clock::now();
    auto model = engine::train(archive, cycle, cfg.parameters(), samples, seed, cfg.training);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    io::write_model(out, model);
    std::ostringstream msg;
    msg << "train: " << samples << " samples, seed " << seed << ", " << model.sweeps << " sweeps, train RMSE "
        << model.train_rmse;
    if (model.test_rmse) msg << ", test RMSE " << *model.test_rmse;
    msg << ", " << secs << " s -> " << out.string() << " (" << model.content_hash << ")";
    log(msg.str());
    return 0;
}

engine::City city_from(const engine::RunConfig& cfg, const fs::path& feed_path, const fs::path& model_path,
                       std::optional<fs::path> geo_dir = std::nullopt) {
    auto archive = io::read_archive(feed_path);
    if (geo_dir) {
        io::enrich_archive(archive, geo::read_distances(*geo_dir / "distances.csv"),
                           geo::read_elevations(*geo_dir / "elevations.csv"));
    }
    return engine::make_city(cfg.city_id, cfg.city_name, std::move(archive), io::read_model(model_path),
                             cfg.parameters());
}

int run_fleet(const engine::City& city, const std::vector<std::string>& routes, const fs::path& out) {
    auto r = engine::valuate(city, routes);
    report::json j;
    j["format"] = "electrify-fleet";
    j["version"] = 1;
    j["representative_day"] = r.representative_day;
    j["routes"] = report::json::array();
    for (const auto& rv : r.valuations) {
        auto f = report::to_json(rv.fleet);
        j["routes"].push_back({{"route_id", rv.route_id}, {"short_name", rv.short_name}, {"fleet", std::move(f)}});
    }
    io::write_json(out, j);
    log("fleet: " + std::to_string(r.valuations.size()) + " routes -> " + out.string());
    return 0;
}

int run_valuate(const engine::City& city, const std::vector<std::string>& routes, const report::json& overrides,
                const fs::path& out_dir) {
    auto r = engine::valuate(city, routes, overrides);
    report::emit_report(r, out_dir);
    log("valuate: " + std::to_string(r.valuations.size()) + " routes, representative day " + r.representative_day +
        " -> " + (out_dir / "report.json").string());
    return 0;
}

int run_report(const fs::path& in, const fs::path& out_dir) {
    report::emit_report(report::read_report(in), out_dir);
    log("report: " + in.string() + " -> " + out_dir.string());
    return 0;
}

int run_serve(const std::vector<engine::RunConfig>& configs, const std::string& host, int port,
              const std::string& cors_origin) {
    std::vector<engine::City> cities;
    for (const auto& cfg : configs) cities.push_back(engine::load_city(cfg));
    service::Api api(std::move(cities));
    httplib::Server server;
    service::mount(server, api, cors_origin);
    log("serve: listening on http://" + host + ":" + std::to_string(port));
    if (!server.listen(host, port)) throw Error(ErrorCategory::InvalidInput, "cannot listen on " + host + ":" +
                                                                                std::to_string(port));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Electric bus fleet valuation"};
    app.require_subcommand(1);
    app.fallthrough();

    std::optional<fs::path> config_path;
    app.add_option("--config", config_path, "Run configuration (JSON); falls back to $ELECTRIFY_CONFIG");

    // ingest
    auto* ingest = app.add_subcommand("ingest", "Parse a GTFS directory and select routes");
    fs::path gtfs_dir, routes_file, ingest_out;
    ingest->add_option("--gtfs", gtfs_dir, "GTFS directory")->required();
    ingest->add_option("--routes", routes_file, "Route allow-list file")->required();
    ingest->add_option("--out", ingest_out, "Feed archive to write")->required();

    // enrich
    auto* enrich = app.add_subcommand("enrich", "Attach distances, elevations and grades to the feed archive");
    std::optional<fs::path> enrich_feed, distances, elevations, enrich_out;
    std::string provider = "cache";
    enrich->add_option("--feed", enrich_feed, "Feed archive");
    enrich->add_option("--distances", distances, "Distance cache CSV");
    enrich->add_option("--elevations", elevations, "Elevation cache CSV");
    enrich->add_option("--provider", provider, "Lookup for entries missing from the caches: cache or offline");
    enrich->add_option("--out", enrich_out, "Output archive (defaults to --feed)");

    // train
    auto* train = app.add_subcommand("train", "Fit the energy-efficiency surrogate");
    std::optional<fs::path> train_feed, cycle, train_out;
    std::optional<std::size_t> samples;
    std::optional<std::uint64_t> seed;
    train->add_option("--feed", train_feed, "Enriched feed archive");
    train->add_option("--cycle", cycle, "Drive cycle CSV");
    train->add_option("--samples", samples, "Monte-Carlo samples (default 20000)");
    train->add_option("--seed", seed, "Random seed");
    train->add_option("--out", train_out, "Model file to write");

    // fleet
    auto* fleet_cmd = app.add_subcommand("fleet", "Estimate buses, chargers and range feasibility");
    std::optional<fs::path> fleet_feed, geo_dir, fleet_model, fleet_out;
    std::vector<std::string> fleet_routes;
    fleet_cmd->add_option("--feed", fleet_feed, "Feed archive");
    fleet_cmd->add_option("--geo", geo_dir, "Directory holding distances.csv and elevations.csv");
    fleet_cmd->add_option("--model", fleet_model, "Surrogate model file");
    fleet_cmd->add_option("--route", fleet_routes, "Route id (repeatable; default all selected)");
    fleet_cmd->add_option("--out", fleet_out, "Fleet JSON to write")->required();

    // valuate
    auto* valuate = app.add_subcommand("valuate", "Fleet, TCO, emissions, health and analysis for routes");
    std::optional<fs::path> val_feed, val_model;
    std::optional<std::string> val_profile;
    std::optional<fs::path> overrides_file;
    fs::path val_out = "out";
    std::vector<std::string> val_routes;
    valuate->add_option("--feed", val_feed, "Enriched feed archive");
    valuate->add_option("--model", val_model, "Surrogate model file");
    valuate->add_option("--profile", val_profile, "Parameter profile: boston or milan");
    valuate->add_option("--overrides", overrides_file, "JSON file of parameter overrides");
    valuate->add_option("--route", val_routes, "Route id (repeatable; default all selected)");
    valuate->add_option("--out", val_out, "Output directory for report.json and report.csv");

    // report
    auto* report_cmd = app.add_subcommand("report", "Re-emit report.json and report.csv from a report");
    fs::path report_in, report_out;
    report_cmd->add_option("--in", report_in, "Existing report.json")->required();
    report_cmd->add_option("--out", report_out, "Output directory")->required();

    // serve
    auto* serve = app.add_subcommand("serve", "Run the JSON HTTP service");
    std::vector<fs::path> city_configs;
    std::optional<std::string> host;
    std::optional<int> port;
    serve->add_option("--city", city_configs, "Additional city configuration (repeatable)");
    serve->add_option("--host", host, "Bind address");
    serve->add_option("--port", port, "Port");

    // params
    auto* params_cmd = app.add_subcommand("params", "Inspect parameter profiles");
    params_cmd->require_subcommand(1);
    auto* show = params_cmd->add_subcommand("show", "Print a profile with config overrides applied");
    std::optional<std::string> show_profile;
    show->add_option("--profile", show_profile, "boston or milan");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*ingest) return run_ingest(gtfs_dir, routes_file, ingest_out);

        auto cfg = engine::resolve_config(config_path);
        if (*enrich) {
            auto feed = require(enrich_feed, cfg.feed, "feed");
            auto dist = require(distances, cfg.distances, "distances");
            return run_enrich(feed, dist, require(elevations, cfg.elevations, "elevations"), provider,
                              enrich_out.value_or(feed));
        }
        if (*train) {
            auto feed = require(train_feed, cfg.feed, "feed");
            auto cycle_path = require(cycle, cfg.cycle, "cycle");
            return run_train(cfg, feed, cycle_path, samples.value_or(cfg.training.samples), seed.value_or(cfg.seed),
                             require(train_out, cfg.model, "out"));
        }
        if (*fleet_cmd) {
            auto feed = require(fleet_feed, cfg.feed, "feed");
            auto city = city_from(cfg, feed, require(fleet_model, cfg.model, "model"), geo_dir);
            return run_fleet(city, fleet_routes, *fleet_out);
        }
        if (*valuate) {
            if (val_profile) cfg.profile = *val_profile;
            report::json overrides = report::json::object();
            if (overrides_file) overrides = io::read_json(*overrides_file);
            auto feed = require(val_feed, cfg.feed, "feed");
            auto city = city_from(cfg, feed, require(val_model, cfg.model, "model"));
            return run_valuate(city, val_routes, overrides, val_out);
        }
        if (*report_cmd) return run_report(report_in, report_out);
        if (*serve) {
            std::vector<engine::RunConfig> configs;
            if (cfg.feed || cfg.model) configs.push_back(cfg);
            for (const auto& p : city_configs) configs.push_back(engine::load_config(p));
            if (configs.empty()) throw UsageError("serve needs --config or --city");
            return run_serve(configs, host.value_or(cfg.serve.host), port.value_or(cfg.serve.port),
                             cfg.serve.cors_origin);
        }
        if (*show) {
            auto p = params::apply_overrides(params::profile(show_profile.value_or(cfg.profile)), cfg.overrides);
            std::cout << params::to_json(p).dump(2) << '\n';
            return 0;
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: InvalidInput: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
