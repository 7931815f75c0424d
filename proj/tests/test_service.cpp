#include <gtest/gtest.h>

#include <chrono>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "oracles.hpp"
#include "tinylca/service.hpp"

namespace tinylca {
namespace {

using nlohmann::json;

const WhatIfService& service() {
    static const WhatIfService svc(load_dataset(oracle::data_dir()));
    return svc;
}

struct Reply {
    int status;
    json body;
};

Reply post(const std::string& path, const json& body) {
    const auto r = service().handle("POST", path, body.dump());
    return {r.status, json::parse(r.body)};
}

TEST(Service, ProfilesSortedWithSchemaVersion) {
    const auto r = service().handle("GET", "/api/v1/profiles", "");
    ASSERT_EQ(r.status, 200);
    EXPECT_EQ(r.content_type, "application/json");
    const json doc = json::parse(r.body);
    EXPECT_EQ(doc["schema_version"], 1);
    std::vector<std::string> names;
    for (const auto& p : doc["profiles"]) names.push_back(p["name"]);
    EXPECT_EQ(names, (std::vector<std::string>{"high-cost", "low-cost", "medium-cost"}));
}

TEST(Service, EmptyProfilesDirectory) {
    Dataset d = load_dataset(oracle::data_dir());
    d.profiles.clear();
    const WhatIfService svc(std::move(d));
    const auto r = svc.handle("GET", "/api/v1/profiles", "");
    EXPECT_EQ(r.status, 200);
    EXPECT_TRUE(json::parse(r.body)["profiles"].empty());
}

TEST(Service, FootprintHighBound) {
    const auto r = post("/api/v1/footprint", {{"profile", "high-cost"}, {"bound", "high"}});
    ASSERT_EQ(r.status, 200);
    EXPECT_NEAR(r.body["total_g"].get<double>(), 7060, 7060 * 0.005);
    EXPECT_EQ(r.body["resolved"]["operational"]["lifetime_years"], 3.0);
}

TEST(Service, FootprintLifetimeOverride) {
    const auto r = post("/api/v1/footprint", {{"profile", "high-cost"}, {"operational", {{"lifetime_years", 10}}}});
    ASSERT_EQ(r.status, 200);
    EXPECT_NEAR(r.body["operational_g"].get<double>(), oracle::default_operational_g() * 10 / 3, 1e-9);
    EXPECT_NEAR(r.body["operational_g"].get<double>(), 41.6, 0.05);
}

TEST(Service, FootprintInlineDevice) {
    const json device = {{"name", "mine"},
                         {"components",
                          {{{"block", "PowerSupply"}, {"label", "li-po-500mah"}},
                           {{"block", "Sensing"}, {"label", "custom"}, {"low_g", 1}, {"typical_g", 2}, {"high_g", 3}}}}};
    const auto r = post("/api/v1/footprint", {{"device", device}});
    ASSERT_EQ(r.status, 200) << r.body.dump();
    EXPECT_NEAR(r.body["embodied_g"].get<double>(), 302.0, 1e-9);
    EXPECT_EQ(r.body["resolved"]["profile"], "mine");
}

TEST(Service, ValidationErrors) {
    const auto malformed = service().handle("POST", "/api/v1/footprint", "{not json");
    EXPECT_EQ(malformed.status, 400);
    auto r = post("/api/v1/footprint", {{"profile", "high-cost"}, {"bound", "huge"}});
    EXPECT_EQ(r.status, 400);
    EXPECT_EQ(r.body["details"][0]["field"], "/bound");
    r = post("/api/v1/footprint", {{"profile", "high-cost"}, {"operational", {{"duty_factor", 3}}}});
    EXPECT_EQ(r.status, 400);
    EXPECT_EQ(r.body["details"][0]["field"], "/operational");
    r = post("/api/v1/footprint", {{"profile", "high-cost"}, {"colour", "red"}});
    EXPECT_EQ(r.status, 400);
    EXPECT_EQ(r.body["details"][0]["field"], "/colour");
    r = post("/api/v1/footprint", json::object());
    EXPECT_EQ(r.status, 400);
    r = post("/api/v1/footprint", {{"device", {{"components", {{{"block", "PCB"}, {"label", "nope"}}}}}}});
    EXPECT_EQ(r.status, 400);
    EXPECT_EQ(r.body["details"][0]["field"].get<std::string>().rfind("/device", 0), 0u);
}

TEST(Service, UnknownProfileIs404) {
    const auto r = post("/api/v1/footprint", {{"profile", "nope"}});
    EXPECT_EQ(r.status, 404);
    EXPECT_NE(r.body["details"][0]["message"].get<std::string>().find("high-cost"), std::string::npos);
    EXPECT_EQ(post("/api/v1/fleet/net", {{"profile", "nope"}}).status, 404);
}

TEST(Service, RoutingAndMethods) {
    EXPECT_EQ(service().handle("GET", "/api/v1/nothing", "").status, 404);
    EXPECT_EQ(service().handle("POST", "/api/v1/profiles", "").status, 405);
    EXPECT_EQ(service().handle("GET", "/api/v1/footprint", "").status, 405);
}

TEST(Service, FleetBaselineAndZeroReductions) {
    const auto base = post("/api/v1/fleet/breakeven", {{"reductions", {{"residential", 0.2}}}});
    ASSERT_EQ(base.status, 200);
    EXPECT_NEAR(base.body["break_even_rate"].get<double>(), 0.0063, 0.0001);
    const auto none = post("/api/v1/fleet/net", json::object());
    ASSERT_EQ(none.status, 200);
    EXPECT_NEAR(none.body["net_impact_mt"].get<double>(), 1765, 1765 * 0.005);
    const auto unknown = post("/api/v1/fleet/net", {{"reductions", {{"mars", 0.2}}}});
    EXPECT_EQ(unknown.status, 404);
    const auto bad = post("/api/v1/fleet/net", {{"reductions", {{"residential", "a lot"}}}});
    EXPECT_EQ(bad.status, 400);
    EXPECT_EQ(bad.body["details"][0]["field"], "/reductions/residential");
}

TEST(Service, ProjectNeverIs422) {
    const auto r = post("/api/v1/project", {{"model", {{"family", "linear"}, {"base_year", 2023}, {"base_count", 15}, {"slope", 0}}},
                                            {"thresholds", {1000}}});
    EXPECT_EQ(r.status, 422);
    EXPECT_EQ(r.body["error"], "never");
    EXPECT_EQ(r.body["reason"], "threshold_unreachable");
    const auto ok = post("/api/v1/project", {{"model", "linear"}});
    ASSERT_EQ(ok.status, 200);
    EXPECT_EQ(ok.body["crossings"][2]["year"], 2144);
    const auto fitted = post("/api/v1/project", {{"fit", {{"family", "exponential"}, {"points", {{2032, 50}, {2043, 250}}}}},
                                                 {"thresholds", {250}}});
    ASSERT_EQ(fitted.status, 200) << fitted.body.dump();
    EXPECT_EQ(fitted.body["crossings"][0]["year"], 2043);
    EXPECT_EQ(post("/api/v1/project", {{"model", {{"family", "cubic"}}}}).status, 400);
}

TEST(Service, CompareEndpoint) {
    const auto r = post("/api/v1/compare", {{"subject", "high-cost"}, {"reference", "apple-watch-s7"}});
    ASSERT_EQ(r.status, 200);
    EXPECT_NEAR(r.body["ratio"].get<double>(), 5.0, 0.1);
    EXPECT_EQ(post("/api/v1/compare", {{"subject", "high-cost"}}).status, 400);
}

TEST(Service, StatelessUnderConcurrency) {
    const std::string body = R"({"reductions": {"residential": 0.2}, "horizon_years": 7})";
    const auto expected = service().handle("POST", "/api/v1/fleet/net", body).body;
    std::vector<std::thread> threads;
    std::atomic<int> mismatches{0};
    for (int t = 0; t < 8; ++t) {
        threads.emplace_back([&, t] {
            for (int i = 0; i < 50; ++i) {
                (void)service().handle("POST", "/api/v1/footprint", R"({"profile": "low-cost"})");
                if (service().handle("POST", "/api/v1/fleet/net", body).body != expected) ++mismatches;
                if (t % 2) (void)service().handle("POST", "/api/v1/project", R"({"model": "exponential"})");
            }
        });
    }
    for (auto& th : threads) th.join();
    EXPECT_EQ(mismatches, 0);
}

TEST(Service, RespondsWellUnderFiftyMilliseconds) {
    const std::vector<std::pair<std::string, std::string>> calls{
        {"/api/v1/footprint", R"({"profile": "high-cost"})"},
        {"/api/v1/fleet/net", R"({"reduce_all": 0.2})"},
        {"/api/v1/fleet/breakeven", R"({"reductions": {"residential": 0.2}})"},
        {"/api/v1/project", R"({"thresholds": [50, 100, 250, 1000]})"}};
    for (const auto& [path, body] : calls) {
        const auto start = std::chrono::steady_clock::now();
        (void)service().handle("POST", path, body);
        const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        EXPECT_LT(ms, 50.0) << path;
    }
}

TEST(HttpServer, ServesOverLoopback) {
    ServeOptions opt;
    opt.port = 0;
    opt.cors_origin = "http://localhost:5173";
    HttpServer server(service(), opt);
    server.start();
    ASSERT_GT(server.port(), 0);
    httplib::Client client("127.0.0.1", server.port());
    const auto profiles = client.Get("/api/v1/profiles");
    ASSERT_TRUE(profiles);
    EXPECT_EQ(profiles->status, 200);
    EXPECT_EQ(profiles->get_header_value("Access-Control-Allow-Origin"), "http://localhost:5173");
    const auto fp = client.Post("/api/v1/footprint", R"({"profile":"high-cost","bound":"high"})", "application/json");
    ASSERT_TRUE(fp);
    EXPECT_EQ(fp->status, 200);
    EXPECT_EQ(fp->body, service().handle("POST", "/api/v1/footprint", R"({"profile":"high-cost","bound":"high"})").body);
    const auto never = client.Post("/api/v1/project", R"({"model":{"family":"linear","base_year":2023,"base_count":15,"slope":0},"thresholds":[50]})",
                                   "application/json");
    ASSERT_TRUE(never);
    EXPECT_EQ(never->status, 422);
    server.stop();
}

TEST(HttpServer, NoCorsHeaderByDefaultAndStaticMount) {
    const auto dir = std::filesystem::temp_directory_path() / "tinylca-static-test";
    std::filesystem::create_directories(dir);
    std::ofstream(dir / "index.html") << "<html>ui</html>";
    ServeOptions opt;
    opt.port = 0;
    opt.static_dir = dir;
    HttpServer server(service(), opt);
    server.start();
    httplib::Client client("127.0.0.1", server.port());
    const auto r = client.Get("/api/v1/profiles");
    ASSERT_TRUE(r);
    EXPECT_FALSE(r->has_header("Access-Control-Allow-Origin"));
    const auto page = client.Get("/index.html");
    ASSERT_TRUE(page);
    EXPECT_EQ(page->body, "<html>ui</html>");
    server.stop();
    std::filesystem::remove_all(dir);
}

TEST(HttpServer, BusyPortThrows) {
    ServeOptions opt;
    opt.port = 0;
    HttpServer first(service(), opt);
    first.start();
    ServeOptions clash;
    clash.port = first.port();
    HttpServer second(service(), clash);
    EXPECT_THROW(second.start(), Error);
    first.stop();
}

}  // namespace
}  // namespace tinylca
