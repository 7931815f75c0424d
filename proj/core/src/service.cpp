#include "tinylca/service.hpp"

#include <atomic>
#include <initializer_list>
#include <thread>

#include <fmt/format.h>
#include <httplib.h>

namespace tinylca {

using nlohmann::json;

RequestError::RequestError(std::string field, const std::string& message)
    : Error(fmt::format("{}: {}", field, message)), field_(std::move(field)) {}

namespace {

void require_object(const json& j, const std::string& field) {
    if (!j.is_object()) throw RequestError(field.empty() ? "/" : field, "expected a JSON object");
}

void only_keys(const json& obj, const std::string& field, std::initializer_list<std::string_view> allowed) {
    for (const auto& [key, value] : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw RequestError(field + "/" + key, "unknown field");
        }
    }
}

std::optional<double> opt_number(const json& obj, const std::string& key, const std::string& field) {
    const auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return std::nullopt;
    if (!it->is_number()) throw RequestError(field + "/" + key, "must be a number");
    return it->get<double>();
}

std::optional<std::string> opt_string(const json& obj, const std::string& key, const std::string& field) {
    const auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return std::nullopt;
    if (!it->is_string()) throw RequestError(field + "/" + key, "must be a string");
    return it->get<std::string>();
}

Bound read_bound(const json& obj, Bound fallback) {
    const auto name = opt_string(obj, "bound", "");
    if (!name) return fallback;
    const auto bound = parse_bound(*name);
    if (!bound) throw RequestError("/bound", "must be one of low, typical, high");
    return *bound;
}

OperationalOverrides read_overrides(const json& obj) {
    OperationalOverrides o;
    const auto it = obj.find("operational");
    if (it == obj.end() || it->is_null()) return o;
    require_object(*it, "/operational");
    only_keys(*it, "/operational",
              {"power_mw", "duty_factor", "lifetime_years", "grid_intensity_g_per_kwh", "charge_efficiency"});
    o.power_mw = opt_number(*it, "power_mw", "/operational");
    o.duty_factor = opt_number(*it, "duty_factor", "/operational");
    o.lifetime_years = opt_number(*it, "lifetime_years", "/operational");
    o.grid_intensity_g_per_kwh = opt_number(*it, "grid_intensity_g_per_kwh", "/operational");
    o.charge_efficiency = opt_number(*it, "charge_efficiency", "/operational");
    try {
        OperationalParams probe;
        o.apply(probe);
    } catch (const Error& e) {
        throw RequestError("/operational", e.what());
    }
    return o;
}

json error_body(std::string_view code, const std::string& field, const std::string& message) {
    return {{"schema_version", kSchemaVersion},
            {"error", code},
            {"details", json::array({{{"field", field}, {"message", message}}})}};
}

ServiceResponse json_response(int status, const json& body) { return {status, body.dump(), "application/json"}; }

}  // namespace

FootprintRequest parse_footprint_request(const json& body, const Dataset& data) {
    require_object(body, "");
    only_keys(body, "", {"schema_version", "profile", "device", "bound", "operational", "training_amortized_g"});
    FootprintRequest req;
    req.bound = read_bound(body, Bound::Typical);
    req.overrides = read_overrides(body);
    req.training_g = opt_number(body, "training_amortized_g", "");
    if (req.training_g && *req.training_g < 0.0) throw RequestError("/training_amortized_g", "must be non-negative");
    if (const auto it = body.find("device"); it != body.end()) {
        try {
            json doc = *it;
            if (doc.is_object() && !doc.contains("schema_version")) doc["schema_version"] = kSchemaVersion;
            req.device = parse_device_profile(doc, data.components, "request:/device");
        } catch (const DataError& e) {
            const auto& d = e.report().errors.front();
            throw RequestError("/device" + d.path, d.message);
        }
    } else {
        const auto profile = opt_string(body, "profile", "");
        if (!profile) throw RequestError("/profile", "either 'profile' or 'device' is required");
        req.profile = *profile;
    }
    return req;
}

FleetRequest parse_fleet_request(const json& body) {
    require_object(body, "");
    only_keys(body, "",
              {"schema_version", "profile", "bound", "operational", "per_device_g", "device_count", "horizon_years",
               "reductions", "reduce_all", "global_gt"});
    FleetRequest req;
    if (auto v = opt_string(body, "profile", "")) req.profile = *v;
    req.bound = read_bound(body, Bound::High);
    req.overrides = read_overrides(body);
    req.per_device_g = opt_number(body, "per_device_g", "");
    if (auto v = opt_number(body, "device_count", "")) req.device_count = *v;
    if (auto v = opt_number(body, "horizon_years", "")) req.horizon_years = *v;
    if (auto v = opt_number(body, "global_gt", "")) req.global_gt = *v;
    req.reduce_all = opt_number(body, "reduce_all", "");
    if (const auto it = body.find("reductions"); it != body.end() && !it->is_null()) {
        require_object(*it, "/reductions");
        for (const auto& [sector, rate] : it->items()) {
            if (!rate.is_number()) throw RequestError("/reductions/" + sector, "must be a number");
            req.reductions[sector] = rate.get<double>();
        }
    }
    return req;
}

ProjectRequest parse_project_request(const json& body) {
    require_object(body, "");
    only_keys(body, "", {"schema_version", "model", "fit", "thresholds"});
    ProjectRequest req;
    if (const auto it = body.find("model"); it != body.end()) {
        if (it->is_string()) {
            const auto family = parse_growth_family(it->get<std::string>());
            if (!family) throw RequestError("/model", "must be 'linear', 'exponential', or a model object");
            req.model = *family == GrowthFamily::Linear ? default_linear_model() : default_exponential_model();
        } else {
            require_object(*it, "/model");
            only_keys(*it, "/model", {"family", "base_year", "base_count", "slope", "rate"});
            const auto family_name = opt_string(*it, "family", "/model");
            const auto family = family_name ? parse_growth_family(*family_name) : std::nullopt;
            if (!family) throw RequestError("/model/family", "must be 'linear' or 'exponential'");
            const auto year = opt_number(*it, "base_year", "/model");
            const auto count = opt_number(*it, "base_count", "/model");
            if (!year || std::floor(*year) != *year) throw RequestError("/model/base_year", "integer year required");
            if (!count) throw RequestError("/model/base_count", "required");
            if (*family == GrowthFamily::Linear) {
                const auto slope = opt_number(*it, "slope", "/model");
                if (!slope) throw RequestError("/model/slope", "required for linear models");
                req.model = LinearGrowth{static_cast<int>(*year), *count, *slope};
            } else {
                const auto rate = opt_number(*it, "rate", "/model");
                if (!rate) throw RequestError("/model/rate", "required for exponential models");
                req.model = ExponentialGrowth{static_cast<int>(*year), *count, *rate};
            }
        }
    } else if (const auto fit_it = body.find("fit"); fit_it != body.end()) {
        require_object(*fit_it, "/fit");
        only_keys(*fit_it, "/fit", {"family", "points"});
        const auto family_name = opt_string(*fit_it, "family", "/fit");
        const auto family = family_name ? parse_growth_family(*family_name) : std::nullopt;
        if (!family) throw RequestError("/fit/family", "must be 'linear' or 'exponential'");
        const auto pts = fit_it->find("points");
        if (pts == fit_it->end() || !pts->is_array()) throw RequestError("/fit/points", "array of [year, count] required");
        std::vector<YearCount> points;
        for (std::size_t i = 0; i < pts->size(); ++i) {
            const json& p = (*pts)[i];
            if (!p.is_array() || p.size() != 2 || !p[0].is_number_integer() || !p[1].is_number()) {
                throw RequestError(fmt::format("/fit/points/{}", i), "expected [year, count]");
            }
            points.push_back({p[0].get<int>(), p[1].get<double>()});
        }
        try {
            req.model = fit(points, *family);
        } catch (const ValueError& e) {
            throw RequestError("/fit/points", e.what());
        }
    }
    try {
        validate(req.model);
    } catch (const ValueError& e) {
        throw RequestError("/model", e.what());
    }
    if (const auto it = body.find("thresholds"); it != body.end()) {
        if (!it->is_array() || it->empty()) throw RequestError("/thresholds", "non-empty array of numbers required");
        req.thresholds.clear();
        for (std::size_t i = 0; i < it->size(); ++i) {
            if (!(*it)[i].is_number()) throw RequestError(fmt::format("/thresholds/{}", i), "must be a number");
            req.thresholds.push_back((*it)[i].get<double>());
        }
    }
    return req;
}

// -----------------------------------------------------------------------------

WhatIfService::WhatIfService(Dataset data) : data_(std::move(data)) {}

ServiceResponse WhatIfService::handle(std::string_view method, std::string_view path, std::string_view body) const {
    const bool get = method == "GET";
    const bool post = method == "POST";
    try {
        if (path == "/api/v1/profiles") {
            if (!get) return json_response(405, error_body("method_not_allowed", "", "use GET"));
            return json_response(200, profiles_report(data_));
        }

        static constexpr std::array<std::string_view, 5> kPostRoutes{
            "/api/v1/footprint", "/api/v1/compare", "/api/v1/fleet/net", "/api/v1/fleet/breakeven", "/api/v1/project"};
        if (std::find(kPostRoutes.begin(), kPostRoutes.end(), path) == kPostRoutes.end()) {
            return json_response(404, error_body("not_found", std::string(path), "no such endpoint"));
        }
        if (!post) return json_response(405, error_body("method_not_allowed", "", "use POST"));

        json parsed;
        try {
            parsed = json::parse(body.empty() ? std::string_view("{}") : body);
        } catch (const json::parse_error& e) {
            return json_response(400, error_body("invalid_request", "/", fmt::format("malformed JSON: {}", e.what())));
        }

        if (path == "/api/v1/footprint") {
            return json_response(200, footprint_report(data_, parse_footprint_request(parsed, data_)));
        }
        if (path == "/api/v1/compare") {
            require_object(parsed, "");
            only_keys(parsed, "", {"schema_version", "subject", "reference", "bound"});
            const auto subject = opt_string(parsed, "subject", "");
            const auto reference = opt_string(parsed, "reference", "");
            if (!subject) throw RequestError("/subject", "required");
            if (!reference) throw RequestError("/reference", "required");
            return json_response(200, compare_report(data_, *subject, *reference, read_bound(parsed, Bound::Typical)));
        }
        if (path == "/api/v1/fleet/net") {
            return json_response(200, fleet_report(data_, parse_fleet_request(parsed)));
        }
        if (path == "/api/v1/fleet/breakeven") {
            return json_response(200, breakeven_report(data_, parse_fleet_request(parsed)));
        }
        // /api/v1/project
        json doc = project_report(parse_project_request(parsed));
        for (const auto& c : doc.at("crossings")) {
            if (c.at("never").get<bool>()) {
                json err = error_body("never", "/thresholds",
                                      fmt::format("threshold {} is never reached by this model", c.at("threshold").dump()));
                err["reason"] = "threshold_unreachable";
                err["report"] = doc;
                return json_response(422, err);
            }
        }
        return json_response(200, doc);
    } catch (const RequestError& e) {
        return json_response(400, error_body("invalid_request", e.field(), e.what()));
    } catch (const NotFoundError& e) {
        return json_response(404, error_body("not_found", "", e.what()));
    } catch (const Error& e) {
        return json_response(400, error_body("invalid_request", "", e.what()));
    }
}

// -----------------------------------------------------------------------------

struct HttpServer::Impl {
    const WhatIfService& service;
    ServeOptions options;
    httplib::Server server;
    std::thread thread;
    std::atomic<int> bound_port{-1};

    Impl(const WhatIfService& s, ServeOptions o) : service(s), options(std::move(o)) {}
};

HttpServer::HttpServer(const WhatIfService& service, ServeOptions options)
    : impl_(std::make_unique<Impl>(service, std::move(options))) {
    auto& srv = impl_->server;
    // SO_REUSEADDR only: the library default of SO_REUSEPORT would let a
    // second server silently share an occupied port.
    srv.set_socket_options([](socket_t sock) {
        int yes = 1;
        setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
    });
    const std::string cors = impl_->options.cors_origin;
    auto dispatch = [this, cors](const httplib::Request& req, httplib::Response& res) {
        const ServiceResponse out = impl_->service.handle(req.method, req.path, req.body);
        res.status = out.status;
        res.set_content(out.body, out.content_type);
        if (!cors.empty()) res.set_header("Access-Control-Allow-Origin", cors);
    };
    srv.Get(R"(/api/v1/.*)", dispatch);
    srv.Post(R"(/api/v1/.*)", dispatch);
    if (!cors.empty()) {
        srv.Options(R"(/api/v1/.*)", [cors](const httplib::Request&, httplib::Response& res) {
            res.set_header("Access-Control-Allow-Origin", cors);
            res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
            res.set_header("Access-Control-Allow-Headers", "Content-Type");
            res.status = 204;
        });
    }
    if (impl_->options.static_dir) {
        if (!srv.set_mount_point("/", impl_->options.static_dir->string())) {
            throw Error(fmt::format("static directory '{}' does not exist", impl_->options.static_dir->string()));
        }
    }
}

HttpServer::~HttpServer() { stop(); }

void HttpServer::start() {
    auto& srv = impl_->server;
    int port = impl_->options.port;
    if (port == 0) {
        port = srv.bind_to_any_port(impl_->options.host);
    } else if (!srv.bind_to_port(impl_->options.host, port)) {
        port = -1;
    }
    if (port < 0) throw Error(fmt::format("cannot bind {}:{}", impl_->options.host, impl_->options.port));
    impl_->bound_port = port;
    impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
    impl_->server.wait_until_ready();
}

void HttpServer::wait() {
    if (impl_->thread.joinable()) impl_->thread.join();
}

void HttpServer::stop() {
    if (!impl_) return;
    impl_->server.stop();
    if (impl_->thread.joinable()) impl_->thread.join();
}

int HttpServer::port() const noexcept { return impl_->bound_port; }

}  // namespace tinylca
