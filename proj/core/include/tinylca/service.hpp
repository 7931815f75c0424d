#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "tinylca/data_store.hpp"
#include "tinylca/report.hpp"

namespace tinylca {

struct ServiceResponse {
    int status = 200;
    std::string body;
    std::string content_type = "application/json";
};

/// Stateless request handler over an immutable dataset. Safe to call from
/// any number of threads.
///
///   GET  /api/v1/profiles
///   POST /api/v1/footprint        FootprintRequest body
///   POST /api/v1/compare          {"subject", "reference", "bound"}
///   POST /api/v1/fleet/net        FleetRequest body
///   POST /api/v1/fleet/breakeven  FleetRequest body
///   POST /api/v1/project          ProjectRequest body
///
/// Invalid bodies get 400 with per-field details, unknown profiles 404, and
/// projections with an unreachable threshold 422 (reason "never").
class WhatIfService {
public:
    explicit WhatIfService(Dataset data);

    [[nodiscard]] ServiceResponse handle(std::string_view method, std::string_view path, std::string_view body) const;
    [[nodiscard]] const Dataset& data() const noexcept { return data_; }

private:
    Dataset data_;
};

/// Body parsers, exposed for tests. They throw RequestError.
class RequestError : public Error {
public:
    RequestError(std::string field, const std::string& message);
    [[nodiscard]] const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

FootprintRequest parse_footprint_request(const nlohmann::json& body, const Dataset& data);
FleetRequest parse_fleet_request(const nlohmann::json& body);
ProjectRequest parse_project_request(const nlohmann::json& body);

struct ServeOptions {
    std::string host = "127.0.0.1";
    int port = 8080;  // 0 picks a free port
    std::optional<std::filesystem::path> static_dir;
    /// Empty keeps same-origin only; otherwise sent as Access-Control-Allow-Origin.
    std::string cors_origin;
};

/// HTTP/1.1 front end for a WhatIfService, running on its own thread.
class HttpServer {
public:
    HttpServer(const WhatIfService& service, ServeOptions options);
    ~HttpServer();
    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    /// Binds and starts listening; throws Error when the port is unavailable.
    void start();
    /// Blocks until stop() is called from another thread.
    void wait();
    void stop();
    [[nodiscard]] int port() const noexcept;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace tinylca
