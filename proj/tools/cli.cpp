#include "cli.hpp"

#include <atomic>
#include <cmath>
#include <chrono>
#include <csignal>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "tinylca/data_store.hpp"
#include "tinylca/report.hpp"
#include "tinylca/service.hpp"

namespace tinylca {

namespace {

using nlohmann::json;

/// Bad flag values detected after CLI11 parsing.
class UsageError : public Error {
public:
    using Error::Error;
};

std::atomic<bool> g_stop_requested{false};

void on_signal(int) { g_stop_requested = true; }

struct Options {
    std::string data_dir;
    std::string format = "table";
    std::optional<double> global_gt;
    std::optional<double> grid_intensity;
    std::string out_path;
    bool stamp = false;

    // device / footprint
    std::string profile;
    std::string bound;
    std::optional<double> power_mw;
    std::optional<double> duty;
    std::optional<double> lifetime;
    std::optional<double> efficiency;
    std::optional<double> training_g;

    // compare
    std::string subject;
    std::string reference;

    // fleet / breakeven / sweep
    std::string fleet_profile;
    std::optional<double> count;
    std::optional<double> per_device_g;
    std::optional<double> horizon;
    std::vector<std::string> reduce;
    std::optional<double> reduce_all;
    std::string reductions_file;
    std::string lifetimes;
    std::optional<double> battery_life;

    // project
    std::string model = "linear";
    std::optional<double> base_year;
    std::optional<double> base_count;
    std::optional<double> slope;
    std::optional<double> rate;
    std::string fit_points;
    std::vector<double> thresholds;

    // serve
    std::string host = "127.0.0.1";
    int port = 8080;
    std::string static_dir;
    std::string cors_origin;
};

Bound bound_or(const std::string& name, Bound fallback) {
    if (name.empty()) return fallback;
    const auto b = parse_bound(name);
    if (!b) throw UsageError(fmt::format("--bound must be low, typical or high, got '{}'", name));
    return *b;
}

double parse_number(const std::string& text, const std::string& what) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size()) throw UsageError(fmt::format("{}: '{}' is not a number", what, text));
    return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep)) {
        if (!item.empty()) parts.push_back(item);
    }
    return parts;
}

/// "1,2,5" or "1..10" (inclusive, step 1) or a mix of both.
std::vector<double> parse_lifetimes(const std::string& text) {
    std::vector<double> out;
    for (const auto& part : split(text, ',')) {
        if (const auto dots = part.find(".."); dots != std::string::npos) {
            const double lo = parse_number(part.substr(0, dots), "--lifetimes");
            const double hi = parse_number(part.substr(dots + 2), "--lifetimes");
            if (hi < lo) throw UsageError(fmt::format("--lifetimes range '{}' is empty", part));
            for (double v = lo; v <= hi + 1e-9; v += 1.0) out.push_back(v);
        } else {
            out.push_back(parse_number(part, "--lifetimes"));
        }
    }
    if (out.empty()) throw UsageError("--lifetimes needs at least one value");
    return out;
}

OperationalOverrides overrides_from(const Options& o) {
    OperationalOverrides ov;
    ov.power_mw = o.power_mw;
    ov.duty_factor = o.duty;
    ov.lifetime_years = o.lifetime;
    ov.grid_intensity_g_per_kwh = o.grid_intensity;
    ov.charge_efficiency = o.efficiency;
    try {
        OperationalParams probe;
        ov.apply(probe);
    } catch (const ValueError& e) {
        throw UsageError(e.what());
    }
    return ov;
}

std::map<std::string, double> read_reductions_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError(fmt::format("cannot open reductions file '{}'", path));
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw UsageError(fmt::format("reductions file '{}': {}", path, e.what()));
    }
    if (doc.is_object() && doc.contains("reductions")) doc = doc["reductions"];
    if (!doc.is_object()) throw UsageError(fmt::format("reductions file '{}': expected an object of sector -> rate", path));
    std::map<std::string, double> out;
    for (const auto& [k, v] : doc.items()) {
        if (k == "schema_version") continue;
        if (!v.is_number()) throw UsageError(fmt::format("reductions file '{}': /{} must be a number", path, k));
        out[k] = v.get<double>();
    }
    return out;
}

FleetRequest fleet_request_from(const Options& o) {
    FleetRequest req;
    if (!o.fleet_profile.empty()) req.profile = o.fleet_profile;
    req.bound = bound_or(o.bound, Bound::High);
    req.overrides = overrides_from(o);
    req.per_device_g = o.per_device_g;
    if (o.count) req.device_count = *o.count;
    if (o.horizon) req.horizon_years = *o.horizon;
    if (o.global_gt) req.global_gt = *o.global_gt;
    if (!o.reductions_file.empty()) req.reductions = read_reductions_file(o.reductions_file);
    for (const auto& item : o.reduce) {
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw UsageError(fmt::format("--reduce expects sector=rate, got '{}'", item));
        }
        req.reductions[item.substr(0, eq)] = parse_number(item.substr(eq + 1), "--reduce " + item.substr(0, eq));
    }
    req.reduce_all = o.reduce_all;
    return req;
}

ProjectRequest project_request_from(const Options& o) {
    ProjectRequest req;
    const auto family = parse_growth_family(o.model);
    if (!family) throw UsageError(fmt::format("--model must be linear or exponential, got '{}'", o.model));
    if (!o.fit_points.empty()) {
        std::vector<YearCount> points;
        for (const auto& p : split(o.fit_points, ',')) {
            const auto colon = p.find(':');
            if (colon == std::string::npos) throw UsageError(fmt::format("--fit expects year:count pairs, got '{}'", p));
            const double year = parse_number(p.substr(0, colon), "--fit year");
            if (std::floor(year) != year) throw UsageError(fmt::format("--fit year must be an integer, got '{}'", p));
            points.push_back({static_cast<int>(year), parse_number(p.substr(colon + 1), "--fit count")});
        }
        req.model = fit(points, *family);
    } else {
        req.model = *family == GrowthFamily::Linear ? default_linear_model() : default_exponential_model();
    }
    if (o.base_year || o.base_count || o.slope || o.rate) {
        int year = base_year(req.model);
        if (o.base_year) {
            if (std::floor(*o.base_year) != *o.base_year) throw UsageError("--base-year must be an integer");
            year = static_cast<int>(*o.base_year);
        }
        const double count = o.base_count.value_or(base_count(req.model));
        if (*family == GrowthFamily::Linear) {
            if (o.rate) throw UsageError("--rate applies to exponential models");
            req.model = LinearGrowth{year, count, o.slope.value_or(std::get<LinearGrowth>(req.model).slope)};
        } else {
            if (o.slope) throw UsageError("--slope applies to linear models");
            req.model = ExponentialGrowth{year, count, o.rate.value_or(std::get<ExponentialGrowth>(req.model).rate)};
        }
    }
    if (!o.thresholds.empty()) req.thresholds = o.thresholds;
    return req;
}

std::string utc_stamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

int emit(const Options& o, OutputFormat format, const json& doc, std::ostream& out, std::ostream& err) {
    std::string text = render(doc, format);
    if (o.stamp) {
        const std::string line = fmt::format("# generated {}\n", utc_stamp());
        // JSON bodies stay pure; the stamp goes to stderr instead.
        if (format == OutputFormat::Json) {
            err << line;
        } else {
            text = line + text;
        }
    }
    if (o.out_path.empty()) {
        out << text;
        return out ? kExitOk : kExitUsage;
    }
    std::ofstream file(o.out_path, std::ios::binary);
    if (!file || !(file << text)) {
        err << fmt::format("error: cannot write '{}'\n", o.out_path);
        return kExitUsage;
    }
    return kExitOk;
}

int serve(const Options& o, Dataset data, std::ostream& err) {
    const WhatIfService service(std::move(data));
    ServeOptions so;
    so.host = o.host;
    so.port = o.port;
    if (!o.static_dir.empty()) so.static_dir = o.static_dir;
    so.cors_origin = o.cors_origin;
    HttpServer server(service, so);
    server.start();
    err << fmt::format("listening on http://{}:{}/api/v1\n", o.host, server.port()) << std::flush;

    g_stop_requested = false;
    auto prev_int = std::signal(SIGINT, on_signal);
    auto prev_term = std::signal(SIGTERM, on_signal);
    while (!g_stop_requested) std::this_thread::sleep_for(std::chrono::milliseconds(100));
    server.stop();
    std::signal(SIGINT, prev_int);
    std::signal(SIGTERM, prev_term);
    return kExitOk;
}

void add_operational_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("--power-mw", o.power_mw, "Average power draw in mW");
    cmd->add_option("--duty", o.duty, "Duty factor in [0, 1]");
    cmd->add_option("--lifetime", o.lifetime, "Device lifetime in years");
    cmd->add_option("--efficiency", o.efficiency, "Charging efficiency in (0, 1]");
}

void add_fleet_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("--profile", o.fleet_profile, "Device profile (default high-cost)");
    cmd->add_option("--bound", o.bound, "Component bound: low|typical|high (default high)");
    cmd->add_option("--count", o.count, "Number of deployed devices (default 250e9)");
    cmd->add_option("--per-device-g", o.per_device_g, "Per-device footprint in g CO2e, bypassing the profile");
    cmd->add_option("--horizon", o.horizon, "Horizon in years (default 3)");
    cmd->add_option("--reduce", o.reduce, "Sector reduction as sector=rate; repeatable");
    cmd->add_option("--reduce-all", o.reduce_all, "Apply one reduction rate to every sector");
    cmd->add_option("--reductions-file", o.reductions_file, "JSON object of sector -> rate");
    add_operational_flags(cmd, o);
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Life-cycle footprint engine for TinyML devices", "tinylca"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", "tinylca 0.1.0");
    app.add_option("--data-dir", o.data_dir, "Dataset directory (default: bundled data)");
    app.add_option("--format", o.format, "Output format: table|json|csv")->check(CLI::IsMember({"table", "json", "csv"}));
    app.add_option("--global-gt", o.global_gt, "Global annual emissions in Gt CO2e");
    app.add_option("--grid-intensity", o.grid_intensity, "Grid intensity in g CO2e/kWh");
    app.add_option("--out", o.out_path, "Write results to this file instead of stdout");
    app.add_flag("--stamp", o.stamp, "Add a generation timestamp outside the data body");

    auto* profiles = app.add_subcommand("profiles", "List device profiles");

    auto* device = app.add_subcommand("device", "Per-device footprint commands");
    device->require_subcommand(1);
    device->fallthrough();
    auto* show = device->add_subcommand("show", "Footprint breakdown of one profile");
    show->add_option("profile", o.profile, "Profile name")->required();
    show->add_option("--bound", o.bound, "Component bound: low|typical|high (default typical)");
    show->add_option("--training-g", o.training_g, "Amortized training footprint per device, g CO2e");
    add_operational_flags(show, o);

    auto add_compare = [&](CLI::App* parent, const std::string& name) {
        auto* cmd = parent->add_subcommand(name, "Ratio reference / subject");
        cmd->add_option("subject", o.subject, "Profile or reference name")->required();
        cmd->add_option("reference", o.reference, "Profile or reference name")->required();
        cmd->add_option("--bound", o.bound, "Component bound: low|typical|high (default typical)");
        return cmd;
    };
    auto* device_compare = add_compare(device, "compare");
    auto* compare_cmd = add_compare(&app, "compare");

    auto* fleet = app.add_subcommand("fleet", "Fleet footprint, avoided emissions and net impact");
    add_fleet_flags(fleet, o);
    auto* breakeven = app.add_subcommand("breakeven", "Break-even reduction rate for the other sectors");
    add_fleet_flags(breakeven, o);
    auto* sweep = app.add_subcommand("sweep", "Lifetime sensitivity sweep");
    add_fleet_flags(sweep, o);
    sweep->add_option("--lifetimes", o.lifetimes, "Lifetimes in years, e.g. 1..10 or 1,3,10")->required();
    sweep->add_option("--battery-life", o.battery_life, "Battery life in years; adds replacement batteries");

    auto* project = app.add_subcommand("project", "Growth projection and first-crossing years");
    project->add_option("--model", o.model, "linear|exponential (default linear)");
    project->add_option("--base-year", o.base_year);
    project->add_option("--base-count", o.base_count, "Devices in billions at the base year");
    project->add_option("--slope", o.slope, "Linear slope, billions per year");
    project->add_option("--rate", o.rate, "Exponential growth rate per year");
    project->add_option("--fit", o.fit_points, "Fit the model to year:count pairs, e.g. 2023:15,2041:50");
    project->add_option("--threshold", o.thresholds, "Thresholds in billions; repeatable or comma separated")
        ->delimiter(',');

    auto* serve_cmd = app.add_subcommand("serve", "Run the what-if HTTP service");
    serve_cmd->add_option("--host", o.host, "Bind address (default 127.0.0.1)");
    serve_cmd->add_option("--port", o.port, "Port (default 8080, 0 picks a free port)");
    serve_cmd->add_option("--static", o.static_dir, "Serve a UI build from this directory at /");
    serve_cmd->add_option("--cors-origin", o.cors_origin, "Allow this cross-origin caller");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        const OutputFormat format = *parse_format(o.format);
        if (o.global_gt && !(std::isfinite(*o.global_gt) && *o.global_gt > 0.0)) {
            throw UsageError(fmt::format("--global-gt must be positive, got {}", *o.global_gt));
        }
        if (o.grid_intensity && !(std::isfinite(*o.grid_intensity) && *o.grid_intensity >= 0.0)) {
            throw UsageError(fmt::format("--grid-intensity must be non-negative, got {}", *o.grid_intensity));
        }
        Dataset data = load_dataset(o.data_dir.empty() ? bundled_data_dir() : std::filesystem::path(o.data_dir));
        for (const auto& w : data.warnings) err << fmt::format("warning: {}: {}: {}\n", w.file, w.path, w.message);

        if (*profiles) return emit(o, format, profiles_report(data), out, err);
        if (*show) {
            FootprintRequest req;
            req.profile = o.profile;
            req.bound = bound_or(o.bound, Bound::Typical);
            req.overrides = overrides_from(o);
            req.training_g = o.training_g;
            return emit(o, format, footprint_report(data, req), out, err);
        }
        if (*device_compare || *compare_cmd) {
            return emit(o, format, compare_report(data, o.subject, o.reference, bound_or(o.bound, Bound::Typical)), out,
                        err);
        }
        if (*fleet) return emit(o, format, fleet_report(data, fleet_request_from(o)), out, err);
        if (*breakeven) return emit(o, format, breakeven_report(data, fleet_request_from(o)), out, err);
        if (*sweep) {
            SweepRequest req;
            req.fleet = fleet_request_from(o);
            req.lifetimes_years = parse_lifetimes(o.lifetimes);
            req.battery_life_years = o.battery_life;
            return emit(o, format, sweep_report(data, req), out, err);
        }
        if (*project) return emit(o, format, project_report(project_request_from(o)), out, err);
        if (*serve_cmd) return serve(o, std::move(data), err);
        err << "error: no command given\n";
        return kExitUsage;
    } catch (const DataError& e) {
        err << "error: dataset failed validation\n" << e.report().summary();
        return kExitUsage;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const NotFoundError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitComputation;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitComputation;
    }
}

}  // namespace tinylca
