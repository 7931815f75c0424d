#pragma once

// Request resolution and report documents shared by the command-line tool
// and the HTTP service. Both front ends build a request, call one of the
// *_report functions, and either serialise the JSON document directly or
// render it as a table / CSV.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "tinylca/data_store.hpp"
#include "tinylca/fleet.hpp"
#include "tinylca/growth.hpp"
#include "tinylca/lca_model.hpp"

namespace tinylca {

enum class OutputFormat { Table, Json, Csv };

std::optional<OutputFormat> parse_format(std::string_view name) noexcept;

/// Optional replacements for a profile's use-phase parameters.
struct OperationalOverrides {
    std::optional<double> power_mw;
    std::optional<double> duty_factor;
    std::optional<double> lifetime_years;
    std::optional<double> grid_intensity_g_per_kwh;
    std::optional<double> charge_efficiency;

    /// Applies the set fields and validates the result (throws ValueError).
    void apply(OperationalParams& params) const;
};

struct FootprintRequest {
    std::string profile;
    std::optional<DeviceProfile> device;  // takes precedence over `profile`
    Bound bound = Bound::Typical;
    OperationalOverrides overrides;
    std::optional<double> training_g;
};

struct FleetRequest {
    std::string profile = "high-cost";
    /// Worst-case fleet accounting uses each component's upper bound.
    Bound bound = Bound::High;
    OperationalOverrides overrides;
    std::optional<double> per_device_g;  // bypasses the profile when set
    double device_count = 250e9;
    double horizon_years = 3.0;
    std::map<std::string, double> reductions;
    std::optional<double> reduce_all;  // applied to every sector, overriding `reductions`
    double global_gt = kDefaultGlobalGt;
};

struct SweepRequest {
    FleetRequest fleet;
    std::vector<double> lifetimes_years;
    std::optional<double> battery_life_years;
};

struct ProjectRequest {
    GrowthModel model = default_linear_model();
    std::vector<double> thresholds{50.0, 100.0, 250.0, 1000.0};
};

DeviceProfile resolve_device(const Dataset& data, const FootprintRequest& request);
FleetScenario resolve_scenario(const Dataset& data, const FleetRequest& request);

/// Range a ratio-only reference (e.g. a laptop known through "N-M x larger")
/// must fall in so that every bracket profile's ratio stays within bounds.
struct ImpliedRange {
    Quantity low{0.0, Unit::gCO2e};
    Quantity high{0.0, Unit::gCO2e};
    [[nodiscard]] bool consistent() const { return low.value() <= high.value(); }
};

/// Uses the LowCost and HighCost tier profiles at `bound`.
ImpliedRange implied_reference_range(const Dataset& data, const RatioReference& reference, Bound bound);

nlohmann::json profiles_report(const Dataset& data);
nlohmann::json footprint_report(const Dataset& data, const FootprintRequest& request);
/// `reference / subject`; either name may be a profile or a reference device.
nlohmann::json compare_report(const Dataset& data, const std::string& subject, const std::string& reference,
                              Bound bound);
nlohmann::json fleet_report(const Dataset& data, const FleetRequest& request);
nlohmann::json breakeven_report(const Dataset& data, const FleetRequest& request);
nlohmann::json sweep_report(const Dataset& data, const SweepRequest& request);
nlohmann::json project_report(const ProjectRequest& request);

/// Renders any report document. Json keeps raw doubles; Table rounds to
/// three significant figures; Csv emits plot-ready rows.
std::string render(const nlohmann::json& report, OutputFormat format);

/// `value` rounded to `digits` significant figures in plain notation.
std::string format_significant(double value, int digits = 3);

}  // namespace tinylca
