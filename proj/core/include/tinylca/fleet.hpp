#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tinylca/lca_model.hpp"
#include "tinylca/units.hpp"

namespace tinylca {

/// Global annual emissions consistent with the residential savings figure.
inline constexpr double kDefaultGlobalGt = 32.8;
/// Value the all-sector net savings figure back-solves to.
inline constexpr double kAlternateGlobalGt = 33.6;

inline constexpr const char* kResidentialSector = "residential";

/// Fraction of global annual CO2 emissions per sector.
struct SectorShares {
    std::map<std::string, double> shares;

    /// Every share in [0,1], sum within `tolerance` of 1.
    void validate(double tolerance = 1e-6) const;
    /// Throws NotFoundError listing the valid names.
    [[nodiscard]] double share(const std::string& sector) const;
    [[nodiscard]] std::string names() const;

    friend bool operator==(const SectorShares&, const SectorShares&) = default;
};

/// Annual total in GtCO2e (per year).
struct GlobalEmissions {
    Quantity annual_total{kDefaultGlobalGt, Unit::GtCO2e};

    void validate() const;

    friend bool operator==(const GlobalEmissions&, const GlobalEmissions&) = default;
};

struct FleetScenario {
    std::uint64_t device_count = 0;
    Quantity per_device{0.0, Unit::gCO2e};
    Quantity horizon{3.0, Unit::year};
    std::map<std::string, double> reductions;
    GlobalEmissions global;
    SectorShares sectors;

    void validate() const;
};

/// Signed fleet balance in MtCO2e. Positive means net emissions.
struct NetImpact {
    double mt = 0.0;

    [[nodiscard]] bool is_net_saving() const noexcept { return mt < 0.0; }
};

Quantity fleet_footprint(std::uint64_t device_count, const Quantity& per_device);

/// Savings from the scenario's sector reductions over its horizon, in MtCO2e.
Quantity avoided_emissions(const FleetScenario& scenario);

/// Average reduction the remaining sectors need for savings to cover
/// `fleet_fp - fixed_savings`. Clamped at 0 once fixed savings suffice.
double break_even_rate(const Quantity& fleet_fp, const Quantity& fixed_savings, double other_share,
                       const GlobalEmissions& global, const Quantity& horizon);

/// Share of global emissions from sectors with no reduction in the scenario.
double other_sector_share(const FleetScenario& scenario);

/// Convenience wrapper: break_even_rate with the scenario's own footprint,
/// avoided emissions, and other-sector share. Returns 0 when every sector is
/// already reduced and savings cover the footprint; throws ValueError when
/// every sector is reduced and a gap remains.
double break_even_rate(const FleetScenario& scenario);

NetImpact net_impact(const FleetScenario& scenario);

/// min(1, savings / fleet_fp). Throws ValueError on a zero fleet footprint.
double offset_fraction(const Quantity& fleet_fp, const Quantity& savings);

struct SweepOptions {
    /// Replace the power supply every `battery_life` years; unset keeps one
    /// battery for the whole lifetime.
    std::optional<Quantity> battery_life;
};

struct SweepRow {
    double lifetime_years = 0.0;
    Quantity per_device{0.0, Unit::gCO2e};
    Quantity fleet_fp{0.0, Unit::MtCO2e};
    Quantity savings{0.0, Unit::MtCO2e};
    double offset_fraction = 0.0;
    double break_even_rate = 0.0;
};

/// One row per lifetime. The device lifetime and scenario horizon are both
/// set to the swept value; the embodied footprint stays fixed unless battery
/// replacement is enabled. `base.per_device` is ignored.
std::vector<SweepRow> lifetime_sweep(const FleetScenario& base, const DeviceProfile& device, Bound bound,
                                     std::span<const double> lifetimes_years, const SweepOptions& options = {});

}  // namespace tinylca
