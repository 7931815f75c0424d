#include "tinylca/fleet.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "tinylca/error.hpp"

namespace tinylca {

void SectorShares::validate(double tolerance) const {
    if (shares.empty()) throw ValueError("sector shares are empty");
    double sum = 0.0;
    for (const auto& [name, share] : shares) {
        if (!std::isfinite(share) || share < 0.0 || share > 1.0) {
            throw ValueError(fmt::format("sector '{}' share must be in [0, 1], got {}", name, share));
        }
        sum += share;
    }
    if (std::abs(sum - 1.0) > tolerance) {
        throw ValueError(fmt::format("sector shares sum to {}, expected 1 within {}", sum, tolerance));
    }
}

double SectorShares::share(const std::string& sector) const {
    const auto it = shares.find(sector);
    if (it == shares.end()) {
        throw NotFoundError(fmt::format("unknown sector '{}'; valid sectors: {}", sector, names()));
    }
    return it->second;
}

std::string SectorShares::names() const {
    std::vector<std::string> keys;
    keys.reserve(shares.size());
    for (const auto& [name, share] : shares) keys.push_back(name);
    return fmt::format("{}", fmt::join(keys, ", "));
}

void GlobalEmissions::validate() const {
    if (annual_total.dimension() != Dimension::CarbonMass || annual_total.value() <= 0.0) {
        throw ValueError("global annual emissions must be a positive carbon mass");
    }
}

void FleetScenario::validate() const {
    if (per_device.dimension() != Dimension::CarbonMass) {
        throw UnitError("per-device footprint must be a carbon mass");
    }
    if (horizon.dimension() != Dimension::Time || horizon.value() <= 0.0) {
        throw ValueError("horizon must be a positive duration");
    }
    global.validate();
    // Loaded files are checked at 1e-3; accept that here so any validated
    // dataset can drive a scenario.
    sectors.validate(1e-3);
    for (const auto& [sector, rate] : reductions) {
        if (!sectors.shares.contains(sector)) {
            throw NotFoundError(fmt::format("unknown sector '{}' in reductions; valid sectors: {}", sector,
                                            sectors.names()));
        }
        if (!std::isfinite(rate) || rate < 0.0 || rate > 1.0) {
            throw ValueError(fmt::format("reduction for '{}' must be in [0, 1], got {}", sector, rate));
        }
    }
}

Quantity fleet_footprint(std::uint64_t device_count, const Quantity& per_device) {
    const double grams = static_cast<double>(device_count) * per_device.value_in(Unit::gCO2e);
    return Quantity(grams, Unit::gCO2e).in(Unit::MtCO2e);
}

Quantity avoided_emissions(const FleetScenario& scenario) {
    scenario.validate();
    const double global_mt = scenario.global.annual_total.value_in(Unit::MtCO2e);
    const double years = scenario.horizon.value_in(Unit::year);
    double mt = 0.0;
    for (const auto& [sector, rate] : scenario.reductions) {
        mt += global_mt * scenario.sectors.share(sector) * rate * years;
    }
    return Quantity(mt, Unit::MtCO2e);
}

double break_even_rate(const Quantity& fleet_fp, const Quantity& fixed_savings, double other_share,
                       const GlobalEmissions& global, const Quantity& horizon) {
    if (!(other_share > 0.0 && other_share <= 1.0)) {
        throw ValueError(fmt::format("other-sector share must be in (0, 1], got {}", other_share));
    }
    if (horizon.dimension() != Dimension::Time || horizon.value() <= 0.0) {
        throw ValueError("horizon must be a positive duration");
    }
    global.validate();
    const double gap = std::max(0.0, fleet_fp.value_in(Unit::MtCO2e) - fixed_savings.value_in(Unit::MtCO2e));
    const double capacity =
        global.annual_total.value_in(Unit::MtCO2e) * other_share * horizon.value_in(Unit::year);
    return gap / capacity;
}

double other_sector_share(const FleetScenario& scenario) {
    double reduced = 0.0;
    for (const auto& [sector, rate] : scenario.reductions) {
        if (rate > 0.0) reduced += scenario.sectors.share(sector);
    }
    return std::clamp(1.0 - reduced, 0.0, 1.0);
}

double break_even_rate(const FleetScenario& scenario) {
    const Quantity fp = fleet_footprint(scenario.device_count, scenario.per_device);
    const Quantity saved = avoided_emissions(scenario);
    const double other = other_sector_share(scenario);
    // No sectors left to reduce: only the already-offset case has an answer.
    if (other == 0.0 && saved.value() >= fp.value()) return 0.0;
    return break_even_rate(fp, saved, other, scenario.global, scenario.horizon);
}

NetImpact net_impact(const FleetScenario& scenario) {
    const double fp = fleet_footprint(scenario.device_count, scenario.per_device).value();
    return NetImpact{fp - avoided_emissions(scenario).value()};
}

double offset_fraction(const Quantity& fleet_fp, const Quantity& savings) {
    const double fp = fleet_fp.value_in(Unit::MtCO2e);
    if (fp == 0.0) throw ValueError("offset fraction is undefined for a zero fleet footprint");
    return std::min(1.0, savings.value_in(Unit::MtCO2e) / fp);
}

std::vector<SweepRow> lifetime_sweep(const FleetScenario& base, const DeviceProfile& device, Bound bound,
                                     std::span<const double> lifetimes_years, const SweepOptions& options) {
    if (lifetimes_years.empty()) throw ValueError("lifetime sweep needs at least one lifetime");
    if (options.battery_life &&
        (options.battery_life->dimension() != Dimension::Time || options.battery_life->value() <= 0.0)) {
        throw ValueError("battery life must be a positive duration");
    }

    std::vector<SweepRow> rows;
    rows.reserve(lifetimes_years.size());
    for (const double years : lifetimes_years) {
        if (!std::isfinite(years) || years <= 0.0) {
            throw ValueError(fmt::format("lifetimes must be positive, got {}", years));
        }
        DeviceProfile aged = device;
        aged.operational.lifetime = Quantity(years, Unit::year);
        const FootprintBreakdown fp = total_footprint(aged, bound);

        double per_device_g = fp.total.value();
        if (options.battery_life) {
            const double batteries = std::ceil(years / options.battery_life->value_in(Unit::year));
            per_device_g += (batteries - 1.0) * fp.block(FunctionalBlock::PowerSupply).value();
        }

        FleetScenario scenario = base;
        scenario.per_device = Quantity(per_device_g, Unit::gCO2e);
        scenario.horizon = Quantity(years, Unit::year);

        SweepRow row;
        row.lifetime_years = years;
        row.per_device = scenario.per_device;
        row.fleet_fp = fleet_footprint(scenario.device_count, scenario.per_device);
        row.savings = avoided_emissions(scenario);
        row.offset_fraction = row.fleet_fp.value() > 0.0 ? offset_fraction(row.fleet_fp, row.savings) : 1.0;
        row.break_even_rate = break_even_rate(scenario);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace tinylca
