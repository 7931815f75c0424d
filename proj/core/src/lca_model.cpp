#include "tinylca/lca_model.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "tinylca/error.hpp"

namespace tinylca {

namespace {

constexpr std::array<std::string_view, kStageCount> kStageNames{
    "RawMaterials", "Manufacturing", "TransportDistribution", "ProductUse", "EndOfLife"};

constexpr std::array<std::string_view, kIndicatorCount> kIndicatorNames{
    "WaterDemand", "FreshwaterEutrophication", "PhotochemicalOxidantFormation", "ClimateChange"};

constexpr std::array<std::string_view, kBlockCount> kBlockNames{
    "Processing", "Memory",      "Actuators", "Casing",    "Connectivity",  "PCB",
    "PowerSupply", "Security",   "Sensing",   "Transport", "UserInterface", "Other"};

constexpr std::array<std::string_view, 3> kBoundNames{"low", "typical", "high"};

constexpr std::array<std::string_view, 4> kTierNames{"LowCost", "MediumCost", "HighCost", "Custom"};

template <class E, std::size_t N>
std::optional<E> lookup(const std::array<std::string_view, N>& names, std::string_view name) noexcept {
    for (std::size_t i = 0; i < N; ++i) {
        if (names[i] == name) return static_cast<E>(i);
    }
    return std::nullopt;
}

template <std::size_t N>
std::string join(const std::array<std::string_view, N>& names) {
    return fmt::format("{}", fmt::join(names, ", "));
}

void require_fraction(double value, std::string_view what, bool allow_zero = true) {
    const bool low_ok = allow_zero ? value >= 0.0 : value > 0.0;
    if (!std::isfinite(value) || !low_ok || value > 1.0) {
        throw ValueError(fmt::format("{} must be in {}0, 1], got {}", what, allow_zero ? "[" : "(", value));
    }
}

void require_dimension(const Quantity& q, Dimension dim, std::string_view what) {
    if (q.dimension() != dim) {
        throw UnitError(fmt::format("{} has unit {}, which has the wrong dimension", what, unit_name(q.unit())));
    }
}

}  // namespace

Unit canonical_unit(Indicator indicator) noexcept {
    switch (indicator) {
        case Indicator::WaterDemand: return Unit::liter;
        case Indicator::FreshwaterEutrophication: return Unit::gPeq;
        case Indicator::PhotochemicalOxidantFormation: return Unit::mgNMVOC;
        case Indicator::ClimateChange: return Unit::gCO2e;
    }
    return Unit::dimensionless;
}

LifeCycleStage embodied_stage(FunctionalBlock block) noexcept {
    return block == FunctionalBlock::Transport ? LifeCycleStage::TransportDistribution
                                               : LifeCycleStage::Manufacturing;
}

std::string_view to_string(LifeCycleStage stage) noexcept { return kStageNames[index_of(stage)]; }
std::string_view to_string(Indicator indicator) noexcept { return kIndicatorNames[index_of(indicator)]; }
std::string_view to_string(FunctionalBlock block) noexcept { return kBlockNames[index_of(block)]; }
std::string_view to_string(Bound bound) noexcept { return kBoundNames[index_of(bound)]; }
std::string_view to_string(Tier tier) noexcept { return kTierNames[index_of(tier)]; }

std::optional<LifeCycleStage> parse_stage(std::string_view name) noexcept {
    return lookup<LifeCycleStage>(kStageNames, name);
}
std::optional<Indicator> parse_indicator(std::string_view name) noexcept {
    return lookup<Indicator>(kIndicatorNames, name);
}
std::optional<FunctionalBlock> parse_block(std::string_view name) noexcept {
    return lookup<FunctionalBlock>(kBlockNames, name);
}
std::optional<Bound> parse_bound(std::string_view name) noexcept { return lookup<Bound>(kBoundNames, name); }
std::optional<Tier> parse_tier(std::string_view name) noexcept { return lookup<Tier>(kTierNames, name); }

std::string block_names() { return join(kBlockNames); }
std::string stage_names() { return join(kStageNames); }

void StageProfile::validate() const {
    if (total.unit() != canonical_unit(indicator)) {
        throw UnitError(fmt::format("{} total must be in {}, got {}", to_string(indicator),
                                    unit_name(canonical_unit(indicator)), unit_name(total.unit())));
    }
    double sum = 0.0;
    for (auto stage : kAllStages) {
        require_fraction(share(stage), fmt::format("{} share of {}", to_string(stage), to_string(indicator)));
        sum += share(stage);
    }
    if (std::abs(sum - 1.0) > kShareSumTolerance) {
        throw ValueError(fmt::format("{} stage shares sum to {}, expected 1", to_string(indicator), sum));
    }
}

const Quantity& EmbodiedBounds::at(Bound bound) const noexcept {
    switch (bound) {
        case Bound::Low: return low;
        case Bound::Typical: return typical;
        case Bound::High: break;
    }
    return high;
}

void ComponentEntry::validate() const {
    for (const auto* q : {&embodied.low, &embodied.typical, &embodied.high}) {
        require_dimension(*q, Dimension::CarbonMass, fmt::format("component '{}' embodied value", label));
    }
    const double lo = embodied.low.value_in(Unit::gCO2e);
    const double typ = embodied.typical.value_in(Unit::gCO2e);
    const double hi = embodied.high.value_in(Unit::gCO2e);
    if (!(lo <= typ && typ <= hi)) {
        throw ValueError(fmt::format("component {}/{}: bounds must satisfy low <= typical <= high, got {} / {} / {}",
                                     to_string(block), label, lo, typ, hi));
    }
}

void OperationalParams::validate() const {
    require_dimension(power, Dimension::Power, "power");
    require_dimension(lifetime, Dimension::Time, "lifetime");
    require_dimension(grid_intensity, Dimension::CarbonIntensity, "grid_intensity");
    require_fraction(duty_factor, "duty_factor");
    require_fraction(charge_efficiency, "charge_efficiency", /*allow_zero=*/false);
    if (lifetime.value() <= 0.0) {
        throw ValueError("lifetime must be positive");
    }
}

void DeviceProfile::validate() const {
    for (const auto& c : components) c.validate();
    operational.validate();
    require_dimension(training_amortized, Dimension::CarbonMass, "training_amortized");
}

Quantity FootprintBreakdown::embodied_total() const {
    Quantity sum(0.0, Unit::gCO2e);
    for (const auto& q : per_block) sum = sum + q;
    return sum;
}

FunctionalBlock FootprintBreakdown::largest_block() const {
    const auto it = std::max_element(per_block.begin(), per_block.end(), [](const Quantity& a, const Quantity& b) {
        return a.value_in(Unit::gCO2e) < b.value_in(Unit::gCO2e);
    });
    return static_cast<FunctionalBlock>(std::distance(per_block.begin(), it));
}

double operational_energy_kwh(const OperationalParams& params) {
    params.validate();
    const double power_kw = params.power.value_in(Unit::mW) / 1e6;
    const double hours = params.lifetime.value_in(Unit::hour);
    return power_kw * params.duty_factor * hours / params.charge_efficiency;
}

Quantity operational_footprint(const OperationalParams& params) {
    const double kwh = operational_energy_kwh(params);
    return Quantity(kwh * params.grid_intensity.value_in(Unit::gCO2e_per_kWh), Unit::gCO2e);
}

FootprintBreakdown embodied_footprint(const DeviceProfile& device, Bound bound) {
    std::array<double, kBlockCount> grams{};
    for (const auto& c : device.components) {
        c.validate();
        grams[index_of(c.block)] += c.embodied.at(bound).value_in(Unit::gCO2e);
    }
    FootprintBreakdown out;
    double total = 0.0;
    for (std::size_t i = 0; i < kBlockCount; ++i) {
        out.per_block[i] = Quantity(grams[i], Unit::gCO2e);
        total += grams[i];
    }
    out.total = Quantity(total, Unit::gCO2e);
    return out;
}

FootprintBreakdown total_footprint(const DeviceProfile& device, Bound bound) {
    device.validate();
    FootprintBreakdown out = embodied_footprint(device, bound);
    out.operational = operational_footprint(device.operational);
    out.training = device.training_amortized.in(Unit::gCO2e);
    out.total = Quantity(out.total.value() + out.operational.value() + out.training.value(), Unit::gCO2e);
    return out;
}

std::array<Quantity, kStageCount> indicator_breakdown(const StageProfile& profile) {
    profile.validate();
    std::array<Quantity, kStageCount> out{};
    for (auto stage : kAllStages) {
        out[index_of(stage)] = Quantity(profile.total.value() * profile.share(stage), profile.total.unit());
    }
    return out;
}

double compare(const Quantity& a, const Quantity& b) {
    require_dimension(a, Dimension::CarbonMass, "compared quantity");
    require_dimension(b, Dimension::CarbonMass, "reference quantity");
    const double denom = b.value_in(Unit::gCO2e);
    if (denom == 0.0) {
        throw ValueError("cannot compare against a zero footprint (division by zero)");
    }
    return a.value_in(Unit::gCO2e) / denom;
}

}  // namespace tinylca
