#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tinylca/units.hpp"

namespace tinylca {

// -----------------------------------------------------------------------------
// Life-cycle stages and environmental indicators
// -----------------------------------------------------------------------------

enum class LifeCycleStage {
    RawMaterials,
    Manufacturing,
    TransportDistribution,
    ProductUse,
    EndOfLife,
};
inline constexpr std::size_t kStageCount = 5;
inline constexpr std::array<LifeCycleStage, kStageCount> kAllStages{
    LifeCycleStage::RawMaterials, LifeCycleStage::Manufacturing,
    LifeCycleStage::TransportDistribution, LifeCycleStage::ProductUse,
    LifeCycleStage::EndOfLife};

enum class Indicator {
    WaterDemand,
    FreshwaterEutrophication,
    PhotochemicalOxidantFormation,
    ClimateChange,
};
inline constexpr std::size_t kIndicatorCount = 4;
inline constexpr std::array<Indicator, kIndicatorCount> kAllIndicators{
    Indicator::WaterDemand, Indicator::FreshwaterEutrophication,
    Indicator::PhotochemicalOxidantFormation, Indicator::ClimateChange};

/// liter, gPeq, mgNMVOC, gCO2e respectively.
Unit canonical_unit(Indicator indicator) noexcept;

// -----------------------------------------------------------------------------
// Functional blocks
// -----------------------------------------------------------------------------

enum class FunctionalBlock {
    Processing,
    Memory,
    Actuators,
    Casing,
    Connectivity,
    PCB,
    PowerSupply,
    Security,
    Sensing,
    Transport,
    UserInterface,
    Other,
};
inline constexpr std::size_t kBlockCount = 12;
inline constexpr std::array<FunctionalBlock, kBlockCount> kAllBlocks{
    FunctionalBlock::Processing,   FunctionalBlock::Memory,      FunctionalBlock::Actuators,
    FunctionalBlock::Casing,       FunctionalBlock::Connectivity, FunctionalBlock::PCB,
    FunctionalBlock::PowerSupply,  FunctionalBlock::Security,    FunctionalBlock::Sensing,
    FunctionalBlock::Transport,    FunctionalBlock::UserInterface, FunctionalBlock::Other};

/// Stage an embodied block value is booked under. The Transport block is the
/// shipping share of the embodied footprint and lands in TransportDistribution;
/// every other block aggregates raw materials and manufacturing, booked as
/// Manufacturing.
LifeCycleStage embodied_stage(FunctionalBlock block) noexcept;

std::string_view to_string(LifeCycleStage stage) noexcept;
std::string_view to_string(Indicator indicator) noexcept;
std::string_view to_string(FunctionalBlock block) noexcept;

std::optional<LifeCycleStage> parse_stage(std::string_view name) noexcept;
std::optional<Indicator> parse_indicator(std::string_view name) noexcept;
std::optional<FunctionalBlock> parse_block(std::string_view name) noexcept;

/// Comma-separated list of block names, for error messages.
std::string block_names();
std::string stage_names();

template <class E>
constexpr std::size_t index_of(E e) noexcept {
    return static_cast<std::size_t>(e);
}

// -----------------------------------------------------------------------------
// Indicator stage profiles
// -----------------------------------------------------------------------------

/// Distribution of one indicator's footprint over the five stages.
struct StageProfile {
    Indicator indicator = Indicator::ClimateChange;
    Quantity total{0.0, Unit::gCO2e};
    std::array<double, kStageCount> shares{};

    [[nodiscard]] double share(LifeCycleStage stage) const noexcept { return shares[index_of(stage)]; }

    /// Throws ValueError unless shares are in [0,1] and sum to 1 within 1e-6,
    /// and `total` is in the indicator's canonical unit.
    void validate() const;

    friend bool operator==(const StageProfile&, const StageProfile&) = default;
};

inline constexpr double kShareSumTolerance = 1e-6;

// -----------------------------------------------------------------------------
// Device bill of materials
// -----------------------------------------------------------------------------

enum class Bound { Low, Typical, High };

std::string_view to_string(Bound bound) noexcept;
std::optional<Bound> parse_bound(std::string_view name) noexcept;

struct EmbodiedBounds {
    Quantity low{0.0, Unit::gCO2e};
    Quantity typical{0.0, Unit::gCO2e};
    Quantity high{0.0, Unit::gCO2e};

    [[nodiscard]] const Quantity& at(Bound bound) const noexcept;

    friend bool operator==(const EmbodiedBounds&, const EmbodiedBounds&) = default;
};

struct ComponentEntry {
    FunctionalBlock block = FunctionalBlock::Other;
    std::string label;
    EmbodiedBounds embodied;

    /// low <= typical <= high, all carbon mass.
    void validate() const;

    friend bool operator==(const ComponentEntry&, const ComponentEntry&) = default;
};

/// Use-phase parameters. Defaults describe continuous 1 mW draw for three
/// years on a 475 g/kWh grid with lossless charging.
struct OperationalParams {
    Quantity power{1.0, Unit::mW};
    double duty_factor = 1.0;
    Quantity lifetime{3.0, Unit::year};
    Quantity grid_intensity{475.0, Unit::gCO2e_per_kWh};
    double charge_efficiency = 1.0;

    void validate() const;

    friend bool operator==(const OperationalParams&, const OperationalParams&) = default;
};

inline constexpr double kDefaultGridIntensity = 475.0;

enum class Tier { LowCost, MediumCost, HighCost, Custom };

std::string_view to_string(Tier tier) noexcept;
std::optional<Tier> parse_tier(std::string_view name) noexcept;

struct DeviceProfile {
    std::string name;
    Tier tier = Tier::Custom;  // metadata only
    std::vector<ComponentEntry> components;
    OperationalParams operational;
    Quantity training_amortized{0.0, Unit::gCO2e};

    void validate() const;

    friend bool operator==(const DeviceProfile&, const DeviceProfile&) = default;
};

struct FootprintBreakdown {
    std::array<Quantity, kBlockCount> per_block{};
    Quantity operational{0.0, Unit::gCO2e};
    Quantity training{0.0, Unit::gCO2e};
    Quantity total{0.0, Unit::gCO2e};

    [[nodiscard]] const Quantity& block(FunctionalBlock b) const noexcept { return per_block[index_of(b)]; }
    [[nodiscard]] Quantity embodied_total() const;
    /// First block in enum order holding the maximum value.
    [[nodiscard]] FunctionalBlock largest_block() const;

    friend bool operator==(const FootprintBreakdown&, const FootprintBreakdown&) = default;
};

// -----------------------------------------------------------------------------
// Operations
// -----------------------------------------------------------------------------

/// kWh drawn from the grid over the device lifetime.
double operational_energy_kwh(const OperationalParams& params);

/// Grid emissions for recharging over the lifetime, in gCO2e.
Quantity operational_footprint(const OperationalParams& params);

/// Per-block embodied sums for the selected bound; operational and training
/// are zero.
FootprintBreakdown embodied_footprint(const DeviceProfile& device, Bound bound);

FootprintBreakdown total_footprint(const DeviceProfile& device, Bound bound);

/// Stage values in the indicator's unit; they sum to `profile.total`.
std::array<Quantity, kStageCount> indicator_breakdown(const StageProfile& profile);

/// Ratio a/b after normalising both to grams. Throws ValueError when b is 0.
double compare(const Quantity& a, const Quantity& b);

}  // namespace tinylca
