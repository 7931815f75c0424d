#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "tinylca/error.hpp"

namespace tinylca {

/// Mean Julian year. Every year<->hour conversion goes through this constant.
inline constexpr double kHoursPerYear = 8766.0;

enum class Unit {
    gCO2e,
    kgCO2e,
    tCO2e,
    MtCO2e,
    GtCO2e,
    liter,
    gPeq,
    mgNMVOC,
    Wh,
    kWh,
    mW,
    W,
    year,
    hour,
    gCO2e_per_kWh,
    dimensionless,
};

enum class Dimension {
    CarbonMass,
    WaterVolume,
    PhosphorusMass,
    NmvocMass,
    Energy,
    Power,
    Time,
    CarbonIntensity,
    Dimensionless,
};

Dimension dimension_of(Unit unit) noexcept;

/// Factor taking a magnitude in `unit` to the base unit of its dimension
/// (g CO2e, liter, g P-eq, mg NMVOC, Wh, mW, hour, g/kWh, 1).
double base_factor(Unit unit) noexcept;

std::string_view unit_name(Unit unit) noexcept;
std::optional<Unit> parse_unit(std::string_view name) noexcept;

/// Non-negative, finite magnitude tagged with a unit.
///
/// Signed results (net impact) are deliberately not representable here.
class Quantity {
public:
    constexpr Quantity() noexcept = default;

    /// Throws ValueError when `magnitude` is negative, NaN, or infinite.
    Quantity(double magnitude, Unit unit);

    [[nodiscard]] double value() const noexcept { return magnitude_; }
    [[nodiscard]] Unit unit() const noexcept { return unit_; }
    [[nodiscard]] Dimension dimension() const noexcept { return dimension_of(unit_); }

    /// Magnitude expressed in `target`; throws UnitError across dimensions.
    [[nodiscard]] double value_in(Unit target) const;
    [[nodiscard]] Quantity in(Unit target) const;

    friend bool operator==(const Quantity&, const Quantity&) = default;

private:
    double magnitude_ = 0.0;
    Unit unit_ = Unit::dimensionless;
};

/// Exact scale-factor conversion. Throws UnitError naming both units when
/// the dimensions differ.
Quantity convert(const Quantity& q, Unit target);

/// Sum in the unit of `lhs`.
Quantity operator+(const Quantity& lhs, const Quantity& rhs);
Quantity operator*(const Quantity& q, double factor);

std::string to_string(const Quantity& q);

}  // namespace tinylca
