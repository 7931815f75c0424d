#include "tinylca/units.hpp"

#include <array>
#include <cmath>

#include <fmt/format.h>

#include "tinylca/error.hpp"

namespace tinylca {

namespace {

struct UnitInfo {
    Unit unit;
    std::string_view name;
    Dimension dimension;
    double factor;
};

constexpr std::array<UnitInfo, 16> kUnits{{
    {Unit::gCO2e, "gCO2e", Dimension::CarbonMass, 1.0},
    {Unit::kgCO2e, "kgCO2e", Dimension::CarbonMass, 1e3},
    {Unit::tCO2e, "tCO2e", Dimension::CarbonMass, 1e6},
    {Unit::MtCO2e, "MtCO2e", Dimension::CarbonMass, 1e12},
    {Unit::GtCO2e, "GtCO2e", Dimension::CarbonMass, 1e15},
    {Unit::liter, "liter", Dimension::WaterVolume, 1.0},
    {Unit::gPeq, "gPeq", Dimension::PhosphorusMass, 1.0},
    {Unit::mgNMVOC, "mgNMVOC", Dimension::NmvocMass, 1.0},
    {Unit::Wh, "Wh", Dimension::Energy, 1.0},
    {Unit::kWh, "kWh", Dimension::Energy, 1e3},
    {Unit::mW, "mW", Dimension::Power, 1.0},
    {Unit::W, "W", Dimension::Power, 1e3},
    {Unit::year, "year", Dimension::Time, kHoursPerYear},
    {Unit::hour, "hour", Dimension::Time, 1.0},
    {Unit::gCO2e_per_kWh, "gCO2e_per_kWh", Dimension::CarbonIntensity, 1.0},
    {Unit::dimensionless, "dimensionless", Dimension::Dimensionless, 1.0},
}};

const UnitInfo& info(Unit unit) noexcept {
    return kUnits[static_cast<std::size_t>(unit)];
}

}  // namespace

Dimension dimension_of(Unit unit) noexcept { return info(unit).dimension; }

double base_factor(Unit unit) noexcept { return info(unit).factor; }

std::string_view unit_name(Unit unit) noexcept { return info(unit).name; }

std::optional<Unit> parse_unit(std::string_view name) noexcept {
    for (const auto& u : kUnits) {
        if (u.name == name) return u.unit;
    }
    return std::nullopt;
}

Quantity::Quantity(double magnitude, Unit unit) : magnitude_(magnitude), unit_(unit) {
    if (!std::isfinite(magnitude) || magnitude < 0.0) {
        throw ValueError(fmt::format("quantity magnitude must be finite and non-negative, got {} {}",
                                     magnitude, unit_name(unit)));
    }
}

double Quantity::value_in(Unit target) const {
    if (target == unit_) return magnitude_;
    if (dimension_of(target) != dimension_of(unit_)) {
        throw UnitError(fmt::format("cannot convert {} to {}: incompatible dimensions",
                                    unit_name(unit_), unit_name(target)));
    }
    return magnitude_ * base_factor(unit_) / base_factor(target);
}

Quantity Quantity::in(Unit target) const { return Quantity(value_in(target), target); }

Quantity convert(const Quantity& q, Unit target) { return q.in(target); }

Quantity operator+(const Quantity& lhs, const Quantity& rhs) {
    return Quantity(lhs.value() + rhs.value_in(lhs.unit()), lhs.unit());
}

Quantity operator*(const Quantity& q, double factor) {
    return Quantity(q.value() * factor, q.unit());
}

std::string to_string(const Quantity& q) {
    return fmt::format("{} {}", q.value(), unit_name(q.unit()));
}

}  // namespace tinylca
