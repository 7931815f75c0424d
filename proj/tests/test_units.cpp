#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "tinylca/error.hpp"
#include "tinylca/units.hpp"

namespace tinylca {
namespace {

TEST(Units, MetricCarbonScaling) {
    EXPECT_DOUBLE_EQ(convert(Quantity(390.0, Unit::gCO2e), Unit::kgCO2e).value(), 0.390);
    EXPECT_DOUBLE_EQ(convert(Quantity(1765.0, Unit::MtCO2e), Unit::GtCO2e).value(), 1.765);
    EXPECT_DOUBLE_EQ(Quantity(1.0, Unit::tCO2e).value_in(Unit::gCO2e), 1e6);
}

TEST(Units, IncompatibleDimensionNamesBothUnits) {
    try {
        (void)convert(Quantity(12.5, Unit::gCO2e), Unit::liter);
        FAIL() << "expected UnitError";
    } catch (const UnitError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("gCO2e"), std::string::npos);
        EXPECT_NE(msg.find("liter"), std::string::npos);
    }
}

TEST(Units, EnergyPowerTime) {
    EXPECT_DOUBLE_EQ(Quantity(1.0, Unit::kWh).value_in(Unit::Wh), 1000.0);
    EXPECT_DOUBLE_EQ(Quantity(1.0, Unit::W).value_in(Unit::mW), 1000.0);
    EXPECT_DOUBLE_EQ(Quantity(3.0, Unit::year).value_in(Unit::hour), 3.0 * oracle::kHoursPerYear);
    EXPECT_THROW((void)Quantity(1.0, Unit::W).value_in(Unit::Wh), UnitError);
}

TEST(Units, RejectsNegativeAndNonFinite) {
    EXPECT_THROW(Quantity(-1.0, Unit::gCO2e), ValueError);
    EXPECT_THROW(Quantity(std::nan(""), Unit::gCO2e), ValueError);
    EXPECT_THROW(Quantity(INFINITY, Unit::kWh), ValueError);
    EXPECT_NO_THROW(Quantity(0.0, Unit::gCO2e));
}

TEST(Units, AdditionUsesLeftUnit) {
    const Quantity sum = Quantity(1.0, Unit::kgCO2e) + Quantity(500.0, Unit::gCO2e);
    EXPECT_EQ(sum.unit(), Unit::kgCO2e);
    EXPECT_DOUBLE_EQ(sum.value(), 1.5);
    EXPECT_THROW((void)(Quantity(1.0, Unit::kgCO2e) + Quantity(1.0, Unit::liter)), UnitError);
}

TEST(Units, NamesRoundTrip) {
    for (Unit u : {Unit::gCO2e, Unit::kgCO2e, Unit::tCO2e, Unit::MtCO2e, Unit::GtCO2e, Unit::liter, Unit::gPeq,
                   Unit::mgNMVOC, Unit::Wh, Unit::kWh, Unit::mW, Unit::W, Unit::year, Unit::hour,
                   Unit::gCO2e_per_kWh, Unit::dimensionless}) {
        EXPECT_EQ(parse_unit(unit_name(u)), u);
    }
    EXPECT_FALSE(parse_unit("furlong").has_value());
}

TEST(UnitsProperty, RoundTripWithinOnePartInTenToTheTwelve) {
    auto gen = oracle::rng(1);
    std::uniform_real_distribution<double> exponent(-6.0, 12.0);
    const std::vector<std::vector<Unit>> families{
        {Unit::gCO2e, Unit::kgCO2e, Unit::tCO2e, Unit::MtCO2e, Unit::GtCO2e},
        {Unit::Wh, Unit::kWh},
        {Unit::mW, Unit::W},
        {Unit::year, Unit::hour}};
    for (int i = 0; i < 2000; ++i) {
        const auto& fam = families[static_cast<std::size_t>(i) % families.size()];
        const Unit from = fam[gen() % fam.size()];
        const Unit to = fam[gen() % fam.size()];
        const Quantity q(std::pow(10.0, exponent(gen)), from);
        const Quantity back = convert(convert(q, to), from);
        EXPECT_TRUE(oracle::near_rel(back.value(), q.value(), 1e-12)) << q.value() << " " << back.value();
    }
}

}  // namespace
}  // namespace tinylca
