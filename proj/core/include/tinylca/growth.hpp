#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <variant>

#include "tinylca/error.hpp"

namespace tinylca {

/// Device counts are in billions throughout this header.
struct LinearGrowth {
    int base_year = 2023;
    double base_count = 15.0;
    double slope = 0.0;  // billions per year

    friend bool operator==(const LinearGrowth&, const LinearGrowth&) = default;
};

struct ExponentialGrowth {
    int base_year = 2023;
    double base_count = 15.0;
    double rate = 0.0;  // fractional growth per year

    friend bool operator==(const ExponentialGrowth&, const ExponentialGrowth&) = default;
};

using GrowthModel = std::variant<LinearGrowth, ExponentialGrowth>;

enum class GrowthFamily { Linear, Exponential };

std::string_view to_string(GrowthFamily family) noexcept;
std::optional<GrowthFamily> parse_growth_family(std::string_view name) noexcept;
GrowthFamily family_of(const GrowthModel& model) noexcept;
int base_year(const GrowthModel& model) noexcept;
double base_count(const GrowthModel& model) noexcept;

void validate(const GrowthModel& model);

/// Relative slack applied when deciding whether a projected count reaches a
/// threshold, so that e.g. 15 + (35/18)*18 counts as reaching 50.
inline constexpr double kCrossingTolerance = 1e-12;

[[nodiscard]] bool reaches(double count, double threshold) noexcept;

/// Projected count at `year`. Throws ValueError for years before the base.
double project(const GrowthModel& model, int year);

struct CrossingResult {
    double threshold = 0.0;
    std::optional<int> year;  // nullopt: the model never reaches the threshold

    [[nodiscard]] bool never() const noexcept { return !year.has_value(); }
};

/// Smallest calendar year whose projection reaches `threshold`, with the
/// previous year still below it. Thresholds at or below the base count
/// resolve to the base year.
CrossingResult first_crossing(const GrowthModel& model, double threshold);

struct YearCount {
    int year = 0;
    double count = 0.0;
};

/// Two points interpolate exactly; more points use least squares (on log
/// counts for the exponential family). The base year is the first point's.
GrowthModel fit(std::span<const YearCount> points, GrowthFamily family);

/// Linear(2023, 15, 35/18): the straight line through (2023, 15) and (2041, 50).
GrowthModel default_linear_model();
/// Exponential fit through (2032, 50) and (2043, 250).
GrowthModel default_exponential_model();

}  // namespace tinylca
