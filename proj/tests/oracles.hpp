#pragma once

// Reference arithmetic written independently of the engine. Tests compare
// engine results against these, never against the engine itself.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>

namespace tinylca::oracle {

inline constexpr double kHoursPerYear = 8766.0;

inline double operational_g(double mw, double duty, double years, double g_per_kwh, double efficiency) {
    const double watts = mw / 1000.0;
    const double hours = years * kHoursPerYear * duty;
    const double kwh = watts * hours / 1000.0 / efficiency;
    return kwh * g_per_kwh;
}

// Bundled profiles, summed by hand from data/components.json.
inline constexpr double kHighCostTypicalEmbodiedG = 300 + 70 + 1150 + 2900 + 700 + 420 + 900 + 337.5;
inline constexpr double kHighCostHighEmbodiedG = 320 + 75 + 1200 + 3000 + 730 + 440 + 930 + 352.5;
inline constexpr double kLowCostTypicalEmbodiedG = 150 + 30 + 300 + 120 + 90 + 150 + 44.5;
inline constexpr double kHighCostPowerSupplyHighG = 3000;

inline double default_operational_g() { return operational_g(1.0, 1.0, 3.0, 475.0, 1.0); }

/// grams x count -> megatonnes.
inline double fleet_mt(double count, double grams) { return count * grams / 1e12; }

/// Gt/yr x share x reduction x years -> Mt.
inline double avoided_mt(double global_gt, double share, double reduction, double years) {
    return global_gt * 1000.0 * share * reduction * years;
}

inline double break_even(double fp_mt, double fixed_mt, double other_share, double global_gt, double years) {
    const double gap = fp_mt - fixed_mt;
    return gap <= 0.0 ? 0.0 : gap / (global_gt * 1000.0 * other_share * years);
}

/// Smallest integer year with base + slope*(y-base_year) >= threshold, by
/// stepping rather than by closed form.
inline int linear_crossing_by_search(int base_year, double base, double slope, double threshold) {
    int y = base_year;
    while (base + slope * (y - base_year) < threshold * (1.0 - 1e-12)) ++y;
    return y;
}

inline std::filesystem::path data_dir() { return TINYLCA_TEST_DATA_DIR; }

/// Deterministic generator for property tests.
inline std::mt19937_64 rng(std::uint64_t salt = 0) { return std::mt19937_64(0x7131CAull ^ salt); }

inline bool near_rel(double a, double b, double rel) {
    return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

}  // namespace tinylca::oracle
