#include "tinylca/growth.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include <fmt/format.h>

#include "tinylca/error.hpp"

namespace tinylca {

namespace {

// Crossings further out than this are reported as an error rather than
// silently overflowing the calendar year.
constexpr double kMaxYearsAhead = 1e7;

template <class... Fs>
struct overloaded : Fs... {
    using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

}  // namespace

std::string_view to_string(GrowthFamily family) noexcept {
    return family == GrowthFamily::Linear ? "linear" : "exponential";
}

std::optional<GrowthFamily> parse_growth_family(std::string_view name) noexcept {
    if (name == "linear") return GrowthFamily::Linear;
    if (name == "exponential") return GrowthFamily::Exponential;
    return std::nullopt;
}

GrowthFamily family_of(const GrowthModel& model) noexcept {
    return std::holds_alternative<LinearGrowth>(model) ? GrowthFamily::Linear : GrowthFamily::Exponential;
}

int base_year(const GrowthModel& model) noexcept {
    return std::visit([](const auto& m) { return m.base_year; }, model);
}

double base_count(const GrowthModel& model) noexcept {
    return std::visit([](const auto& m) { return m.base_count; }, model);
}

void validate(const GrowthModel& model) {
    const double base = base_count(model);
    if (!std::isfinite(base) || base <= 0.0) {
        throw ValueError(fmt::format("growth model base count must be positive, got {}", base));
    }
    std::visit(overloaded{
                   [](const LinearGrowth& m) {
                       if (!std::isfinite(m.slope) || m.slope < 0.0) {
                           throw ValueError(fmt::format("linear slope must be non-negative, got {}", m.slope));
                       }
                   },
                   [](const ExponentialGrowth& m) {
                       if (!std::isfinite(m.rate) || m.rate < 0.0) {
                           throw ValueError(fmt::format("exponential rate must be non-negative, got {}", m.rate));
                       }
                   },
               },
               model);
}

bool reaches(double count, double threshold) noexcept {
    return count >= threshold - kCrossingTolerance * std::abs(threshold);
}

double project(const GrowthModel& model, int year) {
    validate(model);
    const int start = base_year(model);
    if (year < start) {
        throw ValueError(fmt::format("cannot project to {}: before the model's base year {}", year, start));
    }
    const double elapsed = static_cast<double>(year) - static_cast<double>(start);
    return std::visit(overloaded{
                          [&](const LinearGrowth& m) { return m.base_count + m.slope * elapsed; },
                          [&](const ExponentialGrowth& m) { return m.base_count * std::pow(1.0 + m.rate, elapsed); },
                      },
                      model);
}

CrossingResult first_crossing(const GrowthModel& model, double threshold) {
    validate(model);
    if (!std::isfinite(threshold)) throw ValueError("crossing threshold must be finite");

    CrossingResult result{threshold, std::nullopt};
    const int start = base_year(model);
    const double base = base_count(model);
    if (reaches(base, threshold)) {
        result.year = start;
        return result;
    }

    const double years_needed = std::visit(
        overloaded{
            [&](const LinearGrowth& m) {
                return m.slope > 0.0 ? (threshold - base) / m.slope : std::numeric_limits<double>::infinity();
            },
            [&](const ExponentialGrowth& m) {
                return m.rate > 0.0 ? std::log(threshold / base) / std::log1p(m.rate)
                                    : std::numeric_limits<double>::infinity();
            },
        },
        model);
    if (std::isinf(years_needed)) return result;
    if (years_needed > kMaxYearsAhead) {
        throw ValueError(fmt::format("threshold {} is reached more than {} years after {}", threshold,
                                     kMaxYearsAhead, start));
    }

    // The closed form can land one year off either way after rounding; walk
    // until the crossing invariant holds by evaluation.
    int year = start + static_cast<int>(std::ceil(years_needed));
    while (year > start && reaches(project(model, year - 1), threshold)) --year;
    while (!reaches(project(model, year), threshold)) ++year;
    result.year = year;
    return result;
}

GrowthModel fit(std::span<const YearCount> points, GrowthFamily family) {
    if (points.size() < 2) throw ValueError("fitting a growth model needs at least two points");
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!std::isfinite(points[i].count) || points[i].count <= 0.0) {
            throw ValueError(fmt::format("growth points need positive counts, got {} in {}", points[i].count,
                                         points[i].year));
        }
        if (i > 0 && points[i].year <= points[i - 1].year) {
            throw ValueError(fmt::format("growth point years must be strictly increasing (duplicate or "
                                         "out-of-order year {})",
                                         points[i].year));
        }
    }

    const int first = points.front().year;
    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto& p : points) {
        xs.push_back(static_cast<double>(p.year - first));
        ys.push_back(family == GrowthFamily::Linear ? p.count : std::log(p.count));
    }

    double intercept = 0.0;
    double slope = 0.0;
    if (points.size() == 2) {
        intercept = ys[0];
        slope = (ys[1] - ys[0]) / xs[1];
    } else {
        const double n = static_cast<double>(xs.size());
        const double mean_x = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
        const double mean_y = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
        double sxy = 0.0;
        double sxx = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            sxy += (xs[i] - mean_x) * (ys[i] - mean_y);
            sxx += (xs[i] - mean_x) * (xs[i] - mean_x);
        }
        slope = sxy / sxx;
        intercept = mean_y - slope * mean_x;
    }

    GrowthModel model;
    if (family == GrowthFamily::Linear) {
        model = LinearGrowth{first, intercept, slope};
    } else if (points.size() == 2) {
        // Direct ratio keeps the base count exact instead of exp(log(c)).
        const double ratio = points[1].count / points[0].count;
        model = ExponentialGrowth{first, points[0].count, std::pow(ratio, 1.0 / xs[1]) - 1.0};
    } else {
        model = ExponentialGrowth{first, std::exp(intercept), std::expm1(slope)};
    }
    validate(model);
    return model;
}

GrowthModel default_linear_model() { return LinearGrowth{2023, 15.0, 35.0 / 18.0}; }

GrowthModel default_exponential_model() {
    const std::array<YearCount, 2> anchors{{{2032, 50.0}, {2043, 250.0}}};
    return fit(anchors, GrowthFamily::Exponential);
}

}  // namespace tinylca
