#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tinylca/error.hpp"
#include "tinylca/fleet.hpp"
#include "tinylca/lca_model.hpp"

namespace tinylca {

inline constexpr int kSchemaVersion = 1;

struct Diagnostic {
    std::string file;
    std::string path;  // JSON pointer into the document
    std::string message;

    friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

struct ValidationReport {
    std::vector<Diagnostic> errors;
    std::vector<Diagnostic> warnings;

    [[nodiscard]] bool ok() const noexcept { return errors.empty(); }
    void merge(const ValidationReport& other);
    [[nodiscard]] std::string summary() const;
};

/// Thrown by every loader; nothing is returned on failure.
class DataError : public Error {
public:
    explicit DataError(ValidationReport report);

    [[nodiscard]] const ValidationReport& report() const noexcept { return report_; }

private:
    ValidationReport report_;
};

// -----------------------------------------------------------------------------
// Dataset records
// -----------------------------------------------------------------------------

struct ComponentRecord {
    ComponentEntry entry;
    std::string source;

    friend bool operator==(const ComponentRecord&, const ComponentRecord&) = default;
};

struct ComponentDatabase {
    std::string description;
    std::vector<ComponentRecord> entries;

    [[nodiscard]] const ComponentEntry* find(FunctionalBlock block, const std::string& label) const noexcept;

    friend bool operator==(const ComponentDatabase&, const ComponentDatabase&) = default;
};

/// How unattributed percentage points are assigned to stages.
struct RemainderDirective {
    /// nullopt means "proportional": spread evenly over the stages the file
    /// leaves unlisted (EndOfLife excluded), or in proportion to the listed
    /// shares when every other stage is listed.
    std::optional<LifeCycleStage> stage;

    friend bool operator==(const RemainderDirective&, const RemainderDirective&) = default;
};

/// A loaded indicator profile together with the percentages exactly as the
/// file states them.
struct IndicatorProfile {
    StageProfile profile;
    std::map<LifeCycleStage, double> stated_percent;
    double remainder_percent = 0.0;
    RemainderDirective remainder;
    bool total_is_placeholder = false;
    std::string note;

    friend bool operator==(const IndicatorProfile&, const IndicatorProfile&) = default;
};

struct SectorTable {
    SectorShares shares;
    std::map<std::string, double> percent;
    std::string source;

    friend bool operator==(const SectorTable&, const SectorTable&) = default;
};

struct ReferenceDevice {
    std::string name;
    std::string display_name;
    Quantity total{0.0, Unit::gCO2e};
    std::optional<std::array<double, kStageCount>> stage_shares;
    std::string source;

    friend bool operator==(const ReferenceDevice&, const ReferenceDevice&) = default;
};

/// A reference known only through the ratio range it spans against the
/// bundled profiles.
struct RatioReference {
    std::string name;
    std::string display_name;
    double min_ratio = 0.0;
    double max_ratio = 0.0;
    std::string source;

    friend bool operator==(const RatioReference&, const RatioReference&) = default;
};

struct PlatformTier {
    std::string platform;
    std::string compute;
    std::string memory;
    std::string storage;
    std::string power;
    std::string price;
    std::string footprint;

    friend bool operator==(const PlatformTier&, const PlatformTier&) = default;
};

struct ReferenceSet {
    std::vector<ReferenceDevice> devices;
    std::vector<RatioReference> ratio_references;
    std::vector<PlatformTier> platform_tiers;

    [[nodiscard]] const ReferenceDevice* find_device(const std::string& name) const noexcept;
    [[nodiscard]] const RatioReference* find_ratio(const std::string& name) const noexcept;

    friend bool operator==(const ReferenceSet&, const ReferenceSet&) = default;
};

// -----------------------------------------------------------------------------
// Loaders. Each validates the whole document and throws DataError with every
// problem found; warnings (unknown top-level keys) go to `warnings` when given.
// -----------------------------------------------------------------------------

ComponentDatabase load_component_db(const std::filesystem::path& path, std::vector<Diagnostic>* warnings = nullptr);

std::vector<IndicatorProfile> load_stage_profiles(const std::filesystem::path& path,
                                                  std::vector<Diagnostic>* warnings = nullptr);

SectorTable load_sector_shares(const std::filesystem::path& path, std::vector<Diagnostic>* warnings = nullptr);

DeviceProfile load_device_profile(const std::filesystem::path& path, const ComponentDatabase& db,
                                  std::vector<Diagnostic>* warnings = nullptr);

ReferenceSet load_references(const std::filesystem::path& path, std::vector<Diagnostic>* warnings = nullptr);

/// Same checks as the file loaders, applied to an in-memory document;
/// `origin` names it in diagnostics.
DeviceProfile parse_device_profile(const nlohmann::json& doc, const ComponentDatabase& db,
                                   const std::string& origin, std::vector<Diagnostic>* warnings = nullptr);

// -----------------------------------------------------------------------------
// Serialisation back to the file formats (re-loading yields equal values).
// -----------------------------------------------------------------------------

nlohmann::json to_json(const ComponentDatabase& db);
nlohmann::json to_json(const std::vector<IndicatorProfile>& profiles);
nlohmann::json to_json(const SectorTable& sectors);
/// Components are written inline, so the document loads against any database.
nlohmann::json to_json(const DeviceProfile& profile);
nlohmann::json to_json(const ReferenceSet& refs);

// -----------------------------------------------------------------------------
// A whole data/ tree
// -----------------------------------------------------------------------------

struct Dataset {
    std::filesystem::path root;
    ComponentDatabase components;
    std::map<std::string, DeviceProfile> profiles;  // keyed by profile name
    std::vector<IndicatorProfile> indicators;
    SectorTable sectors;
    ReferenceSet references;
    std::vector<Diagnostic> warnings;

    [[nodiscard]] const DeviceProfile& profile(const std::string& name) const;
    [[nodiscard]] const IndicatorProfile& indicator(Indicator indicator) const;
    [[nodiscard]] std::string profile_names() const;
};

/// Loads components.json, profiles/*.json, indicators.json, sectors.json,
/// and references.json. Errors across all files are reported together.
Dataset load_dataset(const std::filesystem::path& root);

/// Compile-time location of the bundled data tree.
std::filesystem::path bundled_data_dir();

}  // namespace tinylca
