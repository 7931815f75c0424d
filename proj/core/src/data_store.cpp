#include "tinylca/data_store.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

#include <fmt/format.h>

namespace tinylca {

using nlohmann::json;
namespace fs = std::filesystem;

// -----------------------------------------------------------------------------
// Reports
// -----------------------------------------------------------------------------

void ValidationReport::merge(const ValidationReport& other) {
    errors.insert(errors.end(), other.errors.begin(), other.errors.end());
    warnings.insert(warnings.end(), other.warnings.begin(), other.warnings.end());
}

std::string ValidationReport::summary() const {
    std::string out;
    for (const auto& d : errors) {
        if (!out.empty()) out += '\n';
        out += fmt::format("{}:{}: {}", d.file, d.path.empty() ? "/" : d.path, d.message);
    }
    return out;
}

DataError::DataError(ValidationReport report)
    : Error(report.errors.empty() ? std::string("data error") : report.summary()), report_(std::move(report)) {}

namespace {

constexpr double kStageSumTolerancePercent = 3.0;
constexpr double kSectorSumTolerance = 1e-3;
constexpr double kReferenceShareTolerance = 1e-2;

/// Collects diagnostics for one document.
class Reader {
public:
    Reader(std::string file, ValidationReport& report) : file_(std::move(file)), report_(report) {}

    void error(const std::string& path, std::string message) {
        report_.errors.push_back({file_, path, std::move(message)});
    }
    void warn(const std::string& path, std::string message) {
        report_.warnings.push_back({file_, path, std::move(message)});
    }

    /// Unknown keys are warnings at the top level and errors below it.
    void check_keys(const json& obj, const std::string& path, std::initializer_list<std::string_view> allowed) {
        for (const auto& [key, value] : obj.items()) {
            if (std::find(allowed.begin(), allowed.end(), key) != allowed.end()) continue;
            const std::string where = path + "/" + key;
            if (path.empty()) {
                warn(where, fmt::format("unknown top-level key '{}' ignored", key));
            } else {
                error(where, fmt::format("unknown key '{}'", key));
            }
        }
    }

    bool require_object(const json& j, const std::string& path) {
        if (j.is_object()) return true;
        error(path, "expected an object");
        return false;
    }

    std::optional<double> number(const json& obj, const std::string& key, const std::string& path, bool required) {
        const auto it = obj.find(key);
        if (it == obj.end()) {
            if (required) error(path + "/" + key, fmt::format("missing required number '{}'", key));
            return std::nullopt;
        }
        if (!it->is_number()) {
            error(path + "/" + key, fmt::format("'{}' must be a number", key));
            return std::nullopt;
        }
        const double v = it->get<double>();
        if (!std::isfinite(v)) {
            error(path + "/" + key, fmt::format("'{}' must be finite", key));
            return std::nullopt;
        }
        return v;
    }

    std::optional<double> non_negative(const json& obj, const std::string& key, const std::string& path,
                                       bool required) {
        auto v = number(obj, key, path, required);
        if (v && *v < 0.0) {
            error(path + "/" + key, fmt::format("'{}' must be non-negative, got {}", key, *v));
            return std::nullopt;
        }
        return v;
    }

    std::optional<std::string> text(const json& obj, const std::string& key, const std::string& path, bool required) {
        const auto it = obj.find(key);
        if (it == obj.end()) {
            if (required) error(path + "/" + key, fmt::format("missing required string '{}'", key));
            return std::nullopt;
        }
        if (!it->is_string()) {
            error(path + "/" + key, fmt::format("'{}' must be a string", key));
            return std::nullopt;
        }
        return it->get<std::string>();
    }

    void schema_version(const json& doc) {
        const auto it = doc.find("schema_version");
        if (it == doc.end()) {
            error("/schema_version", "missing required 'schema_version'");
        } else if (!it->is_number_integer() || it->get<int>() != kSchemaVersion) {
            error("/schema_version", fmt::format("unsupported schema_version {}, expected {}", it->dump(),
                                                 kSchemaVersion));
        }
    }

    const std::string& file() const noexcept { return file_; }

private:
    std::string file_;
    ValidationReport& report_;
};

std::optional<json> read_document(const fs::path& path, Reader& reader) {
    std::ifstream in(path);
    if (!in) {
        reader.error("", "cannot open file");
        return std::nullopt;
    }
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    try {
        json doc = json::parse(text);
        if (!doc.is_object()) {
            reader.error("", "document root must be an object");
            return std::nullopt;
        }
        return doc;
    } catch (const json::parse_error& e) {
        reader.error("", fmt::format("parse error at byte {}: {}", e.byte, e.what()));
        return std::nullopt;
    }
}

void finish(ValidationReport& report, std::vector<Diagnostic>* warnings) {
    if (!report.ok()) throw DataError(std::move(report));
    if (warnings) warnings->insert(warnings->end(), report.warnings.begin(), report.warnings.end());
}

std::optional<FunctionalBlock> read_block(Reader& r, const json& obj, const std::string& path) {
    const auto name = r.text(obj, "block", path, true);
    if (!name) return std::nullopt;
    const auto block = parse_block(*name);
    if (!block) {
        r.error(path + "/block", fmt::format("unknown block '{}'; valid blocks: {}", *name, block_names()));
    }
    return block;
}

/// Reads {low_g, typical_g, high_g}. Returns nullopt when none are present.
std::optional<EmbodiedBounds> read_bounds(Reader& r, const json& obj, const std::string& path,
                                          const std::string& entry_name, bool required) {
    const bool any = obj.contains("low_g") || obj.contains("typical_g") || obj.contains("high_g");
    if (!any && !required) return std::nullopt;
    const auto lo = r.non_negative(obj, "low_g", path, true);
    const auto typ = r.non_negative(obj, "typical_g", path, true);
    const auto hi = r.non_negative(obj, "high_g", path, true);
    if (!lo || !typ || !hi) return std::nullopt;
    if (!(*lo <= *typ && *typ <= *hi)) {
        r.error(path, fmt::format("entry {}: bounds must satisfy low <= typical <= high, got low={} typical={} high={}",
                                  entry_name, *lo, *typ, *hi));
        return std::nullopt;
    }
    return EmbodiedBounds{Quantity(*lo, Unit::gCO2e), Quantity(*typ, Unit::gCO2e), Quantity(*hi, Unit::gCO2e)};
}

std::optional<std::array<double, kStageCount>> read_reference_shares(Reader& r, const json& obj,
                                                                    const std::string& path) {
    if (!obj.is_object()) {
        r.error(path, "expected an object of stage -> percent");
        return std::nullopt;
    }
    std::array<double, kStageCount> shares{};
    double sum = 0.0;
    bool ok = true;
    for (const auto& [key, value] : obj.items()) {
        const auto stage = parse_stage(key);
        if (!stage) {
            r.error(path + "/" + key, fmt::format("unknown stage '{}'; valid stages: {}", key, stage_names()));
            ok = false;
            continue;
        }
        if (!value.is_number() || value.get<double>() < 0.0 || value.get<double>() > 100.0) {
            r.error(path + "/" + key, "stage percent must be a number in [0, 100]");
            ok = false;
            continue;
        }
        shares[index_of(*stage)] = value.get<double>() / 100.0;
        sum += shares[index_of(*stage)];
    }
    if (ok && std::abs(sum - 1.0) > kReferenceShareTolerance + 1e-12) {
        r.error(path, fmt::format("reference stage shares sum to {}, expected 1 within {}", sum,
                                  kReferenceShareTolerance));
        ok = false;
    }
    if (!ok) return std::nullopt;
    return shares;
}

json percent_map(const std::array<double, kStageCount>& shares) {
    json out = json::object();
    for (auto stage : kAllStages) {
        if (shares[index_of(stage)] != 0.0) out[std::string(to_string(stage))] = shares[index_of(stage)] * 100.0;
    }
    return out;
}

}  // namespace

// -----------------------------------------------------------------------------
// Lookups
// -----------------------------------------------------------------------------

const ComponentEntry* ComponentDatabase::find(FunctionalBlock block, const std::string& label) const noexcept {
    for (const auto& r : entries) {
        if (r.entry.block == block && r.entry.label == label) return &r.entry;
    }
    return nullptr;
}

const ReferenceDevice* ReferenceSet::find_device(const std::string& name) const noexcept {
    for (const auto& d : devices) {
        if (d.name == name) return &d;
    }
    return nullptr;
}

const RatioReference* ReferenceSet::find_ratio(const std::string& name) const noexcept {
    for (const auto& r : ratio_references) {
        if (r.name == name) return &r;
    }
    return nullptr;
}

// -----------------------------------------------------------------------------
// Component database
// -----------------------------------------------------------------------------

ComponentDatabase load_component_db(const fs::path& path, std::vector<Diagnostic>* warnings) {
    ValidationReport report;
    Reader r(path.string(), report);
    ComponentDatabase db;
    if (auto doc = read_document(path, r)) {
        r.schema_version(*doc);
        r.check_keys(*doc, "", {"schema_version", "description", "components"});
        db.description = r.text(*doc, "description", "", false).value_or("");
        const auto it = doc->find("components");
        if (it == doc->end() || !it->is_array()) {
            r.error("/components", "missing required array 'components'");
        } else {
            std::set<std::pair<FunctionalBlock, std::string>> seen;
            for (std::size_t i = 0; i < it->size(); ++i) {
                const json& item = (*it)[i];
                const std::string p = fmt::format("/components/{}", i);
                if (!r.require_object(item, p)) continue;
                r.check_keys(item, p, {"block", "label", "low_g", "typical_g", "high_g", "source"});
                const auto block = read_block(r, item, p);
                const auto label = r.text(item, "label", p, true);
                const std::string name =
                    fmt::format("{}/{}", block ? to_string(*block) : "?", label.value_or("?"));
                const auto bounds = read_bounds(r, item, p, name, true);
                const auto source = r.text(item, "source", p, false);
                if (!block || !label || !bounds) continue;
                if (!seen.emplace(*block, *label).second) {
                    r.error(p, fmt::format("duplicate component key {}", name));
                    continue;
                }
                db.entries.push_back({ComponentEntry{*block, *label, *bounds}, source.value_or("")});
            }
        }
    }
    finish(report, warnings);
    return db;
}

json to_json(const ComponentDatabase& db) {
    json items = json::array();
    for (const auto& rec : db.entries) {
        items.push_back({{"block", to_string(rec.entry.block)},
                         {"label", rec.entry.label},
                         {"low_g", rec.entry.embodied.low.value_in(Unit::gCO2e)},
                         {"typical_g", rec.entry.embodied.typical.value_in(Unit::gCO2e)},
                         {"high_g", rec.entry.embodied.high.value_in(Unit::gCO2e)},
                         {"source", rec.source}});
    }
    return {{"schema_version", kSchemaVersion}, {"description", db.description}, {"components", items}};
}

// -----------------------------------------------------------------------------
// Indicator stage profiles
// -----------------------------------------------------------------------------

std::vector<IndicatorProfile> load_stage_profiles(const fs::path& path, std::vector<Diagnostic>* warnings) {
    ValidationReport report;
    Reader r(path.string(), report);
    std::vector<IndicatorProfile> out;
    if (auto doc = read_document(path, r)) {
        r.schema_version(*doc);
        r.check_keys(*doc, "", {"schema_version", "source", "profiles"});
        const auto it = doc->find("profiles");
        if (it == doc->end() || !it->is_array()) {
            r.error("/profiles", "missing required array 'profiles'");
        } else {
            std::set<Indicator> seen;
            for (std::size_t i = 0; i < it->size(); ++i) {
                const json& item = (*it)[i];
                const std::string p = fmt::format("/profiles/{}", i);
                if (!r.require_object(item, p)) continue;
                r.check_keys(item, p, {"indicator", "total", "unit", "total_status", "shares_percent",
                                       "remainder_percent", "remainder", "note"});
                const std::size_t errors_before = report.errors.size();

                IndicatorProfile rec;
                const auto ind_name = r.text(item, "indicator", p, true);
                std::optional<Indicator> indicator;
                if (ind_name) {
                    indicator = parse_indicator(*ind_name);
                    if (!indicator) r.error(p + "/indicator", fmt::format("unknown indicator '{}'", *ind_name));
                }
                const auto total = r.non_negative(item, "total", p, true);
                const auto unit_name_str = r.text(item, "unit", p, true);
                if (indicator && unit_name_str) {
                    const auto unit = parse_unit(*unit_name_str);
                    if (!unit || *unit != canonical_unit(*indicator)) {
                        r.error(p + "/unit", fmt::format("{} totals must be in {}, got '{}'", *ind_name,
                                                         unit_name(canonical_unit(*indicator)), *unit_name_str));
                    }
                }
                const auto status = r.text(item, "total_status", p, false).value_or("stated");
                if (status != "stated" && status != "placeholder") {
                    r.error(p + "/total_status", "total_status must be 'stated' or 'placeholder'");
                }
                rec.total_is_placeholder = status == "placeholder";
                rec.note = r.text(item, "note", p, false).value_or("");
                rec.remainder_percent = r.non_negative(item, "remainder_percent", p, false).value_or(0.0);

                const std::string directive = r.text(item, "remainder", p, false).value_or("proportional");
                if (directive != "proportional") {
                    rec.remainder.stage = parse_stage(directive);
                    if (!rec.remainder.stage) {
                        r.error(p + "/remainder", fmt::format("remainder must be 'proportional' or a stage ({}), got '{}'",
                                                              stage_names(), directive));
                    }
                }

                const auto shares_it = item.find("shares_percent");
                if (shares_it == item.end() || !shares_it->is_object()) {
                    r.error(p + "/shares_percent", "missing required object 'shares_percent'");
                } else {
                    for (const auto& [key, value] : shares_it->items()) {
                        const auto stage = parse_stage(key);
                        const std::string sp = p + "/shares_percent/" + key;
                        if (!stage) {
                            r.error(sp, fmt::format("unknown stage '{}'; valid stages: {}", key, stage_names()));
                        } else if (!value.is_number() || value.get<double>() < 0.0 || value.get<double>() > 100.0) {
                            r.error(sp, "stage percent must be a number in [0, 100]");
                        } else {
                            rec.stated_percent[*stage] = value.get<double>();
                        }
                    }
                }

                if (indicator && !seen.insert(*indicator).second) {
                    r.error(p + "/indicator", fmt::format("duplicate profile for indicator {}", *ind_name));
                }
                if (report.errors.size() != errors_before) continue;

                double stated_sum = rec.remainder_percent;
                for (const auto& [stage, pct] : rec.stated_percent) stated_sum += pct;
                if (std::abs(stated_sum - 100.0) > kStageSumTolerancePercent) {
                    r.error(p + "/shares_percent",
                            fmt::format("stage percentages plus remainder sum to {}, outside [{}, {}]", stated_sum,
                                        100.0 - kStageSumTolerancePercent, 100.0 + kStageSumTolerancePercent));
                    continue;
                }

                std::array<double, kStageCount> pct{};
                for (const auto& [stage, v] : rec.stated_percent) pct[index_of(stage)] = v;
                if (rec.remainder_percent > 0.0) {
                    if (rec.remainder.stage) {
                        pct[index_of(*rec.remainder.stage)] += rec.remainder_percent;
                    } else {
                        std::vector<LifeCycleStage> unlisted;
                        for (auto stage : kAllStages) {
                            if (stage != LifeCycleStage::EndOfLife && !rec.stated_percent.contains(stage)) {
                                unlisted.push_back(stage);
                            }
                        }
                        if (!unlisted.empty()) {
                            const double each = rec.remainder_percent / static_cast<double>(unlisted.size());
                            for (auto stage : unlisted) pct[index_of(stage)] += each;
                        } else {
                            const double listed = stated_sum - rec.remainder_percent;
                            for (auto& v : pct) v += listed > 0.0 ? rec.remainder_percent * v / listed : 0.0;
                        }
                    }
                }
                for (auto stage : kAllStages) {
                    rec.profile.shares[index_of(stage)] = pct[index_of(stage)] / stated_sum;
                }
                rec.profile.indicator = *indicator;
                rec.profile.total = Quantity(*total, canonical_unit(*indicator));
                try {
                    rec.profile.validate();
                } catch (const Error& e) {
                    r.error(p, e.what());
                    continue;
                }
                out.push_back(std::move(rec));
            }
        }
    }
    finish(report, warnings);
    return out;
}

json to_json(const std::vector<IndicatorProfile>& profiles) {
    json items = json::array();
    for (const auto& rec : profiles) {
        json shares = json::object();
        for (const auto& [stage, pct] : rec.stated_percent) shares[std::string(to_string(stage))] = pct;
        json item = {{"indicator", to_string(rec.profile.indicator)},
                     {"total", rec.profile.total.value()},
                     {"unit", unit_name(rec.profile.total.unit())},
                     {"total_status", rec.total_is_placeholder ? "placeholder" : "stated"},
                     {"shares_percent", shares},
                     {"remainder_percent", rec.remainder_percent},
                     {"remainder", rec.remainder.stage ? std::string(to_string(*rec.remainder.stage))
                                                       : std::string("proportional")}};
        if (!rec.note.empty()) item["note"] = rec.note;
        items.push_back(std::move(item));
    }
    return {{"schema_version", kSchemaVersion}, {"profiles", items}};
}

// -----------------------------------------------------------------------------
// Sector shares
// -----------------------------------------------------------------------------

SectorTable load_sector_shares(const fs::path& path, std::vector<Diagnostic>* warnings) {
    ValidationReport report;
    Reader r(path.string(), report);
    SectorTable table;
    if (auto doc = read_document(path, r)) {
        r.schema_version(*doc);
        r.check_keys(*doc, "", {"schema_version", "source", "year", "sectors_percent"});
        table.source = r.text(*doc, "source", "", false).value_or("");
        const auto it = doc->find("sectors_percent");
        if (it == doc->end() || !it->is_object() || it->empty()) {
            r.error("/sectors_percent", "missing required non-empty object 'sectors_percent'");
        } else {
            double sum = 0.0;
            bool ok = true;
            for (const auto& [name, value] : it->items()) {
                if (!value.is_number() || value.get<double>() < 0.0 || value.get<double>() > 100.0) {
                    r.error("/sectors_percent/" + name, "sector percent must be a number in [0, 100]");
                    ok = false;
                    continue;
                }
                table.percent[name] = value.get<double>();
                table.shares.shares[name] = value.get<double>() / 100.0;
                sum += value.get<double>() / 100.0;
            }
            if (!table.percent.contains(kResidentialSector)) {
                r.error("/sectors_percent", fmt::format("required sector '{}' is missing", kResidentialSector));
            }
            if (ok && std::abs(sum - 1.0) > kSectorSumTolerance) {
                r.error("/sectors_percent",
                        fmt::format("sector shares sum to {}, expected 1 within {}", sum, kSectorSumTolerance));
            }
        }
    }
    finish(report, warnings);
    return table;
}

json to_json(const SectorTable& sectors) {
    return {{"schema_version", kSchemaVersion}, {"source", sectors.source}, {"sectors_percent", sectors.percent}};
}

// -----------------------------------------------------------------------------
// Device profiles
// -----------------------------------------------------------------------------

namespace {

DeviceProfile read_profile(Reader& r, const json& doc, const ComponentDatabase& db, const std::string& fallback_name) {
    DeviceProfile profile;
    r.schema_version(doc);
    r.check_keys(doc, "",
                 {"schema_version", "name", "tier", "description", "components", "operational", "training_amortized_g"});
    profile.name = r.text(doc, "name", "", false).value_or(fallback_name);
    if (profile.name.empty()) r.error("/name", "profile name must not be empty");

    if (const auto tier = r.text(doc, "tier", "", false)) {
        if (const auto parsed = parse_tier(*tier)) {
            profile.tier = *parsed;
        } else {
            r.error("/tier", fmt::format("unknown tier '{}'; expected LowCost, MediumCost, HighCost, or Custom", *tier));
        }
    }

    if (const auto it = doc.find("components"); it != doc.end()) {
        if (!it->is_array()) {
            r.error("/components", "'components' must be an array");
        } else {
            for (std::size_t i = 0; i < it->size(); ++i) {
                const json& item = (*it)[i];
                const std::string p = fmt::format("/components/{}", i);
                if (!r.require_object(item, p)) continue;
                r.check_keys(item, p, {"block", "label", "low_g", "typical_g", "high_g"});
                const auto block = read_block(r, item, p);
                const auto label = r.text(item, "label", p, true);
                if (!block || !label) continue;
                const std::string name = fmt::format("{}/{}", to_string(*block), *label);
                const auto inline_bounds = read_bounds(r, item, p, name, false);
                if (inline_bounds) {
                    profile.components.push_back({*block, *label, *inline_bounds});
                } else if (item.contains("low_g") || item.contains("typical_g") || item.contains("high_g")) {
                    continue;  // partial inline bounds, already reported
                } else if (const auto* entry = db.find(*block, *label)) {
                    profile.components.push_back(*entry);
                } else {
                    r.error(p, fmt::format("unresolved component reference {}: not in the component database", name));
                }
            }
        }
    }

    if (const auto it = doc.find("operational"); it != doc.end()) {
        if (r.require_object(*it, "/operational")) {
            const std::string p = "/operational";
            r.check_keys(*it, p,
                         {"power_mw", "duty_factor", "lifetime_years", "grid_intensity_g_per_kwh", "charge_efficiency"});
            auto& op = profile.operational;
            if (auto v = r.non_negative(*it, "power_mw", p, false)) op.power = Quantity(*v, Unit::mW);
            if (auto v = r.number(*it, "duty_factor", p, false)) op.duty_factor = *v;
            if (auto v = r.non_negative(*it, "lifetime_years", p, false)) op.lifetime = Quantity(*v, Unit::year);
            if (auto v = r.non_negative(*it, "grid_intensity_g_per_kwh", p, false)) {
                op.grid_intensity = Quantity(*v, Unit::gCO2e_per_kWh);
            }
            if (auto v = r.number(*it, "charge_efficiency", p, false)) op.charge_efficiency = *v;
            try {
                op.validate();
            } catch (const Error& e) {
                r.error(p, fmt::format("invalid operational parameters: {}", e.what()));
            }
        }
    }

    if (auto v = r.non_negative(doc, "training_amortized_g", "", false)) {
        profile.training_amortized = Quantity(*v, Unit::gCO2e);
    }
    return profile;
}

}  // namespace

DeviceProfile parse_device_profile(const json& doc, const ComponentDatabase& db, const std::string& origin,
                                   std::vector<Diagnostic>* warnings) {
    ValidationReport report;
    Reader r(origin, report);
    DeviceProfile profile;
    if (!doc.is_object()) {
        r.error("", "device profile must be an object");
    } else {
        profile = read_profile(r, doc, db, "");
    }
    finish(report, warnings);
    return profile;
}

DeviceProfile load_device_profile(const fs::path& path, const ComponentDatabase& db, std::vector<Diagnostic>* warnings) {
    ValidationReport report;
    Reader r(path.string(), report);
    DeviceProfile profile;
    if (auto doc = read_document(path, r)) {
        profile = read_profile(r, *doc, db, path.stem().string());
    }
    finish(report, warnings);
    return profile;
}

json to_json(const DeviceProfile& profile) {
    json items = json::array();
    for (const auto& c : profile.components) {
        items.push_back({{"block", to_string(c.block)},
                         {"label", c.label},
                         {"low_g", c.embodied.low.value_in(Unit::gCO2e)},
                         {"typical_g", c.embodied.typical.value_in(Unit::gCO2e)},
                         {"high_g", c.embodied.high.value_in(Unit::gCO2e)}});
    }
    const auto& op = profile.operational;
    return {{"schema_version", kSchemaVersion},
            {"name", profile.name},
            {"tier", to_string(profile.tier)},
            {"components", items},
            {"operational",
             {{"power_mw", op.power.value_in(Unit::mW)},
              {"duty_factor", op.duty_factor},
              {"lifetime_years", op.lifetime.value_in(Unit::year)},
              {"grid_intensity_g_per_kwh", op.grid_intensity.value_in(Unit::gCO2e_per_kWh)},
              {"charge_efficiency", op.charge_efficiency}}},
            {"training_amortized_g", profile.training_amortized.value_in(Unit::gCO2e)}};
}

// -----------------------------------------------------------------------------
// References
// -----------------------------------------------------------------------------

ReferenceSet load_references(const fs::path& path, std::vector<Diagnostic>* warnings) {
    ValidationReport report;
    Reader r(path.string(), report);
    ReferenceSet refs;
    if (auto doc = read_document(path, r)) {
        r.schema_version(*doc);
        r.check_keys(*doc, "", {"schema_version", "devices", "ratio_references", "platform_tiers"});
        std::set<std::string> names;
        auto unique_name = [&](const std::string& name, const std::string& p) {
            if (!names.insert(name).second) r.error(p + "/name", fmt::format("duplicate reference name '{}'", name));
        };

        if (const auto it = doc->find("devices"); it != doc->end() && it->is_array()) {
            for (std::size_t i = 0; i < it->size(); ++i) {
                const json& item = (*it)[i];
                const std::string p = fmt::format("/devices/{}", i);
                if (!r.require_object(item, p)) continue;
                r.check_keys(item, p, {"name", "display_name", "total_kg", "stage_shares_percent", "source"});
                ReferenceDevice dev;
                const auto name = r.text(item, "name", p, true);
                const auto total = r.non_negative(item, "total_kg", p, true);
                dev.display_name = r.text(item, "display_name", p, false).value_or(name.value_or(""));
                dev.source = r.text(item, "source", p, false).value_or("");
                if (const auto s = item.find("stage_shares_percent"); s != item.end()) {
                    dev.stage_shares = read_reference_shares(r, *s, p + "/stage_shares_percent");
                    if (!dev.stage_shares) continue;
                }
                if (!name || !total) continue;
                unique_name(*name, p);
                dev.name = *name;
                dev.total = Quantity(*total, Unit::kgCO2e).in(Unit::gCO2e);
                refs.devices.push_back(std::move(dev));
            }
        } else if (it != doc->end()) {
            r.error("/devices", "'devices' must be an array");
        }

        if (const auto it = doc->find("ratio_references"); it != doc->end() && it->is_array()) {
            for (std::size_t i = 0; i < it->size(); ++i) {
                const json& item = (*it)[i];
                const std::string p = fmt::format("/ratio_references/{}", i);
                if (!r.require_object(item, p)) continue;
                r.check_keys(item, p, {"name", "display_name", "min_ratio", "max_ratio", "source"});
                const auto name = r.text(item, "name", p, true);
                const auto lo = r.non_negative(item, "min_ratio", p, true);
                const auto hi = r.non_negative(item, "max_ratio", p, true);
                if (!name || !lo || !hi) continue;
                if (*lo <= 0.0 || *lo > *hi) {
                    r.error(p, fmt::format("ratio bounds must satisfy 0 < min <= max, got [{}, {}]", *lo, *hi));
                    continue;
                }
                unique_name(*name, p);
                refs.ratio_references.push_back({*name, r.text(item, "display_name", p, false).value_or(*name), *lo,
                                                 *hi, r.text(item, "source", p, false).value_or("")});
            }
        } else if (it != doc->end()) {
            r.error("/ratio_references", "'ratio_references' must be an array");
        }

        if (const auto it = doc->find("platform_tiers"); it != doc->end() && it->is_array()) {
            for (std::size_t i = 0; i < it->size(); ++i) {
                const json& item = (*it)[i];
                const std::string p = fmt::format("/platform_tiers/{}", i);
                if (!r.require_object(item, p)) continue;
                r.check_keys(item, p, {"platform", "compute", "memory", "storage", "power", "price", "footprint"});
                PlatformTier tier;
                tier.platform = r.text(item, "platform", p, true).value_or("");
                tier.compute = r.text(item, "compute", p, false).value_or("");
                tier.memory = r.text(item, "memory", p, false).value_or("");
                tier.storage = r.text(item, "storage", p, false).value_or("");
                tier.power = r.text(item, "power", p, false).value_or("");
                tier.price = r.text(item, "price", p, false).value_or("");
                tier.footprint = r.text(item, "footprint", p, true).value_or("");
                refs.platform_tiers.push_back(std::move(tier));
            }
        } else if (it != doc->end()) {
            r.error("/platform_tiers", "'platform_tiers' must be an array");
        }
    }
    finish(report, warnings);
    return refs;
}

json to_json(const ReferenceSet& refs) {
    json devices = json::array();
    for (const auto& d : refs.devices) {
        json item = {{"name", d.name},
                     {"display_name", d.display_name},
                     {"total_kg", d.total.value_in(Unit::kgCO2e)},
                     {"source", d.source}};
        if (d.stage_shares) item["stage_shares_percent"] = percent_map(*d.stage_shares);
        devices.push_back(std::move(item));
    }
    json ratios = json::array();
    for (const auto& r : refs.ratio_references) {
        ratios.push_back({{"name", r.name},
                          {"display_name", r.display_name},
                          {"min_ratio", r.min_ratio},
                          {"max_ratio", r.max_ratio},
                          {"source", r.source}});
    }
    json tiers = json::array();
    for (const auto& t : refs.platform_tiers) {
        tiers.push_back({{"platform", t.platform},
                         {"compute", t.compute},
                         {"memory", t.memory},
                         {"storage", t.storage},
                         {"power", t.power},
                         {"price", t.price},
                         {"footprint", t.footprint}});
    }
    return {{"schema_version", kSchemaVersion},
            {"devices", devices},
            {"ratio_references", ratios},
            {"platform_tiers", tiers}};
}

// -----------------------------------------------------------------------------
// Dataset
// -----------------------------------------------------------------------------

const DeviceProfile& Dataset::profile(const std::string& name) const {
    const auto it = profiles.find(name);
    if (it == profiles.end()) {
        throw NotFoundError(fmt::format("unknown profile '{}'; available profiles: {}", name, profile_names()));
    }
    return it->second;
}

const IndicatorProfile& Dataset::indicator(Indicator which) const {
    for (const auto& rec : indicators) {
        if (rec.profile.indicator == which) return rec;
    }
    throw NotFoundError(fmt::format("no stage profile for indicator {}", to_string(which)));
}

std::string Dataset::profile_names() const {
    std::vector<std::string> names;
    for (const auto& [name, p] : profiles) names.push_back(name);
    return names.empty() ? std::string("(none)") : fmt::format("{}", fmt::join(names, ", "));
}

Dataset load_dataset(const fs::path& root) {
    Dataset ds;
    ds.root = root;
    ValidationReport combined;
    auto attempt = [&](auto&& fn) {
        try {
            fn();
        } catch (const DataError& e) {
            combined.merge(e.report());
        }
    };

    bool have_components = false;
    attempt([&] {
        ds.components = load_component_db(root / "components.json", &ds.warnings);
        have_components = true;
    });
    attempt([&] { ds.indicators = load_stage_profiles(root / "indicators.json", &ds.warnings); });
    attempt([&] { ds.sectors = load_sector_shares(root / "sectors.json", &ds.warnings); });
    attempt([&] { ds.references = load_references(root / "references.json", &ds.warnings); });

    const fs::path profile_dir = root / "profiles";
    if (have_components && fs::is_directory(profile_dir)) {
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(profile_dir)) {
            if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
        }
        std::sort(files.begin(), files.end());
        for (const auto& file : files) {
            attempt([&] {
                DeviceProfile p = load_device_profile(file, ds.components, &ds.warnings);
                if (ds.profiles.contains(p.name)) {
                    combined.errors.push_back({file.string(), "/name", fmt::format("duplicate profile name '{}'", p.name)});
                    return;
                }
                ds.profiles.emplace(p.name, std::move(p));
            });
        }
    }

    if (!combined.ok()) {
        combined.warnings.insert(combined.warnings.begin(), ds.warnings.begin(), ds.warnings.end());
        throw DataError(std::move(combined));
    }
    return ds;
}

fs::path bundled_data_dir() {
    if (const char* env = std::getenv("TINYLCA_DATA_DIR"); env && *env) return env;
    std::vector<fs::path> candidates;
#ifdef TINYLCA_BUNDLED_DATA_DIR
    candidates.emplace_back(TINYLCA_BUNDLED_DATA_DIR);
#endif
#ifdef TINYLCA_INSTALLED_DATA_DIR
    candidates.emplace_back(TINYLCA_INSTALLED_DATA_DIR);
#endif
    for (const auto& dir : candidates) {
        std::error_code ec;
        if (fs::exists(dir / "components.json", ec)) return dir;
    }
    return "data";
}

}  // namespace tinylca
