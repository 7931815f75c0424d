#include "tinylca/report.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace tinylca {

using nlohmann::json;

namespace {

constexpr double kMaxExactCount = 9007199254740992.0;  // 2^53

json operational_json(const OperationalParams& op) {
    return {{"power_mw", op.power.value_in(Unit::mW)},
            {"duty_factor", op.duty_factor},
            {"lifetime_years", op.lifetime.value_in(Unit::year)},
            {"grid_intensity_g_per_kwh", op.grid_intensity.value_in(Unit::gCO2e_per_kWh)},
            {"charge_efficiency", op.charge_efficiency}};
}

json breakdown_json(const FootprintBreakdown& fp) {
    json blocks = json::object();
    for (auto b : kAllBlocks) blocks[std::string(to_string(b))] = fp.block(b).value_in(Unit::gCO2e);
    return {{"per_block_g", blocks},
            {"embodied_g", fp.embodied_total().value_in(Unit::gCO2e)},
            {"operational_g", fp.operational.value_in(Unit::gCO2e)},
            {"training_g", fp.training.value_in(Unit::gCO2e)},
            {"total_g", fp.total.value_in(Unit::gCO2e)},
            {"total_kg", fp.total.value_in(Unit::kgCO2e)},
            {"largest_block", to_string(fp.largest_block())}};
}

std::uint64_t checked_count(double count) {
    if (!std::isfinite(count) || count < 0.0 || count > kMaxExactCount || std::floor(count) != count) {
        throw ValueError(fmt::format("device count must be a non-negative integer up to 2^53, got {}", count));
    }
    return static_cast<std::uint64_t>(count);
}

/// Total footprint of a name that is either a profile or a reference device.
struct NamedTotal {
    std::string name;
    std::string kind;  // "profile" | "reference"
    Quantity total;
};

std::optional<NamedTotal> lookup_total(const Dataset& data, const std::string& name, Bound bound) {
    if (const auto it = data.profiles.find(name); it != data.profiles.end()) {
        return NamedTotal{name, "profile", total_footprint(it->second, bound).total};
    }
    if (const auto* dev = data.references.find_device(name)) {
        return NamedTotal{name, "reference", dev->total.in(Unit::gCO2e)};
    }
    return std::nullopt;
}

std::string known_names(const Dataset& data) {
    std::vector<std::string> names;
    for (const auto& [n, p] : data.profiles) names.push_back(n);
    for (const auto& d : data.references.devices) names.push_back(d.name);
    for (const auto& r : data.references.ratio_references) names.push_back(r.name);
    return fmt::format("{}", fmt::join(names, ", "));
}

// ---- rendering helpers ------------------------------------------------------

class TextTable {
public:
    explicit TextTable(std::vector<std::string> header) : header_(std::move(header)) {}

    void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

    [[nodiscard]] std::string str() const {
        std::vector<std::size_t> width(header_.size(), 0);
        auto measure = [&](const std::vector<std::string>& row) {
            for (std::size_t i = 0; i < row.size() && i < width.size(); ++i) width[i] = std::max(width[i], row[i].size());
        };
        measure(header_);
        for (const auto& r : rows_) measure(r);
        std::string out;
        auto emit = [&](const std::vector<std::string>& row) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                out += i == 0 ? fmt::format("{:<{}}", row[i], width[i]) : fmt::format("  {:>{}}", row[i], width[i]);
            }
            out += '\n';
        };
        emit(header_);
        std::size_t total = 0;
        for (auto w : width) total += w;
        out += std::string(total + 2 * (width.size() - 1), '-') + '\n';
        for (const auto& r : rows_) emit(r);
        return out;
    }

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

std::string sig(const json& v) {
    if (v.is_null()) return "n/a";
    if (v.is_boolean()) return v.get<bool>() ? "yes" : "no";
    if (v.is_number()) return format_significant(v.get<double>());
    return v.is_string() ? v.get<std::string>() : v.dump();
}

std::string csv_field(const json& v) {
    if (v.is_null()) return "";
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string quoted = "\"";
        for (char c : s) quoted += c == '"' ? std::string("\"\"") : std::string(1, c);
        return quoted + "\"";
    }
    return v.dump();
}

std::string csv_line(const std::vector<json>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out += ',';
        out += csv_field(fields[i]);
    }
    return out + '\n';
}

std::string resolved_header(const json& resolved) {
    std::string out;
    for (const auto& [k, v] : resolved.items()) {
        if (v.is_object()) {
            for (const auto& [k2, v2] : v.items()) out += fmt::format("# {}.{} = {}\n", k, k2, v2.dump());
        } else {
            out += fmt::format("# {} = {}\n", k, v.dump());
        }
    }
    return out;
}

std::string render_table(const json& doc) {
    const std::string kind = doc.at("kind");
    std::string out;
    if (kind == "profiles") {
        TextTable t({"profile", "tier"});
        for (const auto& p : doc.at("profiles")) t.add({p.at("name"), p.at("tier")});
        return t.str();
    }
    if (kind == "footprint") {
        const auto& r = doc.at("resolved");
        out += fmt::format("device {} ({}), bound {}\n", r.at("profile").get<std::string>(),
                           r.at("tier").get<std::string>(), r.at("bound").get<std::string>());
        out += fmt::format("operational: {} mW, duty {}, {} y, grid {} gCO2e/kWh, charge efficiency {}\n\n",
                           sig(r.at("operational").at("power_mw")), sig(r.at("operational").at("duty_factor")),
                           sig(r.at("operational").at("lifetime_years")),
                           sig(r.at("operational").at("grid_intensity_g_per_kwh")),
                           sig(r.at("operational").at("charge_efficiency")));
        TextTable t({"component", "gCO2e"});
        for (auto b : kAllBlocks) {
            const std::string name(to_string(b));
            t.add({name, sig(doc.at("per_block_g").at(name))});
        }
        t.add({"ProductUse (operational)", sig(doc.at("operational_g"))});
        t.add({"Training (amortized)", sig(doc.at("training_g"))});
        t.add({"Total", sig(doc.at("total_g"))});
        out += t.str();
        out += fmt::format("\ntotal {} kgCO2e; largest block {}\n", sig(doc.at("total_kg")),
                           doc.at("largest_block").get<std::string>());
        return out;
    }
    if (kind == "compare") {
        const auto& s = doc.at("subject");
        const auto& ref = doc.at("reference");
        out += fmt::format("subject   {} ({}): {} gCO2e\n", s.at("name").get<std::string>(),
                           s.at("kind").get<std::string>(), sig(s.at("total_g")));
        if (ref.contains("total_g")) {
            out += fmt::format("reference {} ({}): {} gCO2e\n", ref.at("name").get<std::string>(),
                               ref.at("kind").get<std::string>(), sig(ref.at("total_g")));
            out += fmt::format("ratio reference/subject: {}\n", sig(doc.at("ratio")));
        } else {
            out += fmt::format("reference {}: known only as {}-{}x the bracket profiles\n",
                               ref.at("name").get<std::string>(), sig(ref.at("min_ratio")), sig(ref.at("max_ratio")));
            const auto& implied = doc.at("implied_reference_g");
            out += fmt::format("implied reference footprint: {} - {} gCO2e (consistent: {})\n",
                               sig(implied.at("low")), sig(implied.at("high")), sig(implied.at("consistent")));
            out += fmt::format("ratio range for subject: {} - {}\n", sig(doc.at("ratio_range").at("low")),
                               sig(doc.at("ratio_range").at("high")));
        }
        out += "\nplatform footprint tiers:\n";
        TextTable t({"platform", "compute", "memory", "storage", "power", "price", "footprint"});
        for (const auto& tier : doc.at("platform_tiers")) {
            t.add({tier.at("platform"), tier.at("compute"), tier.at("memory"), tier.at("storage"), tier.at("power"),
                   tier.at("price"), tier.at("footprint")});
        }
        return out + t.str();
    }
    if (kind == "fleet" || kind == "breakeven") {
        const auto& r = doc.at("resolved");
        out += fmt::format("global emissions constant: {} GtCO2e/yr; grid intensity: {} gCO2e/kWh\n",
                           sig(r.at("global_gt")), sig(r.at("grid_intensity_g_per_kwh")));
        out += fmt::format("devices: {}  per-device: {} gCO2e  horizon: {} y\n\n", sig(r.at("device_count")),
                           sig(r.at("per_device_g")), sig(r.at("horizon_years")));
        TextTable t({"metric", "value"});
        t.add({"fleet footprint (MtCO2e)", sig(doc.at("fleet_footprint_mt"))});
        if (kind == "fleet") {
            t.add({"avoided emissions (MtCO2e)", sig(doc.at("avoided_mt"))});
            t.add({"offset fraction", sig(doc.at("offset_fraction"))});
            t.add({"break-even rate (other sectors)", sig(doc.at("break_even_rate"))});
            t.add({"net impact (MtCO2e)", sig(doc.at("net_impact_mt"))});
            const auto& alt = doc.at("alternate");
            t.add({fmt::format("net impact at {} Gt/yr (MtCO2e)", sig(alt.at("global_gt"))), sig(alt.at("net_impact_mt"))});
        } else {
            t.add({"fixed savings (MtCO2e)", sig(doc.at("fixed_savings_mt"))});
            t.add({"other-sector share", sig(doc.at("other_share"))});
            t.add({"break-even rate", sig(doc.at("break_even_rate"))});
            t.add({"offset fraction", sig(doc.at("offset_fraction"))});
        }
        return out + t.str();
    }
    if (kind == "sweep") {
        const auto& r = doc.at("resolved");
        out += fmt::format("global emissions constant: {} GtCO2e/yr; grid intensity: {} gCO2e/kWh\n\n",
                           sig(r.at("global_gt")), sig(r.at("grid_intensity_g_per_kwh")));
        TextTable t({"lifetime_y", "per_device_g", "fleet_mt", "savings_mt", "offset", "break_even"});
        for (const auto& row : doc.at("rows")) {
            t.add({sig(row.at("lifetime_years")), sig(row.at("per_device_g")), sig(row.at("fleet_footprint_mt")),
                   sig(row.at("savings_mt")), sig(row.at("offset_fraction")), sig(row.at("break_even_rate"))});
        }
        return out + t.str();
    }
    if (kind == "project") {
        const auto& m = doc.at("resolved").at("model");
        out += fmt::format("{} model from {} at {} billion\n\n", m.at("family").get<std::string>(),
                           m.at("base_year").get<int>(), sig(m.at("base_count")));
        TextTable t({"threshold_billion", "first_year"});
        for (const auto& c : doc.at("crossings")) {
            t.add({sig(c.at("threshold")), c.at("year").is_null() ? "never" : std::to_string(c.at("year").get<int>())});
        }
        return out + t.str();
    }
    return doc.dump(2) + '\n';
}

std::string render_csv(const json& doc) {
    const std::string kind = doc.at("kind");
    std::string out;
    if (kind == "profiles") {
        out += csv_line({"profile", "tier"});
        for (const auto& p : doc.at("profiles")) out += csv_line({p.at("name"), p.at("tier")});
        return out;
    }
    if (kind == "footprint") {
        // Stacked-bar segments: one per block, then use phase and training.
        out += resolved_header(doc.at("resolved"));
        out += csv_line({"profile", "segment", "value_g"});
        const auto& name = doc.at("resolved").at("profile");
        for (auto b : kAllBlocks) {
            const std::string block(to_string(b));
            out += csv_line({name, block, doc.at("per_block_g").at(block)});
        }
        out += csv_line({name, "ProductUse", doc.at("operational_g")});
        out += csv_line({name, "Training", doc.at("training_g")});
        return out;
    }
    if (kind == "fleet") {
        out += resolved_header(doc.at("resolved"));
        out += csv_line({"bar", "value_mt"});
        out += csv_line({"fleet_footprint", doc.at("fleet_footprint_mt")});
        out += csv_line({"avoided_emissions", doc.at("avoided_mt")});
        out += csv_line({"break_even_other_sector_savings", doc.at("break_even_other_sector_savings_mt")});
        out += csv_line({"net_impact", doc.at("net_impact_mt")});
        out += csv_line({"net_impact_alternate_global", doc.at("alternate").at("net_impact_mt")});
        return out;
    }
    if (kind == "breakeven") {
        out += resolved_header(doc.at("resolved"));
        out += csv_line({"fleet_footprint_mt", "fixed_savings_mt", "other_share", "break_even_rate", "offset_fraction"});
        out += csv_line({doc.at("fleet_footprint_mt"), doc.at("fixed_savings_mt"), doc.at("other_share"),
                         doc.at("break_even_rate"), doc.at("offset_fraction")});
        return out;
    }
    if (kind == "sweep") {
        out += resolved_header(doc.at("resolved"));
        out += csv_line({"lifetime_years", "per_device_g", "fleet_footprint_mt", "savings_mt", "offset_fraction",
                         "break_even_rate", "fully_offset"});
        for (const auto& row : doc.at("rows")) {
            out += csv_line({row.at("lifetime_years"), row.at("per_device_g"), row.at("fleet_footprint_mt"),
                             row.at("savings_mt"), row.at("offset_fraction"), row.at("break_even_rate"),
                             row.at("fully_offset")});
        }
        return out;
    }
    if (kind == "project") {
        out += csv_line({"threshold_billion", "first_year"});
        for (const auto& c : doc.at("crossings")) {
            out += csv_line({c.at("threshold"), c.at("year").is_null() ? json("never") : c.at("year")});
        }
        return out;
    }
    if (kind == "compare") {
        out += csv_line({"subject", "subject_total_g", "reference", "ratio", "ratio_low", "ratio_high"});
        const auto& ref = doc.at("reference");
        const json low = doc.contains("ratio_range") ? doc.at("ratio_range").at("low") : json();
        const json high = doc.contains("ratio_range") ? doc.at("ratio_range").at("high") : json();
        out += csv_line({doc.at("subject").at("name"), doc.at("subject").at("total_g"), ref.at("name"),
                         doc.value("ratio", json()), low, high});
        return out;
    }
    return out;
}

}  // namespace

// -----------------------------------------------------------------------------

std::optional<OutputFormat> parse_format(std::string_view name) noexcept {
    if (name == "table") return OutputFormat::Table;
    if (name == "json") return OutputFormat::Json;
    if (name == "csv") return OutputFormat::Csv;
    return std::nullopt;
}

void OperationalOverrides::apply(OperationalParams& params) const {
    if (power_mw) params.power = Quantity(*power_mw, Unit::mW);
    if (duty_factor) params.duty_factor = *duty_factor;
    if (lifetime_years) params.lifetime = Quantity(*lifetime_years, Unit::year);
    if (grid_intensity_g_per_kwh) params.grid_intensity = Quantity(*grid_intensity_g_per_kwh, Unit::gCO2e_per_kWh);
    if (charge_efficiency) params.charge_efficiency = *charge_efficiency;
    params.validate();
}

DeviceProfile resolve_device(const Dataset& data, const FootprintRequest& request) {
    DeviceProfile device = request.device ? *request.device : data.profile(request.profile);
    request.overrides.apply(device.operational);
    if (request.training_g) device.training_amortized = Quantity(*request.training_g, Unit::gCO2e);
    device.validate();
    return device;
}

FleetScenario resolve_scenario(const Dataset& data, const FleetRequest& request) {
    FleetScenario s;
    s.device_count = checked_count(request.device_count);
    if (request.per_device_g) {
        s.per_device = Quantity(*request.per_device_g, Unit::gCO2e);
    } else {
        DeviceProfile device = data.profile(request.profile);
        request.overrides.apply(device.operational);
        s.per_device = total_footprint(device, request.bound).total;
    }
    if (!std::isfinite(request.horizon_years) || request.horizon_years <= 0.0) {
        throw ValueError(fmt::format("horizon must be positive, got {}", request.horizon_years));
    }
    s.horizon = Quantity(request.horizon_years, Unit::year);
    if (!std::isfinite(request.global_gt) || request.global_gt <= 0.0) {
        throw ValueError(fmt::format("global emissions must be positive, got {} Gt", request.global_gt));
    }
    s.global.annual_total = Quantity(request.global_gt, Unit::GtCO2e);
    s.sectors = data.sectors.shares;
    if (request.reduce_all) {
        for (const auto& [name, share] : s.sectors.shares) s.reductions[name] = *request.reduce_all;
    } else {
        s.reductions = request.reductions;
    }
    s.validate();
    return s;
}

ImpliedRange implied_reference_range(const Dataset& data, const RatioReference& reference, Bound bound) {
    std::optional<double> low_tier;
    std::optional<double> high_tier;
    for (const auto& [name, p] : data.profiles) {
        if (p.tier != Tier::LowCost && p.tier != Tier::HighCost) continue;
        const double g = total_footprint(p, bound).total.value();
        low_tier = low_tier ? std::min(*low_tier, g) : g;
        high_tier = high_tier ? std::max(*high_tier, g) : g;
    }
    if (!low_tier) throw NotFoundError("implied reference range needs LowCost or HighCost tier profiles");
    // The largest profile must still be min_ratio times smaller, and the
    // smallest no more than max_ratio times smaller.
    return {Quantity(reference.min_ratio * *high_tier, Unit::gCO2e), Quantity(reference.max_ratio * *low_tier, Unit::gCO2e)};
}

json profiles_report(const Dataset& data) {
    json list = json::array();
    for (const auto& [name, p] : data.profiles) list.push_back({{"name", name}, {"tier", to_string(p.tier)}});
    return {{"schema_version", kSchemaVersion}, {"kind", "profiles"}, {"profiles", list}};
}

json footprint_report(const Dataset& data, const FootprintRequest& request) {
    const DeviceProfile device = resolve_device(data, request);
    const FootprintBreakdown fp = total_footprint(device, request.bound);
    json doc = {{"schema_version", kSchemaVersion},
                {"kind", "footprint"},
                {"resolved",
                 {{"profile", device.name},
                  {"tier", to_string(device.tier)},
                  {"bound", to_string(request.bound)},
                  {"component_count", device.components.size()},
                  {"operational", operational_json(device.operational)},
                  {"training_amortized_g", device.training_amortized.value_in(Unit::gCO2e)}}}};
    doc.update(breakdown_json(fp));
    return doc;
}

json compare_report(const Dataset& data, const std::string& subject, const std::string& reference, Bound bound) {
    const auto subj = lookup_total(data, subject, bound);
    if (!subj) {
        throw NotFoundError(fmt::format("unknown name '{}'; known names: {}", subject, known_names(data)));
    }
    json doc = {{"schema_version", kSchemaVersion},
                {"kind", "compare"},
                {"bound", to_string(bound)},
                {"subject", {{"name", subj->name}, {"kind", subj->kind}, {"total_g", subj->total.value()}}}};

    if (const auto ref = lookup_total(data, reference, bound)) {
        doc["reference"] = {{"name", ref->name}, {"kind", ref->kind}, {"total_g", ref->total.value()}};
        doc["ratio"] = compare(ref->total, subj->total);
    } else if (const auto* ratio_ref = data.references.find_ratio(reference)) {
        const ImpliedRange range = implied_reference_range(data, *ratio_ref, bound);
        doc["reference"] = {{"name", ratio_ref->name},
                            {"kind", "ratio-reference"},
                            {"min_ratio", ratio_ref->min_ratio},
                            {"max_ratio", ratio_ref->max_ratio}};
        doc["implied_reference_g"] = {
            {"low", range.low.value()}, {"high", range.high.value()}, {"consistent", range.consistent()}};
        doc["ratio_range"] = {{"low", compare(range.low, subj->total)}, {"high", compare(range.high, subj->total)}};
    } else {
        throw NotFoundError(fmt::format("unknown name '{}'; known names: {}", reference, known_names(data)));
    }

    json tiers = json::array();
    for (const auto& t : data.references.platform_tiers) {
        tiers.push_back({{"platform", t.platform},
                         {"compute", t.compute},
                         {"memory", t.memory},
                         {"storage", t.storage},
                         {"power", t.power},
                         {"price", t.price},
                         {"footprint", t.footprint}});
    }
    doc["platform_tiers"] = tiers;
    return doc;
}

namespace {

json scenario_json(const FleetRequest& request, const FleetScenario& s, const Dataset& data) {
    OperationalParams op;
    if (!request.per_device_g) {
        op = data.profile(request.profile).operational;
        request.overrides.apply(op);
    }
    return {{"profile", request.per_device_g ? json() : json(request.profile)},
            {"bound", to_string(request.bound)},
            {"device_count", static_cast<double>(s.device_count)},
            {"per_device_g", s.per_device.value_in(Unit::gCO2e)},
            {"horizon_years", s.horizon.value_in(Unit::year)},
            {"reductions", s.reductions},
            {"global_gt", s.global.annual_total.value_in(Unit::GtCO2e)},
            {"grid_intensity_g_per_kwh",
             request.per_device_g ? json() : json(op.grid_intensity.value_in(Unit::gCO2e_per_kWh))},
            {"other_share", other_sector_share(s)}};
}

json break_even_or_null(const FleetScenario& s) {
    try {
        return break_even_rate(s);
    } catch (const ValueError&) {
        return nullptr;  // every sector already reduced and a gap remains
    }
}

}  // namespace

json fleet_report(const Dataset& data, const FleetRequest& request) {
    const FleetScenario s = resolve_scenario(data, request);
    const Quantity fp = fleet_footprint(s.device_count, s.per_device);
    const Quantity avoided = avoided_emissions(s);
    const json be = break_even_or_null(s);

    FleetScenario alt = s;
    alt.global.annual_total = Quantity(kAlternateGlobalGt, Unit::GtCO2e);

    // Savings the other sectors deliver at exactly the break-even rate.
    json be_savings = nullptr;
    if (be.is_number()) {
        be_savings = be.get<double>() * s.global.annual_total.value_in(Unit::MtCO2e) * other_sector_share(s) *
                     s.horizon.value_in(Unit::year);
    }

    return {{"schema_version", kSchemaVersion},
            {"kind", "fleet"},
            {"resolved", scenario_json(request, s, data)},
            {"fleet_footprint_mt", fp.value()},
            {"avoided_mt", avoided.value()},
            {"offset_fraction", fp.value() > 0.0 ? json(offset_fraction(fp, avoided)) : json()},
            {"break_even_rate", be},
            {"break_even_other_sector_savings_mt", be_savings},
            {"net_impact_mt", net_impact(s).mt},
            {"net_saving", net_impact(s).is_net_saving()},
            {"alternate",
             {{"global_gt", kAlternateGlobalGt},
              {"avoided_mt", avoided_emissions(alt).value()},
              {"net_impact_mt", net_impact(alt).mt}}}};
}

json breakeven_report(const Dataset& data, const FleetRequest& request) {
    const FleetScenario s = resolve_scenario(data, request);
    const Quantity fp = fleet_footprint(s.device_count, s.per_device);
    const Quantity saved = avoided_emissions(s);
    return {{"schema_version", kSchemaVersion},
            {"kind", "breakeven"},
            {"resolved", scenario_json(request, s, data)},
            {"fleet_footprint_mt", fp.value()},
            {"fixed_savings_mt", saved.value()},
            {"other_share", other_sector_share(s)},
            {"break_even_rate", break_even_or_null(s)},
            {"offset_fraction", fp.value() > 0.0 ? json(offset_fraction(fp, saved)) : json()}};
}

json sweep_report(const Dataset& data, const SweepRequest& request) {
    if (request.lifetimes_years.empty()) throw ValueError("sweep needs at least one lifetime");
    if (request.fleet.per_device_g) throw ValueError("sweep recomputes the per-device footprint; use a profile");
    DeviceProfile device = data.profile(request.fleet.profile);
    request.fleet.overrides.apply(device.operational);
    const FleetScenario base = resolve_scenario(data, request.fleet);

    SweepOptions options;
    if (request.battery_life_years) options.battery_life = Quantity(*request.battery_life_years, Unit::year);
    const auto rows = lifetime_sweep(base, device, request.fleet.bound, request.lifetimes_years, options);

    json out_rows = json::array();
    for (const auto& row : rows) {
        out_rows.push_back({{"lifetime_years", row.lifetime_years},
                            {"per_device_g", row.per_device.value()},
                            {"fleet_footprint_mt", row.fleet_fp.value()},
                            {"savings_mt", row.savings.value()},
                            {"offset_fraction", row.offset_fraction},
                            {"break_even_rate", row.break_even_rate},
                            {"fully_offset", row.savings.value() >= row.fleet_fp.value()}});
    }
    json resolved = scenario_json(request.fleet, base, data);
    resolved.erase("per_device_g");
    resolved.erase("horizon_years");
    resolved["battery_life_years"] = request.battery_life_years ? json(*request.battery_life_years) : json();
    return {{"schema_version", kSchemaVersion}, {"kind", "sweep"}, {"resolved", resolved}, {"rows", out_rows}};
}

json project_report(const ProjectRequest& request) {
    validate(request.model);
    if (request.thresholds.empty()) throw ValueError("projection needs at least one threshold");
    json model = {{"family", to_string(family_of(request.model))},
                  {"base_year", base_year(request.model)},
                  {"base_count", base_count(request.model)}};
    if (const auto* lin = std::get_if<LinearGrowth>(&request.model)) {
        model["slope"] = lin->slope;
    } else {
        model["rate"] = std::get<ExponentialGrowth>(request.model).rate;
    }
    json crossings = json::array();
    for (double t : request.thresholds) {
        const CrossingResult c = first_crossing(request.model, t);
        crossings.push_back({{"threshold", t}, {"year", c.year ? json(*c.year) : json()}, {"never", c.never()}});
    }
    return {{"schema_version", kSchemaVersion},
            {"kind", "project"},
            {"resolved", {{"model", model}, {"thresholds", request.thresholds}}},
            {"crossings", crossings}};
}

std::string render(const json& report, OutputFormat format) {
    switch (format) {
        case OutputFormat::Json: return report.dump(2) + '\n';
        case OutputFormat::Csv: return render_csv(report);
        case OutputFormat::Table: break;
    }
    return render_table(report);
}

std::string format_significant(double value, int digits) {
    if (!std::isfinite(value)) return fmt::format("{}", value);
    if (value == 0.0) return "0";
    // Round in scientific form first so the exponent reflects carries (9.996 -> 10.0).
    const double rounded = std::stod(fmt::format("{:.{}e}", value, digits - 1));
    const int exponent = static_cast<int>(std::floor(std::log10(std::abs(rounded))));
    const int decimals = digits - 1 - exponent;
    if (decimals > 0) return fmt::format("{:.{}f}", rounded, decimals);
    return fmt::format("{:.0f}", rounded);
}

}  // namespace tinylca
