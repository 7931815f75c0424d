#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "oracles.hpp"
#include "tinylca/report.hpp"

namespace tinylca {
namespace {

using nlohmann::json;

struct CliRun {
    int code = -1;
    std::string out;
    std::string err;
};

CliRun run(std::vector<std::string> args) {
    args.insert(args.begin(), {"tinylca", "--data-dir", oracle::data_dir().string()});
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    CliRun r;
    r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

json run_json(std::vector<std::string> args) {
    args.insert(args.begin(), {"--format", "json"});
    const CliRun r = run(args);
    EXPECT_EQ(r.code, 0) << r.err;
    return json::parse(r.out);
}

const Dataset& bundled() {
    static const Dataset data = load_dataset(oracle::data_dir());
    return data;
}

TEST(FormatSignificant, ThreeFigures) {
    EXPECT_EQ(format_significant(7059.99), "7060");
    EXPECT_EQ(format_significant(0.0063159), "0.00632");
    EXPECT_EQ(format_significant(1764.99), "1760");
    EXPECT_EQ(format_significant(0.669), "0.669");
    EXPECT_EQ(format_significant(0.0), "0");
    EXPECT_EQ(format_significant(12.49155), "12.5");
}

TEST(Cli, DeviceShowHighCostHighBound) {
    const json doc = run_json({"device", "show", "high-cost", "--bound", "high"});
    EXPECT_NEAR(doc["total_kg"].get<double>(), 7.06, 0.005);
    EXPECT_EQ(doc["largest_block"], "PowerSupply");
    EXPECT_EQ(doc["resolved"]["bound"], "high");
    EXPECT_EQ(doc["schema_version"], 1);
}

TEST(Cli, DeviceShowJsonEqualsEngine) {
    const json doc = run_json({"device", "show", "high-cost"});
    const auto fp = total_footprint(bundled().profile("high-cost"), Bound::Typical);
    EXPECT_EQ(doc["total_g"].get<double>(), fp.total.value());
    EXPECT_EQ(doc["operational_g"].get<double>(), fp.operational.value());
    for (auto b : kAllBlocks) EXPECT_EQ(doc["per_block_g"][std::string(to_string(b))].get<double>(), fp.block(b).value());
    FootprintRequest req;
    req.profile = "high-cost";
    EXPECT_EQ(doc, footprint_report(bundled(), req));
}

TEST(Cli, DeviceShowTableUsesThreeSignificantFigures) {
    const CliRun r = run({"device", "show", "high-cost", "--bound", "high"});
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("7060"), std::string::npos);
    EXPECT_NE(r.out.find("12.5"), std::string::npos);
    EXPECT_EQ(r.out.find("7059.99"), std::string::npos);
    EXPECT_NE(r.out.find("PowerSupply"), std::string::npos);
}

TEST(Cli, UnknownProfileIsUsageError) {
    const CliRun r = run({"device", "show", "nonexistent"});
    EXPECT_EQ(r.code, 2);
    EXPECT_TRUE(r.out.empty());
    EXPECT_NE(r.err.find("high-cost"), std::string::npos);
}

TEST(Cli, CompareRatios) {
    const double low = run_json({"compare", "low-cost", "apple-watch-s7"})["ratio"];
    const double high = run_json({"compare", "high-cost", "apple-watch-s7"})["ratio"];
    EXPECT_NEAR(low, 38.0, 0.5);
    EXPECT_NEAR(high, 5.0, 0.1);
    EXPECT_EQ(run_json({"compare", "medium-cost", "medium-cost"})["ratio"], 1.0);
    const json dev = run_json({"device", "compare", "high-cost", "apple-watch-s7"});
    EXPECT_EQ(dev["ratio"].get<double>(), high);
    EXPECT_EQ(dev["platform_tiers"].size(), 3u);
    const CliRun table = run({"compare", "low-cost", "apple-watch-s7"});
    EXPECT_NE(table.out.find("Single kgs"), std::string::npos);
}

TEST(Cli, CompareRatioReference) {
    const json doc = run_json({"compare", "low-cost", "macbook-pro-16"});
    EXPECT_EQ(doc["reference"]["kind"], "ratio-reference");
    EXPECT_TRUE(doc["implied_reference_g"]["consistent"].get<bool>());
    EXPECT_GE(doc["ratio_range"]["low"].get<double>(), 49.0);
    EXPECT_LE(doc["ratio_range"]["high"].get<double>(), 392.0 + 1e-9);
    EXPECT_EQ(run({"compare", "low-cost", "toaster"}).code, 2);
}

TEST(Cli, FleetBaseline) {
    const json doc = run_json({"fleet", "--reduce", "residential=0.2"});
    EXPECT_NEAR(doc["fleet_footprint_mt"].get<double>(), 1765, 1765 * 0.005);
    EXPECT_NEAR(doc["avoided_mt"].get<double>(), 1181, 1181 * 0.005);
    EXPECT_NEAR(doc["offset_fraction"].get<double>(), 0.67, 0.01);
    EXPECT_NEAR(doc["break_even_rate"].get<double>(), 0.006, 0.001);
    EXPECT_EQ(doc["resolved"]["global_gt"], 32.8);
    EXPECT_EQ(doc["resolved"]["grid_intensity_g_per_kwh"], 475.0);
}

TEST(Cli, FleetHeaderEchoesConstants) {
    const CliRun r = run({"--global-gt", "33.6", "--grid-intensity", "300", "fleet", "--reduce-all", "0.2"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("33.6"), std::string::npos);
    EXPECT_NE(r.out.find("300 gCO2e/kWh"), std::string::npos);
}

TEST(Cli, FleetAllSectorsAndNoReductions) {
    const json all = run_json({"fleet", "--reduce-all", "0.2"});
    EXPECT_NEAR(all["net_impact_mt"].get<double>() / 1000, -17.9, 0.05);
    EXPECT_NEAR(all["alternate"]["net_impact_mt"].get<double>() / 1000, -18.4, 0.05);
    const json none = run_json({"fleet"});
    EXPECT_NEAR(none["net_impact_mt"].get<double>(), 1765, 1765 * 0.005);
    EXPECT_EQ(none["net_impact_mt"], none["fleet_footprint_mt"]);
}

TEST(Cli, ReductionsFile) {
    const auto path = std::filesystem::temp_directory_path() / "tinylca-reductions-test.json";
    std::ofstream(path) << R"({"schema_version": 1, "reductions": {"residential": 0.2}})";
    const json a = run_json({"fleet", "--reductions-file", path.string()});
    const json b = run_json({"fleet", "--reduce", "residential=0.2"});
    EXPECT_EQ(a, b);
    std::ofstream(path) << R"({"residential": "lots"})";
    const CliRun bad = run({"fleet", "--reductions-file", path.string()});
    EXPECT_EQ(bad.code, 2);
    EXPECT_NE(bad.err.find(path.string()), std::string::npos);
    std::filesystem::remove(path);
}

TEST(Cli, BreakevenCommand) {
    const json doc = run_json({"breakeven", "--reduce", "residential=0.2"});
    EXPECT_EQ(doc["kind"], "breakeven");
    EXPECT_NEAR(doc["break_even_rate"].get<double>(), 0.0063, 0.0001);
    EXPECT_NEAR(doc["other_share"].get<double>(), 0.94, 1e-12);
}

TEST(Cli, ProjectLinearAndExponential) {
    const json lin = run_json({"project", "--threshold", "50,100,250,1000"});
    const std::vector<int> expect{2041, 2067, 2144};
    for (std::size_t i = 0; i < expect.size(); ++i) EXPECT_EQ(lin["crossings"][i]["year"], expect[i]);
    EXPECT_NEAR(lin["crossings"][3]["year"].get<int>(), 2531, 1);
    const json ex = run_json({"project", "--model", "exponential", "--threshold", "250"});
    EXPECT_NEAR(ex["crossings"][0]["year"].get<int>(), 2043, 2);
    const json fitted = run_json({"project", "--model", "exponential", "--fit", "2032:50,2043:250", "--threshold", "250"});
    EXPECT_EQ(fitted["crossings"], ex["crossings"]);
}

TEST(Cli, ProjectNever) {
    const json doc = run_json({"project", "--slope", "0", "--threshold", "50"});
    EXPECT_TRUE(doc["crossings"][0]["never"].get<bool>());
    EXPECT_TRUE(doc["crossings"][0]["year"].is_null());
    const CliRun table = run({"project", "--slope", "0", "--threshold", "50"});
    EXPECT_EQ(table.code, 0);
    EXPECT_NE(table.out.find("never"), std::string::npos);
}

TEST(Cli, SweepRowsAndCsv) {
    const json doc = run_json({"sweep", "--lifetimes", "1..10", "--reduce", "residential=0.2"});
    ASSERT_EQ(doc["rows"].size(), 10u);
    EXPECT_TRUE(doc["rows"][9]["fully_offset"].get<bool>());
    EXPECT_EQ(doc["rows"][9]["offset_fraction"], 1.0);
    EXPECT_NEAR(doc["rows"][2]["offset_fraction"].get<double>(), 0.67, 0.01);
    EXPECT_NEAR(doc["rows"][0]["break_even_rate"].get<double>(), 0.044, 0.002);

    const CliRun csv = run({"--format", "csv", "sweep", "--lifetimes", "1..10", "--reduce", "residential=0.2"});
    ASSERT_EQ(csv.code, 0) << csv.err;
    std::istringstream lines(csv.out);
    std::string line;
    std::optional<std::size_t> columns;
    int data_rows = 0;
    while (std::getline(lines, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto n = static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
        if (!columns) columns = n;
        EXPECT_EQ(n, *columns) << line;
        ++data_rows;
    }
    EXPECT_EQ(data_rows, 11);  // header + 10 rows
}

TEST(Cli, SweepNeedsLifetimes) {
    EXPECT_EQ(run({"sweep"}).code, 2);
    EXPECT_EQ(run({"sweep", "--lifetimes", ","}).code, 2);
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"--format", "xml", "profiles"}).code, 2);
    EXPECT_EQ(run({"fleet", "--reduce", "residential"}).code, 2);
    EXPECT_EQ(run({"fleet", "--duty", "2"}).code, 2);
    EXPECT_EQ(run({"--global-gt", "-1", "fleet"}).code, 2);
    EXPECT_EQ(run({"fleet", "--count", "1.5"}).code, 1);
    EXPECT_EQ(run({"fleet", "--reduce", "residential=1.5"}).code, 1);
    EXPECT_EQ(run({"--help"}).code, 0);
    const CliRun bad_data = run({"--data-dir", "/nonexistent/dir", "profiles"});
    EXPECT_EQ(bad_data.code, 2);
    EXPECT_FALSE(bad_data.err.empty());
}

TEST(Cli, OutFileAndStamp) {
    const auto path = std::filesystem::temp_directory_path() / "tinylca-out-test.json";
    const CliRun r = run({"--format", "json", "--out", path.string(), "--stamp", "profiles"});
    ASSERT_EQ(r.code, 0);
    EXPECT_TRUE(r.out.empty());
    EXPECT_NE(r.err.find("# generated"), std::string::npos);
    std::ifstream in(path);
    const json doc = json::parse(in);
    EXPECT_EQ(doc["profiles"].size(), 3u);
    std::filesystem::remove(path);
    const CliRun csv = run({"--format", "csv", "--stamp", "profiles"});
    EXPECT_EQ(csv.out.rfind("# generated", 0), 0u);
}

TEST(Cli, DeterministicOutput) {
    EXPECT_EQ(run({"--format", "json", "fleet", "--reduce-all", "0.1"}).out,
              run({"--format", "json", "fleet", "--reduce-all", "0.1"}).out);
}

TEST(Cli, JsonDoublesRoundTripBitExact) {
    const CliRun r = run({"--format", "json", "sweep", "--lifetimes", "1,2.5,7", "--reduce", "residential=0.13"});
    const json doc = json::parse(r.out);
    SweepRequest req;
    req.fleet.reductions = {{"residential", 0.13}};
    req.lifetimes_years = {1, 2.5, 7};
    EXPECT_EQ(doc, sweep_report(bundled(), req));
    EXPECT_EQ(json::parse(doc.dump()), doc);
}

TEST(Cli, OverridesUseGridIntensity) {
    const json doc = run_json({"--grid-intensity", "950", "device", "show", "high-cost"});
    EXPECT_NEAR(doc["operational_g"].get<double>(), 2 * oracle::default_operational_g(), 1e-9);
    const json ten = run_json({"device", "show", "high-cost", "--lifetime", "10"});
    EXPECT_NEAR(ten["operational_g"].get<double>(), oracle::operational_g(1, 1, 10, 475, 1), 1e-9);
}

}  // namespace
}  // namespace tinylca
