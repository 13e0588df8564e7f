#include <gtest/gtest.h>

#include <filesystem>

#include "stochuc/io.hpp"
#include "stochuc/manifest.hpp"
#include "uc_fixtures.hpp"

using namespace stochuc;
namespace fs = std::filesystem;
namespace fx = stochuc::testing;

namespace {

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "stochuc_io_test";
    fs::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST(Sha256, KnownDigests) {
    EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    const auto p = scratch("abc.txt");
    write_text(p, "abc");
    EXPECT_EQ(sha256_file(p), sha256_hex("abc"));
}

TEST(FormatNumber, SixSignificantDigits) {
    EXPECT_EQ(format_number(1234567.0), "1.23457e+06");
    EXPECT_EQ(format_number(0.5), "0.5");
    EXPECT_EQ(format_number(-0.0), "0");
    EXPECT_EQ(format_number(-1e-12), "-1e-12");
}

TEST(Config, RoundTrip) {
    auto cfg = fx::toy_config(3);
    cfg.load = {70, 100, 90};
    const auto p = scratch("config.json");
    write_config(p, cfg);
    const auto back = read_config(p);
    ASSERT_EQ(back.units.size(), 1u);
    EXPECT_EQ(back.units[0].id, "g1");
    EXPECT_DOUBLE_EQ(back.units[0].c, cfg.units[0].c);
    EXPECT_EQ(back.units[0].min_up, 2);
    EXPECT_EQ(back.load, cfg.load);
    EXPECT_DOUBLE_EQ(back.battery.eta_release, cfg.battery.eta_release);
    EXPECT_DOUBLE_EQ(back.carbon.allocation_coeff, 0.9419);
    EXPECT_EQ(back.initial_state, cfg.initial_state);
    EXPECT_EQ(back.horizon, 3);
}

TEST(Config, SeriesFileSuppliesTheLoad) {
    auto cfg = fx::toy_config(2);
    const auto p = scratch("series_cfg/config.json");
    write_config(p, cfg);
    auto text = read_text(p);
    const auto at = text.find("\"load\"");
    ASSERT_NE(at, std::string::npos);
    const auto end = text.find(']', at);
    text.replace(at, end - at + 1, "\"series\": \"series.csv\"");
    write_text(p, text);
    write_text(p.parent_path() / "series.csv", "period,load\n0,55\n1,66\n");
    const auto back = read_config(p);
    EXPECT_EQ(back.load, (std::vector<double>{55, 66}));
}

TEST(Config, WrongFormatTagIsAParseError) {
    const auto p = scratch("bad_format.json");
    write_text(p, R"({"format": "something-else", "version": 1})");
    EXPECT_THROW((void)read_config(p), ParseError);
}

TEST(Config, SyntaxErrorReportsAPosition) {
    const auto p = scratch("syntax.json");
    write_text(p, "{\n  \"format\": \"stochuc-config\",\n  \"version\": 1,\n  oops\n}\n");
    try {
        (void)read_config(p);
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 4);
        EXPECT_GT(e.column(), 0);
        EXPECT_NE(std::string(e.what()).find("syntax.json:4:"), std::string::npos);
    }
}

TEST(Config, MissingFileThrows) {
    EXPECT_ANY_THROW((void)read_config(scratch("does_not_exist.json")));
}

TEST(Scenarios, RoundTripIsExact) {
    auto set = fx::flat_scenarios(3, {0.3, 0.7});
    set.scenarios[0].wind_cap[1] = 1.0 / 3.0;
    const auto p = scratch("scenarios.json");
    write_scenarios(p, set);
    const auto back = read_scenarios(p);
    ASSERT_EQ(back.size(), 2);
    EXPECT_EQ(back.scenarios[0].wind_cap, set.scenarios[0].wind_cap);
    EXPECT_EQ(back.scenarios[1].probability, 0.7);
}

TEST(DayCurves, HeaderIsOptionalAndPositionsAreReported) {
    const auto p = scratch("days.csv");
    write_text(p, "h0,h1\n1,2\n# comment\n3,4\n");
    const auto cs = read_day_curves(p, "wind");
    EXPECT_EQ(cs.days(), 2);
    EXPECT_EQ(cs.curves[1], (std::vector<double>{3, 4}));

    write_text(p, "1,2\n3,x\n");
    try {
        (void)read_day_curves(p, "wind");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 2);
        EXPECT_EQ(e.column(), 2);
    }
    write_text(p, "1,2\n3\n");
    EXPECT_THROW((void)read_day_curves(p, "wind"), ParseError);
    write_text(p, "1,-2\n");
    EXPECT_THROW((void)read_day_curves(p, "wind"), ParseError);
}

TEST(Csv, WriteThenRead) {
    const auto p = scratch("table.csv");
    write_csv(p, {"a", "b"}, {{"1", "x"}, {"2", "y"}});
    const auto rows = read_csv_rows(p);
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"a", "b"}));
    EXPECT_EQ(rows[2], (std::vector<std::string>{"2", "y"}));
}

TEST(Manifest, RoundTripAndVerify) {
    const auto in = scratch("m_in.txt");
    const auto out = scratch("m_out.txt");
    write_text(in, "input");
    write_text(out, "output");
    RunManifest m;
    m.command = "solve";
    m.seed = 18446744073709551615ULL;
    m.options = {{"threads", "1"}};
    m.add_input(in);
    m.add_output(out);
    m.wall_time_s = 1.5;
    const auto mp = scratch("manifest.json");
    write_manifest(mp, m);
    const auto back = read_manifest(mp);
    EXPECT_EQ(back.command, "solve");
    EXPECT_EQ(back.seed, m.seed);
    EXPECT_EQ(back.options, m.options);
    ASSERT_EQ(back.outputs.size(), 1u);
    EXPECT_EQ(back.outputs[0].sha256, sha256_hex("output"));
    EXPECT_TRUE(verify_manifest(back).empty());
    write_text(out, "tampered");
    const auto bad = verify_manifest(back);
    ASSERT_EQ(bad.size(), 1u);
    EXPECT_EQ(bad[0], back.outputs[0].path);
}
