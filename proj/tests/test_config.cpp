#include <gtest/gtest.h>

#include <cmath>

#include "bergman/config.hpp"
#include "bergman/csv.hpp"

using namespace bergman;

namespace {

ParseError parse_error(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ParseError& e) {
        return e;
    }
    ADD_FAILURE() << "no error for:\n" << text;
    return ParseError("", 0, 0);
}

}  // namespace

TEST(Config, TopLevelKeys) {
    const auto cfg = parse_config(
        "name = demo\n"
        "command = sharpness\n"
        "seed = 42  # trailing comment\n"
        "method = stratified-mc\n"
        "mc_samples = 5000\n"
        "output_dir = out/x\n"
        "golden = verify\n");
    EXPECT_EQ(cfg.name, "demo");
    EXPECT_TRUE(cfg.has_command);
    EXPECT_EQ(cfg.command, Command::Sharpness);
    EXPECT_EQ(cfg.spec.seed, 42u);
    EXPECT_EQ(cfg.spec.method, Method::StratifiedMC);
    EXPECT_EQ(cfg.spec.mc_samples, 5000u);
    EXPECT_EQ(cfg.output_dir, "out/x");
    EXPECT_EQ(cfg.golden, GoldenMode::Verify);
    EXPECT_TRUE(cfg.grid.empty());
}

TEST(Config, GridExpansionWithExpressions) {
    const auto cfg = parse_config(
        "[grid]\n"
        "n = 1, 2\n"
        "p = 1, 4\n"
        "q = 0.5*p, p+1, (p + 2) / 2\n"
        "alpha = 0\n");
    ASSERT_EQ(cfg.grid.size(), 12u);
    EXPECT_EQ(cfg.grid[0].n, 1u);
    EXPECT_DOUBLE_EQ(cfg.grid[0].q, 0.5);
    EXPECT_DOUBLE_EQ(cfg.grid[1].q, 2.0);
    EXPECT_DOUBLE_EQ(cfg.grid[2].q, 1.5);
    EXPECT_DOUBLE_EQ(cfg.grid[3].p, 4.0);
    EXPECT_DOUBLE_EQ(cfg.grid[5].q, 3.0);
    EXPECT_EQ(cfg.grid[6].n, 2u);
}

TEST(Config, ProbeGridAndRepeatedBlocks) {
    const auto cfg = parse_config(
        "[grid]\np = 2\na = -1/p - 0.25, -1/p\nb = 1/p - 1\n"
        "[grid]\nn = 2\np = 1\nalpha = 1\n");
    ASSERT_EQ(cfg.grid.size(), 3u);
    EXPECT_DOUBLE_EQ(cfg.grid[0].a, -0.75);
    EXPECT_DOUBLE_EQ(cfg.grid[1].a, -0.5);
    EXPECT_DOUBLE_EQ(cfg.grid[1].b, -0.5);
    EXPECT_EQ(cfg.grid[2].n, 2u);
    EXPECT_DOUBLE_EQ(cfg.grid[2].q, 1.0);  // q defaults to p
    EXPECT_DOUBLE_EQ(cfg.grid[2].alpha, 1.0);
}

TEST(Config, Family) {
    const auto cfg = parse_config(
        "[family]\n"
        "f = poly n=2 {(1,0):1, (0,2):-0.5i}\n"
        "f = kernel n=1 a=(0.5) s=2\n");
    ASSERT_EQ(cfg.family.size(), 2u);
    EXPECT_EQ(cfg.family[0].f.dimension(), 2u);
    EXPECT_EQ(cfg.family[0].text, "poly n=2 {(1,0):1, (0,2):-0.5i}");
    EXPECT_NEAR(std::abs(cfg.family[1].f(CPoint{0.0}) - 1.0), 0.0, 1e-15);
}

TEST(Config, EchoCarriesSeedAndBlocks) {
    const auto cfg = parse_config("[grid]\np = 2\n[family]\nf = poly n=1 {(1):1}\n", "demo");
    const auto echo = cfg.echo();
    EXPECT_NE(std::find(echo.begin(), echo.end(), "seed = 20060130"), echo.end());
    EXPECT_NE(std::find(echo.begin(), echo.end(), "name = demo"), echo.end());
    EXPECT_NE(std::find(echo.begin(), echo.end(), "f = poly n=1 {(1):1}"), echo.end());
}

TEST(Config, ErrorsCarryLineAndColumn) {
    auto e = parse_error("seed = 1\nbogus = 2\n");
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.column(), 1u);
    e = parse_error("[grid]\np = 1, x\n");
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.column(), 8u);
    e = parse_error("[grid]\nq = p * (1 + \n");
    EXPECT_EQ(e.line(), 2u);
    e = parse_error("\n\n[family]\nf = poly n=1 {(1,1):1}\n");
    EXPECT_EQ(e.line(), 4u);
    EXPECT_GT(e.column(), 5u);
    e = parse_error("[grid]\nalpha = -1\n");
    EXPECT_EQ(e.column(), 9u);
    EXPECT_EQ(parse_error("seed = -3\n").column(), 8u);
    EXPECT_EQ(parse_error("[nope]\n").line(), 1u);
    EXPECT_EQ(parse_error("method = simpson\n").column(), 10u);
    EXPECT_EQ(parse_error("[grid]\nn = 1.5\n").line(), 2u);
    EXPECT_EQ(parse_error("[grid]\np = 1\np = 2\n").line(), 3u);
    EXPECT_EQ(parse_error("key without value\n").line(), 1u);
}

TEST(Csv, NumberFormatAndQuoting) {
    EXPECT_EQ(format_double(0.5), "5.0000000000000000e-01");
    EXPECT_EQ(format_double(1.0 / 3.0), "3.3333333333333331e-01");
    EXPECT_EQ(format_double(std::nan("")), "nan");
    EXPECT_EQ(format_double(-INFINITY), "-inf");
    CsvTable t({"x", "label"});
    t.row() << 2.0 << "a,b";
    const std::string s = t.render({"seed = 1"});
    EXPECT_EQ(s, "# bergman " + std::string(kVersion) + "\n# seed = 1\nx,label\n2.0000000000000000e+00,\"a,b\"\n");
}

TEST(Golden, RoundTripAndSlack) {
    GoldenTable rec;
    rec.add("a", GoldenKind::Exact, 1.0);
    rec.add("b", GoldenKind::Upper, 2.0);
    rec.add("c", GoldenKind::Lower, 4.0);
    rec.add("d", GoldenKind::Info, "x");
    const GoldenTable back = GoldenTable::parse(rec.render(), "memory");
    EXPECT_EQ(back.render(), rec.render());

    GoldenTable obs;
    obs.add("a", GoldenKind::Exact, 1.0);
    obs.add("b", GoldenKind::Upper, 2.09);
    obs.add("c", GoldenKind::Lower, 3.85);
    obs.add("d", GoldenKind::Info, "y");
    EXPECT_TRUE(golden_mismatches(obs, back).empty());

    GoldenTable wide = obs;
    wide.add("b", GoldenKind::Upper, 2.2);
    wide.add("c", GoldenKind::Lower, 3.7);
    wide.add("a", GoldenKind::Exact, std::nextafter(1.0, 2.0));
    EXPECT_EQ(golden_mismatches(wide, back).size(), 3u);

    GoldenTable partial;
    partial.add("a", GoldenKind::Exact, 1.0);
    EXPECT_EQ(golden_mismatches(partial, back).size(), 3u);
    EXPECT_TRUE(golden_mismatches(partial, back, {"a"}).empty());
}
