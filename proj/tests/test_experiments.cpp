#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "bergman/experiments.hpp"
#include "bergman/gauss.hpp"

using namespace bergman;

namespace {

const char* kCanonical =
    "name = canon\n"
    "[grid]\nn = 1\np = 2\nq = 2\nalpha = 0\n"
    "[family]\nf = poly n=1 {(1):1}\nf = poly n=1 {(0):1}\nf = poly n=1 {(1):2}\n";

double golden_value(const RunOutput& out, const std::string& key) {
    const GoldenEntry* e = out.golden.find(key);
    if (!e) {
        ADD_FAILURE() << "missing " << key;
        return std::nan("");
    }
    return std::strtod(e->value.c_str(), nullptr);
}

// int_D g(|z|^2) dA / pi = int_0^1 g(u) du
template <class G>
double disk_radial(G g) {
    const Rule1D r = legendre_interval(20, 0.0, 1.0);
    double s = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) s += r.weights[i] * g(r.nodes[i]);
    return s;
}

std::filesystem::path temp_dir(const std::string& name) {
    auto d = std::filesystem::temp_directory_path() / ("bergman_test_" + name);
    std::filesystem::remove_all(d);
    return d;
}

}  // namespace

TEST(Compare, CanonicalRowMatchesRadialOracle) {
    const RunOutput out = run_compare(parse_config(kCanonical));
    const std::string row = "n=1/p=2/q=2/alpha=0/f0/I";
    const double oracle[4] = {disk_radial([](double u) { return u; }),
                              disk_radial([](double u) { return (1 - u) * (1 - u) * u; }),
                              disk_radial([](double u) { return (1 - u) * (1 - u); }),
                              disk_radial([](double u) { return (1 - u) * (1 - u); })};
    EXPECT_NEAR(oracle[1], 1.0 / 12.0, 1e-15);
    for (int k = 0; k < 4; ++k)
        EXPECT_NEAR(golden_value(out, row + std::to_string(k + 1)) / oracle[k], 1.0, 1e-4) << k;
}

TEST(Compare, ConstantFunctionRow) {
    const RunOutput out = run_compare(parse_config(kCanonical));
    for (int k = 2; k <= 4; ++k) EXPECT_EQ(golden_value(out, "n=1/p=2/q=2/alpha=0/f1/I" + std::to_string(k)), 0.0);
    const std::string& rows = out.files[0].second;
    EXPECT_NE(rows.find("poly n=1 {(0):1}"), std::string::npos);
    EXPECT_NEAR(golden_value(out, "n=1/p=2/q=2/alpha=0/f1/I1"), 1.0, 1e-14);
}

TEST(Compare, Homogeneity) {
    const RunOutput out = run_compare(parse_config(kCanonical));
    for (int k = 1; k <= 4; ++k) {
        const std::string s = "n=1/p=2/q=2/alpha=0/f";
        const double a = golden_value(out, s + "0/I" + std::to_string(k));
        const double b = golden_value(out, s + "2/I" + std::to_string(k));
        EXPECT_NEAR(b / (4.0 * a), 1.0, 1e-13);
    }
}

TEST(Compare, ConfigProblems) {
    EXPECT_THROW(run_compare(parse_config("[family]\nf = poly n=1 {(1):1}\n")), ConfigError);
    EXPECT_THROW(run_compare(parse_config("[grid]\nn = 2\n[family]\nf = poly n=1 {(1):1}\n")), ConfigError);
    EXPECT_THROW(run_compare(parse_config("[grid]\np = 1\nq = 2\n[family]\nf = poly n=1 {}\n")), NumericError);
}

TEST(Sharpness, ExpectedClasses) {
    EXPECT_EQ(expected_sharpness(1.0, 2.5), Growth::Convergent);
    EXPECT_EQ(expected_sharpness(1.0, 3.0), Growth::LogDivergent);
    EXPECT_EQ(expected_sharpness(1.0, 3.5), Growth::PowerDivergent);
    const RunOutput out = run_sharpness(parse_config("name = s\n[grid]\np = 1\nq = 1, 3\n"));
    EXPECT_TRUE(out.failures.empty());
    EXPECT_TRUE(out.failures_need_verify);
    std::size_t plots = 0;
    for (const auto& [path, text] : out.files) plots += path.rfind("plots/", 0) == 0;
    EXPECT_EQ(plots, 3u);  // two series and the manifest
}

TEST(OperatorProbe, CsvColumns) {
    const RunOutput out = run_operator_probe(parse_config("name = p\n[grid]\np = 2\na = 0\nb = 0, -0.75\n"));
    EXPECT_TRUE(out.failures.empty());
    const std::string& csv = out.files.front().second;
    EXPECT_NE(csv.find("\na,b,p,alpha,predicted,observed,max_ratio\n"), std::string::npos);
    EXPECT_NE(csv.find("bounded,bounded-consistent"), std::string::npos);
    EXPECT_NE(csv.find("unbounded,growth-detected,inf"), std::string::npos);
}

TEST(Determinism, RerunsAreBitIdentical) {
    const auto mc = parse_config(
        "name = mc\nmethod = stratified-mc\nmc_samples = 4000\n[grid]\nn = 2\np = 1\n"
        "[family]\nf = poly n=2 {(1,1):1}\n");
    auto same = [](const RunOutput& a, const RunOutput& b) {
        ASSERT_EQ(a.files.size(), b.files.size());
        for (std::size_t i = 0; i < a.files.size(); ++i) EXPECT_EQ(a.files[i], b.files[i]);
        EXPECT_EQ(a.golden.render(), b.golden.render());
    };
    same(run_compare(mc), run_compare(mc));
    same(run_lemma_checks(mc, {8}), run_lemma_checks(mc, {8}));
    same(run_quadrature_bench(mc, bench_integrands(), {Method::MonteCarlo}),
         run_quadrature_bench(mc, bench_integrands(), {Method::MonteCarlo}));
    auto other = mc;
    other.spec.seed += 1;
    EXPECT_NE(run_compare(mc).files[0].second, run_compare(other).files[0].second);
}

TEST(LemmaChecks, UnknownSection) {
    EXPECT_THROW(run_lemma_checks(ExperimentConfig{}, {2}), ConfigError);
}

TEST(FinishRun, RecordVerifyAndStatus) {
    const auto dir = temp_dir("finish");
    const RunOutput out = run_compare(parse_config(kCanonical));
    std::ostringstream log;
    EXPECT_EQ(finish_run(out, dir / "out", GoldenMode::Record, dir / "golden", log), exit_status::ok);
    EXPECT_TRUE(std::filesystem::exists(dir / "out" / "canon_rows.csv"));
    EXPECT_TRUE(std::filesystem::exists(dir / "golden" / "canon.golden"));
    EXPECT_EQ(finish_run(out, dir / "out", GoldenMode::Verify, dir / "golden", log), exit_status::ok);

    RunOutput changed = out;
    changed.golden.add("n=1/p=2/q=2/alpha=0/f0/I2", GoldenKind::Exact, 1.0 / 6.0);
    EXPECT_EQ(finish_run(changed, dir / "out", GoldenMode::Verify, dir / "golden", log), exit_status::failure);

    RunOutput missing = out;
    missing.golden_name = "absent";
    EXPECT_EQ(finish_run(missing, dir / "out", GoldenMode::Verify, dir / "golden", log), exit_status::failure);

    RunOutput soft = out;
    soft.failures.push_back("x");
    soft.failures_need_verify = true;
    EXPECT_EQ(finish_run(soft, dir / "out", GoldenMode::Off, dir / "golden", log), exit_status::ok);
    soft.failures_need_verify = false;
    EXPECT_EQ(finish_run(soft, dir / "out", GoldenMode::Off, dir / "golden", log), exit_status::failure);
    std::filesystem::remove_all(dir);
}

TEST(FinishRun, OutputDirectoryOverride) {
    ExperimentConfig cfg;
    cfg.output_dir = "from-config";
    ::unsetenv("BERGMAN_OUTPUT_DIR");
    EXPECT_EQ(resolve_output_dir(cfg), "from-config");
    ::setenv("BERGMAN_OUTPUT_DIR", "from-env", 1);
    EXPECT_EQ(resolve_output_dir(cfg), "from-env");
    EXPECT_EQ(resolve_output_dir(cfg, "from-flag"), "from-flag");
    ::unsetenv("BERGMAN_OUTPUT_DIR");
}
