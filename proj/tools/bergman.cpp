#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bergman/bergman.hpp"

#ifndef BERGMAN_GOLDEN_DIR
#define BERGMAN_GOLDEN_DIR "goldens/v1"
#endif

namespace {

using namespace bergman;

struct Common {
    std::string config;
    std::optional<std::uint64_t> seed;
    bool verify = false;
    bool record = false;
    std::string output;
    std::string golden_dir = BERGMAN_GOLDEN_DIR;
};

void add_common(CLI::App* app, Common& c, bool config_required) {
    auto* opt = app->add_option("--config", c.config, "Configuration file");
    if (config_required) opt->required();
    app->add_option("--seed", c.seed, "Override the configured seed");
    auto* v = app->add_flag("--verify", c.verify, "Compare against the recorded goldens");
    auto* r = app->add_flag("--record", c.record, "Record new goldens");
    v->excludes(r);
    app->add_option("--output", c.output, "Output directory (overrides BERGMAN_OUTPUT_DIR and the config)");
    app->add_option("--golden-dir", c.golden_dir, "Directory holding the golden files");
}

ExperimentConfig prepare(const Common& c, Command cmd, const std::string& name) {
    ExperimentConfig cfg = c.config.empty() ? ExperimentConfig{} : load_config(c.config);
    if (c.config.empty()) cfg.name = name;
    if (cfg.has_command && cfg.command != cmd)
        throw ConfigError("config is for '" + std::string(to_string(cfg.command)) + "', not '" + to_string(cmd) + "'");
    cfg.command = cmd;
    if (c.seed) cfg.spec.seed = *c.seed;
    if (c.verify) cfg.golden = GoldenMode::Verify;
    if (c.record) cfg.golden = GoldenMode::Record;
    return cfg;
}

std::vector<Method> parse_methods(const std::string& s) {
    if (s == "all") return {Method::ProductRule, Method::MonteCarlo, Method::StratifiedMC};
    std::vector<Method> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(method_from_string(item));
        } catch (const ParameterError& e) {
            throw ConfigError(e.what());
        }
    }
    if (out.empty()) throw ConfigError("no quadrature method given");
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Weighted Bergman space experiments on the unit ball"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    Common c;
    std::string grid;
    bool all = false;
    std::vector<int> lemmas;
    std::string integrand = "all";
    std::string methods = "all";

    auto* compare = app.add_subcommand("compare", "Comparability of the four integral functionals");
    add_common(compare, c, true);
    auto* theorem1 = app.add_subcommand("theorem1", "Derivative integrals with q = p");
    add_common(theorem1, c, true);
    auto* kernel = app.add_subcommand("kernel-check", "Reproducing-formula residuals");
    add_common(kernel, c, true);
    auto* sharp = app.add_subcommand("sharpness", "Truncation profiles of the f = z_1 example");
    add_common(sharp, c, true);
    auto* probe = app.add_subcommand("operator-probe", "Boundedness probe of T_{a,b}");
    add_common(probe, c, false);
    probe->add_option("--grid", grid, "Grid file with a, b, p, alpha")->required();
    auto* lemma = app.add_subcommand("lemma-checks", "Numerical checks of the supporting lemmas");
    add_common(lemma, c, false);
    auto* all_opt = lemma->add_flag("--all", all, "Run every section");
    auto* lemma_opt = lemma->add_option("--lemma", lemmas, "Section number (3..10), repeatable");
    all_opt->excludes(lemma_opt);
    auto* bench = app.add_subcommand("quadrature-bench", "Compare quadrature methods on known integrals");
    add_common(bench, c, false);
    bench->add_option("--integrand", integrand, "normalization, monomial, boundary-singular or all");
    bench->add_option("--methods", methods, "all or a comma list of product-rule, monte-carlo, stratified-mc");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_status::config;
    }

    try {
        RunOutput out;
        ExperimentConfig cfg;
        if (compare->parsed()) {
            cfg = prepare(c, Command::Compare, "compare");
            out = run_compare(cfg);
        } else if (theorem1->parsed()) {
            cfg = prepare(c, Command::Theorem1, "theorem1");
            out = run_theorem1(cfg);
        } else if (kernel->parsed()) {
            cfg = prepare(c, Command::KernelCheck, "kernel-check");
            out = run_kernel_check(cfg);
        } else if (sharp->parsed()) {
            cfg = prepare(c, Command::Sharpness, "sharpness");
            out = run_sharpness(cfg);
        } else if (probe->parsed()) {
            if (!c.config.empty()) throw ConfigError("operator-probe takes its configuration from --grid");
            c.config = grid;
            cfg = prepare(c, Command::OperatorProbe, "operator-probe");
            out = run_operator_probe(cfg);
        } else if (lemma->parsed()) {
            if (!all && lemmas.empty()) throw ConfigError("lemma-checks needs --all or --lemma N");
            cfg = prepare(c, Command::LemmaChecks, "lemma_checks");
            out = run_lemma_checks(cfg, all ? lemma_sections() : lemmas, &std::cout);
        } else {
            cfg = prepare(c, Command::QuadratureBench, "quadrature_bench");
            std::vector<std::string> names =
                integrand == "all" ? bench_integrands() : std::vector<std::string>{integrand};
            out = run_quadrature_bench(cfg, names, parse_methods(methods), &std::cout);
        }
        const int status = finish_run(out, resolve_output_dir(cfg, c.output), cfg.golden, c.golden_dir, std::cout);
        std::cout << (status == exit_status::ok ? "ok" : "FAILED") << '\n';
        return status;
    } catch (const ParseError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_status::config;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_status::config;
    } catch (const Error& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return exit_status::numeric;
    } catch (const std::exception& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return exit_status::numeric;
    }
}
