#pragma once

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "bergman/config.hpp"
#include "bergman/csv.hpp"
#include "bergman/functionals.hpp"
#include "bergman/kernels.hpp"
#include "bergman/pseudo_ball.hpp"
#include "bergman/rng.hpp"

namespace bergman {

namespace exit_status {
inline constexpr int ok = 0;
inline constexpr int failure = 1;
inline constexpr int config = 2;
inline constexpr int numeric = 3;
}  // namespace exit_status

/// Everything a command produced, before anything touches the disk.
struct RunOutput {
    std::string golden_name;
    /// Relative path -> file contents, in write order.
    std::vector<std::pair<std::string, std::string>> files;
    GoldenTable golden;
    /// Recorded keys with these prefixes must reappear on verification.
    std::vector<std::string> golden_scope;
    std::vector<std::string> failures;
    /// Failures only count in verify mode.
    bool failures_need_verify = false;
    std::vector<std::string> notes;
};

namespace experiments_detail {

/// Short, stable rendering of a parameter for keys and file names.
inline std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

inline std::string label(const GridPoint& g) {
    return "n=" + std::to_string(g.n) + "/p=" + num(g.p) + "/q=" + num(g.q) + "/alpha=" + num(g.alpha);
}

inline GoldenKind value_kind(const QuadratureSpec& spec) {
    return spec.method == Method::ProductRule ? GoldenKind::Exact : GoldenKind::Info;
}

inline void require_grid(const ExperimentConfig& cfg) {
    if (cfg.grid.empty()) throw ConfigError("the configuration has no [grid] block");
}

inline std::vector<std::size_t> family_in_dimension(const ExperimentConfig& cfg, std::size_t n) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < cfg.family.size(); ++i)
        if (cfg.family[i].f.dimension() == n) out.push_back(i);
    if (out.empty()) throw ConfigError("no [family] function has dimension " + std::to_string(n));
    return out;
}

inline void require_finite(double v, const std::string& row) {
    if (!std::isfinite(v)) throw NumericError("non-finite value in row " + row);
}

/// Run `body`, turning library failures into a NumericError naming the row.
template <class F>
auto on_row(const std::string& row, F&& body) {
    try {
        return body();
    } catch (const NumericError& e) {
        throw NumericError("row " + row + ": " + e.what());
    } catch (const DomainError& e) {
        throw NumericError("row " + row + ": " + e.what());
    }
}

}  // namespace experiments_detail

/// Comparability table: I1..I4 and the ratios (|f(0)|^p + I_k) / I1 for every
/// grid point and family function, plus the per-point envelope of the ratios.
inline RunOutput run_compare(const ExperimentConfig& cfg) {
    using namespace experiments_detail;
    require_grid(cfg);
    RunOutput out;
    out.golden_name = cfg.name;
    CsvTable rows({"n", "p", "q", "alpha", "in_range", "function", "I1", "I2", "I3", "I4", "se1", "se2", "se3",
                   "se4", "f0_p", "ratio2", "ratio3", "ratio4"});
    CsvTable env({"n", "p", "q", "alpha", "in_range", "functions", "ratio2_min", "ratio2_max", "ratio3_min",
                  "ratio3_max", "ratio4_min", "ratio4_max"});
    const bool exact = cfg.spec.method == Method::ProductRule;
    const GoldenKind vk = value_kind(cfg.spec);

    for (const GridPoint& g : cfg.grid) {
        const WeightParams w{g.n, g.p, g.q, g.alpha};
        const double inf = std::numeric_limits<double>::infinity();
        std::array<double, 3> lo{inf, inf, inf}, hi{-inf, -inf, -inf};
        std::size_t used = 0;
        for (std::size_t i : family_in_dimension(cfg, g.n)) {
            const FamilyEntry& fe = cfg.family[i];
            const std::string row = label(g) + "/f" + std::to_string(i);
            const ComparabilityReport rep = on_row(row, [&] { return comparability_report({fe.f}, w, cfg.spec); });
            const ComparabilityRow& r = rep.rows.front();
            for (const auto& e : r.I) require_finite(e.value, row);
            auto line = rows.row();
            line << g.n << g.p << g.q << g.alpha << rep.in_range << fe.text;
            for (const auto& e : r.I) line << e.value;
            for (const auto& e : r.I) line << e.std_error;
            line << r.f0_p << r.ratio[0] << r.ratio[1] << r.ratio[2];
            for (std::size_t k = 0; k < 4; ++k) out.golden.add(row + "/I" + std::to_string(k + 1), vk, r.I[k].value);
            if (r.I[0].value > 0.0) {
                ++used;
                for (std::size_t k = 0; k < 3; ++k) {
                    lo[k] = std::min(lo[k], r.ratio[k]);
                    hi[k] = std::max(hi[k], r.ratio[k]);
                }
            }
        }
        auto line = env.row();
        line << g.n << g.p << g.q << g.alpha << w.in_range() << used;
        for (std::size_t k = 0; k < 3; ++k) {
            line << (used ? lo[k] : std::nan("")) << (used ? hi[k] : std::nan(""));
            if (!used) continue;
            const std::string key = label(g) + "/ratio" + std::to_string(k + 2);
            out.golden.add(key + "_min", exact ? GoldenKind::Exact : GoldenKind::Lower, lo[k]);
            out.golden.add(key + "_max", exact ? GoldenKind::Exact : GoldenKind::Upper, hi[k]);
        }
    }
    const auto header = cfg.echo();
    out.files.emplace_back(cfg.name + "_rows.csv", rows.render(header));
    out.files.emplace_back(cfg.name + "_envelope.csv", env.render(header));
    return out;
}

/// The three integrals of |f_i|^p dv_alpha next to I1 = int |f|^p dv_alpha.
inline RunOutput run_theorem1(const ExperimentConfig& cfg) {
    using namespace experiments_detail;
    require_grid(cfg);
    RunOutput out;
    out.golden_name = cfg.name;
    CsvTable t({"n", "p", "alpha", "function", "I1", "radial", "gradient", "invariant"});
    const GoldenKind vk = value_kind(cfg.spec);
    std::set<std::tuple<std::size_t, double, double>> seen;
    for (const GridPoint& g : cfg.grid) {
        if (!seen.insert({g.n, g.p, g.alpha}).second) continue;
        const WeightParams w{g.n, g.p, g.p, g.alpha};
        for (std::size_t i : family_in_dimension(cfg, g.n)) {
            const FamilyEntry& fe = cfg.family[i];
            const std::string row = "n=" + std::to_string(g.n) + "/p=" + num(g.p) + "/alpha=" + num(g.alpha) + "/f" +
                                    std::to_string(i);
            const auto J = on_row(row, [&] { return theorem1_quantities(fe.f, w, cfg.spec); });
            const double i1 = on_row(row, [&] { return I1(fe.f, w, cfg.spec).value; });
            t.row() << g.n << g.p << g.alpha << fe.text << i1 << J[0].value << J[1].value << J[2].value;
            out.golden.add(row + "/I1", vk, i1);
            for (std::size_t k = 0; k < 3; ++k) {
                require_finite(J[k].value, row);
                out.golden.add(row + "/J" + std::to_string(k + 1), vk, J[k].value);
            }
        }
    }
    out.files.emplace_back(cfg.name + "_theorem1.csv", t.render(cfg.echo()));
    return out;
}

/// Reproducing-formula residuals |f(z) - int f K_alpha(z, .) dv_alpha| for the
/// family at z = r e_1, r in {0, 0.3, 0.6}.
inline RunOutput run_kernel_check(const ExperimentConfig& cfg) {
    using namespace experiments_detail;
    require_grid(cfg);
    RunOutput out;
    out.golden_name = cfg.name;
    CsvTable t({"n", "alpha", "function", "r", "residual", "pass"});
    const GoldenKind vk = cfg.spec.method == Method::ProductRule ? GoldenKind::Exact : GoldenKind::Upper;
    std::set<std::pair<std::size_t, double>> seen;
    for (const GridPoint& g : cfg.grid) {
        if (!seen.insert({g.n, g.alpha}).second) continue;
        std::vector<HoloFunction> fam;
        const auto idx = family_in_dimension(cfg, g.n);
        for (std::size_t i : idx) fam.push_back(cfg.family[i].f);
        for (double r : {0.0, 0.3, 0.6}) {
            const std::string row = "n=" + std::to_string(g.n) + "/alpha=" + num(g.alpha) + "/r=" + num(r);
            const auto res = on_row(row, [&] {
                return reproducing_residuals(fam, CPoint::basis(g.n, 0, r), g.alpha, cfg.spec);
            });
            for (std::size_t k = 0; k < fam.size(); ++k) {
                const bool pass = res[k] < 1e-3;
                t.row() << g.n << g.alpha << cfg.family[idx[k]].text << r << res[k] << pass;
                out.golden.add(row + "/f" + std::to_string(idx[k]), vk, res[k]);
                if (!pass) out.failures.push_back(row + "/f" + std::to_string(idx[k]) + ": residual " + format_double(res[k]));
            }
        }
    }
    out.files.emplace_back(cfg.name + "_kernel.csv", t.render(cfg.echo()));
    return out;
}

/// Expected class of the truncated sharpness integral: convergent below
/// q = p+2, logarithmic at it, power-law above.
inline Growth expected_sharpness(double p, double q) {
    const double edge = p + 2.0;
    if (std::abs(q - edge) <= 1e-12 * edge) return Growth::LogDivergent;
    return q < edge ? Growth::Convergent : Growth::PowerDivergent;
}

/// Truncation profiles of the f = z_1 example, their classification and
/// two-column plot series (ln(1/eps), value) with a manifest.
inline RunOutput run_sharpness(const ExperimentConfig& cfg) {
    using namespace experiments_detail;
    require_grid(cfg);
    RunOutput out;
    out.golden_name = cfg.name;
    out.failures_need_verify = true;
    CsvTable prof({"n", "p", "q", "alpha", "eps", "value"});
    CsvTable summary({"n", "p", "q", "alpha", "expected", "observed", "log_slope", "power_exponent",
                      "increment_ratio", "match"});
    CsvTable manifest({"file", "x", "y", "n", "p", "q", "alpha", "observed"});
    std::size_t k = 0;
    for (const GridPoint& g : cfg.grid) {
        const std::string row = label(g);
        const TruncationProfile tp = on_row(row, [&] { return sharpness_profile(g.p, g.alpha, g.n, g.q); });
        for (std::size_t j = 0; j < tp.eps.size(); ++j) {
            require_finite(tp.values[j], row);
            prof.row() << g.n << g.p << g.q << g.alpha << tp.eps[j] << tp.values[j];
        }
        const Growth want = expected_sharpness(g.p, g.q);
        const bool match = want == tp.fit.kind;
        summary.row() << g.n << g.p << g.q << g.alpha << to_string(want) << to_string(tp.fit.kind)
                      << tp.fit.log_slope << tp.fit.power_exponent << tp.fit.increment_ratio << match;
        if (!match)
            out.failures.push_back(row + ": expected " + to_string(want) + ", observed " + to_string(tp.fit.kind));
        out.golden.add(row + "/class", GoldenKind::Exact, to_string(tp.fit.kind));
        out.golden.add(row + "/log_slope", GoldenKind::Exact, tp.fit.log_slope);
        out.golden.add(row + "/last_value", GoldenKind::Exact, tp.values.back());

        const std::string file = "plots/" + cfg.name + "_" + std::to_string(k++) + ".dat";
        std::string series = "# ln(1/eps) value  " + row + "\n";
        for (std::size_t j = 0; j < tp.eps.size(); ++j)
            series += format_double(-std::log(tp.eps[j])) + " " + format_double(tp.values[j]) + "\n";
        out.files.emplace_back(file, series);
        manifest.row() << file.substr(6) << "ln(1/eps)" << "truncated integral" << g.n << g.p << g.q << g.alpha
                       << to_string(tp.fit.kind);
    }
    const auto header = cfg.echo();
    out.files.emplace_back(cfg.name + "_profile.csv", prof.render(header));
    out.files.emplace_back(cfg.name + "_summary.csv", summary.render(header));
    out.files.emplace_back("plots/manifest.csv", manifest.render(header));
    return out;
}

/// Boundedness probe of T_{a,b} on L^p_alpha over the grid's (a, b, p, alpha, n).
inline RunOutput run_operator_probe(const ExperimentConfig& cfg) {
    using namespace experiments_detail;
    require_grid(cfg);
    RunOutput out;
    out.golden_name = cfg.name;
    CsvTable t({"a", "b", "p", "alpha", "predicted", "observed", "max_ratio"});
    for (const GridPoint& g : cfg.grid) {
        const std::string row =
            "n=" + std::to_string(g.n) + "/a=" + num(g.a) + "/b=" + num(g.b) + "/p=" + num(g.p) + "/alpha=" + num(g.alpha);
        ProbeOptions opt;
        opt.dimension = g.n;
        const ProbeResult r = on_row(row, [&] { return operator_bound_probe(g.a, g.b, g.p, g.alpha, opt); });
        t.row() << g.a << g.b << g.p << g.alpha << (r.predicted_bounded ? "bounded" : "unbounded")
                << to_string(r.verdict) << r.max_ratio;
        out.golden.add(row + "/verdict", GoldenKind::Exact, to_string(r.verdict));
        out.golden.add(row + "/max_ratio", GoldenKind::Exact, r.max_ratio);
        if (!r.matches())
            out.failures.push_back(row + ": predicted " + (r.predicted_bounded ? "bounded" : "unbounded") +
                                   ", observed " + to_string(r.verdict));
    }
    out.files.emplace_back(cfg.name + "_probe.csv", t.render(cfg.echo()));
    return out;
}

/// Functions used by the lemma checks: constants, monomials, a polynomial
/// with a zero inside the ball and a kernel power.
inline std::vector<HoloFunction> standard_family(std::size_t n) {
    if (n == 1) {
        return {HoloFunction::constant(1, 1.0), HoloFunction::coordinate(1, 0), HoloFunction::monomial(1, {2}),
                HoloFunction::polynomial(1, {{{3}, 1.0}, {{1}, 0.5}, {{0}, Complex(0.0, 0.2)}}),
                HoloFunction::kernel_power(CPoint{0.5}, 2.0)};
    }
    if (n == 2) {
        return {HoloFunction::constant(2, 1.0), HoloFunction::coordinate(2, 0), HoloFunction::monomial(2, {1, 1}),
                HoloFunction::polynomial(2, {{{2, 0}, 1.0}, {{0, 1}, Complex(0.0, -0.5)}}),
                HoloFunction::kernel_power(CPoint{0.4, Complex(0.0, 0.2)}, 3.0)};
    }
    throw DimensionError("the standard family is defined for n = 1, 2");
}

/// All monomials of degree <= `degree` in n = 1 or 2 variables.
inline std::vector<HoloFunction> monomials_up_to(std::size_t n, int degree) {
    std::vector<HoloFunction> out;
    if (n == 1) {
        for (int d = 0; d <= degree; ++d) out.push_back(HoloFunction::monomial(1, {d}));
    } else if (n == 2) {
        for (int i = 0; i <= degree; ++i)
            for (int j = 0; i + j <= degree; ++j) out.push_back(HoloFunction::monomial(2, {i, j}));
    } else {
        throw DimensionError("monomials_up_to is defined for n = 1, 2");
    }
    return out;
}

inline const std::vector<int>& lemma_sections() {
    static const std::vector<int> s{3, 4, 5, 6, 7, 8, 9, 10};
    return s;
}

namespace experiments_detail {

struct LemmaSink {
    explicit LemmaSink(RunOutput& o) : out(&o) {}

    CsvTable table{{"section", "check", "case", "value", "threshold", "status"}};
    RunOutput* out;

    /// status: pass, fail, or info (reported only).
    void add(int section, const std::string& check, const std::string& c, double value, double threshold,
             const std::string& status, GoldenKind kind) {
        table.row() << section << check << c << value << threshold << status;
        const std::string key = "L" + std::to_string(section) + "/" + check + (c.empty() ? "" : "/" + c);
        out->golden.add(key, kind, value);
        if (status == "fail") out->failures.push_back(key + ": " + format_double(value));
    }
};

inline HoloFunction random_function(Stream& rng) {
    const std::size_t n = 1 + static_cast<std::size_t>(rng.uniform() * 3.0);
    if (rng.uniform() < 0.2) {
        const CPoint a = rng.ball_point(n, 0.8);
        return HoloFunction::kernel_power(a, 1.0 + 3.0 * rng.uniform(), rng.complex_normal());
    }
    std::vector<std::pair<MultiIndex, Complex>> terms;
    const int count = 1 + static_cast<int>(rng.uniform() * 4.0);
    for (int t = 0; t < count; ++t) {
        MultiIndex m(n, 0);
        const int deg = 1 + static_cast<int>(rng.uniform() * 4.0);
        for (int d = 0; d < deg; ++d) ++m[static_cast<std::size_t>(rng.uniform() * static_cast<double>(n))];
        terms.emplace_back(std::move(m), rng.complex_normal());
    }
    return HoloFunction::polynomial(n, std::move(terms));
}

inline double rel_diff(double a, double b) {
    const double scale = std::max({std::abs(a), std::abs(b), 1e-12});
    return std::abs(a - b) / scale;
}

inline void lemma3(LemmaSink& s, const QuadratureSpec& spec) {
    for (std::size_t n : {1u, 2u}) {
        const auto fam = standard_family(n);
        for (std::size_t i = 0; i < fam.size(); ++i)
            for (double p : {0.5, 1.0})
                for (double alpha : {0.0, 1.0}) {
                    const std::string c = "n=" + std::to_string(n) + "/f" + std::to_string(i) + "/p=" + num(p) +
                                          "/alpha=" + num(alpha);
                    const double r = on_row("L3/" + c, [&] { return embedding_check(fam[i], p, alpha, spec).ratio; });
                    s.add(3, "embedding_ratio", c, r, 0.0, std::isfinite(r) && r > 0.0 ? "pass" : "fail",
                          value_kind(spec));
                }
    }
}

inline void lemma4(LemmaSink& s) {
    int matched = 0, total = 0;
    for (double p : {1.0, 2.0})
        for (double da : {-0.25, 0.0, 0.5})
            for (double db : {-0.25, 0.0, 0.5}) {
                const double a = -1.0 / p + da, b = 1.0 / p - 1.0 + db;
                const ProbeResult r = operator_bound_probe(a, b, p, 0.0);
                const std::string c = "p=" + num(p) + "/a=" + num(a) + "/b=" + num(b);
                s.add(4, "probe_max_ratio", c, r.max_ratio, 0.0, r.matches() ? "pass" : "fail", GoldenKind::Exact);
                matched += r.matches();
                ++total;
            }
    s.add(4, "verdicts_matched", "", matched, total, matched == total ? "pass" : "fail", GoldenKind::Exact);
}

inline void lemma5(LemmaSink& s, std::uint64_t seed) {
    Stream rng(derive_seed(seed, {5, 1}));
    std::size_t violations = 0;
    for (int i = 0; i < 10000; ++i) {
        const HoloFunction f = random_function(rng);
        const CPoint z = rng.ball_point(f.dimension(), 0.99);
        const auto b = derivative_bundle(f, z);
        const double omz = 1.0 - z.norm_sq();
        const double r = omz * std::abs(b.radial), g = omz * b.grad_norm, v = b.inv_grad_norm;
        if (r > g + 1e-9 * (1.0 + g) || g > v + 1e-9 * (1.0 + v)) ++violations;
    }
    s.add(5, "chain_violations", "samples=10000", static_cast<double>(violations), 0.0,
          violations == 0 ? "pass" : "fail", GoldenKind::Exact);

    Stream rng2(derive_seed(seed, {5, 2}));
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const HoloFunction f = random_function(rng2);
        const CPoint z = rng2.ball_point(f.dimension(), 0.95);
        worst = std::max(worst, rel_diff(invariant_gradient_norm(f, z), invariant_gradient_definitional(f, z)));
    }
    s.add(5, "identity_vs_definition", "samples=1000", worst, 1e-5, worst < 1e-5 ? "pass" : "fail",
          GoldenKind::Upper);

    Stream rng3(derive_seed(seed, {5, 3}));
    worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const HoloFunction f = random_function(rng3);
        const std::size_t n = f.dimension();
        const Automorphism phi = (i % 2) ? Automorphism::involution(rng3.ball_point(n, 0.8))
                                         : Automorphism(random_unitary(n, rng3));
        const CPoint z = rng3.ball_point(n, 0.8);
        const double lhs = invariant_gradient_definitional(HoloFunction::composed(phi, f), z);
        worst = std::max(worst, rel_diff(lhs, invariant_gradient_norm(f, phi(z))));
    }
    s.add(5, "moebius_invariance", "samples=1000", worst, 1e-5, worst < 1e-5 ? "pass" : "fail", GoldenKind::Upper);
}

inline void lemma6(LemmaSink& s, const QuadratureSpec& spec) {
    const std::vector<CPoint> pts1{CPoint{0.0}, CPoint{Complex(0.3, 0.4)}, CPoint{-0.7}};
    const std::vector<CPoint> pts2{CPoint{0.5, 0.0}, CPoint{Complex(0.2, -0.3), Complex(0.1, 0.4)}};
    double worst = 0.0;
    for (std::size_t n : {1u, 2u})
        for (double alpha : {0.0, 1.0}) {
            const auto fam = monomials_up_to(n, 4);
            const auto& pts = n == 1 ? pts1 : pts2;
            for (std::size_t k = 0; k < pts.size(); ++k) {
                const auto res = reproducing_residuals(fam, pts[k], alpha, spec);
                const double m = *std::max_element(res.begin(), res.end());
                worst = std::max(worst, m);
                s.add(6, "max_residual",
                      "n=" + std::to_string(n) + "/alpha=" + num(alpha) + "/z" + std::to_string(k), m, 1e-3,
                      m < 1e-3 ? "pass" : "fail", GoldenKind::Upper);
            }
        }
    s.add(6, "worst_residual", "", worst, 1e-3, worst < 1e-3 ? "pass" : "fail", GoldenKind::Upper);
}

/// Slow-growth proxy (max over |z| <= 0.99 against max over |z| <= 0.9) and
/// the behaviour of the increments as |z| -> 1. A shrinking sequence of
/// increments means the values settle at a finite limit.
inline void lemma7(LemmaSink& s, const QuadratureSpec& spec) {
    const double xs[] = {0.5, 0.7, 0.8, 0.9, 0.95, 0.99};
    for (double alpha : {0.0, 1.0})
        for (double t : {0.5, 1.0, 2.0}) {
            const std::string c = "alpha=" + num(alpha) + "/t=" + num(t);
            double inner = 0.0, outer = 0.0;
            for (double x : xs) {
                const double r = forelli_rudin_ratio(CPoint{x}, alpha, t, spec);
                if (x <= 0.9) inner = std::max(inner, r);
                outer = std::max(outer, r);
            }
            const double proxy = outer / inner;
            s.add(7, "max_ratio_099_over_09", c, proxy, 1.5, proxy <= 1.5 ? "pass" : "info", GoldenKind::Exact);

            std::vector<double> v;
            for (int k = 1; k <= 6; ++k) v.push_back(forelli_rudin_ratio(CPoint{1.0 - std::pow(10.0, -k)}, alpha, t, spec));
            bool shrinking = true;
            double worst = 0.0;
            for (std::size_t k = 2; k < v.size(); ++k) {
                const double d = v[k] - v[k - 1], prev = v[k - 1] - v[k - 2];
                if (std::abs(d) <= 1e-12 * std::abs(v[k])) continue;  // settled to rounding
                const double q = d / prev;
                worst = std::max(worst, q);
                shrinking = shrinking && q > 0.0 && q < 1.0;
            }
            s.add(7, "increment_ratio", c, worst, 1.0, shrinking ? "pass" : "fail", GoldenKind::Exact);
            s.add(7, "value_at_1e-6", c, v.back(), 0.0, std::isfinite(v.back()) ? "pass" : "fail", GoldenKind::Exact);
        }
}

inline void lemma8(LemmaSink& s, const QuadratureSpec& base) {
    QuadratureSpec spec = base.with_method(Method::StratifiedMC);
    const GoldenKind info = GoldenKind::Info;
    for (std::size_t n : {1u, 2u}) {
        double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
        IntegralEstimate tau0;
        for (double r : {0.0, 0.3, 0.6, 0.9}) {
            const CPoint z = CPoint::basis(n, 0, r);
            const std::string c = "n=" + std::to_string(n) + "/r=" + num(r);
            const auto vol = pseudo_ball_volume(z, 0.5, spec);
            const double ratio = vol.value / std::pow(1.0 - r * r, static_cast<double>(n) + 1.0);
            lo = std::min(lo, ratio);
            hi = std::max(hi, ratio);
            s.add(8, "volume_ratio", c, ratio, 0.0, std::isfinite(ratio) && ratio > 0.0 ? "pass" : "fail", info);

            const auto tau = tau_mass(z, 0.25, spec);
            if (r == 0.0) tau0 = tau;
            const double sigma = std::hypot(tau.std_error, tau0.std_error);
            const double dev = r == 0.0 ? 0.0 : std::abs(tau.value - tau0.value) / sigma;
            s.add(8, "tau_mass", c, tau.value, 0.0, "info", info);
            s.add(8, "tau_mass_sigmas", c, dev, 3.0, dev <= 3.0 ? "pass" : "fail", info);
        }
        const std::string c = "n=" + std::to_string(n);
        s.add(8, "volume_ratio_min", c, lo, 0.0, "info", GoldenKind::Lower);
        s.add(8, "volume_ratio_max", c, hi, 0.0, "info", GoldenKind::Upper);
        s.add(8, "volume_ratio_spread", c, hi / lo, 10.0, hi / lo < 10.0 ? "pass" : "fail", GoldenKind::Upper);
    }
}

inline void lemma9(LemmaSink& s, const QuadratureSpec& spec) {
    for (std::size_t n : {1u, 2u}) {
        const auto fam = standard_family(n);
        double hi0 = 0.0, hi1 = 0.0;
        for (std::size_t i = 0; i < fam.size(); ++i)
            for (double p : {1.0, 2.0, 4.0}) {
                const std::string c = "n=" + std::to_string(n) + "/f" + std::to_string(i) + "/p=" + num(p);
                const Lemma9Check l = on_row("L9/" + c, [&] { return lemma9_check(fam[i], p, spec); });
                const bool ok = std::isfinite(l.ratio[0]) && std::isfinite(l.ratio[1]) && l.ratio[0] > 0.0;
                s.add(9, "A_over_B", c, l.ratio[0], 0.0, ok ? "pass" : "fail", value_kind(spec));
                s.add(9, "B_over_A", c, l.ratio[1], 0.0, ok ? "pass" : "fail", value_kind(spec));
                hi0 = std::max(hi0, l.ratio[0]);
                hi1 = std::max(hi1, l.ratio[1]);
            }
        s.add(9, "A_over_B_max", "n=" + std::to_string(n), hi0, 0.0, "info", GoldenKind::Upper);
        s.add(9, "B_over_A_max", "n=" + std::to_string(n), hi1, 0.0, "info", GoldenKind::Upper);
    }
}

inline void lemma10(LemmaSink& s, const QuadratureSpec& spec) {
    for (std::size_t n : {1u, 2u}) {
        const auto fam = standard_family(n);
        double hi = 0.0;
        for (std::size_t i = 0; i < fam.size(); ++i)
            for (auto [p, q] : {std::pair{2.0, 2.0}, {1.0, 1.5}, {2.0, 3.0}}) {
                const std::string c =
                    "n=" + std::to_string(n) + "/f" + std::to_string(i) + "/p=" + num(p) + "/q=" + num(q);
                const Lemma10Check l = on_row("L10/" + c, [&] { return lemma10_local_check(fam[i], p, q, 0.0, spec); });
                const bool ok = std::isfinite(l.ratio) && !l.diverged;
                s.add(10, "local_ratio", c, l.ratio, 0.0, ok ? "pass" : "fail", value_kind(spec));
                hi = std::max(hi, l.ratio);
            }
        s.add(10, "local_ratio_max", "n=" + std::to_string(n), hi, 0.0, "info", GoldenKind::Upper);
        const Lemma10Check edge = lemma10_local_check(HoloFunction::coordinate(n, 0), 1.0, 3.0, 0.0, spec);
        s.add(10, "divergence_flag_q_eq_p_plus_2", "n=" + std::to_string(n), edge.diverged ? 1.0 : 0.0, 1.0,
              edge.diverged ? "pass" : "fail", GoldenKind::Exact);
    }
}

}  // namespace experiments_detail

/// One CSV section per lemma. `log` receives a timing line per section.
inline RunOutput run_lemma_checks(const ExperimentConfig& cfg, const std::vector<int>& sections, std::ostream* log = nullptr) {
    using namespace experiments_detail;
    RunOutput out;
    out.golden_name = "lemma_checks";
    LemmaSink sink(out);
    std::string list;
    for (int sec : sections) {
        if (std::find(lemma_sections().begin(), lemma_sections().end(), sec) == lemma_sections().end())
            throw ConfigError("no lemma check numbered " + std::to_string(sec));
        const auto t0 = std::chrono::steady_clock::now();
        switch (sec) {
            case 3: lemma3(sink, cfg.spec); break;
            case 4: lemma4(sink); break;
            case 5: lemma5(sink, cfg.spec.seed); break;
            case 6: lemma6(sink, cfg.spec); break;
            case 7: lemma7(sink, cfg.spec); break;
            case 8: lemma8(sink, cfg.spec); break;
            case 9: lemma9(sink, cfg.spec); break;
            case 10: lemma10(sink, cfg.spec); break;
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (log) *log << "lemma " << sec << ": " << secs << " s\n";
        out.golden_scope.push_back("L" + std::to_string(sec) + "/");
        list += (list.empty() ? "" : ",") + std::to_string(sec);
    }
    auto header = cfg.echo();
    header.push_back("lemmas = " + list);
    out.files.emplace_back("lemma_checks.csv", sink.table.render(header));
    return out;
}

inline const std::vector<std::string>& bench_integrands() {
    static const std::vector<std::string> s{"normalization", "monomial", "boundary-singular"};
    return s;
}

/// Every quadrature method on integrands with known integrals:
/// 1 against dv_alpha, |z_1^2 z_2|^2 against dv_1 in C^2, and
/// (1-|z|^2)^(-1/2) against dv in C^2.
inline RunOutput run_quadrature_bench(const ExperimentConfig& cfg, const std::vector<std::string>& integrands,
                                      const std::vector<Method>& methods, std::ostream* log = nullptr) {
    RunOutput out;
    out.golden_name = "quadrature_bench";
    CsvTable t({"integrand", "n", "alpha", "method", "samples", "value", "std_error", "exact", "abs_error"});
    for (const std::string& name : integrands) {
        std::size_t n = 2;
        double alpha = 0.0, exact = 1.0;
        std::function<double(const CPoint&)> g;
        if (name == "normalization") {
            alpha = 0.5;
            g = [](const CPoint&) { return 1.0; };
        } else if (name == "monomial") {
            alpha = 1.0;
            exact = ball_monomial_norm({2, 1}, 2, 1.0);
            g = [](const CPoint& z) { return std::norm(z[0] * z[0] * z[1]); };
        } else if (name == "boundary-singular") {
            exact = 1.0 / normalizing_constant(2, -0.5);
            g = [](const CPoint& z) { return 1.0 / std::sqrt(1.0 - z.norm_sq()); };
        } else {
            throw ConfigError("unknown integrand '" + name + "'");
        }
        for (Method m : methods) {
            const auto t0 = std::chrono::steady_clock::now();
            const IntegralEstimate e = integrate_ball(g, WeightedMeasure(n, alpha), cfg.spec.with_method(m));
            const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            t.row() << name << n << alpha << to_string(m) << e.samples_used << e.value << e.std_error << exact
                    << std::abs(e.value - exact);
            if (log) *log << name << " " << to_string(m) << ": " << secs << " s\n";
        }
    }
    std::string names;
    for (const auto& s : integrands) names += (names.empty() ? "" : ",") + s;
    auto header = cfg.echo();
    header.push_back("integrands = " + names);
    out.files.emplace_back("quadrature_bench.csv", t.render(header));
    return out;
}

/// Output directory: `override_dir` if given, then BERGMAN_OUTPUT_DIR, then
/// the configured path.
inline std::filesystem::path resolve_output_dir(const ExperimentConfig& cfg, const std::string& override_dir = {}) {
    if (!override_dir.empty()) return override_dir;
    if (const char* env = std::getenv("BERGMAN_OUTPUT_DIR"); env && *env) return env;
    return cfg.output_dir;
}

/// Write the files, then record or verify goldens. Returns the exit status
/// for everything after a successful run.
inline int finish_run(const RunOutput& out, const std::filesystem::path& dir, GoldenMode mode,
                      const std::filesystem::path& golden_dir, std::ostream& log) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir))
        throw ConfigError("output directory " + dir.string() + " cannot be created");
    for (const auto& [rel, text] : out.files) {
        try {
            write_text(dir / rel, text);
        } catch (const Error& e) {
            throw ConfigError(std::string("output directory is not writable: ") + e.what());
        }
        log << "wrote " << (dir / rel).string() << '\n';
    }
    for (const auto& n : out.notes) log << n << '\n';

    int status = exit_status::ok;
    const std::filesystem::path golden = golden_dir / (out.golden_name + ".golden");
    if (mode == GoldenMode::Record) {
        write_text(golden, out.golden.render());
        log << "recorded " << golden.string() << '\n';
    } else if (mode == GoldenMode::Verify) {
        std::vector<std::string> diff;
        try {
            diff = golden_mismatches(out.golden, GoldenTable::load(golden), out.golden_scope);
        } catch (const ParseError&) {
            throw;
        } catch (const Error& e) {
            diff.push_back(e.what());
        }
        for (const auto& d : diff) log << "golden mismatch: " << d << '\n';
        if (!diff.empty()) status = exit_status::failure;
        else log << "goldens match " << golden.string() << '\n';
    }
    for (const auto& f : out.failures) log << "check failed: " << f << '\n';
    if (!out.failures.empty() && (!out.failures_need_verify || mode == GoldenMode::Verify))
        status = exit_status::failure;
    return status;
}

}  // namespace bergman
