#include <gtest/gtest.h>

#include <cmath>

#include "bergman/functionals.hpp"
#include "bergman/rng.hpp"

using namespace bergman;

namespace {

// 2 int_0^1 h(r) r dr with composite Gauss-Legendre.
template <class H>
double polar_1d(H h) {
    double s = 0.0;
    for (int k = 0; k < 16; ++k) {
        const Rule1D r = legendre_interval(20, k / 16.0, (k + 1) / 16.0);
        for (std::size_t i = 0; i < r.size(); ++i) s += 2.0 * r.weights[i] * h(r.nodes[i]) * r.nodes[i];
    }
    return s;
}

const HoloFunction z1 = HoloFunction::coordinate(1, 0);

}  // namespace

TEST(ModulusPower, Limits) {
    EXPECT_EQ(modulus_power(0.0, 1.5), 0.0);
    EXPECT_EQ(modulus_power(0.0, 0.0), 1.0);
    EXPECT_TRUE(std::isinf(modulus_power(0.0, -1.0)));
    EXPECT_EQ(modulus_power(0.3, 0.0), 1.0);
    EXPECT_NEAR(modulus_power(0.25, 0.5), 0.5, 1e-15);
}

TEST(Functionals, CanonicalRow) {
    const auto I = functionals(z1, {1, 2.0, 2.0, 0.0}, QuadratureSpec{});
    const double o1 = polar_1d([](double r) { return r * r; });
    const double o2 = polar_1d([](double r) { return std::pow(1 - r * r, 2) * r * r; });
    const double o3 = polar_1d([](double r) { return std::pow(1 - r * r, 2); });
    EXPECT_NEAR(o1, 0.5, 1e-14);
    EXPECT_NEAR(o2, 1.0 / 12.0, 1e-14);  // B(2,3)
    EXPECT_NEAR(o3, 1.0 / 3.0, 1e-14);
    EXPECT_NEAR(I[0].value / o1, 1.0, 1e-10);
    EXPECT_NEAR(I[1].value / o2, 1.0, 1e-10);
    EXPECT_NEAR(I[2].value / o3, 1.0, 1e-10);
    EXPECT_NEAR(I[3].value / o3, 1.0, 1e-10);
}

TEST(Functionals, ConstantFunction) {
    for (double alpha : {0.0, 1.0}) {
        const auto I = functionals(HoloFunction::constant(2, 1.0), {2, 1.0, 0.5, alpha}, QuadratureSpec{});
        EXPECT_NEAR(I[0].value, 1.0, 1e-12);
        EXPECT_EQ(I[1].value, 0.0);
        EXPECT_EQ(I[2].value, 0.0);
        EXPECT_EQ(I[3].value, 0.0);
    }
}

TEST(Functionals, CoordinateInTwoVariables) {
    const auto I = functionals(HoloFunction::coordinate(2, 0), {2, 2.0, 2.0, 0.0}, QuadratureSpec{});
    EXPECT_NEAR(I[0].value, 1.0 / 3.0, 1e-12);
}

TEST(Functionals, OrderingOnSharedSamples) {
    const HoloFunction fam[] = {
        HoloFunction::polynomial(2, {{{1, 1}, 1.0}, {{2, 0}, Complex(0, 0.5)}}),
        HoloFunction::kernel_power(CPoint{0.5, 0.3}, 2.0),
        HoloFunction::coordinate(2, 1),
    };
    QuadratureSpec mc;
    mc.method = Method::StratifiedMC;
    mc.mc_samples = 20000;
    for (const auto& f : fam) {
        for (double q : {0.5, 1.0, 2.5}) {
            for (const QuadratureSpec& spec : {QuadratureSpec{}, mc}) {
                const auto I = functionals(f, {2, 1.0, q, 0.5}, spec);
                EXPECT_LE(I[1].value, I[2].value);
                EXPECT_LE(I[2].value, I[3].value);
            }
        }
    }
}

TEST(Functionals, Homogeneity) {
    const auto f = HoloFunction::polynomial(2, {{{1, 0}, 1.0}, {{1, 1}, Complex(0.5, -0.5)}});
    for (double p : {0.5, 2.0}) {
        const WeightParams w{2, p, 1.5, 1.0};
        const auto a = functionals(f, w, QuadratureSpec{});
        const auto b = functionals(Complex(2.0) * f, w, QuadratureSpec{});
        const auto c = functionals(Complex(0.0, -3.0) * f, w, QuadratureSpec{});
        for (int k = 0; k < 4; ++k) {
            EXPECT_NEAR(b[k].value / a[k].value, std::pow(2.0, p), 1e-13 * std::pow(2.0, p));
            EXPECT_NEAR(c[k].value / a[k].value, std::pow(3.0, p), 1e-13 * std::pow(3.0, p));
        }
    }
}

TEST(Functionals, QEqualsPMatchesTheorem1BitForBit) {
    const auto f = HoloFunction::kernel_power(CPoint{0.4, Complex(0, 0.2)}, 1.5);
    for (double p : {0.5, 1.0, 3.0}) {
        const WeightParams w{2, p, p, 0.0};
        const auto I = functionals(f, w, QuadratureSpec{});
        const auto T = theorem1_quantities(f, w, QuadratureSpec{});
        EXPECT_EQ(I[1].value, T[0].value);
        EXPECT_EQ(I[2].value, T[1].value);
        EXPECT_EQ(I[3].value, T[2].value);
    }
    const auto T = theorem1_quantities(z1, {1, 2.0, 2.0, 0.0}, QuadratureSpec{});
    EXPECT_NEAR(T[0].value, 1.0 / 12.0, 1e-10);
    EXPECT_NEAR(T[1].value, 1.0 / 3.0, 1e-10);
    EXPECT_NEAR(T[2].value, 1.0 / 3.0, 1e-10);
}

TEST(Functionals, UnitaryInvariance) {
    Stream rng(31);
    const auto f = HoloFunction::polynomial(2, {{{2, 0}, 1.0}, {{0, 1}, 0.5}});
    const auto g = HoloFunction::composed(Automorphism(random_unitary(2, rng)), f);
    const WeightParams w{2, 2.0, 1.0, 1.0};
    QuadratureSpec mc;
    mc.method = Method::StratifiedMC;
    mc.mc_samples = 100000;
    const auto a = functionals(f, w, QuadratureSpec{});
    const auto b = functionals(g, w, mc);
    for (int k = 0; k < 4; ++k) EXPECT_LT(std::abs(a[k].value - b[k].value), 3 * b[k].std_error + 1e-6) << k;
}

TEST(Functionals, SingularIntegrandUnderMonteCarlo) {
    // q > p with a zero set: |z_1|^{-1} [(1-|z|^2)]^2 style integrand.
    QuadratureSpec mc;
    mc.method = Method::StratifiedMC;
    mc.mc_samples = 40000;
    const auto I = functionals(HoloFunction::coordinate(2, 0), {2, 1.0, 2.0, 0.0}, mc);
    EXPECT_TRUE(std::isfinite(I[3].value));
    EXPECT_GT(I[3].value, 0.0);
}

TEST(Report, FlagsAndRatios) {
    std::vector<HoloFunction> fam{HoloFunction::constant(1, 1.0), z1, HoloFunction::monomial(1, {2})};
    const auto rep = comparability_report(fam, {1, 2.0, 1.0, 0.0}, QuadratureSpec{});
    EXPECT_TRUE(rep.in_range);
    ASSERT_EQ(rep.rows.size(), 3u);
    for (int k = 0; k < 3; ++k) EXPECT_NEAR(rep.rows[0].ratio[k], 1.0, 1e-12);
    for (int k = 0; k < 3; ++k) {
        EXPECT_GT(rep.ratio_min[k], 1e-3);
        EXPECT_LT(rep.ratio_max[k], 1e3);
    }
    const auto out = comparability_report(fam, {1, 1.0, 3.5, 0.0}, QuadratureSpec{});
    EXPECT_FALSE(out.in_range);

    std::vector<HoloFunction> doubled;
    for (const auto& f : fam) doubled.push_back(Complex(2.0) * f);
    const auto rep2 = comparability_report(doubled, {1, 2.0, 1.0, 0.0}, QuadratureSpec{});
    for (std::size_t i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k) EXPECT_NEAR(rep2.rows[i].ratio[k], rep.rows[i].ratio[k], 1e-13);
}

TEST(Embedding, Values) {
    EXPECT_NEAR(embedding_check(HoloFunction::constant(1, 1.0), 0.5, 0.0, QuadratureSpec{}).ratio, 1.0, 1e-12);
    const auto f = HoloFunction::kernel_power(CPoint{0.9}, 1.0);
    const auto c1 = embedding_check(f, 1.0, 0.5, QuadratureSpec{});
    EXPECT_EQ(c1.beta, 0.5);
    EXPECT_NEAR(c1.ratio, 1.0, 1e-14);
    const auto c = embedding_check(f, 0.5, 0.0, QuadratureSpec{});
    EXPECT_NEAR(c.beta, 2.0, 1e-15);
    EXPECT_TRUE(std::isfinite(c.ratio));
    EXPECT_GT(c.ratio, 0.0);
    EXPECT_LE(c.ratio, 1.0 + 1e-12);  // Hardy-Littlewood type: holds with C = 1 in one variable
}

TEST(Lemma9, Values) {
    const auto one = lemma9_check(HoloFunction::constant(1, 1.0), 1.0, QuadratureSpec{});
    EXPECT_NEAR(one.ratio[0], 1.0, 1e-12);
    EXPECT_NEAR(one.ratio[1], 1.0, 1e-12);
    const auto c = lemma9_check(z1, 2.0, QuadratureSpec{});
    EXPECT_NEAR(c.A, 0.5, 1e-10);
    EXPECT_NEAR(c.B, 1.0 / 3.0, 1e-10);
    EXPECT_NEAR(c.ratio[0], 1.5, 1e-9);
}

TEST(Lemma10, Values) {
    EXPECT_EQ(lemma10_local_check(HoloFunction::constant(2, 1.0), 1.0, 2.0, 0.0, QuadratureSpec{}).ratio, 0.0);
    QuadratureSpec mc;
    mc.method = Method::StratifiedMC;
    mc.mc_samples = 40000;
    const auto f = HoloFunction::coordinate(2, 0);
    const auto inside = lemma10_local_check(f, 1.0, 2.0, 0.0, mc);
    EXPECT_FALSE(inside.diverged);
    EXPECT_TRUE(std::isfinite(inside.ratio));
    ASSERT_TRUE(inside.profile.has_value());
    EXPECT_EQ(inside.profile->fit.kind, Growth::Convergent);
    const auto edge = lemma10_local_check(f, 1.0, 3.0, 0.0, mc);
    EXPECT_TRUE(edge.diverged);
    EXPECT_TRUE(edge.numerator.diverged);
}

TEST(Sharpness, OneVariableClassification) {
    const auto a = sharpness_profile(1.0, 0.0, 1, 2.5);
    EXPECT_EQ(a.fit.kind, Growth::Convergent);
    const auto b = sharpness_profile(1.0, 0.0, 1, 3.0);
    EXPECT_EQ(b.fit.kind, Growth::LogDivergent);
    EXPECT_NEAR(b.fit.log_slope, 1.0, 0.1);
    // Oracle: int_eps^{1/2} r^{-1} (1-r^2)^3 dr at the last cutoff.
    const double eps = b.eps.back();
    const auto r = dyadic_legendre(10, eps, 0.5);
    double oracle = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) oracle += r.weights[i] * std::pow(1 - r.nodes[i] * r.nodes[i], 3) / r.nodes[i];
    EXPECT_NEAR(b.values.back(), oracle, 1e-8 * oracle);
    const auto c = sharpness_profile(1.0, 0.0, 1, 3.5);
    EXPECT_EQ(c.fit.kind, Growth::PowerDivergent);
    EXPECT_NEAR(c.fit.power_exponent, 0.5, 0.05);
    EXPECT_EQ(sharpness_profile(1.0, 0.0, 1, 1.0).fit.kind, Growth::Convergent);
}

TEST(Sharpness, TwoVariables) {
    EXPECT_TRUE(sharpness_profile(1.0, 0.0, 2, 3.0).divergent());
    EXPECT_FALSE(sharpness_profile(1.0, 0.0, 2, 2.5).divergent());
    EXPECT_TRUE(sharpness_profile(1.0, 1.0, 2, 3.5).divergent());
}
