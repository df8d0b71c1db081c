#include <gtest/gtest.h>

#include <cmath>

#include "bergman/holo.hpp"
#include "bergman/rng.hpp"

using namespace bergman;

TEST(Eval, Examples) {
    EXPECT_EQ(HoloFunction::constant(2, 1.0)(CPoint{0.3, 0.2}), Complex(1.0));
    EXPECT_NEAR(std::abs(HoloFunction::monomial(2, {2, 0})(CPoint{0.5, 0.0}) - 0.25), 0.0, 1e-15);
    const auto k = HoloFunction::kernel_power(CPoint{0.5}, 2.0);
    EXPECT_NEAR(k(CPoint{0.5}).real(), 1.0 / (0.75 * 0.75), 1e-14);
}

TEST(Partials, Examples) {
    EXPECT_EQ(HoloFunction::constant(2, 3.0).partials(CPoint{0.1, 0.2}).norm(), 0.0);
    const auto g = HoloFunction::monomial(2, {1, 1}).partials(CPoint{0.3, Complex(0, 0.4)});
    EXPECT_NEAR(std::abs(g[0] - Complex(0, 0.4)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(g[1] - Complex(0.3)), 0.0, 1e-15);
    const auto gk = HoloFunction::kernel_power(CPoint{0.5}, 1.0).partials(CPoint{0.0});
    EXPECT_NEAR(std::abs(gk[0] - 0.5), 0.0, 1e-15);
}

TEST(Partials, ExactMatchesDifferencesWithSecondOrder) {
    Stream rng(4);
    const HoloFunction fs[] = {
        HoloFunction::polynomial(2, {{{3, 1}, Complex(1, 2)}, {{0, 2}, -0.5}}),
        HoloFunction::kernel_power(CPoint{0.4, Complex(0.1, 0.3)}, 3.5, Complex(0.5, -1.0)),
    };
    for (const auto& f : fs) {
        const CPoint z = rng.ball_point(2, 0.7);
        const Gradient exact = f.partials(z);
        auto fd = [&](double h) {
            CPoint zp = z, zm = z;
            zp[0] += h;
            zm[0] -= h;
            return (f(zp) - f(zm)) / (2 * h);
        };
        const double e1 = std::abs(fd(1e-2) - exact[0]);
        const double e2 = std::abs(fd(5e-3) - exact[0]);
        EXPECT_GE(std::log2(e1 / e2), 1.9);
        EXPECT_LT((f.numeric_partials(z) - exact).norm(), 1e-8 * (1 + exact.norm()));
    }
}

TEST(Radial, Examples) {
    const CPoint z{0.3, Complex(0.2, -0.1)};
    EXPECT_EQ(radial_derivative(HoloFunction::constant(2, 2.0), z), Complex(0.0));
    const auto f = HoloFunction::monomial(2, {2, 1});
    EXPECT_NEAR(std::abs(radial_derivative(f, z) - 3.0 * f(z)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(radial_derivative(HoloFunction::monomial(1, {2}), CPoint{0.5}) - 0.5), 0.0, 1e-15);
}

TEST(GradientNorm, Examples) {
    EXPECT_EQ(gradient_norm(HoloFunction::constant(1, 1.0), CPoint{0.1}), 0.0);
    EXPECT_NEAR(gradient_norm(HoloFunction::coordinate(3, 0), CPoint{0.1, 0.2, 0.3}), 1.0, 1e-15);
    const auto f = HoloFunction::coordinate(2, 0) + Complex(2.0) * HoloFunction::coordinate(2, 1);
    EXPECT_NEAR(gradient_norm(f, CPoint{0.4, -0.2}), std::sqrt(5.0), 1e-15);
}

TEST(InvariantGradient, Examples) {
    EXPECT_EQ(invariant_gradient_norm(HoloFunction::constant(2, 1.0), CPoint{0.1, 0.2}), 0.0);
    EXPECT_NEAR(invariant_gradient_norm(HoloFunction::coordinate(1, 0), CPoint{0.5}), 0.75, 1e-15);
    EXPECT_NEAR(invariant_gradient_definitional(HoloFunction::monomial(1, {2}), CPoint{0.5}), 0.75, 1e-8);
    EXPECT_NEAR(invariant_gradient_definitional(HoloFunction::constant(2, 3.0), CPoint{0.5, 0.1}), 0.0, 1e-12);
    const auto f = HoloFunction::coordinate(2, 0);
    const CPoint z{0.6, 0.0};
    EXPECT_NEAR(invariant_gradient_norm(f, z), invariant_gradient_definitional(f, z), 1e-8);
    const auto g = HoloFunction::polynomial(2, {{{1, 2}, 1.0}, {{0, 1}, Complex(0, 1)}});
    EXPECT_NEAR(invariant_gradient_definitional(g, CPoint::zero(2)), gradient_norm(g, CPoint::zero(2)),
                1e-9);
}

TEST(InvariantGradient, AgreesWithDefinitionOnRandomPoints) {
    Stream rng(8);
    const HoloFunction fs[] = {
        HoloFunction::coordinate(2, 1),
        HoloFunction::polynomial(2, {{{2, 1}, 1.0}, {{0, 3}, Complex(0.3, 0.1)}, {{1, 0}, -1.0}}),
        HoloFunction::kernel_power(CPoint{0.5, Complex(0.0, 0.3)}, 3.0),
        HoloFunction::polynomial(3, {{{1, 1, 1}, 1.0}, {{0, 0, 2}, 2.0}}),
    };
    for (const auto& f : fs) {
        for (int i = 0; i < 200; ++i) {
            const CPoint z = rng.ball_point(f.dimension(), 0.95);
            const double a = invariant_gradient_norm(f, z), b = invariant_gradient_definitional(f, z);
            EXPECT_LT(std::abs(a - b) / (1 + a), 1e-5);
        }
    }
}

TEST(InvariantGradient, ChainInequality) {
    Stream rng(12);
    const auto f = HoloFunction::polynomial(2, {{{2, 0}, 1.0}, {{1, 3}, Complex(0, -2)}});
    for (int i = 0; i < 2000; ++i) {
        const CPoint z = rng.ball_point(2);
        const auto b = derivative_bundle(f, z);
        const double omz = 1 - z.norm_sq();
        EXPECT_LE(omz * std::abs(b.radial), omz * b.grad_norm + 1e-15);
        EXPECT_LE(omz * b.grad_norm, b.inv_grad_norm);
    }
}

TEST(InvariantGradient, MoebiusInvariance) {
    Stream rng(13);
    const auto f = HoloFunction::polynomial(2, {{{1, 1}, 1.0}, {{3, 0}, 0.5}});
    for (int i = 0; i < 100; ++i) {
        const Automorphism phi = (i % 2) ? Automorphism::involution(rng.ball_point(2, 0.8))
                                         : Automorphism(random_unitary(2, rng));
        const CPoint z = rng.ball_point(2, 0.8);
        const auto fphi = HoloFunction::composed(phi, f);
        const double lhs = invariant_gradient_definitional(fphi, z);
        const double rhs = invariant_gradient_norm(f, phi(z));
        EXPECT_LT(std::abs(lhs - rhs) / (1e-12 + rhs), 1e-5);
    }
}

TEST(HoloFunction, DimensionChecks) {
    EXPECT_THROW(HoloFunction::coordinate(2, 0)(CPoint{0.1}), DimensionError);
    EXPECT_THROW(HoloFunction::kernel_power(CPoint{1.0}, 1.0), DomainError);
    EXPECT_THROW(HoloFunction::monomial(2, {1}), DimensionError);
}

TEST(HoloFunction, MonomialExponent) {
    EXPECT_EQ(HoloFunction::monomial(2, {1, 2}).monomial_exponent(), MultiIndex({1, 2}));
    EXPECT_EQ((Complex(2.0) * HoloFunction::coordinate(2, 0)).monomial_exponent(), MultiIndex({1, 0}));
    EXPECT_FALSE(HoloFunction::kernel_power(CPoint{0.5}, 1.0).monomial_exponent());
}
