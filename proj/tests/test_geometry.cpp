#include <gtest/gtest.h>

#include <cmath>

#include "bergman/pseudo_ball.hpp"
#include "bergman/slice.hpp"

using namespace bergman;

namespace {

QuadratureSpec mc(std::size_t samples) {
    QuadratureSpec s;
    s.method = Method::StratifiedMC;
    s.mc_samples = samples;
    return s;
}

// tau(D(0, rho)) = n int_0^{rho^2} u^{n-1} (1-u)^{-(n+1)} du = (rho^2/(1-rho^2))^n
double tau_exact(std::size_t n, double rho) {
    const Rule1D r = legendre_interval(40, 0.0, rho * rho);
    double s = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i)
        s += r.weights[i] * n * std::pow(r.nodes[i], n - 1.0) * std::pow(1 - r.nodes[i], -(n + 1.0));
    return s;
}

}  // namespace

TEST(PseudoBallVolume, CentredExamples) {
    EXPECT_NEAR(pseudo_ball_volume_exact(CPoint{0.0}, 0.5), 0.25, 1e-15);
    EXPECT_NEAR(pseudo_ball_volume_exact(CPoint{0.0, 0.0}, 0.5), 0.0625, 1e-15);
    const auto e1 = pseudo_ball_volume(CPoint{0.0}, 0.5, mc(200000));
    EXPECT_LT(std::abs(e1.value - 0.25), 3 * e1.std_error + 1e-9);
    const auto e2 = pseudo_ball_volume(CPoint{0.0, 0.0}, 0.5, mc(200000));
    EXPECT_LT(std::abs(e2.value - 0.0625), 3 * e2.std_error + 1e-9);
}

TEST(PseudoBallVolume, MonteCarloMatchesClosedForm) {
    for (double r : {0.3, 0.6, 0.9}) {
        const CPoint a{r, 0.0};
        const auto e = pseudo_ball_volume(a, 0.5, mc(200000));
        EXPECT_LT(std::abs(e.value - pseudo_ball_volume_exact(a, 0.5)), 3 * e.std_error) << r;
    }
}

TEST(PseudoBallVolume, RejectsBadRadius) {
    EXPECT_THROW(pseudo_ball_volume(CPoint{0.1}, 1.0, QuadratureSpec{}), ParameterError);
}

TEST(TauMass, ConstantAcrossCentres) {
    const double exact = tau_exact(2, 0.25);
    EXPECT_NEAR(exact, std::pow(0.0625 / 0.9375, 2.0), 1e-14);
    for (double r : {0.0, 0.3, 0.6, 0.9}) {
        const auto e = tau_mass(CPoint{r, 0.0}, 0.25, mc(100000));
        EXPECT_LT(std::abs(e.value - exact), 3 * e.std_error) << r;
    }
}

TEST(Slice, ConvergentCases) {
    QuadratureSpec spec;
    spec.mc_samples = 170000;
    for (std::size_t n : {2u, 3u}) {
        for (double c : {0.0, 2.0, -1.0, -1.5}) {
            const SliceReduction s = slice_reduction_check(c, n, spec);
            const double exact = std::exp(std::lgamma(double(n)) + std::lgamma(0.5 * c + 1) - std::lgamma(n + 0.5 * c));
            EXPECT_FALSE(s.sphere.diverged);
            EXPECT_FALSE(s.disk.diverged);
            EXPECT_NEAR(s.disk.value, exact, 1e-8 * exact) << n << " " << c;
            EXPECT_LT(std::abs(s.sphere.value - exact), 3 * s.sphere.std_error + 1e-12) << n << " " << c;
            EXPECT_NEAR(s.constant, n - 1.0, 1e-10);
        }
    }
}

TEST(Slice, DivergentCases) {
    QuadratureSpec spec;
    spec.mc_samples = 170000;
    const SliceReduction s = slice_reduction_check(-2.0, 2, spec);
    EXPECT_TRUE(s.sphere.diverged);
    EXPECT_TRUE(s.disk.diverged);
    EXPECT_EQ(s.sphere_profile.fit.kind, Growth::LogDivergent);
    EXPECT_EQ(s.disk_profile.fit.kind, Growth::LogDivergent);
    const SliceReduction t = slice_reduction_check(-3.0, 2, spec);
    EXPECT_EQ(t.sphere_profile.fit.kind, Growth::PowerDivergent);
    EXPECT_EQ(t.disk_profile.fit.kind, Growth::PowerDivergent);
}

TEST(Slice, NeedsTwoDimensions) {
    EXPECT_THROW(slice_reduction_check(0.0, 1, QuadratureSpec{}), DimensionError);
}
