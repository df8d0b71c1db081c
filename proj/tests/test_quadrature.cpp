#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "bergman/quadrature.hpp"

using namespace bergman;

namespace {

std::vector<MultiIndex> indices_up_to(std::size_t n, int max_degree) {
    std::vector<MultiIndex> out;
    MultiIndex m(n, 0);
    std::function<void(std::size_t, int)> rec = [&](std::size_t k, int left) {
        if (k == n) {
            out.push_back(m);
            return;
        }
        for (int e = 0; e <= left; ++e) {
            m[k] = e;
            rec(k + 1, left - e);
        }
        m[k] = 0;
    };
    rec(0, max_degree);
    return out;
}

double monomial_sq(const MultiIndex& m, const CPoint& z) {
    double v = 1.0;
    for (std::size_t k = 0; k < m.size(); ++k) v *= std::pow(std::norm(z[k]), m[k]);
    return v;
}

}  // namespace

TEST(ProductRule, Normalization) {
    for (std::size_t n = 1; n <= 3; ++n) {
        for (double alpha : {-0.5, 0.0, 1.0, 2.5}) {
            const auto est = integrate_ball([](const CPoint&) { return 1.0; },
                                            WeightedMeasure(n, alpha), QuadratureSpec{});
            EXPECT_NEAR(est.value, 1.0, 1e-6) << "n=" << n << " alpha=" << alpha;
            EXPECT_EQ(est.std_error, 0.0);
        }
    }
}

TEST(ProductRule, MonomialOracle) {
    for (std::size_t n = 1; n <= 3; ++n) {
        for (double alpha : {0.0, 1.0}) {
            const WeightedMeasure mu(n, alpha);
            for (const MultiIndex& m : indices_up_to(n, 4)) {
                const double exact = ball_monomial_norm(m, n, alpha);
                const auto est = integrate_ball([&](const CPoint& z) { return monomial_sq(m, z); }, mu,
                                                QuadratureSpec{});
                EXPECT_LT(std::abs(est.value - exact) / exact, 1e-6);
            }
        }
    }
}

TEST(ProductRule, ExampleValues) {
    const QuadratureSpec spec;
    EXPECT_NEAR(integrate_ball([](const CPoint& z) { return std::norm(z[0]); }, WeightedMeasure(1, 0), spec).value,
                0.5, 1e-12);
    EXPECT_NEAR(integrate_ball([](const CPoint& z) { return std::norm(z[0]); }, WeightedMeasure(2, 0), spec).value,
                1.0 / 3.0, 1e-12);
}

TEST(MonteCarlo, MonomialWithinThreeSigma) {
    QuadratureSpec spec;
    spec.mc_samples = 200000;
    for (Method method : {Method::MonteCarlo, Method::StratifiedMC}) {
        spec.method = method;
        for (std::size_t n = 1; n <= 3; ++n) {
            const WeightedMeasure mu(n, 1.0);
            MultiIndex m(n, 0);
            m[0] = 2;
            const auto est = integrate_ball([&](const CPoint& z) { return monomial_sq(m, z); }, mu, spec);
            EXPECT_GT(est.std_error, 0.0);
            EXPECT_LT(std::abs(est.value - ball_monomial_norm(m, n, 1.0)), 3.0 * est.std_error + 1e-12)
                << to_string(method) << " n=" << n;
        }
    }
}

TEST(MonteCarlo, Deterministic) {
    QuadratureSpec spec;
    spec.method = Method::StratifiedMC;
    spec.mc_samples = 5000;
    const WeightedMeasure mu(2, 0.5);
    auto g = [](const CPoint& z) { return std::norm(z[0]) + std::abs(z[1]); };
    const auto a = integrate_ball(g, mu, spec), b = integrate_ball(g, mu, spec);
    EXPECT_EQ(a.value, b.value);
    EXPECT_EQ(a.std_error, b.std_error);
    const auto c = integrate_ball(g, mu, spec.with_seed(spec.seed + 1));
    EXPECT_NE(a.value, c.value);
}

TEST(Regions, EuclideanBallMonotone) {
    const WeightedMeasure mu(2, 0.0);
    auto g = [](const CPoint& z) { return std::norm(z[0]); };
    double last = 0.0;
    for (double r : {0.1, 0.25, 0.5, 0.75, 0.9, 1.0}) {
        const double v = integrate_ball(g, mu, QuadratureSpec{}.with_region(Region::euclidean_ball(r))).value;
        EXPECT_GE(v, last);
        last = v;
    }
    EXPECT_NEAR(last, 1.0 / 3.0, 1e-12);
}

TEST(Regions, EuclideanBallMass) {
    // v(|z| < r) = r^{2n}
    const auto est = integrate_ball([](const CPoint&) { return 1.0; }, WeightedMeasure(2, 0.0),
                                    QuadratureSpec{}.with_region(Region::euclidean_ball(0.5)));
    EXPECT_NEAR(est.value, 0.0625, 1e-12);
}

TEST(Regions, AnnulusAddsUp) {
    const WeightedMeasure mu(1, 1.0);
    auto g = [](const CPoint& z) { return std::norm(z[0]); };
    const double inner = integrate_ball(g, mu, QuadratureSpec{}.with_region(Region::euclidean_ball(0.3))).value;
    const double ring = integrate_ball(g, mu, QuadratureSpec{}.with_region(Region::annulus(0.3, 1.0))).value;
    EXPECT_NEAR(inner + ring, ball_monomial_norm({1}, 1, 1.0), 1e-12);
}

TEST(Regions, PseudoBallProductRuleVolume) {
    for (std::size_t n : {1u, 2u}) {
        for (double r : {0.0, 0.3, 0.6, 0.9}) {
            CPoint a(n);
            a[0] = r;
            const double rho = 0.5;
            const auto est = integrate_ball([](const CPoint&) { return 1.0; }, WeightedMeasure(n, 0.0),
                                            QuadratureSpec{}.with_region(Region::pseudo_ball(a, rho)));
            const double exact = std::pow(rho, 2.0 * n) *
                                 std::pow((1 - r * r) / (1 - rho * rho * r * r), n + 1.0);
            EXPECT_NEAR(est.value / exact, 1.0, 1e-6);
        }
    }
}

TEST(Regions, PseudoBallMonteCarloVolume) {
    QuadratureSpec spec;
    spec.method = Method::StratifiedMC;
    spec.mc_samples = 100000;
    const CPoint a{0.6, 0.0};
    const auto est = integrate_ball([](const CPoint&) { return 1.0; }, WeightedMeasure(2, 0.0),
                                    spec.with_region(Region::pseudo_ball(a, 0.5)));
    const double exact = 0.0625 * std::pow(0.64 / 0.91, 3.0);
    EXPECT_LT(std::abs(est.value - exact), 3.0 * est.std_error);
}

TEST(SingularPolicy, MonteCarloSurvivesInfiniteSamples) {
    QuadratureSpec spec;
    spec.method = Method::MonteCarlo;
    spec.mc_samples = 1000;
    int calls = 0;
    auto g = [&](const CPoint&) { return (++calls == 10) ? INFINITY : 1.0; };
    const auto est = integrate_ball(g, WeightedMeasure(1, 0.0), spec);
    EXPECT_EQ(est.singular_events, 1u);
    EXPECT_NEAR(est.value, 1.0, 1e-12);
}

TEST(SingularPolicy, ProductRuleGivesUpOnPersistentNaN) {
    auto g = [](const CPoint&) { return NAN; };
    EXPECT_THROW(integrate_ball(g, WeightedMeasure(1, 0.0), QuadratureSpec{}), NumericError);
}

TEST(PolarDecompose, AgreesWithDirect) {
    QuadratureSpec spec;
    spec.mc_samples = 200000;
    spec.sphere_samples = 20000;
    const WeightedMeasure mu(1, 0.0);
    auto [d1, p1] = polar_decompose_check([](const CPoint&) { return 1.0; }, mu, spec);
    EXPECT_NEAR(d1.value, 1.0, 1e-12);
    EXPECT_NEAR(p1.value, 1.0, 1e-12);
    auto [d2, p2] = polar_decompose_check([](const CPoint& z) { return z.norm_sq(); }, mu, spec);
    EXPECT_NEAR(p2.value, 0.5, 1e-12);
    EXPECT_LT(std::abs(d2.value - 0.5), 3.0 * d2.std_error);

    // |z_1|^{-1} on B_2: singular on a hyperplane, integrable. Exact value
    // n!/ (Gamma(n+1+0.5... )) via monomial formula with m_1 = -1/2.
    const WeightedMeasure mu2(2, 0.0);
    auto g = [](const CPoint& z) { return 1.0 / std::abs(z[0]); };
    auto [d3, p3] = polar_decompose_check(g, mu2, spec);
    const double exact = std::exp(std::lgamma(3.0) + std::lgamma(0.5) - std::lgamma(2.5));
    const double sigma = std::hypot(d3.std_error, p3.std_error);
    EXPECT_LT(std::abs(d3.value - p3.value), 3.0 * sigma);
    EXPECT_LT(std::abs(p3.value - exact), 3.0 * p3.std_error);
}

#include "bergman/reinhardt.hpp"

TEST(Moduli, MonomialOracle) {
    for (std::size_t n = 1; n <= 2; ++n) {
        for (double alpha : {-0.5, 0.0, 1.0}) {
            const WeightedMeasure mu(n, alpha);
            MultiIndex m(n, 1);
            m[0] = 2;
            const double v = integrate_moduli([&](const CPoint& z) { return monomial_sq(m, z); }, mu, {});
            EXPECT_NEAR(v / ball_monomial_norm(m, n, alpha), 1.0, 1e-7) << n << " " << alpha;
        }
    }
}

TEST(Moduli, SingularHyperplaneIntegrand) {
    // int_{B_2} |z_1|^{-1} dv = 2! Gamma(1/2) / Gamma(5/2)
    const double v = integrate_moduli([](const CPoint& z) { return 1.0 / z[0].real(); }, WeightedMeasure(2, 0.0), {});
    EXPECT_NEAR(v, 2.0 * std::sqrt(M_PI) / (0.75 * std::sqrt(M_PI)), 1e-6);
}

TEST(Moduli, FloorsAndRadius) {
    // n=1: int_{eps<|z|<R} |z|^{-2} dv = 2 log(R/eps)
    const double v = integrate_moduli([](const CPoint& z) { return 1.0 / std::norm(z[0]); }, WeightedMeasure(1, 0.0),
                                      {0.5, {1e-3}});
    EXPECT_NEAR(v, 2.0 * std::log(500.0), 1e-7);
    const double mass = integrate_moduli([](const CPoint&) { return 1.0; }, WeightedMeasure(2, 0.0), {0.5, {}});
    EXPECT_NEAR(mass, 0.0625, 1e-12);
}
