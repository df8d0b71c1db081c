#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "bergman/growth.hpp"
#include "bergman/holo.hpp"
#include "bergman/quadrature.hpp"
#include "bergman/reinhardt.hpp"

namespace bergman {

/// Exponents (p, q, alpha) in dimension n.
struct WeightParams {
    std::size_t n = 1;
    double p = 2.0;
    double q = 2.0;
    double alpha = 0.0;

    /// 0 < q < p + 2, the range where the four functionals are comparable.
    bool in_range() const { return q > 0.0 && q < p + 2.0; }

    void validate() const {
        if (n == 0 || n > kMaxDim) throw DimensionError("dimension out of range");
        if (!(p > 0.0)) throw ParameterError("p must be positive");
        if (!(q > 0.0)) throw ParameterError("q must be positive");
        if (!(alpha > -1.0)) throw ParameterError("alpha must exceed -1");
    }
};

/// |x|^e for x >= 0 with the limits at x = 0 fixed: 0 for e > 0, 1 for e = 0,
/// +inf for e < 0.
inline double modulus_power(double x, double e) {
    if (x > 0.0) return e == 0.0 ? 1.0 : std::exp(e * std::log(x));
    if (e > 0.0) return 0.0;
    if (e == 0.0) return 1.0;
    return std::numeric_limits<double>::infinity();
}

/// Pointwise ingredients of the functionals at one point.
struct PointQuantities {
    double abs_f = 0.0;
    double radial_term = 0.0;    // (1-|z|^2)|Rf|
    double gradient_term = 0.0;  // (1-|z|^2)|grad f|
    double invariant_term = 0.0; // |grad~ f|
};

inline PointQuantities point_quantities(const HoloFunction& f, const CPoint& z) {
    const DerivativeBundle b = derivative_bundle(f, z);
    const double omz = 1.0 - z.norm_sq();
    return {std::abs(b.value), omz * std::abs(b.radial), omz * b.grad_norm, b.inv_grad_norm};
}

/// Integrands of I1..I4 at one point: |f|^p and |f|^{p-q} D^q for the three
/// derivative terms D.
inline std::array<double, 4> functional_integrands(const PointQuantities& v, double p, double q) {
    const double lead = modulus_power(v.abs_f, p - q);
    auto term = [&](double d) {
        const double dq = std::pow(d, q);
        // 0 * inf is left as NaN for the singular-point policy.
        return lead * dq;
    };
    return {modulus_power(v.abs_f, p), term(v.radial_term), term(v.gradient_term), term(v.invariant_term)};
}

/// I1..I4 of f on one shared node set; the per-point ordering I2 <= I3 <= I4
/// therefore carries over to the sums.
inline std::array<IntegralEstimate, 4> functionals(const HoloFunction& f, const WeightParams& w,
                                                   const QuadratureSpec& spec) {
    w.validate();
    if (f.dimension() != w.n) throw DimensionError("function and parameters disagree on n");
    const double p = w.p, q = w.q;
    auto g = [&](const CPoint& z, std::span<double> out) {
        const auto r = functional_integrands(point_quantities(f, z), p, q);
        std::copy(r.begin(), r.end(), out.begin());
    };
    const auto est = integrate_ball_multi(g, 4, WeightedMeasure(w.n, w.alpha), spec);
    return {est[0], est[1], est[2], est[3]};
}

inline IntegralEstimate I1(const HoloFunction& f, const WeightParams& w, const QuadratureSpec& s) {
    return functionals(f, w, s)[0];
}
inline IntegralEstimate I2(const HoloFunction& f, const WeightParams& w, const QuadratureSpec& s) {
    return functionals(f, w, s)[1];
}
inline IntegralEstimate I3(const HoloFunction& f, const WeightParams& w, const QuadratureSpec& s) {
    return functionals(f, w, s)[2];
}
inline IntegralEstimate I4(const HoloFunction& f, const WeightParams& w, const QuadratureSpec& s) {
    return functionals(f, w, s)[3];
}

/// The integrals of |f_i|^p dv_alpha for f_1 = (1-|z|^2)|Rf|,
/// f_2 = (1-|z|^2)|grad f| and f_3 = |grad~ f| (q is ignored).
inline std::array<IntegralEstimate, 3> theorem1_quantities(const HoloFunction& f, const WeightParams& w,
                                                           const QuadratureSpec& spec) {
    w.validate();
    if (f.dimension() != w.n) throw DimensionError("function and parameters disagree on n");
    const double p = w.p;
    auto g = [&](const CPoint& z, std::span<double> out) {
        const PointQuantities v = point_quantities(f, z);
        out[0] = std::pow(v.radial_term, p);
        out[1] = std::pow(v.gradient_term, p);
        out[2] = std::pow(v.invariant_term, p);
    };
    const auto est = integrate_ball_multi(g, 3, WeightedMeasure(w.n, w.alpha), spec);
    return {est[0], est[1], est[2]};
}

/// One function's row of a comparability report.
struct ComparabilityRow {
    std::string function;
    std::array<IntegralEstimate, 4> I;
    double f0_p = 0.0;  // |f(0)|^p
    /// (|f(0)|^p + I_k) / I_1 for k = 2, 3, 4; NaN when I_1 = 0.
    std::array<double, 3> ratio{};
};

struct ComparabilityReport {
    WeightParams params;
    bool in_range = true;
    std::vector<ComparabilityRow> rows;
    /// min / max over rows of each ratio.
    std::array<double, 3> ratio_min{};
    std::array<double, 3> ratio_max{};
};

inline ComparabilityReport comparability_report(const std::vector<HoloFunction>& family, const WeightParams& w,
                                                const QuadratureSpec& spec) {
    ComparabilityReport rep;
    rep.params = w;
    rep.in_range = w.in_range();
    const double inf = std::numeric_limits<double>::infinity();
    rep.ratio_min = {inf, inf, inf};
    rep.ratio_max = {-inf, -inf, -inf};
    for (const HoloFunction& f : family) {
        ComparabilityRow row;
        row.function = f.describe();
        row.I = functionals(f, w, spec);
        row.f0_p = modulus_power(std::abs(f(CPoint::zero(w.n))), w.p);
        for (std::size_t k = 0; k < 3; ++k) {
            if (row.I[0].value > 0.0) {
                row.ratio[k] = (row.f0_p + row.I[k + 1].value) / row.I[0].value;
                rep.ratio_min[k] = std::min(rep.ratio_min[k], row.ratio[k]);
                rep.ratio_max[k] = std::max(rep.ratio_max[k], row.ratio[k]);
            } else {
                row.ratio[k] = std::numeric_limits<double>::quiet_NaN();
            }
        }
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

/// Ratio of int |f| dv_beta to (int |f|^p dv_alpha)^{1/p}, with
/// beta = (n+1+alpha)/p - (n+1), for 0 < p <= 1.
struct EmbeddingCheck {
    double beta = 0.0;
    IntegralEstimate lhs;
    IntegralEstimate rhs_integral;  // int |f|^p dv_alpha
    double ratio = 0.0;
};

inline EmbeddingCheck embedding_check(const HoloFunction& f, double p, double alpha, const QuadratureSpec& spec) {
    if (!(p > 0.0 && p <= 1.0)) throw ParameterError("the embedding needs 0 < p <= 1");
    if (!(alpha > -1.0)) throw ParameterError("alpha must exceed -1");
    const std::size_t n = f.dimension();
    const double nd = static_cast<double>(n);
    EmbeddingCheck c;
    c.beta = (nd + 1.0 + alpha) / p - (nd + 1.0);
    c.lhs = integrate_ball([&](const CPoint& z) { return std::abs(f(z)); }, WeightedMeasure(n, c.beta), spec);
    c.rhs_integral =
        integrate_ball([&](const CPoint& z) { return modulus_power(std::abs(f(z)), p); }, WeightedMeasure(n, alpha), spec);
    c.ratio = c.lhs.value / std::pow(c.rhs_integral.value, 1.0 / p);
    return c;
}

/// Both directions of the q = 2 unweighted inequality: with
/// A = int |f|^p dv and B = |f(0)|^p + int |f|^{p-2} |grad~ f|^2 dv,
/// returns A / B and B / A.
struct Lemma9Check {
    double A = 0.0;
    double B = 0.0;
    std::array<double, 2> ratio{};
};

inline Lemma9Check lemma9_check(const HoloFunction& f, double p, const QuadratureSpec& spec) {
    const WeightParams w{f.dimension(), p, 2.0, 0.0};
    const auto I = functionals(f, w, spec);
    Lemma9Check c;
    c.A = I[0].value;
    c.B = modulus_power(std::abs(f(CPoint::zero(w.n))), p) + I[3].value;
    c.ratio = {c.A / c.B, c.B / c.A};
    return c;
}

/// int_{|z|<1/4} |f|^{p-q} |grad~ f|^q dv_alpha over int_{|z|<3/4} |f|^p dv_alpha.
struct Lemma10Check {
    IntegralEstimate numerator;
    IntegralEstimate denominator;
    double ratio = 0.0;
    /// For monomials, the numerator truncated to |z_k| >= eps on the zero set.
    std::optional<TruncationProfile> profile;
    bool diverged = false;
};

/// Truncation profile of int_{|z|<radius} |f|^{p-q} |grad~ f|^q dv_alpha with
/// |z_k| >= eps imposed on every coordinate where the monomial f vanishes.
inline TruncationProfile monomial_truncation_profile(const MultiIndex& m, const HoloFunction& f, double p, double q,
                                                     double alpha, double radius,
                                                     std::vector<double> eps = dyadic_cutoffs()) {
    const std::size_t n = f.dimension();
    const WeightedMeasure mu(n, alpha);
    return truncation_profile(std::move(eps), [&](double e) {
        ModuliRegion region{radius, std::vector<double>(n, 0.0)};
        for (std::size_t k = 0; k < n; ++k)
            if (m[k] > 0) region.floors[k] = e;
        return integrate_moduli(
            [&](const CPoint& z) { return functional_integrands(point_quantities(f, z), p, q)[3]; }, mu, region);
    });
}

inline Lemma10Check lemma10_local_check(const HoloFunction& f, double p, double q, double alpha,
                                        const QuadratureSpec& spec) {
    const WeightParams w{f.dimension(), p, q, alpha};
    w.validate();
    const WeightedMeasure mu(w.n, alpha);
    Lemma10Check c;
    const auto m = f.monomial_exponent();
    if (m && std::any_of(m->begin(), m->end(), [](int e) { return e > 0; })) {
        c.profile = monomial_truncation_profile(*m, f, p, q, alpha, 0.25);
        c.diverged = c.profile->divergent();
    }
    if (c.diverged) {
        c.numerator.value = c.profile->values.back();
        c.numerator.diverged = true;
    } else {
        c.numerator = integrate_ball(
            [&](const CPoint& z) { return functional_integrands(point_quantities(f, z), p, q)[3]; }, mu,
            spec.with_region(Region::euclidean_ball(0.25)));
    }
    c.denominator = integrate_ball([&](const CPoint& z) { return modulus_power(std::abs(f(z)), p); }, mu,
                                   spec.with_region(Region::euclidean_ball(0.75)));
    c.ratio = c.denominator.value > 0.0 ? c.numerator.value / c.denominator.value
                                        : (c.numerator.value == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
    return c;
}

/// Truncated I4 of f(z) = z_1 over {|z| < 1/2, |z_1| >= eps}, divided by
/// 2n c_alpha so that in one variable it is the polar integral
/// int_eps^{1/2} r^{2n-1+p-q} (1-r^2)^{alpha+q} dr.
inline TruncationProfile sharpness_profile(double p, double alpha, std::size_t n, double q,
                                           std::vector<double> cutoffs = dyadic_cutoffs()) {
    const WeightParams w{n, p, q, alpha};
    w.validate();
    MultiIndex m(n, 0);
    m[0] = 1;
    const HoloFunction f = HoloFunction::monomial(n, m);
    TruncationProfile prof = monomial_truncation_profile(m, f, p, q, alpha, 0.5, std::move(cutoffs));
    const double norm = 2.0 * static_cast<double>(n) * normalizing_constant(n, alpha);
    for (double& v : prof.values) v /= norm;
    prof.fit = classify_growth(prof.eps, prof.values);
    return prof;
}

}  // namespace bergman
