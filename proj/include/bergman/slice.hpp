#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "bergman/gauss.hpp"
#include "bergman/growth.hpp"
#include "bergman/quadrature.hpp"
#include "bergman/rng.hpp"

namespace bergman {

/// Both sides of the slice formula
///   int_{S_n} |zeta_1|^c d sigma = const * int_D |w|^c (1-|w|^2)^{n-2} dA(w)
/// (dA normalized area), computed independently, with their truncation
/// profiles over the cutoffs |zeta_1| >= eps and |w| >= eps.
struct SliceReduction {
    IntegralEstimate sphere;
    IntegralEstimate disk;
    double constant = 0.0;  // calibrated from c = 0
    TruncationProfile sphere_profile;
    TruncationProfile disk_profile;
};

namespace slice_detail {

/// CDF of t = |zeta_1|^2 on S_n: 1 - (1-t)^{n-1}.
inline double cdf(double nm1, double t) { return -std::expm1(nm1 * std::log1p(-t)); }
inline double quantile(double nm1, double p) { return -std::expm1(std::log1p(-p) / nm1); }

/// Stratum contributions of int_{S_n} |zeta_1|^c over t in [4^{-(k+1)}, 4^{-k}],
/// k = 0..levels-1, followed by the piece t in [0, 4^{-levels}] (importance
/// sampled from t^{c/2}; only meaningful for c > -2).
inline std::vector<IntegralEstimate> sphere_strata(double c, std::size_t n, std::size_t levels,
                                                   std::size_t per_stratum, std::uint64_t seed) {
    const double nm1 = static_cast<double>(n) - 1.0;
    std::vector<IntegralEstimate> out;
    for (std::size_t k = 0; k <= levels; ++k) {
        Stream rng(derive_seed(seed, {0x511ceULL, k}));
        std::vector<double> v(per_stratum);
        double mass;
        if (k < levels) {
            const double hi = std::ldexp(1.0, -2 * static_cast<int>(k));
            const double lo = 0.25 * hi;
            const double f_lo = cdf(nm1, lo), f_hi = cdf(nm1, hi);
            mass = f_hi - f_lo;
            for (double& x : v) {
                const double t = quantile(nm1, f_lo + (f_hi - f_lo) * rng.uniform());
                x = std::pow(t, 0.5 * c);
            }
        } else {
            const double delta = std::ldexp(1.0, -2 * static_cast<int>(levels));
            const double e = 0.5 * c + 1.0;
            if (!(e > 0.0)) break;
            mass = nm1 * std::pow(delta, e) / e;
            for (double& x : v) {
                const double t = delta * std::pow(rng.uniform(), 1.0 / e);
                x = std::pow(1.0 - t, nm1 - 1.0);
            }
        }
        IntegralEstimate est;
        const double mean = pairwise_sum(v) / static_cast<double>(per_stratum);
        std::vector<double> sq(per_stratum);
        for (std::size_t i = 0; i < per_stratum; ++i) sq[i] = (v[i] - mean) * (v[i] - mean);
        est.value = mass * mean;
        est.std_error = mass * std::sqrt(pairwise_sum(sq) / static_cast<double>(per_stratum - 1) /
                                         static_cast<double>(per_stratum));
        est.samples_used = per_stratum;
        out.push_back(est);
    }
    return out;
}

/// Disk side: 2-D polar tensor rule (dyadic Gauss-Legendre panels in r times
/// a trapezoid rule in theta) for int |w|^c (1-|w|^2)^{n-2} dA over
/// 2^{-(k+1)} <= |w| <= 2^{-k}, k = 0..levels-1, then |w| <= 2^{-levels} with a
/// Gauss-Jacobi rule absorbing r^{c+1}.
inline std::vector<double> disk_rings(double c, std::size_t n, std::size_t levels, std::size_t order,
                                      std::size_t angular) {
    const double nm2 = static_cast<double>(n) - 2.0;
    auto integrand = [&](double r, double theta) {
        const Complex w = std::polar(r, theta);
        return std::pow(std::abs(w), c) * std::pow(1.0 - std::norm(w), nm2);
    };
    const double dtheta = 2.0 * M_PI / static_cast<double>(angular);
    auto ring = [&](const Rule1D& radial, bool absorbs_power) {
        double s = 0.0;
        for (std::size_t i = 0; i < radial.size(); ++i) {
            const double r = radial.nodes[i];
            double a = 0.0;
            for (std::size_t j = 0; j < angular; ++j) {
                const double theta = dtheta * (static_cast<double>(j) + 0.5);
                a += absorbs_power ? std::pow(1.0 - r * r, nm2) : integrand(r, theta) * r;
            }
            // dA = r dr dtheta / pi
            s += radial.weights[i] * a * dtheta / M_PI;
        }
        return s;
    };
    std::vector<double> out;
    for (std::size_t k = 0; k < levels; ++k) {
        const double hi = std::ldexp(1.0, -static_cast<int>(k));
        out.push_back(ring(legendre_interval(order, 0.5 * hi, hi), false));
    }
    if (c > -2.0) {
        // int_0^delta r^{c+1} h(r) dr with r = delta x: delta^{c+2} int_0^1 x^{c+1} h(delta x) dx.
        const double delta = std::ldexp(1.0, -static_cast<int>(levels));
        Rule1D rule = jacobi_unit(order, 0.0, c + 1.0);
        for (std::size_t i = 0; i < rule.size(); ++i) {
            rule.nodes[i] *= delta;
            rule.weights[i] *= std::pow(delta, c + 2.0);
        }
        out.push_back(ring(rule, true));
    }
    return out;
}

template <class Piece>
TruncationProfile profile_from_pieces(const std::vector<Piece>& pieces, auto value_of) {
    // Cutoff eps = 2^-j keeps pieces 0..j-1.
    const std::vector<double> eps = dyadic_cutoffs();
    return truncation_profile(eps, [&](double e) {
        const int j = static_cast<int>(std::lround(-std::log2(e)));
        double s = 0.0;
        for (int k = 0; k < j; ++k) s += value_of(pieces[static_cast<std::size_t>(k)]);
        return s;
    });
}

}  // namespace slice_detail

/// Sphere side by stratified MC in t = |zeta_1|^2 (geometric strata, spec.mc_samples
/// in total); disk side by a polar tensor rule (spec.radial_order points per
/// panel). The disk constant is calibrated so that both sides agree at c = 0.
/// For c <= -2 both sides diverge; the estimates then hold the value truncated
/// at the smallest cutoff with `diverged` set.
inline SliceReduction slice_reduction_check(double c, std::size_t n, const QuadratureSpec& spec) {
    if (n < 2) throw DimensionError("the slice formula needs n >= 2");
    const std::size_t levels = 16;
    const std::size_t strata = levels + 1;
    const std::size_t per = std::max<std::size_t>(2, spec.mc_samples / strata);
    const std::size_t order = spec.radial_order;
    const std::size_t angular = 8;

    SliceReduction out;
    const auto sphere = slice_detail::sphere_strata(c, n, levels, per, spec.seed);
    out.sphere_profile =
        slice_detail::profile_from_pieces(sphere, [](const IntegralEstimate& e) { return e.value; });

    double calib = 0.0;
    for (double v : slice_detail::disk_rings(0.0, n, levels, order, angular)) calib += v;
    out.constant = 1.0 / calib;
    std::vector<double> disk = slice_detail::disk_rings(c, n, levels, order, angular);
    for (double& v : disk) v *= out.constant;
    out.disk_profile = slice_detail::profile_from_pieces(disk, [](double v) { return v; });

    auto assemble_sphere = [&](std::size_t count) {
        IntegralEstimate e;
        double var = 0.0;
        std::vector<double> vals;
        for (std::size_t k = 0; k < count; ++k) {
            vals.push_back(sphere[k].value);
            var += sphere[k].std_error * sphere[k].std_error;
            e.samples_used += sphere[k].samples_used;
        }
        e.value = pairwise_sum(vals);
        e.std_error = std::sqrt(var);
        return e;
    };
    auto assemble_disk = [&](std::size_t count) {
        IntegralEstimate e;
        e.value = pairwise_sum(std::vector<double>(disk.begin(), disk.begin() + static_cast<long>(count)));
        e.samples_used = count * order * angular;
        return e;
    };

    const bool sphere_div = out.sphere_profile.divergent() || sphere.size() == levels;
    const bool disk_div = out.disk_profile.divergent() || disk.size() == levels;
    out.sphere = assemble_sphere(sphere_div ? levels : sphere.size());
    out.sphere.diverged = sphere_div;
    out.disk = assemble_disk(disk_div ? levels : disk.size());
    out.disk.diverged = disk_div;
    return out;
}

}  // namespace bergman
