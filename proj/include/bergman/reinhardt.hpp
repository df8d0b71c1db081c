#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "bergman/ball.hpp"
#include "bergman/error.hpp"
#include "bergman/gauss.hpp"
#include "bergman/measures.hpp"
#include "bergman/quadrature.hpp"

namespace bergman {

/// Region {|z| < radius, |z_k| >= floor_k} for integrands that depend only on
/// the moduli |z_1|, ..., |z_n|.
struct ModuliRegion {
    double radius = 1.0;
    std::vector<double> floors;  // empty = no floors
};

/// Deterministic integration of a Reinhardt integrand g(|z_1|,...,|z_n|)
/// against dv_alpha. In squared moduli x_k = |z_k|^2 the normalized volume
/// is dv = n! dx on the simplex sum x_k < 1, so the integral becomes nested
/// 1-D integrals. Each coordinate uses composite Gauss-Legendre panels
/// refined geometrically toward its lower limit (which resolves integrable
/// or cut-off singularities on the coordinate hyperplanes) and, when the
/// region reaches the sphere and alpha != 0, toward its upper limit as well.
///
/// g is called with the real point (sqrt(x_1), ..., sqrt(x_n)).
template <class G>
double integrate_moduli(G&& g, const WeightedMeasure& mu, const ModuliRegion& region,
                        std::size_t order = 6) {
    const std::size_t n = mu.dimension();
    if (!(region.radius > 0.0 && region.radius <= 1.0))
        throw ParameterError("moduli region radius must lie in (0,1]");
    std::vector<double> lo(n, 0.0);
    if (!region.floors.empty()) {
        if (region.floors.size() != n) throw DimensionError("one floor per coordinate is required");
        for (std::size_t k = 0; k < n; ++k) {
            if (!(region.floors[k] >= 0.0)) throw ParameterError("floors must be nonnegative");
            lo[k] = region.floors[k] * region.floors[k];
        }
    }
    const double total = region.radius * region.radius;
    std::vector<double> tail_lo(n + 1, 0.0);
    for (std::size_t k = n; k-- > 0;) tail_lo[k] = tail_lo[k + 1] + lo[k];
    if (!(tail_lo[0] < total)) return 0.0;
    const bool to_sphere = region.radius == 1.0;
    const double alpha = mu.alpha();

    // Nodes carry their distance to the upper limit so that 1 - |z|^2 is
    // formed without cancellation at the sphere.
    struct Panelled {
        std::vector<double> x, gap, w;
    };
    auto add = [](Panelled& r, const Rule1D& p, double b, bool from_top) {
        for (std::size_t i = 0; i < p.size(); ++i) {
            r.x.push_back(from_top ? b - p.nodes[i] : p.nodes[i]);
            r.gap.push_back(from_top ? p.nodes[i] : b - p.nodes[i]);
            r.w.push_back(p.weights[i]);
        }
    };
    const bool grade_top = to_sphere && alpha != 0.0;
    auto rule_for = [&](double a, double b) {
        Panelled r;
        if (!(b > a)) return r;
        const double mid = grade_top ? 0.5 * (a + b) : b;
        add(r, a > 0.0 ? dyadic_legendre(order, a, mid) : graded_legendre(order, 0.0, mid, 0x1.0p-44), b,
            false);
        if (grade_top) add(r, graded_legendre(order, 0.0, b - mid, 0x1.0p-44), b, true);
        return r;
    };

    CPoint z(n);
    const double scale = mu.c_alpha() * std::exp(std::lgamma(static_cast<double>(n) + 1.0));
    auto recurse = [&](auto& self, std::size_t k, double used) -> double {
        const double hi = total - used - tail_lo[k + 1];
        const Panelled r = rule_for(lo[k], hi);
        std::vector<double> terms(r.x.size());
        for (std::size_t i = 0; i < r.x.size(); ++i) {
            const double x = r.x[i];
            z[k] = std::sqrt(x);
            if (k + 1 < n) {
                terms[i] = r.w[i] * self(self, k + 1, used + x);
            } else {
                double weight = 1.0;
                if (alpha != 0.0) weight = std::pow(to_sphere ? r.gap[i] : 1.0 - (used + x), alpha);
                terms[i] = r.w[i] * weight * g(z);
            }
        }
        return pairwise_sum(terms);
    };
    return scale * recurse(recurse, 0, 0.0);
}

}  // namespace bergman
