#pragma once

#include <cmath>

#include "bergman/ball.hpp"
#include "bergman/quadrature.hpp"

namespace bergman {

/// Normalized volume v(D(center, rho)). With a Monte Carlo method this is a
/// hit-or-miss estimate inside a Euclidean ball enclosing D, stratified by
/// radius; with the product rule it integrates over D through the change of
/// variables w = phi_center(rho y).
inline IntegralEstimate pseudo_ball_volume(const CPoint& center, double rho, const QuadratureSpec& spec) {
    detail::require_interior(center, "center");
    if (!(rho > 0.0 && rho < 1.0)) throw ParameterError("pseudo-ball radius must lie in (0,1)");
    return integrate_ball([](const CPoint&) { return 1.0; }, WeightedMeasure(center.size(), 0.0),
                          spec.with_region(Region::pseudo_ball(center, rho)));
}

/// tau(D(center, rho)) with d tau = dv / (1-|w|^2)^{n+1}.
inline IntegralEstimate tau_mass(const CPoint& center, double rho, const QuadratureSpec& spec) {
    detail::require_interior(center, "center");
    if (!(rho > 0.0 && rho < 1.0)) throw ParameterError("pseudo-ball radius must lie in (0,1)");
    return integrate_ball([](const CPoint& w) { return invariant_density(w); }, WeightedMeasure(center.size(), 0.0),
                          spec.with_region(Region::pseudo_ball(center, rho)));
}

/// Closed form of v(D(a, rho)) = rho^{2n} ((1-|a|^2) / (1-rho^2 |a|^2))^{n+1}.
inline double pseudo_ball_volume_exact(const CPoint& center, double rho) {
    const double a2 = center.norm_sq();
    const double n = static_cast<double>(center.size());
    return std::pow(rho, 2.0 * n) * std::pow((1.0 - a2) / (1.0 - rho * rho * a2), n + 1.0);
}

}  // namespace bergman
