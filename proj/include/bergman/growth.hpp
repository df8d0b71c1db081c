#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "bergman/error.hpp"

namespace bergman {

enum class Growth { Convergent, LogDivergent, PowerDivergent, Inconclusive };

inline const char* to_string(Growth g) {
    switch (g) {
        case Growth::Convergent: return "convergent";
        case Growth::LogDivergent: return "log-divergent";
        case Growth::PowerDivergent: return "power-divergent";
        case Growth::Inconclusive: return "inconclusive";
    }
    return "?";
}

inline bool is_divergent(Growth g) {
    return g == Growth::LogDivergent || g == Growth::PowerDivergent;
}

/// Classification of a sequence of truncated integrals V(eps_j) with
/// eps_j decreasing geometrically.
struct GrowthFit {
    Growth kind = Growth::Inconclusive;
    /// Least-squares slope of V against ln(1/eps) over the tail.
    double log_slope = 0.0;
    /// Exponent k in V ~ eps^-k, from the decay rate of the increments.
    double power_exponent = 0.0;
    /// Geometric mean over the tail of successive increment ratios,
    /// normalized to one halving of eps.
    double increment_ratio = 0.0;
};

/// Thresholds on the per-halving increment ratio: increments of a
/// convergent sequence shrink geometrically, those of a logarithmic one stay
/// level, and those of a power law grow.
struct GrowthThresholds {
    double convergent_below = 0.85;
    double power_above = 1.15;
    std::size_t tail = 4;  // number of increment ratios used
    double negligible = 1e-12;
};

inline GrowthFit classify_growth(std::span<const double> eps, std::span<const double> values,
                                 GrowthThresholds th = {}) {
    if (eps.size() != values.size()) throw ParameterError("eps/value length mismatch");
    const std::size_t m = eps.size();
    if (m < th.tail + 2) throw ParameterError("growth classification needs more truncations");
    GrowthFit fit;

    // Increments per unit of ln(1/eps).
    std::vector<double> d(m - 1);
    std::vector<double> step(m - 1);
    for (std::size_t j = 0; j + 1 < m; ++j) {
        step[j] = std::log(eps[j] / eps[j + 1]);
        if (!(step[j] > 0.0)) throw ParameterError("eps must be strictly decreasing");
        d[j] = (values[j + 1] - values[j]) / step[j];
    }

    // Least-squares slope against ln(1/eps) over the last tail+1 points.
    {
        const std::size_t k0 = m - th.tail - 1;
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const double cnt = static_cast<double>(m - k0);
        for (std::size_t j = k0; j < m; ++j) {
            const double x = -std::log(eps[j]);
            sx += x;
            sy += values[j];
            sxx += x * x;
            sxy += x * values[j];
        }
        fit.log_slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
    }

    const double scale = std::max(1.0, std::abs(values[m - 1]));
    bool negligible = true;
    for (std::size_t j = d.size() - th.tail; j < d.size(); ++j)
        if (std::abs(d[j]) > th.negligible * scale) negligible = false;
    if (negligible) {
        fit.kind = Growth::Convergent;
        return fit;
    }

    double log_ratio = 0.0;
    for (std::size_t j = d.size() - th.tail; j < d.size(); ++j) {
        if (!(d[j] > 0.0) || !(d[j - 1] > 0.0)) {
            // Non-monotone tail: decide on size alone.
            fit.kind = std::abs(d[j]) <= 1e-6 * scale ? Growth::Convergent : Growth::Inconclusive;
            return fit;
        }
        const double mean_step = 0.5 * (step[j] + step[j - 1]);
        log_ratio += std::log(d[j] / d[j - 1]) * std::log(2.0) / mean_step;
    }
    log_ratio /= static_cast<double>(th.tail);
    fit.increment_ratio = std::exp(log_ratio);
    fit.power_exponent = log_ratio / std::log(2.0);
    if (fit.increment_ratio < th.convergent_below) {
        fit.kind = Growth::Convergent;
    } else if (fit.increment_ratio > th.power_above) {
        fit.kind = Growth::PowerDivergent;
    } else {
        fit.kind = Growth::LogDivergent;
    }
    return fit;
}

/// Dyadic cutoffs 2^-first, ..., 2^-last.
inline std::vector<double> dyadic_cutoffs(int first = 3, int last = 16) {
    std::vector<double> eps;
    for (int j = first; j <= last; ++j) eps.push_back(std::ldexp(1.0, -j));
    return eps;
}

/// A truncation profile together with its classification.
struct TruncationProfile {
    std::vector<double> eps;
    std::vector<double> values;
    GrowthFit fit;

    bool divergent() const { return is_divergent(fit.kind); }
};

template <class F>
TruncationProfile truncation_profile(std::vector<double> eps, F&& truncated_value,
                                     GrowthThresholds th = {}) {
    TruncationProfile p;
    p.eps = std::move(eps);
    p.values.reserve(p.eps.size());
    for (double e : p.eps) p.values.push_back(truncated_value(e));
    p.fit = classify_growth(p.eps, p.values, th);
    return p;
}

}  // namespace bergman
