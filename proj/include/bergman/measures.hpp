#pragma once

#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "bergman/error.hpp"

namespace bergman {

/// Exponent vector m = (m_1, ..., m_n) of a monomial z^m.
using MultiIndex = std::vector<int>;

inline int degree(const MultiIndex& m) { return std::accumulate(m.begin(), m.end(), 0); }

/// log(m!) = sum_k log(m_k!).
inline double log_factorial(const MultiIndex& m) {
    double s = 0.0;
    for (int k : m) {
        if (k < 0) throw ParameterError("multi-index entries must be nonnegative");
        s += std::lgamma(static_cast<double>(k) + 1.0);
    }
    return s;
}

/// c_alpha = Gamma(n+1+alpha) / (n! Gamma(alpha+1)), the constant that makes
/// dv_alpha = c_alpha (1-|z|^2)^alpha dv a probability measure on B_n.
inline double normalizing_constant(std::size_t n, double alpha) {
    if (!(alpha > -1.0)) throw ParameterError("alpha must exceed -1, got " + std::to_string(alpha));
    if (n == 0) throw ParameterError("dimension must be positive");
    const double nd = static_cast<double>(n);
    return std::exp(std::lgamma(nd + 1.0 + alpha) - std::lgamma(nd + 1.0) -
                    std::lgamma(alpha + 1.0));
}

/// The probability measure dv_alpha on the unit ball of C^n.
class WeightedMeasure {
public:
    WeightedMeasure(std::size_t n, double alpha)
        : n_(n), alpha_(alpha), c_alpha_(normalizing_constant(n, alpha)) {}

    std::size_t dimension() const noexcept { return n_; }
    double alpha() const noexcept { return alpha_; }
    double c_alpha() const noexcept { return c_alpha_; }

    /// Density with respect to the normalized volume dv.
    double density(double abs_z_sq) const { return c_alpha_ * std::pow(1.0 - abs_z_sq, alpha_); }

private:
    std::size_t n_;
    double alpha_;
    double c_alpha_;
};

/// int_{S_n} |zeta^m|^2 d sigma = (n-1)! m! / (n-1+|m|)!.
inline double sphere_monomial_integral(const MultiIndex& m, std::size_t n) {
    if (m.size() != n) throw DimensionError("multi-index length must equal n");
    const double nd = static_cast<double>(n);
    const double d = static_cast<double>(degree(m));
    return std::exp(std::lgamma(nd) + log_factorial(m) - std::lgamma(nd + d));
}

/// int_{B_n} |z^m|^2 dv_alpha = m! Gamma(n+1+alpha) / Gamma(n+1+|m|+alpha).
inline double ball_monomial_norm(const MultiIndex& m, std::size_t n, double alpha) {
    if (m.size() != n) throw DimensionError("multi-index length must equal n");
    if (!(alpha > -1.0)) throw ParameterError("alpha must exceed -1");
    const double nd = static_cast<double>(n);
    const double d = static_cast<double>(degree(m));
    return std::exp(log_factorial(m) + std::lgamma(nd + 1.0 + alpha) -
                    std::lgamma(nd + 1.0 + d + alpha));
}

}  // namespace bergman
