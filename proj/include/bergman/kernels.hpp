#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "bergman/ball.hpp"
#include "bergman/error.hpp"
#include "bergman/gauss.hpp"
#include "bergman/growth.hpp"
#include "bergman/holo.hpp"
#include "bergman/measures.hpp"
#include "bergman/quadrature.hpp"

namespace bergman {

/// Exponents of the kernel machinery.
struct KernelParams {
    double a = 0.0;
    double b = 0.0;
    double alpha = 0.0;
    double t = 1.0;
    int beta = 1;
};

/// (1 - <z, w>)^(-s), principal branch.
inline Complex bergman_kernel(const CPoint& z, const CPoint& w, double s) {
    if (z.size() != w.size()) throw DimensionError("bergman_kernel: dimension mismatch");
    detail::require_interior(z, "z");
    if (w.norm_sq() > 1.0 + 1e-12) throw DomainError("bergman_kernel: |w| must not exceed 1");
    if (s == 0.0) return Complex(1.0);
    const Complex base = 1.0 - hermitian_inner(z, w);
    if (std::abs(base) == 0.0) throw DomainError("bergman_kernel: 1 - <z,w> vanishes");
    return std::pow(base, -s);
}

/// |f(z) - int f(w) (1 - <z,w>)^-(n+1+alpha) dv_alpha(w)| for each f of a
/// family, all on one node set.
inline std::vector<double> reproducing_residuals(const std::vector<HoloFunction>& family,
                                                 const CPoint& z, double alpha,
                                                 const QuadratureSpec& spec) {
    if (family.empty()) return {};
    const std::size_t n = z.size();
    for (const auto& f : family)
        if (f.dimension() != n) throw DimensionError("reproducing_residual: dimension mismatch");
    detail::require_interior(z, "z");
    const WeightedMeasure mu(n, alpha);
    const double s = static_cast<double>(n) + 1.0 + alpha;
    auto integrand = [&](const CPoint& w, std::span<double> out) {
        const Complex k = std::pow(1.0 - hermitian_inner(z, w), -s);
        for (std::size_t i = 0; i < family.size(); ++i) {
            const Complex v = family[i](w) * k;
            out[2 * i] = v.real();
            out[2 * i + 1] = v.imag();
        }
    };
    auto est = integrate_ball_multi(integrand, 2 * family.size(), mu, spec);
    std::vector<double> out(family.size());
    for (std::size_t i = 0; i < family.size(); ++i)
        out[i] = std::abs(family[i](z) - Complex(est[2 * i].value, est[2 * i + 1].value));
    return out;
}

inline double reproducing_residual(const HoloFunction& f, const CPoint& z, double alpha,
                                   const QuadratureSpec& spec) {
    return reproducing_residuals({f}, z, alpha, spec)[0];
}

namespace kernel_detail {

/// int_D (1-|y|^2)^beta |1 - x y|^e dA(y) with dA normalized, for
/// x = sqrt(1 - gap), gap = 0 included. Composite rules graded toward the
/// peak at y = 1, with the weight absorbed by a Gauss-Jacobi panel at the
/// boundary.
inline double disk_kernel_integral(double gap, double beta, double e, std::size_t order = 6) {
    if (!(beta > -1.0)) throw DomainError("disk kernel integral needs beta > -1");
    if (!(gap >= 0.0)) throw DomainError("disk kernel integral needs |z| <= 1");
    if (e == 0.0 || gap >= 1.0) return 1.0 / (beta + 1.0);
    const double x = std::sqrt(1.0 - gap);

    // Radial variable s = 1 - |y|^2.
    const double depth = gap > 0.0 ? std::min(48.0, std::ceil(std::log2(1.0 / gap))) : 48.0;
    const int ks = std::max(2, static_cast<int>(depth) + 4);
    std::vector<double> s_nodes;
    std::vector<double> s_weights;
    for (int k = 0; k < ks; ++k) {
        Rule1D r = legendre_interval(order, std::ldexp(1.0, -k - 1), std::ldexp(1.0, -k));
        for (std::size_t i = 0; i < r.size(); ++i) {
            s_nodes.push_back(r.nodes[i]);
            s_weights.push_back(r.weights[i] * std::pow(r.nodes[i], beta));
        }
    }
    {
        const double h = std::ldexp(1.0, -ks);
        Rule1D r = jacobi_unit(order, 0.0, beta);
        const double scale = std::pow(h, beta + 1.0);
        for (std::size_t i = 0; i < r.size(); ++i) {
            s_nodes.push_back(h * r.nodes[i]);
            s_weights.push_back(r.weights[i] * scale);
        }
    }

    // Angle on [0, pi], graded toward 0.
    const int kt = std::max(2, static_cast<int>(depth) + 6);
    std::vector<double> sin2;
    std::vector<double> t_weights;
    for (int k = 0; k <= kt; ++k) {
        const double hi = std::numbers::pi * std::ldexp(1.0, -k);
        const double lo = (k == kt) ? 0.0 : 0.5 * hi;
        Rule1D r = legendre_interval(order, lo, hi);
        for (std::size_t i = 0; i < r.size(); ++i) {
            const double sh = std::sin(0.5 * r.nodes[i]);
            sin2.push_back(sh * sh);
            t_weights.push_back(r.weights[i]);
        }
    }

    std::vector<double> rows(s_nodes.size());
    for (std::size_t i = 0; i < s_nodes.size(); ++i) {
        const double s = s_nodes[i];
        const double rho = std::sqrt(1.0 - s);
        const double xr = x * rho;
        const double d = (gap + s - gap * s) / (1.0 + xr);  // 1 - x rho
        std::vector<double> vals(sin2.size());
        for (std::size_t j = 0; j < sin2.size(); ++j)
            vals[j] = t_weights[j] * std::pow(d * d + 4.0 * xr * sin2[j], 0.5 * e);
        rows[i] = s_weights[i] * pairwise_sum(vals);
    }
    return pairwise_sum(rows) / std::numbers::pi;
}

/// int_{B_n} (1-|y|^2)^beta |1 - <y, z>|^e dv(y) with 1 - |z|^2 = gap, via the
/// law of y_1.
inline double ball_kernel_integral(std::size_t n, double gap, double beta, double e,
                                   std::size_t order = 6) {
    const double nd = static_cast<double>(n);
    return (nd + beta) / normalizing_constant(n, beta) *
           disk_kernel_integral(gap, nd - 1.0 + beta, e, order);
}

}  // namespace kernel_detail

/// (1-|z|^2)^t int dv_alpha(w) / |1 - <z,w>|^(n+1+alpha+t), computed after the
/// substitution w = phi_z(y), which turns it into
/// int |1 - <y,z>|^(t-(n+1+alpha)) dv_alpha(y).
inline double forelli_rudin_ratio(const CPoint& z, double alpha, double t,
                                  const QuadratureSpec& spec) {
    if (!(t > 0.0)) throw ParameterError("forelli_rudin_ratio: t must be positive");
    detail::require_interior(z, "z");
    const std::size_t n = z.size();
    const double nd = static_cast<double>(n);
    const double e = t - (nd + 1.0 + alpha);
    const WeightedMeasure mu(n, alpha);
    if (spec.method == Method::ProductRule) {
        return (nd + alpha) *
               kernel_detail::disk_kernel_integral(1.0 - z.norm_sq(), nd - 1.0 + alpha, e);
    }
    auto g = [&](const CPoint& y) { return std::pow(std::abs(1.0 - hermitian_inner(y, z)), e); };
    return integrate_ball(g, mu, spec).value;
}

/// T_{a,b} g(z) = (1-|z|^2)^a int (1-|w|^2)^b |1-<z,w>|^-(n+1+a+b) g(w) dv(w),
/// evaluated as int (1-|y|^2)^b |1-<y,z>|^(a-b-n-1) g(phi_z(y)) dv(y).
template <class G>
IntegralEstimate apply_T(double a, double b, G&& g, const CPoint& z, const QuadratureSpec& spec) {
    if (!(b > -1.0)) throw ParameterError("apply_T: b must exceed -1");
    detail::require_interior(z, "z");
    const std::size_t n = z.size();
    const double e = a - b - static_cast<double>(n) - 1.0;
    const WeightedMeasure mu(n, b);
    auto integrand = [&](const CPoint& y) {
        const double k = std::pow(std::abs(1.0 - hermitian_inner(y, z)), e);
        return k * g(involution_apply(z, y));
    };
    IntegralEstimate est = integrate_ball(integrand, mu, spec);
    est.value /= mu.c_alpha();
    est.std_error /= mu.c_alpha();
    return est;
}

enum class ProbeVerdict { BoundedConsistent, GrowthDetected, Inconclusive };

inline const char* to_string(ProbeVerdict v) {
    switch (v) {
        case ProbeVerdict::BoundedConsistent: return "bounded-consistent";
        case ProbeVerdict::GrowthDetected: return "growth-detected";
        case ProbeVerdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

/// One witness g_c(w) = (1-|w|^2)^-c of the probe.
struct ProbeWitness {
    double c = 0.0;
    double epsilon = 0.0;  // 1 - c p / (alpha+1)
    double ratio = 0.0;    // ||T g_c||_p / ||g_c||_p
    bool inner_divergent = false;  // T g_c is identically infinite
    bool outer_divergent = false;  // T g_c is finite but not in L^p
    bool inconclusive = false;
};

struct ProbeOptions {
    std::size_t dimension = 1;
    std::size_t witnesses = 12;
    std::size_t order = 5;
    int last_cutoff = 16;    // g = 1 profile: cutoffs 2^-3 .. 2^-last_cutoff
    int radial_floor = 24;   // outer panels reach 1-|z|^2 = 2^-radial_floor
    GrowthThresholds thresholds{};
};

struct ProbeResult {
    double a = 0.0;
    double b = 0.0;
    double p = 1.0;
    double alpha = 0.0;
    bool predicted_bounded = false;
    ProbeVerdict verdict = ProbeVerdict::Inconclusive;
    double max_ratio = 0.0;  // largest witness ratio; inf when some T g is not in L^p
    TruncationProfile constant_profile;  // ||T 1||_p^p over |z|^2 < 1 - eps
    std::vector<ProbeWitness> witnesses;
    GrowthFit ratio_fit;
    bool ratio_fit_valid = false;

    bool matches() const {
        return (predicted_bounded && verdict == ProbeVerdict::BoundedConsistent) ||
               (!predicted_bounded && verdict == ProbeVerdict::GrowthDetected);
    }
};

/// -pa < alpha+1 < p(b+1).
inline bool operator_bounded_prediction(double a, double b, double p, double alpha) {
    return -p * a < alpha + 1.0 && alpha + 1.0 < p * (b + 1.0);
}

namespace kernel_detail {

/// Panels [2^-(k+1), 2^-k] in s = 1 - |z|^2 for k < levels, each carrying the
/// radial density n (1-s)^(n-1) s^power of dv.
inline Rule1D radial_panels(std::size_t n, double power, int levels, std::size_t order) {
    const double nd = static_cast<double>(n);
    Rule1D out;
    for (int k = 0; k < levels; ++k) {
        Rule1D r = legendre_interval(order, std::ldexp(1.0, -k - 1), std::ldexp(1.0, -k));
        for (std::size_t i = 0; i < r.size(); ++i) {
            const double s = r.nodes[i];
            out.nodes.push_back(s);
            out.weights.push_back(r.weights[i] * nd * std::pow(1.0 - s, nd - 1.0) * std::pow(s, power));
        }
    }
    return out;
}

/// Running sums of weights[i] * values[i] at the end of each panel.
inline std::vector<double> panel_sums(const Rule1D& rule, const std::vector<double>& values,
                                      std::size_t order) {
    std::vector<double> out;
    double total = 0.0;
    for (std::size_t k = 0; k * order < rule.size(); ++k) {
        std::vector<double> v(order);
        for (std::size_t i = 0; i < order; ++i) v[i] = rule.weights[k * order + i] * values[k * order + i];
        total += pairwise_sum(v);
        out.push_back(total);
    }
    return out;
}

/// int_0^1 n (1-s)^(n-1) s^power ds.
inline double radial_mass(std::size_t n, double power) {
    const double nd = static_cast<double>(n);
    return std::exp(std::lgamma(nd + 1.0) + std::lgamma(power + 1.0) - std::lgamma(nd + power + 1.0));
}

}  // namespace kernel_detail

/// Empirical boundedness probe for T_{a,b} on L^p(dv_alpha), on the witnesses
/// g_c with c = c*(1 - 2^-j), c* = (alpha+1)/p. Growth is any of: the
/// truncated norms of T 1 diverge; T g_c is infinite or outside L^p for some
/// g_c in L^p; the ratios ||T g_c|| / ||g_c|| grow along the witnesses.
///
/// When a + c > 0, s^c T g_c(z) = P(s) with s = 1-|z|^2 is the pulled-back
/// integral, bounded up to s = 0, and the ratio is the mean of P^p under
/// the probability density proportional to (1-s)^(n-1) s^(alpha-cp). The
/// mean is taken as P(0)^p plus the integral of P^p - P(0)^p, so no
/// truncation of the witness mass is needed.
inline ProbeResult operator_bound_probe(double a, double b, double p, double alpha,
                                        const ProbeOptions& opt = {}) {
    if (!(p >= 1.0)) throw ParameterError("operator_bound_probe: p must be at least 1");
    if (!(b > -1.0)) throw ParameterError("operator_bound_probe: b must exceed -1");
    normalizing_constant(opt.dimension, alpha);
    const std::size_t n = opt.dimension;
    const double nd = static_cast<double>(n);
    const std::size_t order = opt.order;
    ProbeResult res;
    res.a = a;
    res.b = b;
    res.p = p;
    res.alpha = alpha;
    res.predicted_bounded = operator_bounded_prediction(a, b, p, alpha);

    // T g_c in the form (1-|z|^2)^a int (1-|w|^2)^(b-c) |1-<z,w>|^-(n+1+a+b) dv(w).
    auto direct = [&](double c, double s) {
        return std::pow(s, a) * kernel_detail::ball_kernel_integral(n, s, b - c, -(nd + 1.0 + a + b), order);
    };
    auto truncated_profile = [&](double c) {
        const Rule1D rule = kernel_detail::radial_panels(n, alpha - c * p, opt.last_cutoff, order);
        std::vector<double> vals(rule.size());
        for (std::size_t i = 0; i < rule.size(); ++i) vals[i] = std::pow(direct(c, rule.nodes[i]) * std::pow(rule.nodes[i], c), p);
        auto sums = kernel_detail::panel_sums(rule, vals, order);
        TruncationProfile prof;
        prof.eps = dyadic_cutoffs(3, opt.last_cutoff);
        prof.values.assign(sums.begin() + 2, sums.end());
        prof.fit = classify_growth(prof.eps, prof.values, opt.thresholds);
        return prof;
    };

    res.constant_profile = truncated_profile(0.0);

    const double c_star = (alpha + 1.0) / p;
    bool any_divergent = false;
    bool any_inconclusive = false;
    std::vector<double> eps;
    std::vector<double> ratios;
    for (std::size_t j = 1; j <= opt.witnesses; ++j) {
        ProbeWitness w;
        w.epsilon = std::ldexp(1.0, -static_cast<int>(j));
        w.c = c_star * (1.0 - w.epsilon);
        const double beta = b - w.c;
        const double power = alpha - w.c * p;
        const double mass = kernel_detail::radial_mass(n, power);
        w.ratio = std::numeric_limits<double>::infinity();
        if (!(beta > -1.0)) {
            // T g_c contains int (1-|w|^2)^beta dv: check that it diverges.
            const Rule1D rule = kernel_detail::radial_panels(n, beta, opt.last_cutoff, order);
            auto sums = kernel_detail::panel_sums(rule, std::vector<double>(rule.size(), 1.0), order);
            std::vector<double> tail(sums.begin() + 2, sums.end());
            const GrowthFit fit =
                classify_growth(dyadic_cutoffs(3, opt.last_cutoff), tail, opt.thresholds);
            (is_divergent(fit.kind) ? w.inner_divergent : w.inconclusive) = true;
        } else if (a + w.c > 0.0) {
            const double e = a - b + 2.0 * w.c - nd - 1.0;
            const double p0 = std::pow(kernel_detail::ball_kernel_integral(n, 0.0, beta, e, order), p);
            const Rule1D rule = kernel_detail::radial_panels(n, power, opt.radial_floor, order);
            std::vector<double> vals(rule.size());
            for (std::size_t i = 0; i < rule.size(); ++i)
                vals[i] = std::pow(kernel_detail::ball_kernel_integral(n, rule.nodes[i], beta, e, order), p) - p0;
            const double rest = kernel_detail::panel_sums(rule, vals, order).back();
            w.ratio = std::pow(p0 + rest / mass, 1.0 / p);
        } else {
            const TruncationProfile prof = truncated_profile(w.c);
            if (prof.divergent()) {
                w.outer_divergent = true;
            } else if (prof.fit.kind == Growth::Convergent) {
                w.ratio = std::pow(prof.values.back() / mass, 1.0 / p);
            } else {
                w.inconclusive = true;
            }
        }
        any_divergent = any_divergent || w.inner_divergent || w.outer_divergent;
        any_inconclusive = any_inconclusive || w.inconclusive;
        if (std::isfinite(w.ratio)) {
            eps.push_back(w.epsilon);
            ratios.push_back(w.ratio);
            res.max_ratio = std::max(res.max_ratio, w.ratio);
        }
        res.witnesses.push_back(w);
    }
    if (any_divergent || res.constant_profile.divergent()) res.max_ratio = std::numeric_limits<double>::infinity();
    if (eps.size() >= opt.thresholds.tail + 2) {
        res.ratio_fit = classify_growth(eps, ratios, opt.thresholds);
        res.ratio_fit_valid = true;
    }

    const bool growth = res.constant_profile.divergent() || any_divergent ||
                        (res.ratio_fit_valid && is_divergent(res.ratio_fit.kind));
    const bool unclear = any_inconclusive || !res.ratio_fit_valid ||
                         res.ratio_fit.kind == Growth::Inconclusive ||
                         res.constant_profile.fit.kind == Growth::Inconclusive;
    if (growth) {
        res.verdict = ProbeVerdict::GrowthDetected;
    } else if (unclear) {
        res.verdict = ProbeVerdict::Inconclusive;
    } else {
        res.verdict = ProbeVerdict::BoundedConsistent;
    }
    return res;
}

/// Value of H(z, w) and |H| |1 - <z,w>|^(n+beta).
struct HKernelValue {
    Complex value;
    double bound_ratio = 0.0;
    double error = 0.0;
    std::size_t evaluations = 0;
};

/// H(z,w) = (p/q) int_0^1 [1 - (1-tx)^N] / (1-tx)^N dt/t with x = <z,w> and
/// N = n+1+beta. On (0, 1/2] the integral runs in u = -ln t, on [1/2, 1] in
/// tau = 1 - t.
inline HKernelValue H_kernel(const CPoint& z, const CPoint& w, int beta, double p, double q,
                             double rel_tol = 1e-11) {
    if (z.size() != w.size()) throw DimensionError("H_kernel: dimension mismatch");
    if (beta < 1) throw ParameterError("H_kernel: beta must be a positive integer");
    if (!(p > 0.0 && q > 0.0)) throw ParameterError("H_kernel: p and q must be positive");
    detail::require_interior(z, "z");
    detail::require_interior(w, "w");
    const std::size_t n = z.size();
    const int big_n = static_cast<int>(n) + 1 + beta;
    const Complex x = hermitian_inner(z, w);
    HKernelValue out;
    if (x == Complex(0.0)) return out;

    // [(1-tx)^-N - 1] / t = x sum_{j=1}^N (1-tx)^-j, given 1 - tx.
    auto sum_powers = [&](Complex base) {
        const Complex r = 1.0 / base;
        Complex pw = r;
        Complex s = 0.0;
        for (int j = 1; j <= big_n; ++j) {
            s += pw;
            pw *= r;
        }
        return x * s;
    };
    const Complex one_minus_x = 1.0 - x;
    // t = 1 - tau on [1/2, 1], so that 1 - tx = (1 - x) + tau x near t = 1.
    auto in_tau = [&](double tau) { return sum_powers(one_minus_x + tau * x); };
    auto in_u = [&](double u) {
        const double t = std::exp(-u);
        return t * sum_powers(1.0 - t * x);
    };
    const double gap = std::abs(one_minus_x);
    const double scale = std::abs(x) * (1.0 + std::pow(gap, -(big_n - 1)));
    const double tol = rel_tol * scale;
    const double u_max = 40.0;
    for (int depth : {40, 60}) {
        auto head = integrate_adaptive<Complex>(in_tau, 0.0, 0.5, 0.5 * tol, depth);
        auto tail = integrate_adaptive<Complex>(in_u, std::log(2.0), u_max, 0.5 * tol, depth);
        out.value = (p / q) * (head.value + tail.value);
        out.error = (p / q) * (head.error + tail.error);
        out.evaluations += head.evaluations + tail.evaluations;
        if (head.converged && tail.converged) {
            out.bound_ratio = std::abs(out.value) * std::pow(gap, big_n - 1);
            return out;
        }
    }
    throw NumericError("H_kernel: t-integral did not converge near t = 1");
}

}  // namespace bergman
