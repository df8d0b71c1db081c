#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include <boost/math/special_functions/beta.hpp>

#include "bergman/ball.hpp"
#include "bergman/error.hpp"
#include "bergman/gauss.hpp"
#include "bergman/measures.hpp"
#include "bergman/rng.hpp"

namespace bergman {

enum class Method { ProductRule, MonteCarlo, StratifiedMC };

inline const char* to_string(Method m) {
    switch (m) {
        case Method::ProductRule: return "product-rule";
        case Method::MonteCarlo: return "monte-carlo";
        case Method::StratifiedMC: return "stratified-mc";
    }
    return "?";
}

inline Method method_from_string(const std::string& s) {
    if (s == "product-rule") return Method::ProductRule;
    if (s == "monte-carlo") return Method::MonteCarlo;
    if (s == "stratified-mc") return Method::StratifiedMC;
    throw ParameterError("unknown quadrature method '" + s + "'");
}

/// Integration region inside the ball.
struct Region {
    enum class Kind { FullBall, EuclideanBall, PseudoBall, Annulus };

    Kind kind = Kind::FullBall;
    double radius = 1.0;  // EuclideanBall / Annulus outer radius
    double inner = 0.0;   // Annulus inner radius
    CPoint center;        // PseudoBall
    double rho = 0.5;     // PseudoBall

    static Region full() { return {}; }
    static Region euclidean_ball(double r) {
        Region g;
        g.kind = Kind::EuclideanBall;
        g.radius = r;
        return g;
    }
    static Region annulus(double eps, double r) {
        Region g;
        g.kind = Kind::Annulus;
        g.inner = eps;
        g.radius = r;
        return g;
    }
    static Region pseudo_ball(CPoint center, double rho) {
        Region g;
        g.kind = Kind::PseudoBall;
        g.center = std::move(center);
        g.rho = rho;
        return g;
    }

    std::string describe() const {
        switch (kind) {
            case Kind::FullBall: return "full-ball";
            case Kind::EuclideanBall: return "euclidean-ball(" + std::to_string(radius) + ")";
            case Kind::Annulus:
                return "annulus(" + std::to_string(inner) + "," + std::to_string(radius) + ")";
            case Kind::PseudoBall: return "pseudo-ball(rho=" + std::to_string(rho) + ")";
        }
        return "?";
    }
};

/// Method choice, sample budgets and rule orders for integrals over B_n.
///
/// The product rule factors the measure as (radius) x (torus of phases) x
/// (simplex of squared moduli): z_k = sqrt(u t_k) e^{i theta_k}, with a
/// Gauss-Jacobi rule in u = |z|^2 absorbing u^{n-1} (1-u)^alpha, a
/// trapezoidal rule with `angular_order` points per phase, and collapsed
/// Gauss-Jacobi rules with `simplex_order` points per simplex coordinate.
/// An order of 0 picks a dimension-dependent default.
struct QuadratureSpec {
    Method method = Method::ProductRule;
    std::size_t radial_order = 24;
    std::size_t angular_order = 0;
    std::size_t simplex_order = 0;
    std::size_t sphere_samples = 20000;
    std::size_t mc_samples = 100000;
    std::size_t strata = 16;
    std::uint64_t seed = 20060130;
    bool antithetic = true;
    int max_retries = 8;
    Region region;

    void validate(std::size_t n) const {
        if (radial_order == 0) throw ParameterError("radial order must be positive");
        if (sphere_samples == 0 || mc_samples == 0 || strata == 0)
            throw ParameterError("sample counts must be positive");
        if (method == Method::StratifiedMC && mc_samples < 2 * strata)
            throw ParameterError("stratified MC needs at least two samples per stratum");
        switch (region.kind) {
            case Region::Kind::FullBall: break;
            case Region::Kind::EuclideanBall:
                if (!(region.radius > 0.0 && region.radius <= 1.0))
                    throw ParameterError("euclidean-ball radius must lie in (0,1]");
                break;
            case Region::Kind::Annulus:
                if (!(region.inner >= 0.0 && region.inner < region.radius && region.radius <= 1.0))
                    throw ParameterError("annulus needs 0 <= eps < r <= 1");
                break;
            case Region::Kind::PseudoBall:
                if (!(region.rho > 0.0 && region.rho < 1.0))
                    throw ParameterError("pseudo-ball radius must lie in (0,1)");
                if (region.center.size() != n)
                    throw DimensionError("pseudo-ball centre has the wrong dimension");
                if (!(region.center.norm_sq() < 1.0))
                    throw DomainError("pseudo-ball centre must lie in the open ball");
                break;
        }
    }

    std::size_t angular_points(std::size_t n) const {
        if (angular_order) return angular_order;
        static constexpr std::size_t table[] = {64, 64, 24, 10, 6};
        return n < 5 ? table[n] : 4;
    }
    std::size_t simplex_points(std::size_t n) const {
        if (simplex_order) return simplex_order;
        static constexpr std::size_t table[] = {8, 8, 8, 6, 4};
        return n < 5 ? table[n] : 3;
    }

    QuadratureSpec with_region(Region r) const {
        QuadratureSpec s = *this;
        s.region = std::move(r);
        return s;
    }
    QuadratureSpec with_method(Method m) const {
        QuadratureSpec s = *this;
        s.method = m;
        return s;
    }
    QuadratureSpec with_seed(std::uint64_t sd) const {
        QuadratureSpec s = *this;
        s.seed = sd;
        return s;
    }
};

/// Result of one integral. `diverged` means `value` is only a lower bound
/// taken from the last truncated region.
struct IntegralEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::size_t samples_used = 0;
    bool diverged = false;
    std::size_t singular_events = 0;
};

/// Quadrature nodes with weights: the integral of g is sum_i weights[i] g(points[i]).
/// Nodes are grouped into independent units (a single sample, or an
/// antithetic pair) and units into strata, which is all the variance
/// estimate needs. A zero weight marks a rejected hit-or-miss sample; the
/// integrand is not evaluated there.
struct SampleSet {
    std::size_t n = 0;
    bool deterministic = true;
    std::vector<CPoint> points;
    std::vector<double> weights;
    std::vector<std::size_t> unit_begin;  // size units+1
    std::vector<std::uint32_t> unit_stratum;
    std::size_t strata = 1;
    /// Draw a replacement for sample `index` (same stratum, same weight law).
    std::function<std::pair<CPoint, double>(std::size_t index, int attempt)> replace;

    std::size_t size() const noexcept { return points.size(); }
};

namespace detail {

/// Law of u = |z|^2 under dv_alpha is Beta(n, alpha + 1).
inline double radial_cdf(std::size_t n, double alpha, double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    if (alpha == 0.0) return std::pow(u, static_cast<double>(n));
    return boost::math::ibeta(static_cast<double>(n), alpha + 1.0, u);
}

inline double radial_quantile(std::size_t n, double alpha, double p) {
    if (alpha == 0.0) return std::pow(p, 1.0 / static_cast<double>(n));
    return boost::math::ibeta_inv(static_cast<double>(n), alpha + 1.0, p);
}

/// Rule in u on [lo, hi]: sum W_i h(u_i) ~ c_alpha n int u^{n-1} (1-u)^alpha h(u) du.
inline Rule1D radial_rule(std::size_t n, double alpha, double c_alpha, double lo, double hi,
                          std::size_t order) {
    const double nd = static_cast<double>(n);
    const double a = (hi >= 1.0) ? alpha : 0.0;
    const double b = (lo <= 0.0) ? nd - 1.0 : 0.0;
    Rule1D t = jacobi_unit(order, a, b);
    Rule1D r;
    r.nodes.resize(t.size());
    r.weights.resize(t.size());
    const double width = hi - lo;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double u = lo + width * t.nodes[i];
        const double fu = (b != 0.0) ? std::pow(width, nd - 1.0) : std::pow(u, nd - 1.0);
        const double f1 = (a != 0.0) ? std::pow(1.0 - lo, alpha) : std::pow(1.0 - u, alpha);
        r.nodes[i] = u;
        r.weights[i] = c_alpha * nd * width * t.weights[i] * fu * f1;
    }
    return r;
}

/// Product rule for the normalized surface measure on S_n.
struct SphereRule {
    std::vector<CPoint> points;
    std::vector<double> weights;
};

inline SphereRule sphere_product_rule(std::size_t n, std::size_t angular, std::size_t simplex) {
    // Squared moduli t in the simplex (Dirichlet(1,...,1)) by stick breaking.
    std::vector<std::vector<double>> moduli{{}};
    std::vector<double> mod_w{1.0};
    std::vector<double> remaining{1.0};
    for (std::size_t j = 1; j < n; ++j) {
        const double k = static_cast<double>(n - j);  // s_j ~ Beta(1, k)
        Rule1D s = jacobi_unit(simplex, k - 1.0, 0.0);
        double total = 0.0;
        for (double w : s.weights) total += w;
        std::vector<std::vector<double>> next;
        std::vector<double> next_w, next_rem;
        for (std::size_t p = 0; p < moduli.size(); ++p) {
            for (std::size_t i = 0; i < s.size(); ++i) {
                auto t = moduli[p];
                t.push_back(remaining[p] * s.nodes[i]);
                next.push_back(std::move(t));
                next_w.push_back(mod_w[p] * s.weights[i] / total);
                next_rem.push_back(remaining[p] * (1.0 - s.nodes[i]));
            }
        }
        moduli = std::move(next);
        mod_w = std::move(next_w);
        remaining = std::move(next_rem);
    }
    for (std::size_t p = 0; p < moduli.size(); ++p) moduli[p].push_back(remaining[p]);

    std::size_t torus = 1;
    for (std::size_t k = 0; k < n; ++k) torus *= angular;
    SphereRule rule;
    rule.points.reserve(moduli.size() * torus);
    rule.weights.reserve(moduli.size() * torus);
    const double dtheta = 2.0 * std::numbers::pi / static_cast<double>(angular);
    for (std::size_t p = 0; p < moduli.size(); ++p) {
        for (std::size_t idx = 0; idx < torus; ++idx) {
            CPoint z(n);
            std::size_t rem = idx;
            for (std::size_t k = 0; k < n; ++k) {
                const double theta = dtheta * (static_cast<double>(rem % angular) + 0.5);
                rem /= angular;
                z[k] = std::polar(std::sqrt(moduli[p][k]), theta);
            }
            rule.points.push_back(z);
            rule.weights.push_back(mod_w[p] / static_cast<double>(torus));
        }
    }
    return rule;
}

inline void push_unit(SampleSet& set, std::uint32_t stratum) {
    set.unit_stratum.push_back(stratum);
    set.unit_begin.push_back(set.points.size());
}

inline SampleSet product_rule_set(const WeightedMeasure& mu, const QuadratureSpec& spec) {
    const std::size_t n = mu.dimension();
    SampleSet set;
    set.n = n;
    set.deterministic = true;
    set.unit_begin.push_back(0);
    const SphereRule sphere = sphere_product_rule(n, spec.angular_points(n), spec.simplex_points(n));

    if (spec.region.kind == Region::Kind::PseudoBall) {
        // w = phi_a(rho y): Jacobian ((1-|a|^2)/|1-<w',a>|^2)^{n+1} rho^{2n}.
        const CPoint& a = spec.region.center;
        const double rho = spec.region.rho;
        const double nd = static_cast<double>(n);
        const Rule1D radial = radial_rule(n, 0.0, 1.0, 0.0, 1.0, spec.radial_order);
        const double scale = std::pow(rho, 2.0 * nd);
        const double a2 = a.norm_sq();
        for (std::size_t i = 0; i < radial.size(); ++i) {
            const double r = std::sqrt(radial.nodes[i]);
            for (std::size_t j = 0; j < sphere.points.size(); ++j) {
                const CPoint wp = (rho * r) * sphere.points[j];
                const CPoint w = involution_apply(a, wp);
                const double jac = std::pow((1.0 - a2) / std::norm(1.0 - hermitian_inner(wp, a)),
                                            nd + 1.0);
                const double one_minus = one_minus_sq_identity(a, wp);
                set.points.push_back(w);
                set.weights.push_back(radial.weights[i] * sphere.weights[j] * scale * jac *
                                      mu.c_alpha() * std::pow(one_minus, mu.alpha()));
                push_unit(set, 0);
            }
        }
        return set;
    }

    double lo = 0.0, hi = 1.0;
    if (spec.region.kind == Region::Kind::EuclideanBall) hi = spec.region.radius * spec.region.radius;
    if (spec.region.kind == Region::Kind::Annulus) {
        lo = spec.region.inner * spec.region.inner;
        hi = spec.region.radius * spec.region.radius;
    }
    const Rule1D radial = radial_rule(n, mu.alpha(), mu.c_alpha(), lo, hi, spec.radial_order);
    set.points.reserve(radial.size() * sphere.points.size());
    for (std::size_t i = 0; i < radial.size(); ++i) {
        const double r = std::sqrt(radial.nodes[i]);
        for (std::size_t j = 0; j < sphere.points.size(); ++j) {
            set.points.push_back(r * sphere.points[j]);
            set.weights.push_back(radial.weights[i] * sphere.weights[j]);
            push_unit(set, 0);
        }
    }
    return set;
}

/// Plain or radially stratified MC for full-ball / euclidean-ball / annulus.
inline SampleSet radial_mc_set(const WeightedMeasure& mu, const QuadratureSpec& spec) {
    const std::size_t n = mu.dimension();
    const double alpha = mu.alpha();
    double lo = 0.0, hi = 1.0;
    if (spec.region.kind == Region::Kind::EuclideanBall) hi = spec.region.radius * spec.region.radius;
    if (spec.region.kind == Region::Kind::Annulus) {
        lo = spec.region.inner * spec.region.inner;
        hi = spec.region.radius * spec.region.radius;
    }
    const double f_lo = radial_cdf(n, alpha, lo);
    const double f_hi = radial_cdf(n, alpha, hi);
    const double mass = f_hi - f_lo;
    const std::size_t strata = spec.method == Method::StratifiedMC ? spec.strata : 1;
    const std::size_t per = spec.mc_samples / strata;
    const std::size_t pair = spec.antithetic ? 2 : 1;
    const std::size_t units = std::max<std::size_t>(1, per / pair);
    const double w = mass / static_cast<double>(strata) / static_cast<double>(units * pair);

    auto draw = [=](Stream& rng, std::size_t s) {
        const double p0 = f_lo + mass * static_cast<double>(s) / static_cast<double>(strata);
        const double p = p0 + mass / static_cast<double>(strata) * rng.uniform();
        const double u = std::clamp(radial_quantile(n, alpha, p), lo, hi);
        const CPoint zeta = rng.sphere_point(n);
        return std::make_pair(std::sqrt(u), zeta);
    };

    SampleSet set;
    set.n = n;
    set.deterministic = false;
    set.strata = strata;
    set.unit_begin.push_back(0);
    set.points.reserve(strata * units * pair);
    for (std::size_t s = 0; s < strata; ++s) {
        Stream rng(derive_seed(spec.seed, {s}));
        for (std::size_t u = 0; u < units; ++u) {
            auto [r, zeta] = draw(rng, s);
            set.points.push_back(r * zeta);
            set.weights.push_back(w);
            if (pair == 2) {
                set.points.push_back(-r * zeta);
                set.weights.push_back(w);
            }
            push_unit(set, static_cast<std::uint32_t>(s));
        }
    }
    const std::uint64_t seed = spec.seed;
    const std::size_t unit_size = pair;
    std::vector<std::uint32_t> strata_of_unit = set.unit_stratum;
    set.replace = [=](std::size_t index, int attempt) {
        const std::size_t s = strata_of_unit[index / unit_size];
        Stream rng(derive_seed(seed, {s, index, static_cast<std::uint64_t>(attempt), 0x52ULL}));
        auto [r, zeta] = draw(rng, s);
        return std::make_pair(r * zeta, w);
    };
    return set;
}

/// Hit-or-miss MC for a pseudo-ball: uniform samples in a Euclidean ball
/// containing D(a, rho), stratified by radius inside that ball.
inline SampleSet pseudo_ball_mc_set(const WeightedMeasure& mu, const QuadratureSpec& spec) {
    const std::size_t n = mu.dimension();
    const PseudoHyperbolicBall ball(spec.region.center, spec.region.rho);
    const PseudoBallGeometry geo = ball.geometry();
    const double radius = geo.bounding_radius() * (1.0 + 1e-12);
    const double nd = static_cast<double>(n);
    const double volume = std::pow(radius, 2.0 * nd);
    const std::size_t strata = spec.method == Method::StratifiedMC ? spec.strata : 1;
    const std::size_t per = std::max<std::size_t>(1, spec.mc_samples / strata);
    const double base_w = volume / static_cast<double>(strata) / static_cast<double>(per);

    auto draw = [=](Stream& rng, std::size_t s) {
        const double v = (static_cast<double>(s) + rng.uniform()) / static_cast<double>(strata);
        const double r = radius * std::pow(v, 1.0 / (2.0 * nd));
        const CPoint w = geo.euclidean_center + r * rng.sphere_point(n);
        double weight = 0.0;
        if (w.norm_sq() < 1.0 && ball.contains(w)) weight = base_w * mu.density(w.norm_sq());
        return std::make_pair(w, weight);
    };

    SampleSet set;
    set.n = n;
    set.deterministic = false;
    set.strata = strata;
    set.unit_begin.push_back(0);
    for (std::size_t s = 0; s < strata; ++s) {
        Stream rng(derive_seed(spec.seed, {s}));
        for (std::size_t i = 0; i < per; ++i) {
            auto [w, weight] = draw(rng, s);
            set.points.push_back(weight > 0.0 ? w : CPoint::zero(n));
            set.weights.push_back(weight);
            push_unit(set, static_cast<std::uint32_t>(s));
        }
    }
    const std::uint64_t seed = spec.seed;
    std::vector<std::uint32_t> strata_of_unit = set.unit_stratum;
    set.replace = [=](std::size_t index, int attempt) {
        const std::size_t s = strata_of_unit[index];
        for (int k = 0;; ++k) {
            Stream rng(derive_seed(seed, {s, index, static_cast<std::uint64_t>(attempt),
                                          static_cast<std::uint64_t>(k), 0x50ULL}));
            auto drawn = draw(rng, s);
            if (drawn.second > 0.0 || k > 1000) return drawn;
        }
    };
    return set;
}

}  // namespace detail

/// Build the node set for (measure, spec). Deterministic in (spec, seed).
inline SampleSet make_sample_set(const WeightedMeasure& mu, const QuadratureSpec& spec) {
    spec.validate(mu.dimension());
    if (spec.method == Method::ProductRule) return detail::product_rule_set(mu, spec);
    if (spec.region.kind == Region::Kind::PseudoBall) return detail::pseudo_ball_mc_set(mu, spec);
    return detail::radial_mc_set(mu, spec);
}

/// Combine per-node integrand values into an estimate with a standard error.
inline IntegralEstimate estimate_from_values(const SampleSet& set, std::span<const double> values) {
    const std::size_t units = set.unit_stratum.size();
    std::vector<double> unit_sum(units);
    for (std::size_t u = 0; u < units; ++u) {
        double s = 0.0;
        for (std::size_t i = set.unit_begin[u]; i < set.unit_begin[u + 1]; ++i)
            s += set.weights[i] * values[i];
        unit_sum[u] = s;
    }
    IntegralEstimate est;
    est.value = pairwise_sum(unit_sum);
    est.samples_used = set.size();
    if (set.deterministic) return est;

    // Units of a stratum are contiguous.
    double var = 0.0;
    std::size_t u = 0;
    while (u < units) {
        std::size_t v = u;
        while (v < units && set.unit_stratum[v] == set.unit_stratum[u]) ++v;
        const std::size_t count = v - u;
        if (count > 1) {
            std::span<const double> block(unit_sum.data() + u, count);
            const double mean = pairwise_sum(block) / static_cast<double>(count);
            std::vector<double> sq(count);
            for (std::size_t k = 0; k < count; ++k) sq[k] = (block[k] - mean) * (block[k] - mean);
            var += static_cast<double>(count) / static_cast<double>(count - 1) * pairwise_sum(sq);
        }
        u = v;
    }
    est.std_error = std::sqrt(var);
    return est;
}

namespace detail {

inline CPoint jitter(const CPoint& z) {
    CPoint out = z;
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += Complex(1e-12, 0.7e-12);
    const double r2 = out.norm_sq();
    if (!(r2 < 1.0)) out *= (1.0 - 1e-12) / std::sqrt(r2);
    return out;
}

template <class F>
bool eval_all_finite(F& g, const CPoint& z, std::span<double> out) {
    g(z, out);
    for (double v : out)
        if (!std::isfinite(v)) return false;
    return true;
}

}  // namespace detail

/// Evaluate a vector-valued integrand g(z, out) with `components` outputs on
/// one shared node set. Non-finite values trigger the singular-point policy:
/// one 1e-12 jitter, then rejection and resampling (MC) up to
/// spec.max_retries; deterministic rules raise NumericError instead.
template <class G>
std::vector<IntegralEstimate> integrate_on(SampleSet& set, std::size_t components, G&& g,
                                           int max_retries = 8) {
    const std::size_t count = set.size();
    std::vector<std::vector<double>> values(components, std::vector<double>(count, 0.0));
    std::vector<double> buf(components);
    std::size_t events = 0;
    for (std::size_t i = 0; i < count; ++i) {
        if (set.weights[i] == 0.0) continue;
        std::span<double> out(buf);
        bool ok = detail::eval_all_finite(g, set.points[i], out);
        if (!ok) {
            ++events;
            ok = detail::eval_all_finite(g, detail::jitter(set.points[i]), out);
        }
        for (int attempt = 0; !ok && attempt < max_retries; ++attempt) {
            if (!set.replace) break;
            auto [p, w] = set.replace(i, attempt);
            set.points[i] = p;
            set.weights[i] = w;
            ok = (w == 0.0) ? (std::fill(out.begin(), out.end(), 0.0), true)
                            : detail::eval_all_finite(g, p, out);
        }
        if (!ok) {
            throw NumericError("integrand is non-finite at a node after jitter and " +
                               std::to_string(max_retries) + " resamples");
        }
        for (std::size_t c = 0; c < components; ++c) values[c][i] = out[c];
    }
    std::vector<IntegralEstimate> result;
    result.reserve(components);
    for (std::size_t c = 0; c < components; ++c) {
        IntegralEstimate e = estimate_from_values(set, values[c]);
        e.singular_events = events;
        result.push_back(e);
    }
    return result;
}

/// Integrate a vector-valued integrand against dv_alpha over spec.region.
template <class G>
std::vector<IntegralEstimate> integrate_ball_multi(G&& g, std::size_t components,
                                                   const WeightedMeasure& mu,
                                                   const QuadratureSpec& spec) {
    SampleSet set = make_sample_set(mu, spec);
    return integrate_on(set, components, std::forward<G>(g), spec.max_retries);
}

/// Integrate a real-valued integrand against dv_alpha over spec.region.
template <class G>
IntegralEstimate integrate_ball(G&& g, const WeightedMeasure& mu, const QuadratureSpec& spec) {
    auto wrapped = [&](const CPoint& z, std::span<double> out) { out[0] = g(z); };
    return integrate_ball_multi(wrapped, 1, mu, spec)[0];
}

/// The same integral along two routes: direct MC over the ball, and the
/// polar decomposition (radial Gauss-Jacobi rule) x (MC over the sphere
/// with `sphere_samples` antithetic directions).
template <class G>
std::pair<IntegralEstimate, IntegralEstimate> polar_decompose_check(G&& g,
                                                                    const WeightedMeasure& mu,
                                                                    const QuadratureSpec& spec) {
    QuadratureSpec direct_spec = spec;
    if (direct_spec.method == Method::ProductRule) direct_spec.method = Method::StratifiedMC;
    direct_spec.region = Region::full();
    IntegralEstimate direct = integrate_ball(g, mu, direct_spec);

    const std::size_t n = mu.dimension();
    const Rule1D radial =
        detail::radial_rule(n, mu.alpha(), mu.c_alpha(), 0.0, 1.0, spec.radial_order);
    Stream rng(derive_seed(spec.seed, {0x5048ULL}));
    const std::size_t pairs = std::max<std::size_t>(1, spec.sphere_samples / 2);
    std::vector<double> per_dir(pairs);
    std::size_t events = 0;
    for (std::size_t d = 0; d < pairs; ++d) {
        const CPoint zeta = rng.sphere_point(n);
        double s = 0.0;
        for (std::size_t i = 0; i < radial.size(); ++i) {
            const double r = std::sqrt(radial.nodes[i]);
            double v = 0.5 * (g(r * zeta) + g(-r * zeta));
            if (!std::isfinite(v)) {
                ++events;
                v = 0.5 * (g(detail::jitter(r * zeta)) + g(detail::jitter(-r * zeta)));
                if (!std::isfinite(v)) throw NumericError("polar route: non-finite integrand");
            }
            s += radial.weights[i] * v;
        }
        per_dir[d] = s;
    }
    IntegralEstimate polar;
    const double mean = pairwise_sum(per_dir) / static_cast<double>(pairs);
    std::vector<double> sq(pairs);
    for (std::size_t d = 0; d < pairs; ++d) sq[d] = (per_dir[d] - mean) * (per_dir[d] - mean);
    polar.value = mean;
    polar.std_error = pairs > 1 ? std::sqrt(pairwise_sum(sq) / static_cast<double>(pairs - 1) /
                                            static_cast<double>(pairs))
                                : 0.0;
    polar.samples_used = pairs * 2 * radial.size();
    polar.singular_events = events;
    return {direct, polar};
}

}  // namespace bergman
