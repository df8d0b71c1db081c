#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <map>
#include <mutex>
#include <span>
#include <tuple>
#include <vector>

#include <Eigen/Eigenvalues>

#include "bergman/error.hpp"

namespace bergman {

/// Nodes and weights of a one-dimensional rule.
struct Rule1D {
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const noexcept { return nodes.size(); }
};

/// Sum in a fixed binary tree. The result depends only on the order of the
/// input, never on scheduling, and the rounding error grows like log N.
template <class T>
T pairwise_sum(std::span<const T> v) {
    constexpr std::size_t kBlock = 8;
    if (v.size() <= kBlock) {
        T s{};
        for (const T& x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

template <class T>
T pairwise_sum(const std::vector<T>& v) {
    return pairwise_sum(std::span<const T>(v.data(), v.size()));
}

namespace detail {

/// Golub-Welsch for the weight (1-x)^a (1+x)^b on [-1, 1].
inline Rule1D compute_gauss_jacobi(std::size_t order, double a, double b) {
    if (order == 0) throw ParameterError("quadrature order must be positive");
    if (!(a > -1.0 && b > -1.0)) throw DomainError("Jacobi exponents must exceed -1");
    const double ab = a + b;
    Eigen::VectorXd diag(order);
    Eigen::VectorXd sub(order > 1 ? order - 1 : 1);
    diag(0) = (b - a) / (ab + 2.0);
    for (std::size_t i = 1; i < order; ++i) {
        const double k = static_cast<double>(i);
        const double t = 2.0 * k + ab;
        diag(i) = (b * b - a * a) / (t * (t + 2.0));
    }
    for (std::size_t i = 1; i < order; ++i) {
        const double k = static_cast<double>(i);
        const double t = 2.0 * k + ab;
        const double num = 4.0 * k * (k + a) * (k + b) * (k + ab);
        const double den = t * t * (t + 1.0) * (t - 1.0);
        sub(i - 1) = std::sqrt(num / den);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    if (order > 1) {
        solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
        if (solver.info() != Eigen::Success) throw NumericError("Golub-Welsch eigensolver failed");
    }
    const double log_mu0 = (ab + 1.0) * std::log(2.0) + std::lgamma(a + 1.0) +
                           std::lgamma(b + 1.0) - std::lgamma(ab + 2.0);
    const double mu0 = std::exp(log_mu0);
    Rule1D r;
    r.nodes.resize(order);
    r.weights.resize(order);
    if (order == 1) {
        r.nodes[0] = diag(0);
        r.weights[0] = mu0;
        return r;
    }
    for (std::size_t i = 0; i < order; ++i) {
        r.nodes[i] = solver.eigenvalues()(static_cast<Eigen::Index>(i));
        const double v0 = solver.eigenvectors()(0, static_cast<Eigen::Index>(i));
        r.weights[i] = mu0 * v0 * v0;
    }
    return r;
}

}  // namespace detail

/// Gauss-Jacobi rule: sum w_i f(x_i) ~ int_{-1}^{1} (1-x)^a (1+x)^b f(x) dx,
/// exact for polynomials of degree 2*order - 1. Rules are cached.
inline const Rule1D& gauss_jacobi(std::size_t order, double a, double b) {
    static std::mutex mutex;
    static std::map<std::tuple<std::size_t, double, double>, Rule1D> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto key = std::make_tuple(order, a, b);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, detail::compute_gauss_jacobi(order, a, b)).first;
    return it->second;
}

inline const Rule1D& gauss_legendre(std::size_t order) { return gauss_jacobi(order, 0.0, 0.0); }

/// Rule on [0, 1] for the weight (1-u)^a u^b.
inline Rule1D jacobi_unit(std::size_t order, double a, double b) {
    const Rule1D& base = gauss_jacobi(order, a, b);
    const double scale = std::exp(-(a + b + 1.0) * std::log(2.0));
    Rule1D r;
    r.nodes.resize(base.size());
    r.weights.resize(base.size());
    for (std::size_t i = 0; i < base.size(); ++i) {
        r.nodes[i] = 0.5 * (base.nodes[i] + 1.0);
        r.weights[i] = base.weights[i] * scale;
    }
    return r;
}

/// Gauss-Legendre rule mapped to [lo, hi].
inline Rule1D legendre_interval(std::size_t order, double lo, double hi) {
    const Rule1D& base = gauss_legendre(order);
    Rule1D r;
    r.nodes.resize(base.size());
    r.weights.resize(base.size());
    const double half = 0.5 * (hi - lo);
    for (std::size_t i = 0; i < base.size(); ++i) {
        r.nodes[i] = lo + half * (base.nodes[i] + 1.0);
        r.weights[i] = half * base.weights[i];
    }
    return r;
}

/// Composite Gauss-Legendre on [lo, hi] with panels refined geometrically
/// toward `lo` (panel edges lo + (hi-lo) 2^-j) down to a relative width
/// `floor_rel`; the innermost sliver [lo, lo + (hi-lo) floor_rel] is also
/// covered by one panel.
inline Rule1D graded_legendre(std::size_t order, double lo, double hi, double floor_rel = 0x1.0p-40) {
    Rule1D r;
    if (!(hi > lo)) return r;
    const double width = hi - lo;
    std::vector<double> edges{hi};
    double rel = 1.0;
    while (rel > floor_rel) {
        rel *= 0.5;
        edges.push_back(lo + width * rel);
    }
    edges.push_back(lo);
    for (std::size_t i = edges.size() - 1; i-- > 0;) {
        Rule1D p = legendre_interval(order, edges[i + 1], edges[i]);
        r.nodes.insert(r.nodes.end(), p.nodes.begin(), p.nodes.end());
        r.weights.insert(r.weights.end(), p.weights.begin(), p.weights.end());
    }
    return r;
}

/// Composite Gauss-Legendre on [lo, hi] with panel edges at lo * 2^j, for
/// integrands singular at 0 when lo > 0 is a cutoff.
inline Rule1D dyadic_legendre(std::size_t order, double lo, double hi) {
    Rule1D r;
    if (!(hi > lo) || !(lo > 0.0)) return r;
    double a = lo;
    while (a < hi) {
        const double b = std::min(2.0 * a, hi);
        Rule1D p = legendre_interval(order, a, b);
        r.nodes.insert(r.nodes.end(), p.nodes.begin(), p.nodes.end());
        r.weights.insert(r.weights.end(), p.weights.begin(), p.weights.end());
        a = b;
    }
    return r;
}

template <class T>
struct AdaptiveResult {
    T value{};
    double error = 0.0;
    bool converged = true;
    std::size_t evaluations = 0;
};

namespace detail {

struct Kronrod15 {
    static constexpr double xgk[8] = {
        0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
        0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
        0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
        0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
    static constexpr double wgk[8] = {
        0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
        0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
        0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
        0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
    static constexpr double wg[4] = {
        0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
        0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
};

template <class T, class F>
std::pair<T, double> gk15(F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const T fc = f(c);
    T rk = fc * Kronrod15::wgk[7];
    T rg = fc * Kronrod15::wg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * Kronrod15::xgk[j];
        const T f1 = f(c - dx);
        const T f2 = f(c + dx);
        rk += (f1 + f2) * Kronrod15::wgk[j];
        if (j % 2 == 1) rg += (f1 + f2) * Kronrod15::wg[j / 2];
    }
    return {rk * h, std::abs(rk * h - rg * h)};
}

template <class T, class F>
void adaptive_step(F& f, double a, double b, double tol, int depth, AdaptiveResult<T>& out) {
    auto [val, err] = gk15<T>(f, a, b);
    out.evaluations += 15;
    const double roundoff = 50.0 * std::numeric_limits<double>::epsilon() * std::abs(val);
    if (err <= tol || err <= roundoff || depth <= 0 ||
        std::abs(b - a) < 1e-15 * (1.0 + std::abs(a))) {
        if (err > tol && err > roundoff) out.converged = false;
        out.value += val;
        out.error += err;
        return;
    }
    const double m = 0.5 * (a + b);
    adaptive_step<T>(f, a, m, 0.5 * tol, depth - 1, out);
    adaptive_step<T>(f, m, b, 0.5 * tol, depth - 1, out);
}

}  // namespace detail

/// Adaptive Gauss-Kronrod (7/15) integration of f over [a, b]; T may be
/// double or std::complex<double>.
template <class T, class F>
AdaptiveResult<T> integrate_adaptive(F&& f, double a, double b, double abs_tol = 1e-12,
                                     int max_depth = 40) {
    AdaptiveResult<T> out;
    detail::adaptive_step<T>(f, a, b, abs_tol, max_depth, out);
    return out;
}

}  // namespace bergman
