#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "bergman/error.hpp"

namespace bergman {

using Complex = std::complex<double>;

/// Largest complex dimension supported by the fixed-capacity point type.
inline constexpr std::size_t kMaxDim = 8;

/// A point of C^n stored inline (no allocation). The dimension is fixed at
/// construction; every binary operation checks that dimensions agree.
class CPoint {
public:
    CPoint() = default;

    explicit CPoint(std::size_t n) : n_(n) {
        if (n == 0 || n > kMaxDim) {
            throw DimensionError("dimension must be in [1, " + std::to_string(kMaxDim) +
                                 "], got " + std::to_string(n));
        }
    }

    CPoint(std::initializer_list<Complex> coords) : CPoint(coords.size()) {
        std::size_t k = 0;
        for (const Complex& c : coords) coords_[k++] = c;
    }

    static CPoint zero(std::size_t n) { return CPoint(n); }

    /// e_k scaled by `value`.
    static CPoint basis(std::size_t n, std::size_t k, Complex value = 1.0) {
        CPoint p(n);
        p[k] = value;
        return p;
    }

    std::size_t size() const noexcept { return n_; }

    Complex& operator[](std::size_t k) noexcept { return coords_[k]; }
    const Complex& operator[](std::size_t k) const noexcept { return coords_[k]; }

    const Complex* begin() const noexcept { return coords_.data(); }
    const Complex* end() const noexcept { return coords_.data() + n_; }
    Complex* begin() noexcept { return coords_.data(); }
    Complex* end() noexcept { return coords_.data() + n_; }

    double norm_sq() const noexcept {
        double s = 0.0;
        for (std::size_t k = 0; k < n_; ++k) s += std::norm(coords_[k]);
        return s;
    }
    double norm() const noexcept { return std::sqrt(norm_sq()); }

    CPoint& operator+=(const CPoint& o) {
        check_same(o);
        for (std::size_t k = 0; k < n_; ++k) coords_[k] += o.coords_[k];
        return *this;
    }
    CPoint& operator-=(const CPoint& o) {
        check_same(o);
        for (std::size_t k = 0; k < n_; ++k) coords_[k] -= o.coords_[k];
        return *this;
    }
    CPoint& operator*=(Complex s) noexcept {
        for (std::size_t k = 0; k < n_; ++k) coords_[k] *= s;
        return *this;
    }

    friend CPoint operator+(CPoint a, const CPoint& b) { return a += b; }
    friend CPoint operator-(CPoint a, const CPoint& b) { return a -= b; }
    friend CPoint operator*(Complex s, CPoint a) { return a *= s; }
    friend CPoint operator*(CPoint a, Complex s) { return a *= s; }
    friend CPoint operator-(CPoint a) { return a *= -1.0; }

    friend bool operator==(const CPoint& a, const CPoint& b) noexcept {
        if (a.n_ != b.n_) return false;
        for (std::size_t k = 0; k < a.n_; ++k)
            if (a.coords_[k] != b.coords_[k]) return false;
        return true;
    }

    void check_same(const CPoint& o) const {
        if (o.n_ != n_) {
            throw DimensionError("dimension mismatch: " + std::to_string(n_) + " vs " +
                                 std::to_string(o.n_));
        }
    }

private:
    std::size_t n_ = 0;
    std::array<Complex, kMaxDim> coords_{};
};

/// <z, w> = sum_k z_k conj(w_k).
inline Complex hermitian_inner(const CPoint& z, const CPoint& w) {
    z.check_same(w);
    Complex s = 0.0;
    for (std::size_t k = 0; k < z.size(); ++k) s += z[k] * std::conj(w[k]);
    return s;
}

namespace detail {

inline void require_interior(const CPoint& z, const char* name) {
    if (!(z.norm_sq() < 1.0)) {
        throw DomainError(std::string(name) + " must lie in the open unit ball (|" + name +
                          "|^2 = " + std::to_string(z.norm_sq()) + ")");
    }
}

}  // namespace detail

/// The involutive automorphism phi_a of the ball: phi_a(0) = a, phi_a(a) = 0,
/// phi_a(phi_a(z)) = z. Uses the projection form
///   phi_a(z) = (a - P_a z - s_a Q_a z) / (1 - <z,a>),  s_a = sqrt(1 - |a|^2),
/// with phi_0 = -identity.
inline CPoint involution_apply(const CPoint& a, const CPoint& z) {
    a.check_same(z);
    detail::require_interior(a, "a");
    detail::require_interior(z, "z");
    const double a2 = a.norm_sq();
    if (a2 == 0.0) return -z;
    const Complex za = hermitian_inner(z, a);
    const double s = std::sqrt(1.0 - a2);
    const Complex denom = 1.0 - za;
    CPoint out(z.size());
    for (std::size_t k = 0; k < z.size(); ++k) {
        const Complex pz = (za / a2) * a[k];
        const Complex qz = z[k] - pz;
        out[k] = (a[k] - pz - s * qz) / denom;
    }
    return out;
}

/// (1 - |a|^2)(1 - |z|^2) / |1 - <z,a>|^2, which equals 1 - |phi_a(z)|^2 but is
/// computed without cancellation near the boundary.
inline double one_minus_sq_identity(const CPoint& a, const CPoint& z) {
    a.check_same(z);
    detail::require_interior(a, "a");
    detail::require_interior(z, "z");
    return (1.0 - a.norm_sq()) * (1.0 - z.norm_sq()) / std::norm(1.0 - hermitian_inner(z, a));
}

/// |phi_z(w)|, the pseudo-hyperbolic distance. Symmetric in (z, w).
inline double pseudo_hyperbolic_distance(const CPoint& z, const CPoint& w) {
    const double one_minus = one_minus_sq_identity(z, w);
    return std::sqrt(std::max(0.0, 1.0 - one_minus));
}

/// Membership w in D(center, rho) = { w : |phi_center(w)| < rho }.
inline bool in_pseudo_ball(const CPoint& center, double rho, const CPoint& w) {
    if (!(rho > 0.0 && rho < 1.0)) {
        throw ParameterError("pseudo-ball radius must lie in (0,1), got " + std::to_string(rho));
    }
    center.check_same(w);
    detail::require_interior(center, "center");
    if (!(w.norm_sq() < 1.0)) return false;
    return involution_apply(center, w).norm() < rho;
}

/// Density of the Moebius invariant measure d tau = dv / (1 - |w|^2)^(n+1).
inline double invariant_density(const CPoint& w) {
    const double w2 = w.norm_sq();
    if (!(w2 < 1.0)) throw DomainError("invariant density diverges at |w| >= 1");
    return std::pow(1.0 - w2, -static_cast<double>(w.size() + 1));
}

/// Euclidean description of the ellipsoid D(a, rho): centre
/// (1 - rho^2) a / (1 - rho^2 |a|^2), semi-axis along a
/// rho (1 - |a|^2) / (1 - rho^2 |a|^2), and the (larger) semi-axis in the
/// orthogonal complement rho sqrt((1 - |a|^2) / (1 - rho^2 |a|^2)).
struct PseudoBallGeometry {
    CPoint euclidean_center;
    double radial_semi_axis = 0.0;
    double tangential_semi_axis = 0.0;

    double bounding_radius() const noexcept {
        return std::max(radial_semi_axis, tangential_semi_axis);
    }
};

/// A pseudo-hyperbolic ball D(center, rho).
class PseudoHyperbolicBall {
public:
    PseudoHyperbolicBall(CPoint center, double rho) : center_(std::move(center)), rho_(rho) {
        if (!(rho > 0.0 && rho < 1.0)) {
            throw ParameterError("pseudo-ball radius must lie in (0,1), got " +
                                 std::to_string(rho));
        }
        detail::require_interior(center_, "center");
    }

    const CPoint& center() const noexcept { return center_; }
    double radius() const noexcept { return rho_; }

    bool contains(const CPoint& w) const { return in_pseudo_ball(center_, rho_, w); }

    PseudoBallGeometry geometry() const {
        const double a2 = center_.norm_sq();
        const double r2 = rho_ * rho_;
        const double d = 1.0 - r2 * a2;
        PseudoBallGeometry g{(1.0 - r2) / d * center_, rho_ * (1.0 - a2) / d,
                             rho_ * std::sqrt((1.0 - a2) / d)};
        return g;
    }

    /// Exact normalized volume rho^(2n) ((1 - |a|^2) / (1 - rho^2 |a|^2))^(n+1).
    double exact_volume() const {
        const double n = static_cast<double>(center_.size());
        const double a2 = center_.norm_sq();
        return std::pow(rho_, 2.0 * n) * std::pow((1.0 - a2) / (1.0 - rho_ * rho_ * a2), n + 1.0);
    }

private:
    CPoint center_;
    double rho_;
};

/// z -> U z for a unitary matrix U (row-major, n x n).
class Unitary {
public:
    Unitary(std::size_t n, std::vector<Complex> row_major) : n_(n), m_(std::move(row_major)) {
        if (m_.size() != n * n) throw DimensionError("unitary matrix must have n*n entries");
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                Complex s = 0.0;
                for (std::size_t k = 0; k < n; ++k) s += std::conj(m_[k * n + i]) * m_[k * n + j];
                if (std::abs(s - (i == j ? 1.0 : 0.0)) > 1e-10) {
                    throw ParameterError("matrix is not unitary to within 1e-10");
                }
            }
        }
    }

    static Unitary identity(std::size_t n) {
        std::vector<Complex> m(n * n, 0.0);
        for (std::size_t i = 0; i < n; ++i) m[i * n + i] = 1.0;
        return Unitary(n, std::move(m));
    }

    std::size_t size() const noexcept { return n_; }
    Complex operator()(std::size_t i, std::size_t j) const { return m_[i * n_ + j]; }

    CPoint apply(const CPoint& z) const {
        if (z.size() != n_) throw DimensionError("unitary/point dimension mismatch");
        CPoint out(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            Complex s = 0.0;
            for (std::size_t j = 0; j < n_; ++j) s += m_[i * n_ + j] * z[j];
            out[i] = s;
        }
        return out;
    }

private:
    std::size_t n_;
    std::vector<Complex> m_;
};

/// The involution phi_a as a value.
class Involution {
public:
    explicit Involution(CPoint a) : a_(std::move(a)) { detail::require_interior(a_, "a"); }

    const CPoint& center() const noexcept { return a_; }
    std::size_t size() const noexcept { return a_.size(); }
    CPoint apply(const CPoint& z) const { return involution_apply(a_, z); }

private:
    CPoint a_;
};

/// An element of Aut(B_n) of one of the two generating kinds.
class Automorphism {
public:
    Automorphism(Unitary u) : map_(std::move(u)) {}      // NOLINT(google-explicit-constructor)
    Automorphism(Involution i) : map_(std::move(i)) {}   // NOLINT(google-explicit-constructor)

    static Automorphism involution(CPoint a) { return Automorphism(Involution(std::move(a))); }

    std::size_t size() const {
        return std::visit([](const auto& m) { return m.size(); }, map_);
    }

    CPoint apply(const CPoint& z) const {
        return std::visit([&](const auto& m) { return m.apply(z); }, map_);
    }
    CPoint operator()(const CPoint& z) const { return apply(z); }

    bool is_involution() const noexcept { return std::holds_alternative<Involution>(map_); }
    const Involution* as_involution() const noexcept { return std::get_if<Involution>(&map_); }
    const Unitary* as_unitary() const noexcept { return std::get_if<Unitary>(&map_); }

private:
    std::variant<Unitary, Involution> map_;
};

}  // namespace bergman
