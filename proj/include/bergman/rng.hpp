#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "bergman/ball.hpp"

namespace bergman {

/// SplitMix64 finalizer; used to derive independent stream seeds.
inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Derive a child seed from a parent seed and a path of indices.
inline std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
    std::uint64_t s = splitmix64(seed);
    for (std::uint64_t p : path) s = splitmix64(s ^ splitmix64(p + 0x632BE59BD9B4E019ULL));
    return s;
}

/// Deterministic random stream. The engine (mt19937_64) is fully specified by
/// the standard; the transforms below are written out so that the produced
/// doubles are identical on every platform.
class Stream {
public:
    explicit Stream(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on the open interval (0, 1) with 53 random bits.
    double uniform() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal by Box-Muller (pairs are cached).
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(t);
        has_spare_ = true;
        return r * std::cos(t);
    }

    Complex complex_normal() {
        const double re = normal();
        const double im = normal();
        return {re, im};
    }

    /// Uniform point of the unit sphere S_n in C^n (normalized complex Gaussian).
    CPoint sphere_point(std::size_t n) {
        CPoint z(n);
        double s = 0.0;
        do {
            for (std::size_t k = 0; k < n; ++k) z[k] = complex_normal();
            s = z.norm_sq();
        } while (s == 0.0);
        return (1.0 / std::sqrt(s)) * z;
    }

    /// Point uniformly distributed for the normalized volume dv, with |z| <= radius.
    CPoint ball_point(std::size_t n, double radius = 1.0) {
        const double r = radius * std::pow(uniform(), 1.0 / (2.0 * static_cast<double>(n)));
        return r * sphere_point(n);
    }

    std::mt19937_64& engine() noexcept { return engine_; }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Haar-distributed unitary matrix (Gram-Schmidt on complex Gaussian columns).
inline Unitary random_unitary(std::size_t n, Stream& rng) {
    std::vector<Complex> cols(n * n);
    for (auto& c : cols) c = rng.complex_normal();
    // column j occupies cols[j*n .. j*n + n)
    for (std::size_t j = 0; j < n; ++j) {
        Complex* cj = &cols[j * n];
        for (std::size_t i = 0; i < j; ++i) {
            const Complex* ci = &cols[i * n];
            Complex proj = 0.0;
            for (std::size_t k = 0; k < n; ++k) proj += std::conj(ci[k]) * cj[k];
            for (std::size_t k = 0; k < n; ++k) cj[k] -= proj * ci[k];
        }
        double norm = 0.0;
        for (std::size_t k = 0; k < n; ++k) norm += std::norm(cj[k]);
        norm = std::sqrt(norm);
        for (std::size_t k = 0; k < n; ++k) cj[k] /= norm;
    }
    std::vector<Complex> row_major(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) row_major[i * n + j] = cols[j * n + i];
    return Unitary(n, std::move(row_major));
}

}  // namespace bergman
