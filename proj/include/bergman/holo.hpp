#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "bergman/ball.hpp"
#include "bergman/error.hpp"
#include "bergman/measures.hpp"

namespace bergman {

/// Vector of the n holomorphic partial derivatives at a point.
using Gradient = CPoint;

class HoloFunction;

namespace holo_detail {

struct Term {
    MultiIndex exponent;
    Complex coefficient;
};

struct Polynomial {
    std::size_t n;
    std::vector<Term> terms;
};

/// scale * (1 - <z, a>)^(-s), principal branch.
struct KernelPower {
    CPoint a;
    double s;
    Complex scale;
};

struct Composed;
struct Sum;
struct Scaled;

using Node = std::variant<Polynomial, KernelPower, std::shared_ptr<const Composed>,
                          std::shared_ptr<const Sum>, std::shared_ptr<const Scaled>>;

}  // namespace holo_detail

/// An immutable holomorphic function on B_n: a polynomial, a kernel power
/// scale * (1 - <z,a>)^(-s), a composition f o phi with an automorphism, or
/// a sum / scalar multiple of those. Copies share structure.
class HoloFunction {
public:
    static HoloFunction polynomial(std::size_t n,
                                   std::vector<std::pair<MultiIndex, Complex>> terms) {
        if (n == 0 || n > kMaxDim) throw DimensionError("polynomial dimension out of range");
        holo_detail::Polynomial p{n, {}};
        for (auto& [m, c] : terms) {
            if (m.size() != n) throw DimensionError("multi-index length must equal n");
            for (int e : m)
                if (e < 0) throw ParameterError("multi-index entries must be nonnegative");
            if (c == Complex(0.0)) continue;
            bool merged = false;
            for (auto& t : p.terms) {
                if (t.exponent == m) {
                    t.coefficient += c;
                    merged = true;
                    break;
                }
            }
            if (!merged) p.terms.push_back({std::move(m), c});
        }
        return HoloFunction(holo_detail::Node(std::move(p)), n);
    }

    static HoloFunction constant(std::size_t n, Complex c) {
        return polynomial(n, {{MultiIndex(n, 0), c}});
    }

    static HoloFunction monomial(std::size_t n, MultiIndex m, Complex c = 1.0) {
        return polynomial(n, {{std::move(m), c}});
    }

    /// z_k (0-based k).
    static HoloFunction coordinate(std::size_t n, std::size_t k) {
        MultiIndex m(n, 0);
        m.at(k) = 1;
        return monomial(n, std::move(m));
    }

    static HoloFunction kernel_power(CPoint a, double s, Complex scale = 1.0) {
        if (!(a.norm_sq() < 1.0)) throw DomainError("kernel centre must lie in the open ball");
        if (!(s > 0.0)) throw ParameterError("kernel exponent must be positive");
        const std::size_t n = a.size();
        return HoloFunction(holo_detail::Node(holo_detail::KernelPower{std::move(a), s, scale}), n);
    }

    /// z -> outer(phi(z)).
    static HoloFunction composed(Automorphism phi, HoloFunction outer);

    friend HoloFunction operator+(const HoloFunction& f, const HoloFunction& g);
    friend HoloFunction operator*(Complex c, const HoloFunction& f);

    std::size_t dimension() const noexcept { return n_; }

    Complex eval(const CPoint& z) const;
    Complex operator()(const CPoint& z) const { return eval(z); }

    /// Exact partials where the representation allows, central differences
    /// otherwise (compositions).
    Gradient partials(const CPoint& z) const;

    /// Central-difference partials of the evaluation, regardless of variant.
    Gradient numeric_partials(const CPoint& z) const;

    bool has_exact_partials() const;

    /// When f is c * z^m, returns m. |f|, |Rf|, |grad f| and the invariant
    /// gradient of such f depend only on (|z_1|, ..., |z_n|).
    std::optional<MultiIndex> monomial_exponent() const;

    std::string describe() const;

    const holo_detail::Node& node() const noexcept { return *node_; }

private:
    HoloFunction(holo_detail::Node node, std::size_t n)
        : node_(std::make_shared<const holo_detail::Node>(std::move(node))), n_(n) {}

    std::shared_ptr<const holo_detail::Node> node_;
    std::size_t n_;
};

namespace holo_detail {

struct Composed {
    Automorphism phi;
    HoloFunction outer;
};

struct Sum {
    HoloFunction lhs;
    HoloFunction rhs;
};

struct Scaled {
    Complex c;
    HoloFunction inner;
};

inline void require_dim(const HoloFunction& f, const CPoint& z) {
    if (f.dimension() != z.size()) {
        throw DimensionError("function of dimension " + std::to_string(f.dimension()) +
                             " evaluated at a point of dimension " + std::to_string(z.size()));
    }
}

inline Complex monomial_value(const MultiIndex& m, const CPoint& z) {
    Complex v = 1.0;
    for (std::size_t k = 0; k < m.size(); ++k)
        for (int e = 0; e < m[k]; ++e) v *= z[k];
    return v;
}

inline std::string format_complex(Complex c) {
    std::ostringstream os;
    os.precision(17);
    if (c.imag() == 0.0) {
        os << c.real();
    } else if (c.real() == 0.0) {
        os << c.imag() << "i";
    } else {
        os << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i";
    }
    return os.str();
}

}  // namespace holo_detail

inline HoloFunction HoloFunction::composed(Automorphism phi, HoloFunction outer) {
    if (phi.size() != outer.dimension()) throw DimensionError("automorphism/function dimension mismatch");
    const std::size_t n = outer.dimension();
    return HoloFunction(holo_detail::Node(std::make_shared<const holo_detail::Composed>(
                            holo_detail::Composed{std::move(phi), std::move(outer)})),
                        n);
}

inline HoloFunction operator+(const HoloFunction& f, const HoloFunction& g) {
    if (f.dimension() != g.dimension()) throw DimensionError("sum of functions of different dimension");
    return HoloFunction(holo_detail::Node(std::make_shared<const holo_detail::Sum>(
                            holo_detail::Sum{f, g})),
                        f.dimension());
}

inline HoloFunction operator*(Complex c, const HoloFunction& f) {
    return HoloFunction(holo_detail::Node(std::make_shared<const holo_detail::Scaled>(
                            holo_detail::Scaled{c, f})),
                        f.dimension());
}

inline Complex HoloFunction::eval(const CPoint& z) const {
    holo_detail::require_dim(*this, z);
    using namespace holo_detail;
    struct Visitor {
        const CPoint& z;
        Complex operator()(const Polynomial& p) const {
            Complex s = 0.0;
            for (const auto& t : p.terms) s += t.coefficient * monomial_value(t.exponent, z);
            return s;
        }
        Complex operator()(const KernelPower& k) const {
            const Complex base = 1.0 - hermitian_inner(z, k.a);
            if (base == Complex(0.0)) throw DomainError("kernel power evaluated at its singularity");
            return k.scale * std::pow(base, -k.s);
        }
        Complex operator()(const std::shared_ptr<const Composed>& c) const {
            return c->outer.eval(c->phi.apply(z));
        }
        Complex operator()(const std::shared_ptr<const Sum>& s) const {
            return s->lhs.eval(z) + s->rhs.eval(z);
        }
        Complex operator()(const std::shared_ptr<const Scaled>& s) const {
            return s->c * s->inner.eval(z);
        }
    };
    return std::visit(Visitor{z}, *node_);
}

inline Gradient HoloFunction::numeric_partials(const CPoint& z) const {
    holo_detail::require_dim(*this, z);
    // One real direction determines the complex derivative of a holomorphic
    // function, so a real central difference suffices.
    const double r = z.norm();
    double h = std::cbrt(std::numeric_limits<double>::epsilon()) * (1.0 + r);
    if (r + h >= 1.0) h = 0.5 * (1.0 - r);
    if (!(h > 0.0)) throw NumericError("no room for a difference step at |z| = " + std::to_string(r));
    Gradient g(n_);
    for (std::size_t k = 0; k < n_; ++k) {
        CPoint zp = z, zm = z;
        zp[k] += h;
        zm[k] -= h;
        g[k] = (eval(zp) - eval(zm)) / (2.0 * h);
    }
    return g;
}

inline Gradient HoloFunction::partials(const CPoint& z) const {
    holo_detail::require_dim(*this, z);
    using namespace holo_detail;
    struct Visitor {
        const HoloFunction& self;
        const CPoint& z;
        Gradient operator()(const Polynomial& p) const {
            Gradient g(p.n);
            for (const auto& t : p.terms) {
                for (std::size_t k = 0; k < p.n; ++k) {
                    if (t.exponent[k] == 0) continue;
                    MultiIndex m = t.exponent;
                    m[k] -= 1;
                    g[k] += t.coefficient * static_cast<double>(t.exponent[k]) * monomial_value(m, z);
                }
            }
            return g;
        }
        Gradient operator()(const KernelPower& kp) const {
            const Complex base = 1.0 - hermitian_inner(z, kp.a);
            const Complex common = kp.scale * kp.s * std::pow(base, -kp.s - 1.0);
            Gradient g(kp.a.size());
            for (std::size_t k = 0; k < kp.a.size(); ++k) g[k] = common * std::conj(kp.a[k]);
            return g;
        }
        Gradient operator()(const std::shared_ptr<const Composed>&) const {
            return self.numeric_partials(z);
        }
        Gradient operator()(const std::shared_ptr<const Sum>& s) const {
            return s->lhs.partials(z) + s->rhs.partials(z);
        }
        Gradient operator()(const std::shared_ptr<const Scaled>& s) const {
            return s->c * s->inner.partials(z);
        }
    };
    return std::visit(Visitor{*this, z}, *node_);
}

inline bool HoloFunction::has_exact_partials() const {
    using namespace holo_detail;
    struct Visitor {
        bool operator()(const Polynomial&) const { return true; }
        bool operator()(const KernelPower&) const { return true; }
        bool operator()(const std::shared_ptr<const Composed>&) const { return false; }
        bool operator()(const std::shared_ptr<const Sum>& s) const {
            return s->lhs.has_exact_partials() && s->rhs.has_exact_partials();
        }
        bool operator()(const std::shared_ptr<const Scaled>& s) const {
            return s->inner.has_exact_partials();
        }
    };
    return std::visit(Visitor{}, *node_);
}

inline std::optional<MultiIndex> HoloFunction::monomial_exponent() const {
    using namespace holo_detail;
    if (const auto* p = std::get_if<Polynomial>(node_.get())) {
        if (p->terms.size() == 1) return p->terms.front().exponent;
        return std::nullopt;
    }
    if (const auto* s = std::get_if<std::shared_ptr<const Scaled>>(node_.get())) {
        if ((*s)->c != Complex(0.0)) return (*s)->inner.monomial_exponent();
    }
    return std::nullopt;
}

inline std::string HoloFunction::describe() const {
    using namespace holo_detail;
    struct Visitor {
        std::string operator()(const Polynomial& p) const {
            std::string out = "poly n=" + std::to_string(p.n) + " {";
            for (std::size_t i = 0; i < p.terms.size(); ++i) {
                if (i) out += ", ";
                out += "(";
                for (std::size_t k = 0; k < p.n; ++k) {
                    if (k) out += ",";
                    out += std::to_string(p.terms[i].exponent[k]);
                }
                out += "):" + format_complex(p.terms[i].coefficient);
            }
            return out + "}";
        }
        std::string operator()(const KernelPower& k) const {
            std::string out = "kernel n=" + std::to_string(k.a.size()) + " a=(";
            for (std::size_t i = 0; i < k.a.size(); ++i) {
                if (i) out += ",";
                out += format_complex(k.a[i]);
            }
            std::ostringstream os;
            os.precision(17);
            os << k.s;
            return out + ") s=" + os.str() + " scale=" + format_complex(k.scale);
        }
        std::string operator()(const std::shared_ptr<const Composed>& c) const {
            std::string what = c->phi.is_involution() ? "involution" : "unitary";
            return "compose(" + what + ", " + c->outer.describe() + ")";
        }
        std::string operator()(const std::shared_ptr<const Sum>& s) const {
            return "sum(" + s->lhs.describe() + ", " + s->rhs.describe() + ")";
        }
        std::string operator()(const std::shared_ptr<const Scaled>& s) const {
            return "scale(" + format_complex(s->c) + ", " + s->inner.describe() + ")";
        }
    };
    return std::visit(Visitor{}, *node_);
}

/// Everything the integral functionals need at one point.
struct DerivativeBundle {
    Complex value;
    Gradient partials;
    Complex radial;          // Rf = sum z_k d_k f
    double grad_norm = 0;    // |grad f|
    double inv_grad_norm = 0;  // invariant gradient, identity path
};

/// Rf(z) = sum_k z_k df/dz_k.
inline Complex radial_derivative(const HoloFunction& f, const CPoint& z) {
    const Gradient g = f.partials(z);
    Complex s = 0.0;
    for (std::size_t k = 0; k < z.size(); ++k) s += z[k] * g[k];
    return s;
}

inline double gradient_norm(const HoloFunction& f, const CPoint& z) { return f.partials(z).norm(); }

namespace holo_detail {

/// |grad~ f|^2 = (1-|z|^2)(|grad f|^2 - |Rf|^2), with the bracket rewritten via
/// Lagrange's identity as
///   (1-|z|^2)|grad f|^2 + sum_{j<k} |z_j conj(d_k f) - z_k conj(d_j f)|^2,
/// which is a sum of nonnegative terms. The result is assembled with hypot
/// from t = (1-|z|^2)|grad f| so that it is never below t after rounding.
inline double invariant_gradient_from(const CPoint& z, const Gradient& g, double grad_norm) {
    const double omz = 1.0 - z.norm_sq();
    if (!(omz > 0.0)) throw DomainError("invariant gradient needs |z| < 1");
    double lagrange = 0.0;
    for (std::size_t j = 0; j < z.size(); ++j)
        for (std::size_t k = j + 1; k < z.size(); ++k)
            lagrange += std::norm(z[j] * std::conj(g[k]) - z[k] * std::conj(g[j]));
    const double t = omz * grad_norm;
    const double extra = omz * lagrange;
    if (!std::isfinite(t) || !(extra >= 0.0)) {
        throw NumericError("invariant gradient radicand is not a finite nonnegative number");
    }
    return std::hypot(t, std::sqrt(extra));
}

}  // namespace holo_detail

inline DerivativeBundle derivative_bundle(const HoloFunction& f, const CPoint& z) {
    DerivativeBundle b;
    b.value = f.eval(z);
    b.partials = f.partials(z);
    b.radial = 0.0;
    for (std::size_t k = 0; k < z.size(); ++k) b.radial += z[k] * b.partials[k];
    b.grad_norm = b.partials.norm();
    b.inv_grad_norm = holo_detail::invariant_gradient_from(z, b.partials, b.grad_norm);
    return b;
}

/// Invariant gradient |grad~ f(z)| through the identity
/// |grad~ f|^2 = (1-|z|^2)(|grad f|^2 - |Rf|^2).
inline double invariant_gradient_norm(const HoloFunction& f, const CPoint& z) {
    const Gradient g = f.partials(z);
    return holo_detail::invariant_gradient_from(z, g, g.norm());
}

/// Invariant gradient from its definition |grad (f o phi_z)(0)|, with
/// numerical partials of the composition at the origin.
inline double invariant_gradient_definitional(const HoloFunction& f, const CPoint& z) {
    holo_detail::require_dim(f, z);
    if (!(z.norm_sq() < 1.0)) throw DomainError("invariant gradient needs |z| < 1");
    const HoloFunction composed = HoloFunction::composed(Automorphism::involution(z), f);
    const Gradient g = composed.numeric_partials(CPoint::zero(z.size()));
    double s = 0.0;
    for (const Complex& c : g) {
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
            throw NumericError("difference quotient of f o phi_z at 0 is not finite");
        s += std::norm(c);
    }
    return std::sqrt(s);
}

}  // namespace bergman
