#pragma once

#include "gcp/geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace gcp {

/// Coefficient A(t) = exp(i*lambda_j) * exp(i*ell*t) on circle j.
///
/// Every circle carries the same index ell, so the total index is m*ell.
struct Coefficient {
    int ell = 0;
    std::vector<double> lambdas;

    int circle_index() const noexcept { return ell; }
    int total_index() const noexcept { return static_cast<int>(lambdas.size()) * ell; }
    /// Number of free real constants, (2*ell + 1) * m.
    std::size_t constant_count() const noexcept {
        return static_cast<std::size_t>(2 * ell + 1) * lambdas.size();
    }
};

inline void validate_coefficient(const Coefficient& c, const CircleDomain& d) {
    if (c.ell < 0) throw DomainError("index ell must be nonnegative, got " + std::to_string(c.ell));
    if (c.lambdas.size() != d.size())
        throw ShapeError("expected " + std::to_string(d.size()) + " lambdas, got " +
                         std::to_string(c.lambdas.size()));
    for (double l : c.lambdas)
        if (!std::isfinite(l)) throw DomainError("lambda values must be finite");
}

inline Complex coeff_A(ParamPoint p, const Coefficient& c) {
    return std::polar(1.0, c.lambdas[p.circle] + c.ell * p.t);
}

/// (1/pi) * (A(s)/A(t)) * eta'(t) / (eta(t) - eta(s)) for s, t on different
/// circles. Its real part is M(s,t), its imaginary part N(s,t).
inline Complex cross_circle_kernel(ParamPoint s, ParamPoint t, const CircleDomain& d,
                                   const Coefficient& c) {
    const double phase = c.lambdas[s.circle] - c.lambdas[t.circle] + c.ell * (s.t - t.t);
    const Complex ratio = std::polar(1.0, phase);
    const Complex deta = eta_derivatives(t, d).first;
    return ratio * deta / (eta(t, d) - eta(s, d)) / std::numbers::pi;
}

namespace detail {

// On one circle, (A(s)/A(t)) eta'(t)/(eta(t)-eta(s)) = -exp(i(ell+1/2)u) / (2 sin(u/2)),
// u = s - t. Its imaginary part over pi is minus the Dirichlet kernel of order ell
// divided by 2*pi; its real part plus cot(u/2)/(2*pi) is a sine polynomial.
inline double same_circle_N(double u, int ell) {
    double sum = 1.0;
    for (int k = 1; k <= ell; ++k) sum += 2.0 * std::cos(k * u);
    return -sum / two_pi;
}

inline double same_circle_M1(double u, int ell) {
    double sum = 0.0;
    for (int k = 1; k <= ell; ++k) sum += std::sin(k * u);
    return sum / std::numbers::pi;
}

} // namespace detail

/// Generalized Neumann kernel N(s,t). Continuous; on a shared circle it depends
/// only on s - t and equals -(2*ell+1)/(2*pi) on the diagonal.
inline double kernel_N(ParamPoint s, ParamPoint t, const CircleDomain& d, const Coefficient& c) {
    if (s.circle == t.circle) return detail::same_circle_N(s.t - t.t, c.ell);
    return cross_circle_kernel(s, t, d, c).imag();
}

/// Singular companion kernel M(s,t), cross-circle pairs only.
inline double kernel_M(ParamPoint s, ParamPoint t, const CircleDomain& d, const Coefficient& c) {
    if (s.circle == t.circle)
        throw std::invalid_argument("kernel_M: same-circle pair; use kernel_M1 and the conjugation operator");
    return cross_circle_kernel(s, t, d, c).real();
}

/// Continuous part M1(s,t) = M(s,t) + cot((s-t)/2)/(2*pi) for s, t on one circle.
inline double kernel_M1(ParamPoint s, ParamPoint t, const CircleDomain&, const Coefficient& c) {
    if (s.circle != t.circle) throw std::invalid_argument("kernel_M1: points lie on different circles");
    return detail::same_circle_M1(s.t - t.t, c.ell);
}

} // namespace gcp
