#pragma once

#include "gcp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

namespace gcp {

using Complex = std::complex<double>;

inline constexpr double two_pi = 2.0 * std::numbers::pi;

struct Circle {
    Complex center;
    double radius = 1.0;
};

/// The unbounded domain exterior to m pairwise disjoint closed disks.
///
/// Each boundary circle is traversed clockwise, so the domain lies to the
/// left of the boundary. Circles are indexed from zero.
class CircleDomain {
public:
    std::size_t size() const noexcept { return circles_.size(); }
    const Circle& operator[](std::size_t j) const { return circles_[j]; }
    std::span<const Circle> circles() const noexcept { return circles_; }

    /// Near-touching pairs found during validation, as human-readable lines.
    const std::vector<std::string>& warnings() const noexcept { return warnings_; }

    double min_radius() const {
        double r = circles_.front().radius;
        for (const auto& c : circles_) r = std::min(r, c.radius);
        return r;
    }

    /// Smallest gap |z_j - z_k| - (r_j + r_k) over all pairs; +inf for m = 1.
    double min_gap() const {
        double gap = HUGE_VAL;
        for (std::size_t j = 0; j < size(); ++j)
            for (std::size_t k = j + 1; k < size(); ++k)
                gap = std::min(gap, std::abs(circles_[j].center - circles_[k].center) -
                                        circles_[j].radius - circles_[k].radius);
        return gap;
    }

private:
    friend CircleDomain validate_domain(std::vector<Circle> circles);
    std::vector<Circle> circles_;
    std::vector<std::string> warnings_;
};

/// Checks radii and strict disjointness of the closed disks.
///
/// Throws OverlapError naming the first offending pair, DomainError for an
/// empty list or a non-positive radius. Pairs whose gap is below a tenth of
/// the smaller radius are accepted but recorded in warnings().
inline CircleDomain validate_domain(std::vector<Circle> circles) {
    if (circles.empty()) throw DomainError("domain needs at least one circle");
    for (std::size_t j = 0; j < circles.size(); ++j) {
        const auto& c = circles[j];
        if (!(c.radius > 0.0) || !std::isfinite(c.radius))
            throw DomainError("circle " + std::to_string(j + 1) + " has non-positive radius " +
                              std::to_string(c.radius));
        if (!std::isfinite(c.center.real()) || !std::isfinite(c.center.imag()))
            throw DomainError("circle " + std::to_string(j + 1) + " has a non-finite center");
    }

    CircleDomain d;
    for (std::size_t j = 0; j < circles.size(); ++j) {
        for (std::size_t k = j + 1; k < circles.size(); ++k) {
            const double dist = std::abs(circles[j].center - circles[k].center);
            const double rsum = circles[j].radius + circles[k].radius;
            if (dist <= rsum) throw OverlapError(j, k, dist, rsum);
            const double gap = dist - rsum;
            const double rmin = std::min(circles[j].radius, circles[k].radius);
            if (gap < 0.1 * rmin)
                d.warnings_.push_back("circles " + std::to_string(j + 1) + " and " +
                                      std::to_string(k + 1) + " are nearly touching (gap " +
                                      std::to_string(gap) + " < 0.1 * min radius); expect poor conditioning");
        }
    }
    d.circles_ = std::move(circles);
    return d;
}

/// A boundary point: parameter t on circle `circle`.
struct ParamPoint {
    double t = 0.0;
    std::size_t circle = 0;
};

// eta_j(t) = z_j + r_j e^{-it}
inline Complex eta(ParamPoint p, const CircleDomain& d) {
    const auto& c = d[p.circle];
    return c.center + c.radius * std::polar(1.0, -p.t);
}

struct EtaDerivatives {
    Complex first;
    Complex second;
};

// Both derivatives share the factor r e^{-it}, so second/first is exactly -i.
inline EtaDerivatives eta_derivatives(ParamPoint p, const CircleDomain& d) {
    const Complex e = d[p.circle].radius * std::polar(1.0, -p.t);
    return {Complex(0.0, -1.0) * e, -e};
}

/// Uniform periodic grid: n nodes t_i = 2*pi*i/n on each of m circles.
///
/// Flat index of (circle j, node i) is j*n + i.
class Grid {
public:
    Grid() = default;
    Grid(std::size_t circles, std::size_t n) : m_(circles), n_(n) {}

    std::size_t circles() const noexcept { return m_; }
    std::size_t nodes_per_circle() const noexcept { return n_; }
    std::size_t size() const noexcept { return m_ * n_; }
    std::size_t index(std::size_t j, std::size_t i) const noexcept { return j * n_ + i; }

    double node(std::size_t i) const noexcept {
        return two_pi * static_cast<double>(i) / static_cast<double>(n_);
    }
    double weight() const noexcept { return two_pi / static_cast<double>(n_); }
    ParamPoint point(std::size_t j, std::size_t i) const noexcept { return {node(i), j}; }

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    std::size_t m_ = 0;
    std::size_t n_ = 0;
};

inline Grid uniform_grid(const CircleDomain& d, std::size_t n) {
    if (n < 4) throw GridError("grid size n=" + std::to_string(n) + " is too small (need n >= 4)");
    if (n % 2 != 0) throw GridError("grid size n=" + std::to_string(n) + " must be even");
    return Grid(d.size(), n);
}

} // namespace gcp
