#pragma once

#include "gcp/errors.hpp"
#include "gcp/geometry.hpp"
#include "gcp/kernels.hpp"
#include "gcp/nystrom.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

#include <cmath>
#include <complex>
#include <span>
#include <string>
#include <vector>

namespace gcp {

/// Data of one general conjugation problem
///   Re[exp(i lambda_j) exp(i ell t) Psi(eta_j(t))] = gamma_j(t) + h_j(t),
/// with gamma sampled on a uniform grid.
struct ProblemSpec {
    CircleDomain domain;
    Coefficient coeff;
    RealGridFunction gamma;

    const Grid& grid() const noexcept { return gamma.grid(); }
    std::size_t n() const noexcept { return gamma.grid().nodes_per_circle(); }
};

inline ProblemSpec make_problem(CircleDomain domain, Coefficient coeff, RealGridFunction gamma) {
    validate_coefficient(coeff, domain);
    const Grid& g = gamma.grid();
    if (g.circles() != domain.size())
        throw ShapeError("gamma covers " + std::to_string(g.circles()) + " circles, domain has " +
                         std::to_string(domain.size()));
    uniform_grid(domain, g.nodes_per_circle());
    if (2 * static_cast<std::size_t>(coeff.ell) >= g.nodes_per_circle())
        throw GridError("grid size n=" + std::to_string(g.nodes_per_circle()) +
                        " cannot resolve modes up to ell=" + std::to_string(coeff.ell) + " (need n > 2*ell)");
    if (!gamma.all_finite()) throw ShapeError("gamma contains non-finite samples");
    return ProblemSpec{std::move(domain), std::move(coeff), std::move(gamma)};
}

/// The (2*ell+1)*m real constants a_{j0..jl}, b_{j1..jl}.
class Constants {
public:
    Constants() = default;
    Constants(std::size_t circles, int ell)
        : ell_(ell),
          a_(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(circles), ell + 1)),
          b_(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(circles), ell)) {}

    int ell() const noexcept { return ell_; }
    std::size_t circles() const noexcept { return static_cast<std::size_t>(a_.rows()); }

    double& a(std::size_t j, int k) { return a_(static_cast<Eigen::Index>(j), k); }
    double a(std::size_t j, int k) const { return a_(static_cast<Eigen::Index>(j), k); }
    // k runs from 1 to ell.
    double& b(std::size_t j, int k) { return b_(static_cast<Eigen::Index>(j), k - 1); }
    double b(std::size_t j, int k) const { return b_(static_cast<Eigen::Index>(j), k - 1); }

    const Eigen::MatrixXd& a_table() const noexcept { return a_; }
    const Eigen::MatrixXd& b_table() const noexcept { return b_; }

    /// Largest absolute difference over all constants.
    double max_difference(const Constants& o) const {
        if (o.ell_ != ell_ || o.circles() != circles()) throw ShapeError("constants tables differ in shape");
        double diff = (a_ - o.a_).cwiseAbs().maxCoeff();
        if (b_.size()) diff = std::max(diff, (b_ - o.b_).cwiseAbs().maxCoeff());
        return diff;
    }

private:
    int ell_ = 0;
    Eigen::MatrixXd a_;
    Eigen::MatrixXd b_;
};

/// Samples of psi_j(t) = -sum_{k=0}^{ell} a_{jk} cos(kt) + sum_{k=1}^{ell} b_{jk} sin(kt).
inline RealGridFunction constants_to_boundary(const Constants& c, const Grid& g) {
    return RealGridFunction::sample(g, [&](ParamPoint p) {
        double v = -c.a(p.circle, 0);
        for (int k = 1; k <= c.ell(); ++k)
            v += -c.a(p.circle, k) * std::cos(k * p.t) + c.b(p.circle, k) * std::sin(k * p.t);
        return v;
    });
}

struct Solution {
    ProblemSpec problem;
    RealGridFunction mu;
    RealGridFunction h;
    ComplexGridFunction psi_boundary;
    Constants constants;
    double condition_estimate = 0.0;
    double fredholm_residual = 0.0;
};

/// h = [M mu - (I - N) gamma] / 2.
inline RealGridFunction compute_h(const RealGridFunction& mu, const RealGridFunction& gamma,
                                  const DenseOperator& n_op, const CircleDomain& d, const Coefficient& c) {
    if (!(mu.grid() == gamma.grid()) || !(gamma.grid() == n_op.grid))
        throw ShapeError("compute_h: mu, gamma and N must share one grid");
    RealGridFunction h = apply_M(mu, d, c);
    h -= gamma;
    h += n_op.apply(gamma);
    h *= 0.5;
    return h;
}

/// Trapezoidal Fourier coefficients of h, mapped to the constants:
/// a_{j0} = -mean(h_j), a_{jk} = -(1/pi) int h_j cos kt, b_{jk} = (1/pi) int h_j sin kt.
inline Constants compute_constants(const RealGridFunction& h, int ell) {
    const Grid& g = h.grid();
    const std::size_t n = g.nodes_per_circle();
    Constants out(g.circles(), ell);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t j = 0; j < g.circles(); ++j) {
        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) mean += h(j, i);
        out.a(j, 0) = -mean * inv_n;
        for (int k = 1; k <= ell; ++k) {
            double cs = 0.0;
            double sn = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double t = g.node(i);
                cs += h(j, i) * std::cos(k * t);
                sn += h(j, i) * std::sin(k * t);
            }
            out.a(j, k) = -2.0 * inv_n * cs;
            out.b(j, k) = 2.0 * inv_n * sn;
        }
    }
    return out;
}

namespace detail {

// Splits each circle's samples into Fourier modes |k| <= ell and the rest.
inline void split_modes(const RealGridFunction& f, int ell, RealGridFunction* low, RealGridFunction* high) {
    const Grid& g = f.grid();
    const std::size_t n = g.nodes_per_circle();
    Eigen::FFT<double> fft;
    if (low) *low = RealGridFunction(g);
    if (high) *high = RealGridFunction(g);
    for (std::size_t j = 0; j < g.circles(); ++j) {
        std::vector<double> time(n);
        for (std::size_t i = 0; i < n; ++i) time[i] = f(j, i);
        std::vector<Complex> freq;
        fft.fwd(freq, time);
        std::vector<Complex> lowf(n, 0.0);
        for (std::size_t k = 0; k < n; ++k) {
            const std::size_t wrapped = std::min(k, n - k);
            if (wrapped <= static_cast<std::size_t>(std::max(ell, 0))) lowf[k] = freq[k];
        }
        std::vector<Complex> back;
        fft.inv(back, lowf);
        for (std::size_t i = 0; i < n; ++i) {
            if (low) (*low)(j, i) = back[i].real();
            if (high) (*high)(j, i) = f(j, i) - back[i].real();
        }
    }
}

} // namespace detail

/// Projection onto per-circle trigonometric polynomials of degree <= ell.
inline RealGridFunction bandlimit_projection(const RealGridFunction& f, int ell) {
    RealGridFunction low;
    detail::split_modes(f, ell, &low, nullptr);
    return low;
}

/// Sup norm of the modes |k| > ell of h (worst circle) relative to
/// max(sup norm of h, reference). Zero for h = 0.
///
/// Pass the data scale (e.g. sup norm of gamma) as `reference` when h itself
/// may vanish up to rounding; otherwise the ratio of two rounding-level
/// quantities is reported.
inline double residual_bandlimit(const RealGridFunction& h, int ell, double reference = 0.0) {
    const double scale = std::max(h.sup_norm(), reference);
    if (scale == 0.0) return 0.0;
    RealGridFunction high;
    detail::split_modes(h, ell, nullptr, &high);
    return high.sup_norm() / scale;
}

inline ComplexGridFunction sample_coefficient(const Grid& g, const Coefficient& c) {
    return ComplexGridFunction::sample(g, [&](ParamPoint p) { return coeff_A(p, c); });
}

/// h recovered independently of the h formula: the band-limited part of
/// Re[A Psi] - gamma for given boundary values of Psi.
inline RealGridFunction h_from_boundary(const ComplexGridFunction& psi_boundary, const RealGridFunction& gamma,
                                        const Coefficient& c) {
    const Grid& g = gamma.grid();
    const ComplexGridFunction a = sample_coefficient(g, c);
    RealGridFunction residual(g, (a.values().cwiseProduct(psi_boundary.values())).real() - gamma.values());
    return bandlimit_projection(residual, c.ell);
}

/// Full pipeline: mu from (I - N) mu = -M gamma, then h, Psi on the boundary
/// and the constants.
inline Solution solve_gcp(const ProblemSpec& p) {
    const Grid& g = p.grid();
    if (g.circles() != p.domain.size() || p.coeff.lambdas.size() != p.domain.size())
        throw ShapeError("problem arrays do not match the number of circles");

    const DenseOperator n_op = assemble_N(p.domain, p.coeff, g);
    const FredholmSolver solver(n_op);

    RealGridFunction rhs = apply_M(p.gamma, p.domain, p.coeff);
    rhs *= -1.0;

    Solution s{p, solver.solve(rhs), {}, {}, {}, solver.condition_estimate(), 0.0};
    s.fredholm_residual = solver.residual(s.mu, rhs);
    s.h = compute_h(s.mu, p.gamma, n_op, p.domain, p.coeff);

    const ComplexGridFunction a = sample_coefficient(g, p.coeff);
    ComplexGridFunction psi(g);
    const Complex i_unit(0.0, 1.0);
    for (Eigen::Index r = 0; r < static_cast<Eigen::Index>(g.size()); ++r)
        psi.values()[r] = (p.gamma.values()[r] + s.h.values()[r] + i_unit * s.mu.values()[r]) / a.values()[r];
    s.psi_boundary = std::move(psi);
    s.constants = compute_constants(s.h, p.coeff.ell);
    return s;
}

/// max over nodes of |Re[A Psi] - gamma - h|.
inline double boundary_residual(const Solution& s) {
    const ComplexGridFunction a = sample_coefficient(s.problem.grid(), s.problem.coeff);
    const Eigen::VectorXd lhs = a.values().cwiseProduct(s.psi_boundary.values()).real();
    return (lhs - s.problem.gamma.values() - s.h.values()).cwiseAbs().maxCoeff();
}

enum class PointStatus { exterior, near_boundary, inside };

/// Classifies z against the closed disks and the quadrature margin
/// 3 * (2*pi*r_j/n) outside each circle.
inline PointStatus classify_point(const CircleDomain& d, std::size_t n, Complex z) {
    PointStatus status = PointStatus::exterior;
    for (const auto& c : d.circles()) {
        const double dist = std::abs(z - c.center) - c.radius;
        if (!(dist > 0.0)) return PointStatus::inside;
        if (dist < 3.0 * two_pi * c.radius / static_cast<double>(n)) status = PointStatus::near_boundary;
    }
    return status;
}

/// Psi(z) from the clockwise Cauchy integral of boundary values psi_boundary,
/// discretized with the trapezoidal rule. Accuracy degrades near the boundary.
///
/// Throws PointError for points inside or on a disk. Indices of points within
/// the near-boundary margin are appended to `near_boundary` when given.
inline std::vector<Complex> cauchy_evaluate(const CircleDomain& d, const ComplexGridFunction& psi_boundary,
                                            std::span<const Complex> points,
                                            std::vector<std::size_t>* near_boundary = nullptr) {
    const Grid& g = psi_boundary.grid();
    if (g.circles() != d.size()) throw ShapeError("boundary values and domain disagree on circle count");
    const std::size_t n = g.nodes_per_circle();

    std::vector<Complex> nodes(g.size());
    std::vector<Complex> weighted(g.size());
    for (std::size_t j = 0; j < g.circles(); ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            const ParamPoint p = g.point(j, i);
            const std::size_t r = g.index(j, i);
            nodes[r] = eta(p, d);
            weighted[r] = g.weight() * psi_boundary(j, i) * eta_derivatives(p, d).first;
        }
    }

    for (std::size_t q = 0; q < points.size(); ++q) {
        const PointStatus st = classify_point(d, n, points[q]);
        if (st == PointStatus::inside)
            throw PointError("point " + std::to_string(q + 1) + " (" + std::to_string(points[q].real()) + ", " +
                             std::to_string(points[q].imag()) + ") lies inside or on a disk");
        if (st == PointStatus::near_boundary && near_boundary) near_boundary->push_back(q);
    }

    std::vector<Complex> out(points.size());
    const Complex scale = 1.0 / Complex(0.0, two_pi);
    parallel_for(points.size(), [&](std::size_t q) {
        Complex sum = 0.0;
        for (std::size_t r = 0; r < nodes.size(); ++r) sum += weighted[r] / (nodes[r] - points[q]);
        out[q] = scale * sum;
    });
    return out;
}

inline std::vector<Complex> evaluate_interior(const Solution& s, std::span<const Complex> points,
                                              std::vector<std::size_t>* near_boundary = nullptr) {
    return cauchy_evaluate(s.problem.domain, s.psi_boundary, points, near_boundary);
}

} // namespace gcp
