#pragma once

// Manufactured problems with known solutions, and the null-space diagnostics
// of I + N and I - N.

#include "gcp/errors.hpp"
#include "gcp/geometry.hpp"
#include "gcp/kernels.hpp"
#include "gcp/nystrom.hpp"
#include "gcp/solver.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

namespace gcp {

/// Seeded uniform generator. mt19937_64's output sequence is fixed by the C++
/// standard and the conversion to [0,1) is done here, so draws are identical
/// on every conforming platform.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

private:
    std::mt19937_64 engine_;
};

/// Rational test function Psi*(z) = sum_j sum_{p=1}^{P} c_{jp} / (z - z_j)^p.
struct PoleExpansion {
    std::vector<Complex> centers;
    // residues[j][p-1] = c_{jp}
    std::vector<std::vector<Complex>> residues;

    Complex operator()(Complex z) const {
        Complex sum = 0.0;
        for (std::size_t j = 0; j < centers.size(); ++j) {
            const Complex inv = 1.0 / (z - centers[j]);
            Complex power = inv;
            for (const Complex& c : residues[j]) {
                sum += c * power;
                power *= inv;
            }
        }
        return sum;
    }
};

struct ManufacturedProblem {
    ProblemSpec spec;
    PoleExpansion psi_exact;
    Constants constants_exact;
    std::uint64_t seed = 0;

    /// h implied by the exact constants (equal to the unknown correction function).
    RealGridFunction h_exact() const { return constants_to_boundary(constants_exact, spec.grid()); }
};

/// Boundary data gamma_j(t) = Re[A Psi*(eta_j(t))] + a_{j0} + sum_k Re[(a_{jk} + i b_{jk}) e^{ikt}].
inline RealGridFunction manufactured_gamma(const CircleDomain& d, const Coefficient& c, const Grid& g,
                                           const PoleExpansion& psi, const Constants& k) {
    return RealGridFunction::sample(g, [&](ParamPoint p) {
        double v = (coeff_A(p, c) * psi(eta(p, d))).real() + k.a(p.circle, 0);
        for (int q = 1; q <= k.ell(); ++q)
            v += (Complex(k.a(p.circle, q), k.b(p.circle, q)) * std::polar(1.0, q * p.t)).real();
        return v;
    });
}

/// Draws |c_{jp}| <= 1 and constants in [-1, 1] from `seed`, then samples
/// consistent boundary data on an n-point grid.
inline ManufacturedProblem manufacture(const CircleDomain& d, const Coefficient& c, std::uint64_t seed, int poles,
                                       std::size_t n) {
    if (poles < 1) throw std::invalid_argument("manufacture: need at least one pole order (P >= 1)");
    validate_coefficient(c, d);
    const Grid g = uniform_grid(d, n);
    SeededRng rng(seed);

    PoleExpansion psi;
    for (const auto& circle : d.circles()) {
        psi.centers.push_back(circle.center);
        std::vector<Complex> res;
        for (int p = 0; p < poles; ++p) {
            const double modulus = rng.uniform();
            const double angle = rng.uniform(0.0, two_pi);
            res.push_back(std::polar(modulus, angle));
        }
        psi.residues.push_back(std::move(res));
    }

    Constants k(d.size(), c.ell);
    for (std::size_t j = 0; j < d.size(); ++j) {
        for (int q = 0; q <= c.ell; ++q) k.a(j, q) = rng.uniform(-1.0, 1.0);
        for (int q = 1; q <= c.ell; ++q) k.b(j, q) = rng.uniform(-1.0, 1.0);
    }

    RealGridFunction gamma = manufactured_gamma(d, c, g, psi, k);
    return ManufacturedProblem{make_problem(d, c, std::move(gamma)), std::move(psi), std::move(k), seed};
}

/// Radii in [0.5, 1], centers placed so that |z_j - z_k| >= 1.5 (r_j + r_k).
inline CircleDomain random_domain(std::size_t m, std::uint64_t seed) {
    if (m == 0) throw DomainError("random_domain: need at least one circle");
    SeededRng rng(seed);
    const double box = 2.0 + 1.5 * static_cast<double>(m);
    std::vector<Circle> circles;
    int attempts = 0;
    while (circles.size() < m) {
        if (++attempts > 100000) throw DomainError("random_domain: could not place circles");
        Circle c{Complex(rng.uniform(-box, box), rng.uniform(-box, box)), rng.uniform(0.5, 1.0)};
        bool ok = true;
        for (const auto& o : circles)
            if (std::abs(c.center - o.center) < 1.5 * (c.radius + o.radius)) ok = false;
        if (ok) circles.push_back(c);
    }
    return validate_domain(std::move(circles));
}

/// Evaluation points at distance >= margin from every circle, drawn from a box
/// around the domain.
inline std::vector<Complex> exterior_sample_points(const CircleDomain& d, std::size_t count, double margin,
                                                   std::uint64_t seed) {
    double xmin = HUGE_VAL, xmax = -HUGE_VAL, ymin = HUGE_VAL, ymax = -HUGE_VAL, rmax = 0.0;
    for (const auto& c : d.circles()) {
        xmin = std::min(xmin, c.center.real() - c.radius);
        xmax = std::max(xmax, c.center.real() + c.radius);
        ymin = std::min(ymin, c.center.imag() - c.radius);
        ymax = std::max(ymax, c.center.imag() + c.radius);
        rmax = std::max(rmax, c.radius);
    }
    const double pad = margin + 2.0 * rmax;
    SeededRng rng(seed);
    std::vector<Complex> pts;
    while (pts.size() < count) {
        const Complex z(rng.uniform(xmin - pad, xmax + pad), rng.uniform(ymin - pad, ymax + pad));
        bool ok = true;
        for (const auto& c : d.circles())
            if (std::abs(z - c.center) - c.radius < margin) ok = false;
        if (ok) pts.push_back(z);
    }
    return pts;
}

/// Random element of the span of cos(kt), sin(kt), k <= ell, independently on each circle.
inline RealGridFunction random_trig_polynomial(const Grid& g, int ell, std::uint64_t seed) {
    SeededRng rng(seed);
    std::vector<std::vector<double>> cs(g.circles()), sn(g.circles());
    for (std::size_t j = 0; j < g.circles(); ++j) {
        for (int k = 0; k <= ell; ++k) cs[j].push_back(rng.uniform(-1.0, 1.0));
        for (int k = 0; k <= ell; ++k) sn[j].push_back(k == 0 ? 0.0 : rng.uniform(-1.0, 1.0));
    }
    return RealGridFunction::sample(g, [&](ParamPoint p) {
        double v = 0.0;
        for (int k = 0; k <= ell; ++k) v += cs[p.circle][k] * std::cos(k * p.t) + sn[p.circle][k] * std::sin(k * p.t);
        return v;
    });
}

struct VerifyReport {
    double boundary_error = 0.0;
    double constants_error = 0.0;
    double interior_error = 0.0;
    double h_error = 0.0;
    std::vector<Complex> interior_points;

    double max_error() const { return std::max({boundary_error, constants_error, interior_error, h_error}); }
};

/// Sup-norm errors of a solution against the manufactured truth, including
/// 10 seeded interior samples at distance >= 0.5 * min radius from the circles.
inline VerifyReport verify(const ManufacturedProblem& mp, const Solution& s) {
    const CircleDomain& d = mp.spec.domain;
    const Grid& g = mp.spec.grid();
    VerifyReport r;
    for (std::size_t j = 0; j < g.circles(); ++j)
        for (std::size_t i = 0; i < g.nodes_per_circle(); ++i)
            r.boundary_error = std::max(r.boundary_error,
                                        std::abs(s.psi_boundary(j, i) - mp.psi_exact(eta(g.point(j, i), d))));
    r.constants_error = s.constants.max_difference(mp.constants_exact);
    r.h_error = (s.h - mp.h_exact()).sup_norm();

    r.interior_points = exterior_sample_points(d, 10, 0.5 * d.min_radius(), mp.seed ^ 0x9e3779b97f4a7c15ULL);
    const std::vector<Complex> values = evaluate_interior(s, r.interior_points);
    for (std::size_t q = 0; q < values.size(); ++q)
        r.interior_error = std::max(r.interior_error, std::abs(values[q] - mp.psi_exact(r.interior_points[q])));
    return r;
}

struct NullspaceReport {
    std::size_t expected_plus = 0;   // m (2 ell + 1)
    std::size_t plus_dim = 0;        // singular values of I + N below threshold
    std::size_t minus_dim = 0;       // singular values of I - N below threshold
    double plus_gap = 0.0;
    double minus_gap = 0.0;
    double plus_sigma_max = 0.0;
    double minus_sigma_max = 0.0;
    double minus_sigma_min = 0.0;
    double minus_condition = 0.0;    // sigma_max / sigma_min of I - N

    static constexpr double relative_threshold = 1e-6;
    static constexpr double required_gap = 1e3;

    bool gaps_ok() const { return plus_gap >= required_gap && minus_gap >= required_gap; }
    bool matches_theory() const { return plus_dim == expected_plus && minus_dim == 0; }
};

namespace detail {

struct RankCount {
    std::size_t below = 0;
    double gap = 0.0;
    double sigma_max = 0.0;
    double sigma_min = 0.0;
};

// Counts singular values below relative_threshold * sigma_max. The gap is the
// ratio of the smallest uncounted value to the largest counted one, or to the
// threshold itself when nothing is counted.
inline RankCount count_small_singular_values(const Eigen::MatrixXd& a) {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(a);
    const Eigen::VectorXd& sv = svd.singularValues(); // descending
    RankCount rc;
    rc.sigma_max = sv.size() ? sv[0] : 0.0;
    rc.sigma_min = sv.size() ? sv[sv.size() - 1] : 0.0;
    const double threshold = NullspaceReport::relative_threshold * rc.sigma_max;
    Eigen::Index first_small = sv.size();
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv[i] < threshold) {
            first_small = i;
            break;
        }
    }
    rc.below = static_cast<std::size_t>(sv.size() - first_small);
    if (first_small == 0) {
        rc.gap = 0.0;
    } else {
        const double smallest_kept = sv[first_small - 1];
        const double largest_small = rc.below ? sv[first_small] : threshold;
        rc.gap = largest_small > 0.0 ? smallest_kept / largest_small : std::numeric_limits<double>::infinity();
    }
    return rc;
}

} // namespace detail

/// Singular-value diagnostics of the Nystrom matrices I + N and I - N.
inline NullspaceReport nullspace_report(const CircleDomain& d, const Coefficient& c, std::size_t n) {
    validate_coefficient(c, d);
    const Grid g = uniform_grid(d, n);
    const DenseOperator op = assemble_N(d, c, g);
    const auto id = Eigen::MatrixXd::Identity(op.matrix.rows(), op.matrix.cols());

    const detail::RankCount plus = detail::count_small_singular_values(id + op.matrix);
    const detail::RankCount minus = detail::count_small_singular_values(id - op.matrix);

    NullspaceReport r;
    r.expected_plus = c.constant_count();
    r.plus_dim = plus.below;
    r.minus_dim = minus.below;
    r.plus_gap = plus.gap;
    r.minus_gap = minus.gap;
    r.plus_sigma_max = plus.sigma_max;
    r.minus_sigma_max = minus.sigma_max;
    r.minus_sigma_min = minus.sigma_min;
    r.minus_condition = minus.sigma_min > 0.0 ? minus.sigma_max / minus.sigma_min : HUGE_VAL;
    return r;
}

struct NullspaceDims {
    std::size_t plus;   // dim Null(I + N)
    std::size_t minus;  // dim Null(I - N)
};

/// Numerical null-space dimensions of I + N and I - N. Requires n >= 16 (ell + 1).
/// Throws SpectralGapError if either count lacks a 10^3 spectral gap.
inline NullspaceDims nullspace_dims(const CircleDomain& d, const Coefficient& c, std::size_t n) {
    if (n < 16 * static_cast<std::size_t>(c.ell + 1))
        throw GridError("nullspace_dims needs n >= 16 (ell + 1) = " + std::to_string(16 * (c.ell + 1)));
    const NullspaceReport r = nullspace_report(d, c, n);
    if (!r.gaps_ok())
        throw SpectralGapError("ambiguous null-space count: I+N has " + std::to_string(r.plus_dim) +
                               " small singular values (gap " + std::to_string(r.plus_gap) + "), I-N has " +
                               std::to_string(r.minus_dim) + " (gap " + std::to_string(r.minus_gap) +
                               "); required gap 1e3");
    return {r.plus_dim, r.minus_dim};
}

} // namespace gcp
