#pragma once

#include "gcp/errors.hpp"
#include "gcp/geometry.hpp"
#include "gcp/kernels.hpp"
#include "gcp/parallel.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

#include <cmath>
#include <complex>
#include <span>
#include <string>
#include <vector>

namespace gcp {

/// Samples of a boundary function on a Grid, stored circle-major.
template <typename Scalar>
class GridFunction {
public:
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    GridFunction() = default;
    explicit GridFunction(const Grid& grid) : grid_(grid), values_(Vector::Zero(grid.size())) {}
    GridFunction(const Grid& grid, Vector values) : grid_(grid), values_(std::move(values)) {
        if (static_cast<std::size_t>(values_.size()) != grid_.size())
            throw ShapeError("grid function has " + std::to_string(values_.size()) +
                             " samples, grid needs " + std::to_string(grid_.size()));
    }

    /// Samples f(t_i) of a callable f(ParamPoint) at every node.
    template <typename F>
    static GridFunction sample(const Grid& grid, F&& f) {
        GridFunction g(grid);
        for (std::size_t j = 0; j < grid.circles(); ++j)
            for (std::size_t i = 0; i < grid.nodes_per_circle(); ++i)
                g(j, i) = static_cast<Scalar>(f(grid.point(j, i)));
        return g;
    }

    const Grid& grid() const noexcept { return grid_; }
    const Vector& values() const noexcept { return values_; }
    Vector& values() noexcept { return values_; }

    Scalar& operator()(std::size_t j, std::size_t i) { return values_[grid_.index(j, i)]; }
    Scalar operator()(std::size_t j, std::size_t i) const { return values_[grid_.index(j, i)]; }

    auto circle(std::size_t j) const {
        return values_.segment(grid_.index(j, 0), grid_.nodes_per_circle());
    }
    auto circle(std::size_t j) { return values_.segment(grid_.index(j, 0), grid_.nodes_per_circle()); }

    double sup_norm() const { return values_.size() ? values_.cwiseAbs().maxCoeff() : 0.0; }
    bool all_finite() const { return values_.allFinite(); }

    GridFunction& operator+=(const GridFunction& o) {
        check_same_grid(o);
        values_ += o.values_;
        return *this;
    }
    GridFunction& operator-=(const GridFunction& o) {
        check_same_grid(o);
        values_ -= o.values_;
        return *this;
    }
    GridFunction& operator*=(Scalar s) {
        values_ *= s;
        return *this;
    }
    friend GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
    friend GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
    friend GridFunction operator*(Scalar s, GridFunction a) { return a *= s; }

private:
    void check_same_grid(const GridFunction& o) const {
        if (!(grid_ == o.grid_)) throw ShapeError("grid functions live on different grids");
    }

    Grid grid_;
    Vector values_;
};

using RealGridFunction = GridFunction<double>;
using ComplexGridFunction = GridFunction<Complex>;

/// Nystrom matrix of an integral operator on a Grid.
struct DenseOperator {
    Eigen::MatrixXd matrix;
    Grid grid;

    RealGridFunction apply(const RealGridFunction& f) const {
        if (!(f.grid() == grid)) throw ShapeError("operator and grid function use different grids");
        return RealGridFunction(grid, matrix * f.values());
    }
};

/// Trapezoidal Nystrom discretization of the generalized Neumann operator:
/// entry ((j,i),(k,p)) = (2*pi/n) * N((t_i,j), (t_p,k)).
inline DenseOperator assemble_N(const CircleDomain& d, const Coefficient& c, const Grid& g) {
    const auto size = static_cast<Eigen::Index>(g.size());
    DenseOperator op{Eigen::MatrixXd(size, size), g};
    const std::size_t n = g.nodes_per_circle();
    const double w = g.weight();
    // Row-major fill per row; each row is written by one thread only.
    parallel_for(g.size(), [&](std::size_t row) {
        const ParamPoint s = g.point(row / n, row % n);
        for (std::size_t col = 0; col < g.size(); ++col) {
            const ParamPoint t = g.point(col / n, col % n);
            op.matrix(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) =
                w * kernel_N(s, t, d, c);
        }
    });
    return op;
}

/// Periodic conjugation (the cotangent singular integral
/// -(1/2pi) PV int cot((s-t)/2) f(t) dt) applied to the trigonometric
/// interpolant of equispaced samples on [0, 2pi).
///
/// Fourier mode k is multiplied by i*sgn(k); the mean and the Nyquist mode are
/// dropped. Exact for trigonometric polynomials of degree below n/2.
inline Eigen::VectorXd conjugate_periodic(std::span<const double> samples) {
    const std::size_t n = samples.size();
    if (n == 0 || n % 2 != 0)
        throw GridError("conjugate_periodic needs an even number of samples, got " + std::to_string(n));

    std::vector<double> time(samples.begin(), samples.end());
    std::vector<Complex> freq;
    Eigen::FFT<double> fft;
    fft.fwd(freq, time);

    const std::size_t half = n / 2;
    freq[0] = 0.0;
    freq[half] = 0.0;
    const Complex i_unit(0.0, 1.0);
    for (std::size_t k = 1; k < half; ++k) {
        freq[k] *= i_unit;
        freq[n - k] *= -i_unit;
    }

    std::vector<Complex> back;
    fft.inv(back, freq);
    Eigen::VectorXd out(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) out[static_cast<Eigen::Index>(i)] = back[i].real();
    return out;
}

/// Applies the singular operator M to grid samples.
///
/// Cross-circle blocks use the trapezoidal rule on kernel_M. On the diagonal
/// blocks M splits into the cotangent part, applied with conjugate_periodic,
/// plus the continuous kernel_M1 integrated by the trapezoidal rule.
inline RealGridFunction apply_M(const RealGridFunction& gamma, const CircleDomain& d, const Coefficient& c) {
    const Grid& g = gamma.grid();
    if (g.circles() != d.size()) throw ShapeError("grid function and domain disagree on circle count");
    const std::size_t m = g.circles();
    const std::size_t n = g.nodes_per_circle();
    const double w = g.weight();

    RealGridFunction out(g);
    for (std::size_t j = 0; j < m; ++j) {
        const Eigen::VectorXd own = gamma.circle(j);
        out.circle(j) = conjugate_periodic(std::span<const double>(own.data(), n));
    }

    parallel_for(g.size(), [&](std::size_t row) {
        const std::size_t j = row / n;
        const ParamPoint s = g.point(j, row % n);
        double sum = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            for (std::size_t p = 0; p < n; ++p) {
                const ParamPoint t = g.point(k, p);
                const double kern = (k == j) ? kernel_M1(s, t, d, c) : kernel_M(s, t, d, c);
                sum += kern * gamma(k, p);
            }
        }
        out.values()[static_cast<Eigen::Index>(row)] += w * sum;
    });
    return out;
}

/// LU factorization of I - N with a condition check.
///
/// Construction throws NearSingularError when the estimated 1-norm condition
/// number exceeds max_condition.
class FredholmSolver {
public:
    static constexpr double default_max_condition = 1e12;

    explicit FredholmSolver(const DenseOperator& n_op, double max_condition = default_max_condition)
        : grid_(n_op.grid),
          system_(Eigen::MatrixXd::Identity(n_op.matrix.rows(), n_op.matrix.cols()) - n_op.matrix),
          lu_(system_) {
        const double rcond = lu_.rcond();
        condition_ = rcond > 0.0 ? 1.0 / rcond : HUGE_VAL;
        if (!(condition_ <= max_condition))
            throw NearSingularError("I - N is numerically singular (condition estimate " +
                                        std::to_string(condition_) + " > " + std::to_string(max_condition) +
                                        "); check geometry and grid size",
                                    condition_);
    }

    double condition_estimate() const noexcept { return condition_; }
    const Eigen::MatrixXd& system() const noexcept { return system_; }

    /// Solves (I - N) mu = rhs with one step of iterative refinement.
    RealGridFunction solve(const RealGridFunction& rhs) const {
        if (!(rhs.grid() == grid_)) throw ShapeError("right-hand side lives on a different grid");
        Eigen::VectorXd mu = lu_.solve(rhs.values());
        const Eigen::VectorXd residual = rhs.values() - system_ * mu;
        mu += lu_.solve(residual);
        return RealGridFunction(grid_, std::move(mu));
    }

    double residual(const RealGridFunction& mu, const RealGridFunction& rhs) const {
        return (system_ * mu.values() - rhs.values()).cwiseAbs().maxCoeff();
    }

private:
    Grid grid_;
    Eigen::MatrixXd system_;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
    double condition_ = 0.0;
};

inline RealGridFunction solve_fredholm(const DenseOperator& n_op, const RealGridFunction& rhs) {
    return FredholmSolver(n_op).solve(rhs);
}

} // namespace gcp
