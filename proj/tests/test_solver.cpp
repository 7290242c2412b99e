#include "gcp/oracle.hpp"
#include "gcp/solver.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace gcp;

namespace {
constexpr double pi = std::numbers::pi;

CircleDomain unit_disk() { return validate_domain({{Complex(0, 0), 1.0}}); }
CircleDomain pair() { return validate_domain({{Complex(-2, 0), 1.0}, {Complex(2, 0), 1.0}}); }

ProblemSpec one_over_z(std::size_t n) {
    const CircleDomain d = unit_disk();
    const Grid g = uniform_grid(d, n);
    return make_problem(d, Coefficient{0, {0.0}}, RealGridFunction::sample(g, [](ParamPoint p) {
                            return std::cos(p.t);
                        }));
}
} // namespace

TEST(MakeProblem, RejectsUnderresolvedGridAndNonFiniteData) {
    const CircleDomain d = unit_disk();
    const Grid g = uniform_grid(d, 4);
    EXPECT_THROW(make_problem(d, Coefficient{2, {0.0}}, RealGridFunction(g)), GridError);
    RealGridFunction bad(uniform_grid(d, 16));
    bad(0, 3) = std::nan("");
    EXPECT_THROW(make_problem(d, Coefficient{0, {0.0}}, bad), ShapeError);
}

TEST(SolveGcp, ZeroDataGivesZeroSolution) {
    const CircleDomain d = pair();
    const ProblemSpec p = make_problem(d, Coefficient{1, {0.4, -0.9}}, RealGridFunction(uniform_grid(d, 64)));
    const Solution s = solve_gcp(p);
    EXPECT_LE(s.mu.sup_norm(), 1e-12);
    EXPECT_LE(s.h.sup_norm(), 1e-12);
    EXPECT_LE(s.psi_boundary.sup_norm(), 1e-12);
    EXPECT_LE(s.constants.a_table().cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LE(s.constants.b_table().cwiseAbs().maxCoeff(), 1e-12);
}

TEST(SolveGcp, OneOverZOnUnitDisk) {
    const Solution s = solve_gcp(one_over_z(64));
    const Grid& g = s.problem.grid();
    for (std::size_t i = 0; i < g.nodes_per_circle(); ++i) {
        const double t = g.node(i);
        EXPECT_NEAR(std::abs(s.psi_boundary(0, i) - std::polar(1.0, t)), 0.0, 1e-13);
        EXPECT_NEAR(s.mu(0, i), std::sin(t), 1e-13);
    }
    EXPECT_LE(s.h.sup_norm(), 1e-13);
    EXPECT_NEAR(s.constants.a(0, 0), 0.0, 1e-13);

    const std::vector<Complex> z{Complex(2, 0), Complex(0, -3)};
    const std::vector<Complex> v = evaluate_interior(s, z);
    EXPECT_NEAR(std::abs(v[0] - 0.5), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(v[1] - 1.0 / Complex(0, -3)), 0.0, 1e-12);
}

TEST(SolveGcp, ManufacturedTwoCirclesRecovered) {
    const ManufacturedProblem mp = manufacture(pair(), Coefficient{1, {0.3, -1.1}}, 7, 2, 256);
    const Solution s = solve_gcp(mp.spec);
    const VerifyReport r = verify(mp, s);
    EXPECT_LT(r.boundary_error, 1e-8);
    EXPECT_LT(r.constants_error, 1e-8);
    EXPECT_LT(r.interior_error, 1e-8);
    EXPECT_LT(r.h_error, 1e-8);
}

TEST(SolveGcp, ReportsConditionAndResidual) {
    const Solution s = solve_gcp(one_over_z(32));
    EXPECT_GT(s.condition_estimate, 0.0);
    EXPECT_LT(s.condition_estimate, 1e12);
    EXPECT_LE(s.fredholm_residual, 1e-12);
}

TEST(ComputeH, ZeroMuAndGammaGiveZero) {
    const CircleDomain d = pair();
    const Coefficient c{1, {0.0, 0.0}};
    const Grid g = uniform_grid(d, 32);
    const DenseOperator n_op = assemble_N(d, c, g);
    EXPECT_EQ(compute_h(RealGridFunction(g), RealGridFunction(g), n_op, d, c).sup_norm(), 0.0);
}

TEST(ComputeH, IsLinear) {
    const CircleDomain d = pair();
    const Coefficient c{1, {0.2, 0.7}};
    const Grid g = uniform_grid(d, 64);
    const DenseOperator n_op = assemble_N(d, c, g);
    const RealGridFunction mu1 = random_trig_polynomial(g, 4, 1);
    const RealGridFunction mu2 = random_trig_polynomial(g, 5, 2);
    const RealGridFunction g1 = random_trig_polynomial(g, 3, 3);
    const RealGridFunction g2 = random_trig_polynomial(g, 6, 4);
    const double a = 1.7, b = -0.6;
    const RealGridFunction lhs = compute_h(a * mu1 + b * mu2, a * g1 + b * g2, n_op, d, c);
    const RealGridFunction rhs =
        a * compute_h(mu1, g1, n_op, d, c) + b * compute_h(mu2, g2, n_op, d, c);
    EXPECT_LE((lhs - rhs).sup_norm(), 1e-12);
}

TEST(ComputeH, MismatchedGridsRejected) {
    const CircleDomain d = pair();
    const Coefficient c{0, {0.0, 0.0}};
    const DenseOperator n_op = assemble_N(d, c, uniform_grid(d, 32));
    EXPECT_THROW(compute_h(RealGridFunction(uniform_grid(d, 16)), RealGridFunction(uniform_grid(d, 32)), n_op, d, c),
                 ShapeError);
}

TEST(ComputeConstants, Examples) {
    const CircleDomain d = unit_disk();
    const Grid g = uniform_grid(d, 32);
    EXPECT_NEAR(compute_constants(RealGridFunction::sample(g, [](ParamPoint) { return 3.0; }), 0).a(0, 0), -3.0,
                1e-15);
    const Constants c1 = compute_constants(RealGridFunction::sample(g, [](ParamPoint p) { return std::cos(p.t); }), 1);
    EXPECT_NEAR(c1.a(0, 0), 0.0, 1e-15);
    EXPECT_NEAR(c1.a(0, 1), -1.0, 1e-15);
    EXPECT_NEAR(c1.b(0, 1), 0.0, 1e-15);
    const Constants c2 =
        compute_constants(RealGridFunction::sample(g, [](ParamPoint p) { return 5.0 * std::sin(2 * p.t); }), 2);
    EXPECT_NEAR(c2.b(0, 2), 5.0, 1e-14);
    EXPECT_NEAR(c2.a(0, 2), 0.0, 1e-14);
    EXPECT_NEAR(c2.b(0, 1), 0.0, 1e-14);
}

TEST(ComputeConstants, RoundTripsThroughBoundary) {
    const CircleDomain d = pair();
    const Grid g = uniform_grid(d, 32);
    Constants k(2, 2);
    SeededRng rng(9);
    for (std::size_t j = 0; j < 2; ++j) {
        for (int q = 0; q <= 2; ++q) k.a(j, q) = rng.uniform(-1, 1);
        for (int q = 1; q <= 2; ++q) k.b(j, q) = rng.uniform(-1, 1);
    }
    EXPECT_LE(compute_constants(constants_to_boundary(k, g), 2).max_difference(k), 1e-14);
}

TEST(ResidualBandlimit, Examples) {
    const CircleDomain d = pair();
    const Grid g = uniform_grid(d, 64);
    EXPECT_EQ(residual_bandlimit(RealGridFunction(g), 1), 0.0);
    const RealGridFunction high = RealGridFunction::sample(g, [](ParamPoint p) { return std::cos(2 * p.t); });
    EXPECT_NEAR(residual_bandlimit(high, 1), 1.0, 1e-13);
    EXPECT_LE(residual_bandlimit(random_trig_polynomial(g, 1, 5), 1), 1e-14);

    const ManufacturedProblem mp = manufacture(d, Coefficient{1, {0.3, -1.1}}, 7, 2, 128);
    const Solution s = solve_gcp(mp.spec);
    EXPECT_LE(residual_bandlimit(s.h, 1), 1e-8);
}

TEST(ResidualBandlimit, ReferenceScaleUsedForTinyH) {
    const CircleDomain d = unit_disk();
    const Grid g = uniform_grid(d, 32);
    const RealGridFunction tiny = RealGridFunction::sample(g, [](ParamPoint p) { return 1e-17 * std::cos(5 * p.t); });
    EXPECT_NEAR(residual_bandlimit(tiny, 0), 1.0, 1e-12);
    EXPECT_LE(residual_bandlimit(tiny, 0, 1.0), 1e-16);
}

TEST(EvaluateInterior, DecaysAtInfinity) {
    const ManufacturedProblem mp = manufacture(pair(), Coefficient{1, {0.0, 0.0}}, 3, 2, 128);
    const Solution s = solve_gcp(mp.spec);
    const std::vector<Complex> far{Complex(1e6, 0), Complex(0, -1e6)};
    for (const Complex v : evaluate_interior(s, far)) EXPECT_LE(std::abs(v), 1e-5);
}

TEST(EvaluateInterior, RejectsPointsInsideDisks) {
    const Solution s = solve_gcp(one_over_z(32));
    const std::vector<Complex> inside{Complex(0.2, 0.1)};
    EXPECT_THROW(evaluate_interior(s, inside), PointError);
    const std::vector<Complex> on_circle{Complex(1.0, 0.0)};
    EXPECT_THROW(evaluate_interior(s, on_circle), PointError);
}

TEST(EvaluateInterior, FlagsNearBoundaryPoints) {
    const Solution s = solve_gcp(one_over_z(32));
    std::vector<std::size_t> flagged;
    const std::vector<Complex> pts{Complex(1.05, 0), Complex(3, 0)};
    evaluate_interior(s, pts, &flagged);
    ASSERT_EQ(flagged.size(), 1u);
    EXPECT_EQ(flagged[0], 0u);
    EXPECT_EQ(classify_point(s.problem.domain, 32, Complex(3, 0)), PointStatus::exterior);
}

class SolverInvariants : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(SolverInvariants, BoundaryResidualAndReconstruction) {
    const std::uint64_t seed = GetParam();
    const CircleDomain d = random_domain(1 + seed % 3, seed);
    std::vector<double> lambdas;
    SeededRng rng(seed + 100);
    for (std::size_t j = 0; j < d.size(); ++j) lambdas.push_back(rng.uniform(-pi, pi));
    const Coefficient c{static_cast<int>(seed % 3), lambdas};
    const Grid g = uniform_grid(d, 96);
    const RealGridFunction gamma = random_trig_polynomial(g, 7, seed + 200);
    const Solution s = solve_gcp(make_problem(d, c, gamma));

    EXPECT_LE(boundary_residual(s), 1e-10 * (1.0 + gamma.sup_norm()));
    EXPECT_LE((constants_to_boundary(s.constants, g) - s.h).sup_norm(), 1e-10 * (1.0 + gamma.sup_norm()));
    EXPECT_LE((h_from_boundary(s.psi_boundary, gamma, c) - s.h).sup_norm(), 1e-10 * (1.0 + gamma.sup_norm()));
}

TEST_P(SolverInvariants, Linearity) {
    const std::uint64_t seed = GetParam();
    const CircleDomain d = random_domain(2, seed);
    const Coefficient c{1, {0.5, -0.25}};
    const Grid g = uniform_grid(d, 64);
    const RealGridFunction g1 = random_trig_polynomial(g, 5, seed + 1);
    const RealGridFunction g2 = random_trig_polynomial(g, 5, seed + 2);
    const double a = 0.8, b = -2.1;
    const Solution s1 = solve_gcp(make_problem(d, c, g1));
    const Solution s2 = solve_gcp(make_problem(d, c, g2));
    const Solution s12 = solve_gcp(make_problem(d, c, a * g1 + b * g2));
    EXPECT_LE((s12.psi_boundary - (a * s1.psi_boundary + b * s2.psi_boundary)).sup_norm(), 1e-11);
    EXPECT_LE(s12.constants.max_difference([&] {
        Constants k(2, 1);
        for (std::size_t j = 0; j < 2; ++j) {
            for (int q = 0; q <= 1; ++q) k.a(j, q) = a * s1.constants.a(j, q) + b * s2.constants.a(j, q);
            k.b(j, 1) = a * s1.constants.b(j, 1) + b * s2.constants.b(j, 1);
        }
        return k;
    }()),
              1e-11);
}

INSTANTIATE_TEST_SUITE_P(Seeds, SolverInvariants, ::testing::Values(1u, 2u, 3u, 4u, 5u, 6u));
