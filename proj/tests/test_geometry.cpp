#include "gcp/geometry.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace gcp;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST(ValidateDomain, SingleDiskIsValid) {
    const CircleDomain d = validate_domain({{Complex(0, 0), 1.0}});
    EXPECT_EQ(d.size(), 1u);
    EXPECT_TRUE(d.warnings().empty());
}

TEST(ValidateDomain, SeparatedPairIsValid) {
    const CircleDomain d = validate_domain({{Complex(-2, 0), 1.0}, {Complex(2, 0), 1.0}});
    EXPECT_EQ(d.size(), 2u);
    EXPECT_DOUBLE_EQ(d.min_gap(), 2.0);
}

TEST(ValidateDomain, OverlapNamesPair) {
    try {
        validate_domain({{Complex(0, 0), 1.0}, {Complex(1.5, 0), 1.0}});
        FAIL() << "expected OverlapError";
    } catch (const OverlapError& e) {
        EXPECT_EQ(e.first(), 0u);
        EXPECT_EQ(e.second(), 1u);
        EXPECT_NE(std::string(e.what()).find("circles 1 and 2"), std::string::npos);
    }
}

TEST(ValidateDomain, TouchingDisksAreRejected) {
    EXPECT_THROW(validate_domain({{Complex(0, 0), 1.0}, {Complex(2, 0), 1.0}}), OverlapError);
}

TEST(ValidateDomain, NonPositiveRadiusAndEmptyList) {
    EXPECT_THROW(validate_domain({{Complex(0, 0), 0.0}}), DomainError);
    EXPECT_THROW(validate_domain({{Complex(0, 0), -1.0}}), DomainError);
    EXPECT_THROW(validate_domain({}), DomainError);
}

TEST(ValidateDomain, NearTouchingPairIsWarned) {
    const CircleDomain d = validate_domain({{Complex(0, 0), 1.0}, {Complex(2.05, 0), 1.0}});
    ASSERT_EQ(d.warnings().size(), 1u);
    EXPECT_NE(d.warnings()[0].find("nearly touching"), std::string::npos);
}

TEST(Eta, ClockwiseParametrization) {
    const CircleDomain unit = validate_domain({{Complex(0, 0), 1.0}});
    EXPECT_NEAR(std::abs(eta({0.0, 0}, unit) - Complex(1, 0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(eta({pi / 2, 0}, unit) - Complex(0, -1)), 0.0, 1e-15);
    const CircleDomain shifted = validate_domain({{Complex(2, 0), 3.0}});
    EXPECT_NEAR(std::abs(eta({pi, 0}, shifted) - Complex(-1, 0)), 0.0, 1e-15);
}

TEST(Eta, DerivativesAtZero) {
    const CircleDomain unit = validate_domain({{Complex(0, 0), 1.0}});
    EXPECT_NEAR(std::abs(eta_derivatives({0.0, 0}, unit).first - Complex(0, -1)), 0.0, 1e-15);
    const CircleDomain two = validate_domain({{Complex(0, 0), 2.0}});
    EXPECT_NEAR(std::abs(eta_derivatives({0.0, 0}, two).first - Complex(0, -2)), 0.0, 1e-15);
}

TEST(Eta, InvariantsOnEveryNode) {
    const CircleDomain d =
        validate_domain({{Complex(0.3, -1), 0.7}, {Complex(4, 2), 1.9}, {Complex(-3, 3), 0.25}});
    const Grid g = uniform_grid(d, 64);
    for (std::size_t j = 0; j < d.size(); ++j) {
        for (std::size_t i = 0; i < g.nodes_per_circle(); ++i) {
            const ParamPoint p = g.point(j, i);
            EXPECT_NEAR(std::abs(eta(p, d) - d[j].center), d[j].radius, 1e-14);
            EXPECT_NEAR(std::abs(eta({p.t + two_pi, j}, d) - eta(p, d)), 0.0, 1e-13);
            const auto [first, second] = eta_derivatives(p, d);
            EXPECT_NEAR(std::abs(second / first - Complex(0, -1)), 0.0, 1e-14);
        }
    }
}

TEST(UniformGrid, NodesAndWeights) {
    const CircleDomain d2 = validate_domain({{Complex(-2, 0), 1.0}, {Complex(2, 0), 1.0}});
    const Grid g = uniform_grid(d2, 4);
    EXPECT_EQ(g.size(), 8u);
    for (std::size_t i = 0; i < 4; ++i) EXPECT_DOUBLE_EQ(g.node(i), i * pi / 2);

    const CircleDomain d1 = validate_domain({{Complex(0, 0), 1.0}});
    EXPECT_DOUBLE_EQ(uniform_grid(d1, 8).weight(), pi / 4);
}

TEST(UniformGrid, RejectsOddOrSmall) {
    const CircleDomain d = validate_domain({{Complex(0, 0), 1.0}});
    EXPECT_THROW(uniform_grid(d, 5), GridError);
    EXPECT_THROW(uniform_grid(d, 2), GridError);
}
