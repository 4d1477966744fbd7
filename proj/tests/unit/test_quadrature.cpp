#include "dpg/error.hpp"
#include "dpg/polynomial.hpp"
#include "dpg/quadrature.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace dpg::refelem;

namespace {

double factorial(int n)
{
    return n <= 1 ? 1.0 : n * factorial(n - 1);
}

// int_T x^i y^j = i! j! / (i + j + 2)!
double monomial_integral(int i, int j)
{
    return factorial(i) * factorial(j) / factorial(i + j + 2);
}

double integrate(const QuadratureRule& rule, int i, int j)
{
    double s = 0.0;
    for (int q = 0; q < rule.size(); ++q) {
        s += rule.weights(q) * std::pow(rule.points(q, 0), i) * std::pow(rule.points(q, 1), j);
    }
    return s;
}

}  // namespace

TEST(Quadrature, ConstantAndLinear)
{
    for (int q : {1, 2, 5, 12}) {
        const auto& rule = quadrature_rule(q);
        EXPECT_NEAR(rule.weights.sum(), 0.5, 1e-15);
        EXPECT_NEAR(integrate(rule, 1, 0) + integrate(rule, 0, 1), 1.0 / 3.0, 1e-15);
    }
}

TEST(Quadrature, DegreeSixMonomial)
{
    EXPECT_NEAR(integrate(quadrature_rule(6), 4, 2), 1.0 / 840.0, 1e-16);
}

class QuadratureExactness : public ::testing::TestWithParam<int> {};

TEST_P(QuadratureExactness, AllMonomialsUpToDegree)
{
    const int q = GetParam();
    const auto& rule = quadrature_rule(q);
    EXPECT_GE(rule.exactness, q);
    for (int d = 0; d <= q; ++d) {
        for (int j = 0; j <= d; ++j) {
            const double exact = monomial_integral(d - j, j);
            EXPECT_NEAR(integrate(rule, d - j, j), exact, 1e-14 * std::max(1.0, exact)) << "x^" << d - j << " y^" << j;
        }
    }
}

INSTANTIATE_TEST_SUITE_P(Degrees, QuadratureExactness, ::testing::Values(0, 1, 2, 3, 4, 7, 10, 16, 24));

TEST(Quadrature, PointsInsideTriangle)
{
    const auto& rule = quadrature_rule(20);
    for (int q = 0; q < rule.size(); ++q) {
        EXPECT_GT(rule.points(q, 0), 0.0);
        EXPECT_GT(rule.points(q, 1), 0.0);
        EXPECT_LT(rule.points(q, 0) + rule.points(q, 1), 1.0);
        EXPECT_GT(rule.weights(q), 0.0);
        EXPECT_NEAR(rule.barycentric.row(q).sum(), 1.0, 1e-15);
    }
}

TEST(Quadrature, RejectsOutOfRange)
{
    EXPECT_THROW(quadrature_rule(-1), dpg::Error);
    EXPECT_THROW(quadrature_rule(kMaxQuadratureDegree + 1), dpg::Error);
}

TEST(LineQuadrature, Moments)
{
    for (int q : {0, 1, 5, 11}) {
        const auto& rule = line_rule(q);
        for (int k = 0; k <= q; ++k) {
            double s = 0.0;
            for (int i = 0; i < rule.size(); ++i) s += rule.weights(i) * std::pow(rule.points(i), k);
            EXPECT_NEAR(s, 1.0 / (k + 1), 1e-15);
        }
    }
}

TEST(Legendre, Orthonormal)
{
    const auto& rule = line_rule(20);
    for (int a = 0; a <= 8; ++a) {
        for (int b = 0; b <= 8; ++b) {
            double s = 0.0;
            for (int i = 0; i < rule.size(); ++i) s += rule.weights(i) * legendre01(a, rule.points(i)) * legendre01(b, rule.points(i));
            EXPECT_NEAR(s, a == b ? 1.0 : 0.0, 1e-13);
        }
    }
}

TEST(Legendre, ClosedForms)
{
    // L1 = sqrt3 (2t - 1), L2 = sqrt5 (6t^2 - 6t + 1)
    for (double t : {0.0, 0.3, 1.0}) {
        EXPECT_NEAR(legendre01(0, t), 1.0, 1e-15);
        EXPECT_NEAR(legendre01(1, t), std::sqrt(3.0) * (2 * t - 1), 1e-14);
        EXPECT_NEAR(legendre01(2, t), std::sqrt(5.0) * (6 * t * t - 6 * t + 1), 1e-14);
    }
}

TEST(Polynomial, Dimensions)
{
    EXPECT_EQ(dim_p(0), 1);
    EXPECT_EQ(dim_p(1), 3);
    EXPECT_EQ(dim_p(4), 15);
    EXPECT_EQ(dim_p(-1), 0);
    EXPECT_EQ(monomial_index(0, 0), 0);
    EXPECT_EQ(monomial_index(1, 0), 1);
    EXPECT_EQ(monomial_index(0, 1), 2);
    EXPECT_EQ(monomial_index(0, 3), 9);
}
