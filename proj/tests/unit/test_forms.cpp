#include "oracle.hpp"

#include "dpg/error.hpp"
#include "dpg/forms.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace dpg;
using spaces::ProblemKind;

namespace {

mesh::Mesh two_elements()
{
    // Skewed pair; element 1 sees the shared edge with flux sign -1.
    return mesh::Mesh({{0.0, 0.0}, {1.2, 0.1}, {0.3, 1.0}, {1.4, 1.3}}, {{0, 1, 2}, {1, 3, 2}});
}

forms::ElementTables tables_for(const mesh::Mesh& m, ProblemKind kind, int p, int r)
{
    return forms::make_tables(spaces::build_test_layout(m, p, {spaces::TestMode::Uniform, r, false}, kind));
}

}  // namespace

class PoissonOracle : public ::testing::TestWithParam<int> {};

TEST_P(PoissonOracle, MatchesBruteForce)
{
    const int p = GetParam();
    const int r = p + 2;
    const auto m = two_elements();
    const auto t = tables_for(m, ProblemKind::Poisson, p, r);
    for (int k = 0; k < m.num_elements(); ++k) {
        const auto blocks = forms::local_b_poisson(m, k, t);
        ASSERT_EQ(blocks.B.rows(), t.layout.element_size());
        ASSERT_EQ(blocks.B.cols(), spaces::local_trial_layout(ProblemKind::Poisson, p).size);
        const double scale = blocks.B.cwiseAbs().maxCoeff();
        double worst = 0.0;
        for (int i = 0; i < blocks.B.rows(); ++i) {
            for (int j = 0; j < blocks.B.cols(); ++j) {
                const double ref = oracle::poisson_entry(m, k, p, r, i, j, 2 * r + 4);
                worst = std::max(worst, std::abs(blocks.B(i, j) - ref));
            }
        }
        EXPECT_LT(worst / scale, 1e-12) << "element " << k;
    }
}

INSTANTIATE_TEST_SUITE_P(Degrees, PoissonOracle, ::testing::Values(0, 1, 2));

class ElasticityOracle : public ::testing::TestWithParam<int> {};

TEST_P(ElasticityOracle, MatchesBruteForce)
{
    const int p = GetParam();
    const int r = p + 2;
    const auto m = two_elements();
    const auto t = tables_for(m, ProblemKind::Elasticity, p, r);
    const auto A = forms::ComplianceTensor::isotropic(1.3, 0.7);
    const double q0 = A.trace_of_identity();
    const auto L = spaces::local_trial_layout(ProblemKind::Elasticity, p);
    for (int k = 0; k < m.num_elements(); ++k) {
        const auto blocks = forms::local_b_elasticity(m, k, t, A, q0);
        const double scale = blocks.B.cwiseAbs().maxCoeff();
        double worst = 0.0;
        for (int i = 0; i < blocks.B.rows(); ++i) {
            for (int j = 0; j < blocks.B.cols(); ++j) {
                const double ref = oracle::elasticity_entry(m, k, p, r, i, j, 2 * r + 4, A, q0);
                worst = std::max(worst, std::abs(blocks.B(i, j) - ref));
            }
        }
        EXPECT_LT(worst / scale, 1e-12) << "element " << k;

        // beta row: (A sigma, I)/Q0 on sigma columns, zero elsewhere.
        const auto& map = m.map(k);
        const auto& rule = refelem::quadrature_rule(2 * p + 2);
        const int np = refelem::dim_p(p);
        for (int j = 0; j < L.size; ++j) {
            double ref = 0.0;
            if (j < L.sigma_size) {
                for (int q = 0; q < rule.size(); ++q) {
                    const Eigen::Vector2d x = map.forward(rule.points.row(q).transpose());
                    const Eigen::Matrix2d s = refelem::component_matrix(refelem::Kind::Matrix, j / np) *
                                              oracle::scalar(p, j % np, map, x);
                    ref += map.det * rule.weights(q) * A.apply(s).trace() / q0;
                }
            }
            EXPECT_NEAR(blocks.beta_row(j), ref, 1e-13);
        }
    }
}

INSTANTIATE_TEST_SUITE_P(Degrees, ElasticityOracle, ::testing::Values(0, 1));

TEST(Forms, PoissonLoadIsTestIntegral)
{
    const auto m = two_elements();
    const auto t = tables_for(m, ProblemKind::Poisson, 1, 3);
    const auto f = [](const Eigen::Vector2d& x) { return Eigen::VectorXd::Constant(1, 1.0 + x.x() * x.y()); };
    const auto blocks = forms::local_b_poisson(m, 1, t, f);
    const int nr = refelem::dim_p(3);
    EXPECT_LT(blocks.load.head(2 * nr).cwiseAbs().maxCoeff(), 1e-15);
    const auto& map = m.map(1);
    const auto& rule = refelem::quadrature_rule(12);
    for (int s = 0; s < nr; ++s) {
        double ref = 0.0;
        for (int q = 0; q < rule.size(); ++q) {
            const Eigen::Vector2d x = map.forward(rule.points.row(q).transpose());
            ref += map.det * rule.weights(q) * f(x)(0) * oracle::scalar(3, s, map, x);
        }
        EXPECT_NEAR(blocks.load(2 * nr + s), ref, 1e-13);
    }
}

TEST(Forms, PoissonGramMatchesBruteForce)
{
    const auto m = two_elements();
    const int r = 3;
    const auto t = tables_for(m, ProblemKind::Poisson, 1, r);
    const auto gram = forms::local_gram_poisson(m, 1, t);
    const int nr = refelem::dim_p(r);
    const auto& map = m.map(1);
    const auto& rule = refelem::quadrature_rule(2 * r + 2);
    Eigen::MatrixXd ref = Eigen::MatrixXd::Zero(3 * nr, 3 * nr);
    for (int q = 0; q < rule.size(); ++q) {
        const Eigen::Vector2d x = map.forward(rule.points.row(q).transpose());
        const double w = map.det * rule.weights(q);
        Eigen::VectorXd phi(nr);
        Eigen::MatrixX2d grad(nr, 2);
        for (int s = 0; s < nr; ++s) {
            Eigen::Vector2d g;
            phi(s) = oracle::scalar(r, s, map, x, &g);
            grad.row(s) = g.transpose();
        }
        // tau = phi_a e_c: L2 blocks per component, div couples the components.
        for (int c = 0; c < 2; ++c) ref.block(c * nr, c * nr, nr, nr) += w * phi * phi.transpose();
        for (int c = 0; c < 2; ++c) {
            for (int d = 0; d < 2; ++d) ref.block(c * nr, d * nr, nr, nr) += w * grad.col(c) * grad.col(d).transpose();
        }
        ref.block(2 * nr, 2 * nr, nr, nr) += w * (phi * phi.transpose() + grad * grad.transpose());
    }
    EXPECT_LT((gram.G - ref).cwiseAbs().maxCoeff(), 1e-12 * ref.cwiseAbs().maxCoeff());
    EXPECT_EQ(gram.llt.info(), Eigen::Success);
}

TEST(Forms, ElasticityGramIsSpd)
{
    const auto m = two_elements();
    const auto t = tables_for(m, ProblemKind::Elasticity, 1, 3);
    const auto gram = forms::local_gram_elasticity(m, 0, t);
    EXPECT_EQ(gram.G.rows(), t.layout.element_size());
    EXPECT_LT((gram.G - gram.G.transpose()).cwiseAbs().maxCoeff(), 1e-14);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram.G);
    EXPECT_GT(es.eigenvalues().minCoeff(), 0.0);
}

TEST(Forms, ConstantFieldsAgainstHandValues)
{
    // Reference triangle, p = 0, r = 2: sigma = e_x, tau = phi_0 e_x with
    // phi_0 = sqrt2 gives (sigma, tau) = sqrt2 / 2.
    const auto m = mesh::reference_triangle_mesh();
    const auto t = tables_for(m, ProblemKind::Poisson, 0, 2);
    const auto b = forms::local_b_poisson(m, 0, t);
    const double c = std::sqrt(2.0);
    EXPECT_NEAR(b.B(0, 0), c * c / 2.0, 1e-14);  // sigma basis is sqrt2 e_x as well
    // Flux on edge 1 (x = 0, outward -e_x) against v = phi_0: <v, 1> = sqrt2 * 1.
    const auto L = spaces::local_trial_layout(ProblemKind::Poisson, 0);
    EXPECT_NEAR(b.B(12, L.flux_offset + 1), c, 1e-14);
    // Trace hat of vertex 0 against tau = phi_0 e_x: only edge 1 (n = -e_x) and
    // edge 2 (n = -e_y) touch vertex 0; <hat, -phi_0> on edge 1 = -sqrt2 / 2.
    EXPECT_NEAR(b.B(0, L.trace_offset + 0), -c / 2.0, 1e-14);
}

TEST(Forms, QuadratureBelowMinimumRejected)
{
    const auto m = mesh::reference_triangle_mesh();
    const auto layout = spaces::build_test_layout(m, 1, {}, ProblemKind::Poisson);
    EXPECT_THROW(forms::make_tables(layout, 2), Error);
    EXPECT_EQ(forms::default_quadrature_degree(layout), 2 * 3 + 2);
}

TEST(Compliance, IsotropicInvertsHooke)
{
    const double mu = 1.7, lambda = 0.4;
    const auto A = forms::ComplianceTensor::isotropic(mu, lambda);
    const Eigen::Matrix2d eps = (Eigen::Matrix2d() << 0.3, -0.2, -0.2, 1.1).finished();
    const Eigen::Matrix2d sigma = 2 * mu * eps + lambda * eps.trace() * Eigen::Matrix2d::Identity();
    EXPECT_LT((A.apply(sigma) - eps).norm(), 1e-14);
    EXPECT_NEAR(A.trace_of_identity(), 1.0 / (mu + lambda), 1e-14);
    // Acts on the symmetric part only.
    const Eigen::Matrix2d skew = (Eigen::Matrix2d() << 0, 1, -1, 0).finished();
    EXPECT_LT(A.apply(skew).norm(), 1e-15);
}

TEST(Compliance, MandelRoundTripAndValidation)
{
    const Eigen::Matrix2d s = (Eigen::Matrix2d() << 1.0, 0.5, 0.5, -3.0).finished();
    EXPECT_LT((forms::from_mandel(forms::mandel(s)) - s).norm(), 1e-15);
    EXPECT_NEAR(forms::mandel(s).squaredNorm(), (s.array() * s.array()).sum(), 1e-14);
    EXPECT_THROW(forms::ComplianceTensor(-forms::Mat3::Identity()), Error);
    forms::Mat3 asym = forms::Mat3::Identity();
    asym(0, 1) = 0.5;
    EXPECT_THROW(forms::ComplianceTensor{asym}, Error);
    const forms::ComplianceField field({forms::ComplianceTensor::isotropic(1, 1), forms::ComplianceTensor::isotropic(2, 2)});
    EXPECT_NEAR(field.q0(), 0.25, 1e-15);
}
