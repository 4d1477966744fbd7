#include "dpg/error.hpp"
#include "dpg/fortin.hpp"
#include "dpg/refelem.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace dpg;
using namespace dpg::fortin;

namespace {

const mesh::AffineMap kDistorted = mesh::AffineMap::from_vertices({0, 0}, {1, 0.2}, {0.3, 1.1});

// Orthonormal coordinates of a scalar function on the reference element.
Eigen::VectorXd project(int degree, const std::function<double(const Eigen::Vector2d&)>& f)
{
    const auto& b = refelem::simplex_basis(2, degree);
    const auto& rule = refelem::quadrature_rule(2 * degree + 4);
    Eigen::VectorXd c = Eigen::VectorXd::Zero(b.size());
    for (int q = 0; q < rule.size(); ++q) {
        const Eigen::Vector2d x = rule.points.row(q).transpose();
        c += rule.weights(q) * f(x) * b.values(x);
    }
    return c;
}

}  // namespace

class FortinDegree : public ::testing::TestWithParam<int> {};

TEST_P(FortinDegree, Idempotent)
{
    const int p = GetParam();
    for (const auto& op : {build_pi0(p), build_pigrad(p), build_pidiv(p), build_pidiv_sym(p), build_piskew(p)}) {
        // With no interior moments (p = 0) Pi^0 does not keep the mean, so the
        // mean-shifted Pi^grad is not a projection there.
        if (op.kind == FortinKind::Grad && p == 0) continue;
        const Eigen::MatrixXd& M = op.matrix;
        EXPECT_LT((M * M - M).cwiseAbs().maxCoeff(), 1e-10 * std::max(1.0, M.cwiseAbs().maxCoeff()))
            << to_string(op.kind) << " p=" << p;
    }
}

TEST_P(FortinDegree, MomentsAndCommutativity)
{
    const int p = GetParam();
    for (const auto& op : {build_pi0(p), build_pidiv(p), build_pidiv_sym(p), build_piskew(p)}) {
        EXPECT_LT(moment_residual(op), 1e-12) << to_string(op.kind);
        EXPECT_FALSE(op.singular);
        EXPECT_TRUE(op.square);
    }
    EXPECT_LT(div_commutativity_residual(build_pidiv(p)), 1e-10);
    EXPECT_LT(div_commutativity_residual(build_pidiv_sym(p)), 1e-10);
}

TEST_P(FortinDegree, SolvabilityMargin)
{
    const int p = GetParam();
    EXPECT_GT(build_pi0(p).normalized_sigma_min(), 1e-8);
    EXPECT_GT(build_pidiv(p).normalized_sigma_min(), 1e-8);
    EXPECT_GT(build_pidiv_sym(p).normalized_sigma_min(), 1e-8);
}

TEST_P(FortinDegree, VerifyPoisson)
{
    const int p = GetParam();
    for (const auto& map : {mesh::AffineMap{}, kDistorted}) {
        const FortinReport r = verify_fortin(spaces::ProblemKind::Poisson, p, map);
        EXPECT_TRUE(r.passed()) << report_text(r);
        EXPECT_EQ(r.identities.size(), 5u);
    }
}

TEST_P(FortinDegree, VerifyElasticity)
{
    const int p = GetParam();
    const FortinReport r = verify_fortin(spaces::ProblemKind::Elasticity, p, kDistorted);
    EXPECT_TRUE(r.passed()) << report_text(r);
    EXPECT_FALSE(r.experimental);
    EXPECT_EQ(r.identities.size(), 8u);
}

INSTANTIATE_TEST_SUITE_P(Degrees, FortinDegree, ::testing::Values(0, 1, 2, 3));

TEST(Fortin, GradIsNotAProjectionAtLowestOrder)
{
    // v = interior cubic bubble: Pi^0 v = 0 but mean v != 0, so Pi^grad v is
    // the constant mean and Pi^grad of that constant is itself.
    const auto op = build_pigrad(0);
    const Eigen::VectorXd v =
        project(op.space_degree, [](const Eigen::Vector2d& x) { return x.x() * x.y() * (1 - x.x() - x.y()); });
    const Eigen::VectorXd once = op.matrix * v;
    const Eigen::VectorXd mean = project(op.space_degree, [](const Eigen::Vector2d&) { return 1.0 / 60.0 / 0.5; });
    EXPECT_GT((op.matrix * once - once).norm(), 1e-3);
    EXPECT_LT((op.matrix * mean - mean).norm(), 1e-12);
}

TEST(Fortin, GradPreservesConstants)
{
    for (int p = 0; p <= 3; ++p) {
        const auto op = build_pigrad(p);
        const Eigen::VectorXd c = project(op.space_degree, [](const Eigen::Vector2d&) { return 2.5; });
        EXPECT_LT((op.matrix * c - c).cwiseAbs().maxCoeff(), 1e-12) << "p=" << p;
    }
}

TEST(Fortin, Pi0MomentsByDirectQuadrature)
{
    // p = 1, v = x^2: int_K (Pi v - v) = 0 and int_e (Pi v - v) L_m = 0, m <= 1.
    const int p = 1;
    const auto op = build_pi0(p);
    const int D = op.space_degree;
    const auto& b = refelem::simplex_basis(2, D);
    const Eigen::VectorXd v = project(D, [](const Eigen::Vector2d& x) { return x.x() * x.x(); });
    const Eigen::VectorXd diff = op.matrix * v - v;
    const auto& rule = refelem::quadrature_rule(2 * D);
    double vol = 0.0;
    for (int q = 0; q < rule.size(); ++q) vol += rule.weights(q) * b.values(rule.points.row(q).transpose()).dot(diff);
    EXPECT_NEAR(vol, 0.0, 1e-13);
    const auto& line = refelem::line_rule(2 * D);
    for (int e = 0; e < 3; ++e) {
        for (int m = 0; m <= p; ++m) {
            double s = 0.0;
            for (int i = 0; i < line.size(); ++i) {
                s += line.weights(i) * refelem::legendre01(m, line.points(i)) *
                     b.values(refelem::reference_edge_point(e, line.points(i))).dot(diff);
            }
            EXPECT_NEAR(s, 0.0, 1e-13) << "edge " << e << " mode " << m;
        }
    }
    // The image vanishes at the vertices.
    for (int vtx = 0; vtx < 3; ++vtx) {
        EXPECT_NEAR(b.values(refelem::reference_vertex(vtx)).dot(op.matrix * v), 0.0, 1e-12);
    }
}

TEST(Fortin, DivCommutesOnCubicField)
{
    // p = 0, tau = (x^3, y^3): div Pi tau = P_1 (3x^2 + 3y^2).
    const auto op = build_pidiv(0);
    const int D = op.space_degree;
    const int n = refelem::dim_p(D);
    Eigen::VectorXd tau(2 * n);
    tau.head(n) = project(D, [](const Eigen::Vector2d& x) { return std::pow(x.x(), 3); });
    tau.tail(n) = project(D, [](const Eigen::Vector2d& x) { return std::pow(x.y(), 3); });
    const Eigen::VectorXd out = op.matrix * tau;
    const auto& b = refelem::simplex_basis(2, D);
    const auto& p1 = refelem::simplex_basis(2, 1);
    const Eigen::VectorXd div_p1 =
        project(1, [](const Eigen::Vector2d& x) { return 3 * x.x() * x.x() + 3 * x.y() * x.y(); });
    const auto& rule = refelem::quadrature_rule(2 * D);
    double err = 0.0;
    for (int q = 0; q < rule.size(); ++q) {
        const Eigen::Vector2d x = rule.points.row(q).transpose();
        const Eigen::MatrixX2d g = b.gradients(x);
        const double div = g.col(0).dot(out.head(n)) + g.col(1).dot(out.tail(n));
        err += rule.weights(q) * std::pow(div - p1.values(x).dot(div_p1), 2);
    }
    EXPECT_LT(std::sqrt(err), 1e-11);
}

TEST(Fortin, NormStableUnderProbeEnrichment)
{
    for (int p = 0; p <= 2; ++p) {
        const double c8 = measure_cpi(build_pigrad(p, 8), kDistorted);
        const double c10 = measure_cpi(build_pigrad(p, 10), kDistorted);
        EXPECT_NEAR(c10 / c8, 1.0, 0.05) << "p=" << p;
        const double d8 = measure_cpi(build_pidiv(p, 8), kDistorted);
        const double d10 = measure_cpi(build_pidiv(p, 10), kDistorted);
        EXPECT_NEAR(d10 / d8, 1.0, 0.05) << "p=" << p;
    }
}

TEST(Fortin, NormUniformInMeshSize)
{
    for (int p = 0; p <= 2; ++p) {
        for (const auto& op : {build_pigrad(p), build_pidiv(p), build_pidiv_sym(p)}) {
            double lo = 1e300, hi = 0.0;
            for (double h : {1.0, 0.25, 1.0 / 16, 1.0 / 64}) {
                const auto map = mesh::AffineMap::from_vertices({0, 0}, {h, 0.2 * h}, {0.3 * h, 1.1 * h});
                const double c = measure_cpi(op, map);
                lo = std::min(lo, c);
                hi = std::max(hi, c);
            }
            EXPECT_LT(hi / lo, 1.10) << to_string(op.kind) << " p=" << p;
            EXPECT_GE(lo, 1.0 - 1e-12);
        }
    }
}

TEST(Fortin, ReportFormats)
{
    const auto r = verify_fortin(spaces::ProblemKind::Poisson, 1, {});
    const std::string text = report_text(r);
    EXPECT_NE(text.find("status: PASS"), std::string::npos);
    EXPECT_NE(text.find("problem: poisson"), std::string::npos);
    const std::string csv = report_csv({r}, {"ref"});
    EXPECT_EQ(csv.rfind("element,problem,p,identity,residual\nref,poisson,1,", 0), 0u);
    EXPECT_THROW(report_csv({r}, {"a", "b"}), Error);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + static_cast<long>(r.identities.size()));
}

TEST(Fortin, SeededProbesAreReproducible)
{
    VerifyOptions o;
    o.seed = 42;
    const auto a = verify_fortin(spaces::ProblemKind::Elasticity, 1, kDistorted, o);
    const auto b = verify_fortin(spaces::ProblemKind::Elasticity, 1, kDistorted, o);
    EXPECT_EQ(report_text(a), report_text(b));
}
