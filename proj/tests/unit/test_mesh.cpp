#include "dpg/error.hpp"
#include "dpg/mesh.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>

using namespace dpg::mesh;

namespace {

std::filesystem::path temp_file(const std::string& name)
{
    return std::filesystem::temp_directory_path() / ("dpg_mesh_" + name);
}

}  // namespace

TEST(Mesh, UnitSquareSingleCell)
{
    const Mesh m = unit_square_mesh(1);
    EXPECT_EQ(m.num_elements(), 2);
    EXPECT_EQ(m.num_vertices(), 4);
    EXPECT_EQ(m.num_facets(), 5);
    EXPECT_EQ(m.num_boundary_facets(), 4);
    EXPECT_NEAR(m.h_max(), std::sqrt(2.0), 1e-15);
}

TEST(Mesh, EulerCountsAndArea)
{
    for (int n : {2, 3, 7}) {
        const Mesh m = unit_square_mesh(n);
        EXPECT_EQ(m.num_elements(), 2 * n * n);
        // V - E + F = 1 for a disc.
        EXPECT_EQ(m.num_vertices() - m.num_facets() + m.num_elements(), 1);
        EXPECT_EQ(m.num_boundary_facets(), 4 * n);
        EXPECT_NEAR(m.total_area(), 1.0, 1e-14);
    }
}

TEST(Mesh, FacetOwnershipAndNormals)
{
    const Mesh m = unit_square_mesh(3);
    for (int f = 0; f < m.num_facets(); ++f) {
        const Facet& F = m.facet(f);
        EXPECT_LT(F.vertices[0], F.vertices[1]);
        if (!F.boundary) EXPECT_LT(F.elements[0], F.elements[1]);
        EXPECT_NEAR(F.normal.norm(), 1.0, 1e-15);
        // Normal points away from the centroid of elements[0].
        const auto& t = m.triangles()[static_cast<std::size_t>(F.elements[0])];
        Vec2 c = Vec2::Zero();
        for (int v : t) c += m.vertices()[static_cast<std::size_t>(v)] / 3.0;
        const Vec2 mid = 0.5 * (m.vertices()[static_cast<std::size_t>(F.vertices[0])] +
                                m.vertices()[static_cast<std::size_t>(F.vertices[1])]);
        EXPECT_GT((mid - c).dot(F.normal), 0.0);
    }
    // Each interior facet has flux signs +1 and -1 on its two sides.
    for (int k = 0; k < m.num_elements(); ++k) {
        for (int e = 0; e < 3; ++e) {
            const Facet& F = m.facet(m.element_facet(k, e));
            EXPECT_EQ(m.flux_sign(k, e), F.elements[0] == k ? 1.0 : -1.0);
        }
    }
}

TEST(Mesh, RefinementCounts)
{
    const Mesh coarse = unit_square_mesh(2);
    const Mesh fine = refine_uniform(coarse);
    EXPECT_EQ(fine.num_elements(), 4 * coarse.num_elements());
    EXPECT_EQ(fine.num_boundary_facets(), 2 * coarse.num_boundary_facets());
    EXPECT_NEAR(fine.h_max(), 0.5 * coarse.h_max(), 1e-15);
    EXPECT_NEAR(fine.total_area(), 1.0, 1e-14);
    EXPECT_NEAR(fine.max_shape_ratio(), coarse.max_shape_ratio(), 1e-12);
    // Children of element k cover it.
    for (int k = 0; k < coarse.num_elements(); ++k) {
        double a = 0.0;
        for (int c = 0; c < 4; ++c) a += fine.area(4 * k + c);
        EXPECT_NEAR(a, coarse.area(k), 1e-15);
    }
}

TEST(Mesh, ReadWriteRoundTrip)
{
    const Mesh m = refine_uniform(unit_square_mesh(2));
    const auto path = temp_file("roundtrip.txt");
    write_mesh(m, path);
    const Mesh r = read_mesh(path);
    ASSERT_EQ(r.num_vertices(), m.num_vertices());
    ASSERT_EQ(r.num_elements(), m.num_elements());
    for (int v = 0; v < m.num_vertices(); ++v) {
        EXPECT_EQ(r.vertices()[static_cast<std::size_t>(v)], m.vertices()[static_cast<std::size_t>(v)]);
    }
    EXPECT_EQ(r.triangles(), m.triangles());
    std::filesystem::remove(path);
}

TEST(Mesh, ParseErrors)
{
    const auto path = temp_file("bad.txt");
    {
        std::ofstream(path) << "dpgmesh 2\n3 1\n0 0\n1 0\n";
    }
    try {
        read_mesh(path);
        FAIL() << "expected a parse error";
    } catch (const dpg::Error& e) {
        EXPECT_EQ(e.code(), dpg::ErrorCode::Parse);
    }
    {
        std::ofstream(path) << "dpgmesh 3\n";
    }
    EXPECT_THROW(read_mesh(path), dpg::Error);
    std::filesystem::remove(path);
    EXPECT_THROW(read_mesh(temp_file("does_not_exist")), dpg::Error);
}

TEST(Mesh, NonManifoldRejected)
{
    std::vector<Vec2> v{{0, 0}, {1, 0}, {0, 1}, {1, 1}, {0.5, -1}};
    try {
        Mesh m(v, {{0, 1, 2}, {1, 3, 2}, {0, 4, 1}, {1, 2, 4}}, OrientationPolicy::Reorient);
        FAIL() << "expected non-manifold error";
    } catch (const dpg::Error& e) {
        EXPECT_EQ(e.code(), dpg::ErrorCode::NonManifold);
    }
}

TEST(Mesh, ClockwiseRejectedOrReoriented)
{
    std::vector<Vec2> v{{0, 0}, {1, 0}, {0, 1}};
    try {
        Mesh m(v, {{0, 2, 1}});
        FAIL() << "expected inverted element error";
    } catch (const dpg::Error& e) {
        EXPECT_EQ(e.code(), dpg::ErrorCode::InvertedElement);
    }
    const Mesh m(v, {{0, 2, 1}}, OrientationPolicy::Reorient);
    EXPECT_GT(m.map(0).det, 0.0);
    EXPECT_NEAR(m.area(0), 0.5, 1e-15);
}

TEST(Mesh, DegenerateAndOutOfRange)
{
    EXPECT_THROW(Mesh({{0, 0}, {1, 0}, {2, 0}}, {{0, 1, 2}}), dpg::Error);
    EXPECT_THROW(Mesh({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 3}}), dpg::Error);
    EXPECT_THROW(unit_square_mesh(0), dpg::Error);
}

TEST(AffineMap, RoundTripAndVertices)
{
    const AffineMap m = AffineMap::from_vertices(Vec2(0.1, 0.2), Vec2(1.3, 0.4), Vec2(0.5, 1.7));
    EXPECT_LT((m.forward(Vec2(1, 0)) - Vec2(1.3, 0.4)).norm(), 1e-15);
    EXPECT_LT((m.forward(Vec2(0, 1)) - Vec2(0.5, 1.7)).norm(), 1e-15);
    const Vec2 x(0.3, 0.6);
    EXPECT_LT((m.inverse(m.forward(x)) - x).norm(), 1e-15);
    EXPECT_NEAR(m.det, 1.2 * 1.5 - 0.4 * 0.2, 1e-15);
}

TEST(Piola, PreservesNormalFlux)
{
    // tau.n |e| is invariant under the contravariant Piola map.
    const AffineMap map = AffineMap::from_vertices(Vec2(0, 0), Vec2(2.0, 0.3), Vec2(0.4, 1.5));
    const PiolaMap piola(map);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int e = 0; e < 3; ++e) {
        const Vec2 a_hat = e == 0 ? Vec2(1, 0) : e == 1 ? Vec2(0, 1) : Vec2(0, 0);
        const Vec2 b_hat = e == 0 ? Vec2(0, 1) : e == 1 ? Vec2(0, 0) : Vec2(1, 0);
        const Vec2 dh = b_hat - a_hat;
        const Vec2 nh = Vec2(dh.y(), -dh.x());  // unnormalized: length |e^|
        const Vec2 d = map.A * dh;
        const Vec2 n = Vec2(d.y(), -d.x());
        const Vec2 tau_hat(u(rng), u(rng));
        EXPECT_NEAR(piola.hdiv_forward(tau_hat).dot(n), tau_hat.dot(nh), 1e-13);
    }
    const Vec2 t(0.7, -0.2);
    EXPECT_LT((piola.hdiv_inverse(piola.hdiv_forward(t)) - t).norm(), 1e-14);
    const Mat2 s = (Mat2() << 1.0, 0.3, 0.3, -2.0).finished();
    EXPECT_LT((piola.sym_inverse(piola.sym_forward(s)) - s).norm(), 1e-14);
    EXPECT_LT((piola.sym_forward(s) - piola.sym_forward(s).transpose()).norm(), 1e-15);
}

TEST(Mesh, ShapeRatio)
{
    const double eq = shape_ratio(Vec2(0, 0), Vec2(1, 0), Vec2(0.5, std::sqrt(3.0) / 2));
    EXPECT_NEAR(eq, 2.0, 1e-12);
    EXPECT_GT(shape_ratio(Vec2(0, 0), Vec2(1, 0), Vec2(0.5, 0.01)), kShapeRatioWarning);
}

TEST(Mesh, EdgeReversalConsistent)
{
    const Mesh m = unit_square_mesh(2);
    std::set<int> seen;
    for (int k = 0; k < m.num_elements(); ++k) {
        const auto& t = m.triangles()[static_cast<std::size_t>(k)];
        for (int e = 0; e < 3; ++e) {
            EXPECT_EQ(m.edge_reversed(k, e),
                      t[static_cast<std::size_t>((e + 1) % 3)] > t[static_cast<std::size_t>((e + 2) % 3)]);
            seen.insert(m.element_facet(k, e));
        }
    }
    EXPECT_EQ(static_cast<int>(seen.size()), m.num_facets());
}
