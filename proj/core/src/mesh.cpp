#include "dpg/mesh.hpp"

#include "dpg/error.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <map>
#include <string>
#include <utility>

namespace dpg::mesh {

AffineMap AffineMap::from_vertices(const Vec2& v0, const Vec2& v1, const Vec2& v2)
{
    AffineMap m;
    m.A.col(0) = v1 - v0;
    m.A.col(1) = v2 - v0;
    m.b = v0;
    m.det = m.A.determinant();
    m.A_inv = m.A.inverse();
    return m;
}

double shape_ratio(const Vec2& a, const Vec2& b, const Vec2& c)
{
    const double la = (b - c).norm();
    const double lb = (c - a).norm();
    const double lc = (a - b).norm();
    const Mat2 m = (Mat2() << b - a, c - a).finished();
    const double area = 0.5 * std::abs(m.determinant());
    const double s = 0.5 * (la + lb + lc);
    return la * lb * lc * s / (4.0 * area * area);
}

Mesh::Mesh(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> triangles, OrientationPolicy policy)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles))
{
    DPG_THROW_IF(triangles_.empty(), ErrorCode::InvalidArgument, "mesh has no triangles");
    const int nv = num_vertices();
    for (std::size_t k = 0; k < triangles_.size(); ++k) {
        auto& t = triangles_[k];
        for (int v : t) {
            DPG_THROW_IF(v < 0 || v >= nv, ErrorCode::InvalidArgument,
                         "triangle " + std::to_string(k) + " references vertex " + std::to_string(v) +
                             " out of range");
        }
        DPG_THROW_IF(t[0] == t[1] || t[1] == t[2] || t[0] == t[2], ErrorCode::InvalidArgument,
                     "triangle " + std::to_string(k) + " repeats a vertex");
        const Vec2& a = vertices_[static_cast<std::size_t>(t[0])];
        const Vec2& b = vertices_[static_cast<std::size_t>(t[1])];
        const Vec2& c = vertices_[static_cast<std::size_t>(t[2])];
        const double det = (b - a).x() * (c - a).y() - (b - a).y() * (c - a).x();
        const double scale = std::max({(b - a).squaredNorm(), (c - a).squaredNorm(), 1e-300});
        DPG_THROW_IF(std::abs(det) <= 1e-14 * scale, ErrorCode::InvertedElement,
                     "triangle " + std::to_string(k) + " is degenerate");
        if (det < 0.0) {
            DPG_THROW_IF(policy == OrientationPolicy::Reject, ErrorCode::InvertedElement,
                         "triangle " + std::to_string(k) + " is clockwise (inverted)");
            std::swap(t[1], t[2]);
        }
    }
    build();
}

void Mesh::build()
{
    const std::size_t nt = triangles_.size();
    std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> edges;
    for (std::size_t k = 0; k < nt; ++k) {
        const auto& t = triangles_[k];
        for (int e = 0; e < 3; ++e) {
            const int a = t[static_cast<std::size_t>((e + 1) % 3)];
            const int b = t[static_cast<std::size_t>((e + 2) % 3)];
            edges[{std::min(a, b), std::max(a, b)}].emplace_back(static_cast<int>(k), e);
        }
    }

    facets_.clear();
    facets_.reserve(edges.size());
    element_facets_.assign(nt, {-1, -1, -1});
    vertex_boundary_.assign(vertices_.size(), false);
    for (const auto& [key, owners] : edges) {
        DPG_THROW_IF(owners.size() > 2, ErrorCode::NonManifold,
                     "facet (" + std::to_string(key.first) + ", " + std::to_string(key.second) + ") is shared by " +
                         std::to_string(owners.size()) + " triangles");
        Facet f;
        f.vertices = {key.first, key.second};
        auto sorted = owners;
        std::sort(sorted.begin(), sorted.end());
        f.elements[0] = sorted[0].first;
        f.elements[1] = sorted.size() == 2 ? sorted[1].first : -1;
        f.boundary = sorted.size() == 1;
        const auto& t = triangles_[static_cast<std::size_t>(sorted[0].first)];
        const int e = sorted[0].second;
        const Vec2& a = vertices_[static_cast<std::size_t>(t[static_cast<std::size_t>((e + 1) % 3)])];
        const Vec2& b = vertices_[static_cast<std::size_t>(t[static_cast<std::size_t>((e + 2) % 3)])];
        const Vec2 d = b - a;
        f.length = d.norm();
        f.normal = Vec2(d.y(), -d.x()) / f.length;
        const int index = static_cast<int>(facets_.size());
        for (const auto& [k, le] : owners) {
            element_facets_[static_cast<std::size_t>(k)][static_cast<std::size_t>(le)] = index;
        }
        if (f.boundary) {
            vertex_boundary_[static_cast<std::size_t>(key.first)] = true;
            vertex_boundary_[static_cast<std::size_t>(key.second)] = true;
        }
        facets_.push_back(f);
    }

    maps_.clear();
    maps_.reserve(nt);
    h_max_ = 0.0;
    h_min_ = std::numeric_limits<double>::infinity();
    max_shape_ratio_ = 0.0;
    for (std::size_t k = 0; k < nt; ++k) {
        const auto& t = triangles_[k];
        const Vec2& a = vertices_[static_cast<std::size_t>(t[0])];
        const Vec2& b = vertices_[static_cast<std::size_t>(t[1])];
        const Vec2& c = vertices_[static_cast<std::size_t>(t[2])];
        maps_.push_back(AffineMap::from_vertices(a, b, c));
        const double h = std::max({(b - a).norm(), (c - b).norm(), (a - c).norm()});
        h_max_ = std::max(h_max_, h);
        h_min_ = std::min(h_min_, h);
        max_shape_ratio_ = std::max(max_shape_ratio_, shape_ratio(a, b, c));
    }
    if (max_shape_ratio_ > kShapeRatioWarning) {
        std::cerr << "warning: mesh shape ratio " << max_shape_ratio_ << " exceeds " << kShapeRatioWarning
                  << '\n';
    }
}

int Mesh::num_boundary_facets() const
{
    return static_cast<int>(std::count_if(facets_.begin(), facets_.end(), [](const Facet& f) { return f.boundary; }));
}

bool Mesh::edge_reversed(int k, int e) const
{
    const auto& t = triangles_[static_cast<std::size_t>(k)];
    return t[static_cast<std::size_t>((e + 1) % 3)] > t[static_cast<std::size_t>((e + 2) % 3)];
}

double Mesh::flux_sign(int k, int e) const
{
    return facet(element_facet(k, e)).elements[0] == k ? 1.0 : -1.0;
}

double Mesh::diameter(int k) const
{
    const auto& t = triangles_[static_cast<std::size_t>(k)];
    const Vec2& a = vertices_[static_cast<std::size_t>(t[0])];
    const Vec2& b = vertices_[static_cast<std::size_t>(t[1])];
    const Vec2& c = vertices_[static_cast<std::size_t>(t[2])];
    return std::max({(b - a).norm(), (c - b).norm(), (a - c).norm()});
}

double Mesh::total_area() const
{
    double sum = 0.0;
    for (int k = 0; k < num_elements(); ++k) sum += area(k);
    return sum;
}

Mesh unit_square_mesh(int n)
{
    DPG_THROW_IF(n < 1, ErrorCode::InvalidArgument, "unit_square_mesh needs n >= 1");
    std::vector<Vec2> vertices;
    vertices.reserve(static_cast<std::size_t>((n + 1) * (n + 1)));
    for (int j = 0; j <= n; ++j) {
        for (int i = 0; i <= n; ++i) {
            vertices.emplace_back(static_cast<double>(i) / n, static_cast<double>(j) / n);
        }
    }
    std::vector<std::array<int, 3>> triangles;
    triangles.reserve(static_cast<std::size_t>(2 * n * n));
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const int v00 = j * (n + 1) + i;
            const int v10 = v00 + 1;
            const int v01 = v00 + n + 1;
            const int v11 = v01 + 1;
            triangles.push_back({v00, v10, v11});
            triangles.push_back({v00, v11, v01});
        }
    }
    return Mesh(std::move(vertices), std::move(triangles));
}

Mesh reference_triangle_mesh()
{
    return Mesh({Vec2(0.0, 0.0), Vec2(1.0, 0.0), Vec2(0.0, 1.0)}, {{0, 1, 2}});
}

Mesh refine_uniform(const Mesh& mesh)
{
    const int nv = mesh.num_vertices();
    std::vector<Vec2> vertices = mesh.vertices();
    vertices.reserve(static_cast<std::size_t>(nv + mesh.num_facets()));
    for (const Facet& f : mesh.facets()) {
        vertices.push_back(0.5 * (mesh.vertices()[static_cast<std::size_t>(f.vertices[0])] +
                                  mesh.vertices()[static_cast<std::size_t>(f.vertices[1])]));
    }
    std::vector<std::array<int, 3>> triangles;
    triangles.reserve(static_cast<std::size_t>(4 * mesh.num_elements()));
    for (int k = 0; k < mesh.num_elements(); ++k) {
        const auto& t = mesh.triangles()[static_cast<std::size_t>(k)];
        const int m0 = nv + mesh.element_facet(k, 0);
        const int m1 = nv + mesh.element_facet(k, 1);
        const int m2 = nv + mesh.element_facet(k, 2);
        triangles.push_back({t[0], m2, m1});
        triangles.push_back({m2, t[1], m0});
        triangles.push_back({m1, m0, t[2]});
        triangles.push_back({m0, m1, m2});
    }
    return Mesh(std::move(vertices), std::move(triangles));
}

}  // namespace dpg::mesh
