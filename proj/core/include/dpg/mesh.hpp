#pragma once

#include <Eigen/Dense>

#include <array>
#include <filesystem>
#include <vector>

namespace dpg::mesh {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// x = A xhat + b from the reference triangle onto an element.
struct AffineMap {
    Mat2 A = Mat2::Identity();
    Vec2 b = Vec2::Zero();
    double det = 1.0;
    Mat2 A_inv = Mat2::Identity();

    static AffineMap from_vertices(const Vec2& v0, const Vec2& v1, const Vec2& v2);

    Vec2 forward(const Vec2& xhat) const { return A * xhat + b; }
    Vec2 inverse(const Vec2& x) const { return A_inv * (x - b); }
    /// Maps reference gradients to physical ones.
    Mat2 inverse_transpose() const { return A_inv.transpose(); }
};

/// Piola-type transforms between reference and physical fields.
class PiolaMap {
public:
    explicit PiolaMap(const AffineMap& map) : map_(map) {}

    double scalar_forward(double value_hat) const { return value_hat; }
    double scalar_inverse(double value) const { return value; }

    /// H(div): tau = A tau^ / det A.
    Vec2 hdiv_forward(const Vec2& tau_hat) const { return map_.A * tau_hat / map_.det; }
    Vec2 hdiv_inverse(const Vec2& tau) const { return map_.det * (map_.A_inv * tau); }

    /// Symmetric matrices: tau = A tau^ A^t / det A.
    Mat2 sym_forward(const Mat2& tau_hat) const { return map_.A * tau_hat * map_.A.transpose() / map_.det; }
    Mat2 sym_inverse(const Mat2& tau) const
    {
        return map_.det * map_.A_inv * tau * map_.A_inv.transpose();
    }

    const AffineMap& map() const { return map_; }

private:
    AffineMap map_;
};

struct Facet {
    std::array<int, 2> vertices{};   // vertices[0] < vertices[1]
    std::array<int, 2> elements{-1, -1};  // elements[0] < elements[1]; -1 on the boundary
    bool boundary = false;
    /// Points out of elements[0], i.e. from the lower to the higher element index,
    /// and outward on the boundary.
    Vec2 normal = Vec2::Zero();
    double length = 0.0;
};

enum class OrientationPolicy { Reject, Reorient };

/// Conforming triangulation with its skeleton.
///
/// Facets are numbered in lexicographic order of their sorted vertex pairs.
/// Local edge e of a triangle (v0, v1, v2) joins v_{(e+1)%3} and v_{(e+2)%3}.
class Mesh {
public:
    Mesh() = default;
    Mesh(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> triangles,
         OrientationPolicy policy = OrientationPolicy::Reject);

    int num_vertices() const { return static_cast<int>(vertices_.size()); }
    int num_elements() const { return static_cast<int>(triangles_.size()); }
    int num_facets() const { return static_cast<int>(facets_.size()); }
    int num_boundary_facets() const;

    const std::vector<Vec2>& vertices() const { return vertices_; }
    const std::vector<std::array<int, 3>>& triangles() const { return triangles_; }
    const std::vector<Facet>& facets() const { return facets_; }
    const Facet& facet(int f) const { return facets_[static_cast<std::size_t>(f)]; }

    /// Facet index of local edge e of element k.
    int element_facet(int k, int e) const { return element_facets_[static_cast<std::size_t>(k)][static_cast<std::size_t>(e)]; }
    /// True when local edge e runs from the higher to the lower global vertex index.
    bool edge_reversed(int k, int e) const;
    /// +1 when the element's outward normal on local edge e equals the facet normal.
    double flux_sign(int k, int e) const;

    bool vertex_on_boundary(int v) const { return vertex_boundary_[static_cast<std::size_t>(v)]; }

    const AffineMap& map(int k) const { return maps_[static_cast<std::size_t>(k)]; }
    double area(int k) const { return 0.5 * maps_[static_cast<std::size_t>(k)].det; }
    double diameter(int k) const;
    double total_area() const;

    double h_max() const { return h_max_; }
    double h_min() const { return h_min_; }
    /// Largest circumradius / inradius ratio (2 for an equilateral triangle).
    double max_shape_ratio() const { return max_shape_ratio_; }

private:
    void build();

    std::vector<Vec2> vertices_;
    std::vector<std::array<int, 3>> triangles_;
    std::vector<Facet> facets_;
    std::vector<std::array<int, 3>> element_facets_;
    std::vector<bool> vertex_boundary_;
    std::vector<AffineMap> maps_;
    double h_max_ = 0.0;
    double h_min_ = 0.0;
    double max_shape_ratio_ = 0.0;
};

/// Shape ratios above this value trigger a warning on stderr.
inline constexpr double kShapeRatioWarning = 20.0;

double shape_ratio(const Vec2& a, const Vec2& b, const Vec2& c);

/// [0,1]^2 split into n x n squares, each cut along the (i,j)-(i+1,j+1) diagonal.
Mesh unit_square_mesh(int n);

/// The single reference triangle (0,0), (1,0), (0,1).
Mesh reference_triangle_mesh();

/// Red refinement: every triangle into four congruent children. Old vertices
/// keep their indices; edge midpoints follow in facet order; the children of
/// element k are 4k (corner at v0), 4k+1 (v1), 4k+2 (v2), 4k+3 (centre).
Mesh refine_uniform(const Mesh& mesh);

/// ASCII format: "dpgmesh 2", "<nv> <nt>", nv lines "x y", nt lines "i j k".
Mesh read_mesh(const std::filesystem::path& path, OrientationPolicy policy = OrientationPolicy::Reject);
void write_mesh(const Mesh& mesh, const std::filesystem::path& path);

}  // namespace dpg::mesh
