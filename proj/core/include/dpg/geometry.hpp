#pragma once

#include "dpg/mesh.hpp"
#include "dpg/refelem.hpp"
#include "dpg/spaces.hpp"

#include <Eigen/Dense>

#include <array>

namespace dpg::forms {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// Reference tabulations shared by every element of one discretization:
/// trial P_p, test P_{r_tau}, P_{r_v}, P_q on the volume rule and on the
/// three reference edges.
struct ElementTables {
    spaces::TestLayout layout;
    int quadrature_degree = 0;
    const refelem::QuadratureRule* rule = nullptr;
    const refelem::LineRule* line = nullptr;
    refelem::TraceBasis trace{0};

    refelem::Tabulation trial;
    refelem::Tabulation tau;
    refelem::Tabulation v;
    Eigen::MatrixXd q;

    std::array<Eigen::MatrixXd, 3> trial_edge;
    std::array<Eigen::MatrixXd, 3> tau_edge;
    std::array<Eigen::MatrixXd, 3> v_edge;

    int trial_dim() const { return static_cast<int>(trial.values.cols()); }
    int tau_dim() const { return static_cast<int>(tau.values.cols()); }
    int v_dim() const { return static_cast<int>(v.values.cols()); }
    int q_dim() const { return static_cast<int>(q.cols()); }
};

/// Default exactness 2 max(r, p+1) + 2.
int default_quadrature_degree(const spaces::TestLayout& layout);

/// Throws InvalidArgument when the exactness is below p + r (or below 2r for the Gram).
ElementTables make_tables(const spaces::TestLayout& layout, int quadrature_degree = -1);

struct EdgeGeometry {
    double length = 0.0;
    Vec2 normal = Vec2::Zero();  // outward from the element
    bool reversed = false;
    double flux_sign = 1.0;
    Eigen::MatrixX2d points;     // physical line-rule points
    Eigen::VectorXd weights;     // physical line weights (sum = length)
    Eigen::MatrixXd trace;       // line points x trace basis (one component)
    Eigen::MatrixXd flux;        // line points x flux basis, sign included
};

/// Physical quadrature data of one element.
struct ElementGeometry {
    int element = -1;
    mesh::AffineMap map;
    Mat2 grad_map = Mat2::Identity();  // A^{-T}
    Eigen::MatrixX2d points;
    Eigen::VectorXd weights;           // det A times reference weights
    std::array<EdgeGeometry, 3> edges;

    /// Physical x / y derivatives from reference derivatives.
    Eigen::MatrixXd dx(const refelem::Tabulation& t) const;
    Eigen::MatrixXd dy(const refelem::Tabulation& t) const;
    /// Physical derivative in direction j (0: x, 1: y).
    Eigen::MatrixXd d(const refelem::Tabulation& t, int j) const { return j == 0 ? dx(t) : dy(t); }
};

ElementGeometry element_geometry(const mesh::Mesh& m, int k, const ElementTables& tables);

}  // namespace dpg::forms
