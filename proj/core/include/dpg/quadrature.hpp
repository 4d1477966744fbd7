#pragma once

#include <Eigen/Dense>

namespace dpg::refelem {

/// Quadrature on the reference triangle {(x, y) : x, y >= 0, x + y <= 1}.
struct QuadratureRule {
    Eigen::MatrixX3d barycentric;  // (1 - x - y, x, y) per point
    Eigen::MatrixX2d points;       // cartesian reference coordinates
    Eigen::VectorXd weights;       // sum to the reference area 1/2
    int exactness = 0;

    int size() const { return static_cast<int>(weights.size()); }
};

/// Gauss rule on [0, 1]; weights sum to 1.
struct LineRule {
    Eigen::VectorXd points;
    Eigen::VectorXd weights;
    int exactness = 0;

    int size() const { return static_cast<int>(weights.size()); }
};

inline constexpr int kMaxQuadratureDegree = 80;

/// Rule exact for all polynomials of total degree <= q. Rules are built once
/// and cached; the returned reference stays valid for the program lifetime.
const QuadratureRule& quadrature_rule(int q);

const LineRule& line_rule(int q);

/// Gauss-Jacobi nodes/weights on [-1, 1] for the weight (1-z)^alpha (1+z)^beta.
void gauss_jacobi(int n, double alpha, double beta, Eigen::VectorXd& nodes, Eigen::VectorXd& weights);

}  // namespace dpg::refelem
