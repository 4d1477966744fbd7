#pragma once

#include <Eigen/Dense>

namespace dpg::refelem {

/// dim P_d on a triangle.
constexpr int dim_p(int d) { return d < 0 ? 0 : (d + 1) * (d + 2) / 2; }

/// dim of homogeneous polynomials of degree exactly d in two variables.
constexpr int dim_homogeneous(int d) { return d < 0 ? 0 : d + 1; }

/// Graded lexicographic monomials X^i Y^j in the centred coordinates
/// X = 2x - 1, Y = 2y - 1. Index of X^(k-j) Y^j is dim_p(k-1) + j.
constexpr int monomial_index(int i, int j) { return dim_p(i + j - 1) + j; }

void monomial_values(int degree, double x, double y, Eigen::Ref<Eigen::VectorXd> out);

/// Values plus reference-coordinate (x, y) derivatives of all monomials.
void monomial_values_and_gradients(int degree, double x, double y, Eigen::Ref<Eigen::VectorXd> value,
                                   Eigen::Ref<Eigen::VectorXd> dx, Eigen::Ref<Eigen::VectorXd> dy);

/// Legendre polynomial L_k on [0, 1], orthonormal: int_0^1 L_j L_k dt = delta_jk.
double legendre01(int k, double t);

/// Values of L_0..L_n on [0, 1] (orthonormal).
void legendre01_all(int n, double t, Eigen::Ref<Eigen::VectorXd> out);

}  // namespace dpg::refelem
