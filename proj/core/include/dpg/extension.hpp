#pragma once

#include "dpg/mesh.hpp"

#include <Eigen/Dense>

#include <functional>

namespace dpg::extension {

enum class Method { Kkt, Nullspace };

/// Function on the boundary of one element, g(edge, s), with s running
/// along the local (counter-clockwise) edge direction.
using EdgeFunction = std::function<double(int edge, double s)>;

/// Continuous boundary data of degree k: 3 vertex values, then k-1 edge
/// bubble coefficients per local edge. Exact for traces of P_k(K).
Eigen::VectorXd interpolate_trace(const EdgeFunction& g, int k);
int trace_data_size(int k);

/// Discontinuous flux data of degree k: k+1 orthonormal Legendre coefficients
/// per local edge (L2 projection in the edge parameter).
Eigen::VectorXd project_flux(const EdgeFunction& g, int k);
int flux_data_size(int k);

/// Gram of the discrete H^{1/2}(dK) norm:
/// d^T M d = min { ||w||^2 + ||grad w||^2 : w in P_k(K), w = d on dK }.
Eigen::MatrixXd trace_gram(const mesh::AffineMap& map, int k, Method method = Method::Kkt);

/// Gram of the discrete H^{-1/2}(dK) norm:
/// d^T M d = min { ||tau||^2 + ||div tau||^2 : tau in RT_k(K), tau.n = d on dK }.
Eigen::MatrixXd flux_gram(const mesh::AffineMap& map, int k, Method method = Method::Kkt);

/// Constraint matrices on the reference element (rows: data, columns: coefficients
/// of the orthonormal P_k resp. RT_k basis). Exposed for tests.
Eigen::MatrixXd trace_constraints(int k);
Eigen::MatrixXd flux_constraints(int k);

}  // namespace dpg::extension
