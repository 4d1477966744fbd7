#pragma once

#include "dpg/compliance.hpp"
#include "dpg/geometry.hpp"
#include "dpg/mesh.hpp"

#include <Eigen/Dense>

#include <functional>

namespace dpg::forms {

/// Right-hand side f(x): one component (Poisson) or two (elasticity).
using SourceFn = std::function<Eigen::VectorXd(const Vec2&)>;

/// B_K (test rows x local trial columns) and the load l_K = (f, v)_K.
/// For elasticity `beta_row` holds b(W, beta = 1) restricted to K.
struct LocalFormBlocks {
    int element = -1;
    Eigen::MatrixXd B;
    Eigen::VectorXd load;
    Eigen::RowVectorXd beta_row;
};

struct LocalGram {
    int element = -1;
    Eigen::MatrixXd G;
    Eigen::LLT<Eigen::MatrixXd> llt;
};

/// Poisson: (sigma,tau) - (u,div tau) + <u^, tau.n> - (sigma,grad v) + <v, sigma^_n>.
LocalFormBlocks local_b_poisson(const mesh::Mesh& m, int k, const ElementTables& tables,
                                const SourceFn& f = nullptr);
LocalFormBlocks local_b_poisson(const ElementGeometry& g, const ElementTables& tables, const SourceFn& f = nullptr);

/// (tau,tau') + (div tau, div tau') + (v,v') + (grad v, grad v').
LocalGram local_gram_poisson(const mesh::Mesh& m, int k, const ElementTables& tables);
LocalGram local_gram_poisson(const ElementGeometry& g, const ElementTables& tables);

/// Elasticity: (A sigma,tau) + (u,div tau) - <u^, tau n> + (alpha I, A tau)/Q0
///           + (sigma, grad v) + (sigma, q) - <v, sigma^_n> + (A sigma, beta I)/Q0.
LocalFormBlocks local_b_elasticity(const mesh::Mesh& m, int k, const ElementTables& tables,
                                   const ComplianceTensor& a, double q0, const SourceFn& f = nullptr);
LocalFormBlocks local_b_elasticity(const ElementGeometry& g, const ElementTables& tables,
                                   const ComplianceTensor& a, double q0, const SourceFn& f = nullptr);

/// ||tau||^2 + ||div tau||^2 + ||v||^2 + ||grad v||^2 + ||q||^2; beta is kept outside.
LocalGram local_gram_elasticity(const mesh::Mesh& m, int k, const ElementTables& tables);
LocalGram local_gram_elasticity(const ElementGeometry& g, const ElementTables& tables);

/// Factorizes G; throws NotSpd if the Cholesky factorization fails.
void factorize(LocalGram& gram);

}  // namespace dpg::forms
