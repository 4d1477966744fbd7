#pragma once

#include "dpg/forms.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace dpg::t2t {

/// Element-local trial-to-test data: G_K T_K = B_K, S_K = B_K^T T_K,
/// g_K = T_K^T l_K.
struct ElementOperators {
    int element = -1;
    Eigen::MatrixXd B;
    Eigen::VectorXd load;
    Eigen::RowVectorXd beta_row;  // elasticity only
    Eigen::MatrixXd T;
    Eigen::MatrixXd S;
    Eigen::VectorXd g;
};

/// Solves G_K T_K = B_K with the cached Cholesky factor.
ElementOperators trial_to_test_local(const forms::LocalGram& gram, const forms::LocalFormBlocks& blocks);

struct InjectivityReport {
    double sigma_min = 0.0;  // sqrt of the smallest eigenvalue of S w.r.t. the U-Gram
    double threshold = 1e-8;
    bool injective = false;
    int iterations = 0;
};

/// Smallest generalized eigenvalue of S x = lambda M x, with M the discrete
/// U-Gram, by inverse iteration. A failed factorization of S reports 0.
InjectivityReport local_injectivity_report(const Eigen::SparseMatrix<double>& S,
                                           const Eigen::SparseMatrix<double>& M, double threshold = 1e-8);

}  // namespace dpg::t2t
