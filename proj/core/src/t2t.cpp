#include "dpg/t2t.hpp"

#include "dpg/error.hpp"

#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <string>

namespace dpg::t2t {

ElementOperators trial_to_test_local(const forms::LocalGram& gram, const forms::LocalFormBlocks& blocks)
{
    DPG_THROW_IF(gram.llt.info() != Eigen::Success || gram.llt.matrixLLT().rows() != blocks.B.rows(),
                 ErrorCode::InvalidArgument,
                 "element " + std::to_string(blocks.element) + ": Gram factor missing or of the wrong size");
    ElementOperators ops;
    ops.element = blocks.element;
    ops.B = blocks.B;
    ops.load = blocks.load;
    ops.beta_row = blocks.beta_row;
    ops.T = gram.llt.solve(blocks.B);
    ops.S = blocks.B.transpose() * ops.T;
    ops.S = 0.5 * (ops.S + ops.S.transpose()).eval();
    ops.g = ops.T.transpose() * blocks.load;
    return ops;
}

InjectivityReport local_injectivity_report(const Eigen::SparseMatrix<double>& S,
                                           const Eigen::SparseMatrix<double>& M, double threshold)
{
    DPG_THROW_IF(S.rows() != M.rows() || S.cols() != M.cols(), ErrorCode::InvalidArgument,
                 "S and the U-Gram differ in size");
    InjectivityReport rep;
    rep.threshold = threshold;
    Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(S);
    if (llt.info() != Eigen::Success) return rep;

    Eigen::VectorXd x = Eigen::VectorXd::Ones(S.rows());
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) += 0.1 * std::sin(1.0 + static_cast<double>(i));
    double lambda = 0.0;
    for (int it = 1; it <= 500; ++it) {
        Eigen::VectorXd y = llt.solve(M * x);
        const double mnorm = std::sqrt(y.dot(M * y));
        if (!(mnorm > 0.0) || !std::isfinite(mnorm)) break;
        y /= mnorm;
        const double next = y.dot(S * y);
        x = y;
        rep.iterations = it;
        if (it > 1 && std::abs(next - lambda) <= 1e-10 * std::abs(next)) {
            lambda = next;
            break;
        }
        lambda = next;
    }
    rep.sigma_min = std::sqrt(std::max(lambda, 0.0));
    rep.injective = rep.sigma_min > threshold;
    return rep;
}

}  // namespace dpg::t2t
