#include "dpg/system.hpp"

#include "dpg/error.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

namespace dpg::system {

namespace {

using Triplet = Eigen::Triplet<double>;

Eigen::VectorXd start_vector(Eigen::Index n)
{
    // Deterministic and not orthogonal to any structured eigenvector in practice.
    Eigen::VectorXd x(n);
    for (Eigen::Index i = 0; i < n; ++i) x(i) = 1.0 + 0.5 * std::sin(0.7 * static_cast<double>(i) + 0.3);
    return x.normalized();
}

}  // namespace

Eigen::SparseVector<double> beta_row(const spaces::TrialDofMap& dofs, const std::vector<t2t::ElementOperators>& ops)
{
    Eigen::SparseVector<double> b(dofs.num_dofs());
    for (const auto& op : ops) {
        if (op.beta_row.size() == 0) continue;
        const auto& map = dofs.element_dofs(op.element);
        for (Eigen::Index j = 0; j < op.beta_row.size(); ++j) {
            const int gj = map[static_cast<std::size_t>(j)];
            if (gj >= 0 && op.beta_row(j) != 0.0) b.coeffRef(gj) += op.beta_row(j);
        }
    }
    return b;
}

LinearSystem assemble(const spaces::TrialDofMap& dofs, const std::vector<t2t::ElementOperators>& ops)
{
    const int n = dofs.num_dofs();
    DPG_THROW_IF(n <= 0, ErrorCode::InvalidArgument, "no free DOFs to assemble");
    DPG_THROW_IF(static_cast<int>(ops.size()) != dofs.num_elements(), ErrorCode::InvalidArgument,
                 "element operator count does not match the DOF map");
    LinearSystem sys;
    sys.g = Eigen::VectorXd::Zero(n);
    std::vector<Triplet> triplets;
    std::size_t reserve = 0;
    for (const auto& op : ops) reserve += static_cast<std::size_t>(op.S.size());
    triplets.reserve(reserve);

    for (const auto& op : ops) {
        const auto& map = dofs.element_dofs(op.element);
        DPG_THROW_IF(static_cast<std::size_t>(op.S.rows()) != map.size(), ErrorCode::InvalidArgument,
                     "element " + std::to_string(op.element) + ": S_K size does not match the local layout");
        for (Eigen::Index j = 0; j < op.S.cols(); ++j) {
            const int gj = map[static_cast<std::size_t>(j)];
            if (gj < 0) continue;
            DPG_THROW_IF(gj >= n, ErrorCode::InvalidArgument, "global DOF index out of range");
            sys.g(gj) += op.g(j);
            for (Eigen::Index i = 0; i < op.S.rows(); ++i) {
                const int gi = map[static_cast<std::size_t>(i)];
                if (gi >= 0) triplets.emplace_back(gi, gj, op.S(i, j));
            }
        }
    }

    if (dofs.kind() == spaces::ProblemKind::Elasticity) {
        // beta is one global test scalar with unit Gram: adds b_beta b_beta^T.
        const Eigen::SparseVector<double> b = beta_row(dofs, ops);
        for (Eigen::SparseVector<double>::InnerIterator a(b); a; ++a) {
            for (Eigen::SparseVector<double>::InnerIterator c(b); c; ++c) {
                triplets.emplace_back(static_cast<int>(a.index()), static_cast<int>(c.index()), a.value() * c.value());
            }
        }
    }

    sys.S.resize(n, n);
    sys.S.setFromTriplets(triplets.begin(), triplets.end());
    sys.S.makeCompressed();
    sys.x = Eigen::VectorXd::Zero(n);
    sys.stats.matrix_nonzeros = sys.S.nonZeros();
    return sys;
}

SolveReport solve_spd(LinearSystem& sys, const SolverOptions& options)
{
    SolveReport rep;
    const double gnorm = sys.g.norm();
    if (options.kind == SolverKind::Cholesky) {
        Eigen::SimplicialLLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>> llt(sys.S);
        if (llt.info() != Eigen::Success) {
            Eigen::SimplicialLDLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>> ldlt(sys.S);
            long pivot = -1;
            if (ldlt.info() == Eigen::Success) {
                const Eigen::VectorXd d = ldlt.vectorD();
                const double scale = d.cwiseAbs().maxCoeff();
                for (Eigen::Index i = 0; i < d.size(); ++i) {
                    if (!(d(i) > 1e-14 * scale)) {
                        pivot = ldlt.permutationPinv().indices()(i);
                        break;
                    }
                }
            }
            throw NotSpdError(pivot, "stiffness matrix is not positive definite (pivot " + std::to_string(pivot) +
                                         ")");
        }
        sys.x = llt.solve(sys.g);
        const SparseMatrix l = llt.matrixL();
        sys.stats.factor_nonzeros = l.nonZeros();
        rep.iterations = 1;
    } else {
        Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper, Eigen::DiagonalPreconditioner<double>> cg;
        cg.setTolerance(options.tolerance);
        cg.setMaxIterations(options.max_iterations);
        cg.compute(sys.S);
        sys.x = cg.solve(sys.g);
        rep.iterations = static_cast<int>(cg.iterations());
        if (cg.info() != Eigen::Success && gnorm > 0.0) {
            throw Error(ErrorCode::NotConverged, "CG did not converge in " + std::to_string(cg.iterations()) +
                                                     " iterations (residual " + std::to_string(cg.error()) + ")");
        }
    }
    rep.relative_residual = gnorm > 0.0 ? (sys.S * sys.x - sys.g).norm() / gnorm : (sys.S * sys.x).norm();
    return rep;
}

ConditionEstimate condition_estimate(const LinearSystem& sys, double tolerance, int max_iterations)
{
    return condition_estimate(sys.S, tolerance, max_iterations);
}

ConditionEstimate condition_estimate(const SparseMatrix& S, double tolerance, int max_iterations)
{
    DPG_THROW_IF(S.rows() == 0 || S.rows() != S.cols(), ErrorCode::InvalidArgument, "condition_estimate needs a square matrix");
    ConditionEstimate est;
    bool conv_max = false;
    bool conv_min = false;

    Eigen::VectorXd x = start_vector(S.rows());
    double lambda = 0.0;
    for (int it = 1; it <= max_iterations; ++it) {
        Eigen::VectorXd y = S * x;
        const double next = x.dot(y);
        est.iterations_max = it;
        const double ny = y.norm();
        if (ny == 0.0) break;
        x = y / ny;
        if (it > 1 && std::abs(next - lambda) <= tolerance * std::abs(next)) {
            lambda = next;
            conv_max = true;
            break;
        }
        lambda = next;
    }
    est.lambda_max = lambda;

    Eigen::SimplicialLLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>> llt(S);
    if (llt.info() != Eigen::Success) {
        throw NotSpdError(-1, "condition_estimate: matrix is not positive definite");
    }
    x = start_vector(S.rows());
    double mu = 0.0;
    for (int it = 1; it <= max_iterations; ++it) {
        Eigen::VectorXd y = llt.solve(x);
        const double next = x.dot(y);  // Rayleigh quotient of S^{-1}
        est.iterations_min = it;
        x = y.normalized();
        if (it > 1 && std::abs(next - mu) <= tolerance * std::abs(next)) {
            mu = next;
            conv_min = true;
            break;
        }
        mu = next;
    }
    est.lambda_min = 1.0 / mu;
    est.kappa = est.lambda_max / est.lambda_min;
    est.converged = conv_max && conv_min;
    return est;
}

void export_matrix(const SparseMatrix& S, const std::filesystem::path& path)
{
    std::ofstream out(path);
    DPG_THROW_IF(!out, ErrorCode::Io, "cannot write matrix file " + path.string());
    long nnz = 0;
    for (int k = 0; k < S.outerSize(); ++k) {
        for (SparseMatrix::InnerIterator it(S, k); it; ++it) {
            if (it.row() >= it.col()) ++nnz;
        }
    }
    out << "%%symmetric " << S.rows() << ' ' << nnz << '\n';
    char buf[96];
    for (int k = 0; k < S.outerSize(); ++k) {
        for (SparseMatrix::InnerIterator it(S, k); it; ++it) {
            if (it.row() < it.col()) continue;
            std::snprintf(buf, sizeof buf, "%ld %ld %.17g\n", static_cast<long>(it.row()), static_cast<long>(it.col()),
                          it.value());
            out << buf;
        }
    }
}

}  // namespace dpg::system
