#pragma once

#include "dpg/spaces.hpp"
#include "dpg/t2t.hpp"

#include <Eigen/Sparse>

#include <filesystem>
#include <vector>

namespace dpg::system {

using SparseMatrix = Eigen::SparseMatrix<double>;

struct FillStats {
    long matrix_nonzeros = 0;
    long factor_nonzeros = 0;
};

/// Condensed SPD system over the free trial DOFs. S is stored in full
/// (both triangles) to keep products cheap.
struct LinearSystem {
    SparseMatrix S;
    Eigen::VectorXd g;
    Eigen::VectorXd x;
    FillStats stats;

    int size() const { return static_cast<int>(S.rows()); }
};

/// Sum of scattered S_K (plus b_beta b_beta^T for elasticity); constrained
/// DOFs are dropped. Triplets are generated in element order.
LinearSystem assemble(const spaces::TrialDofMap& dofs, const std::vector<t2t::ElementOperators>& ops);

/// b(W, beta = 1) over the free trial DOFs (elasticity only).
Eigen::SparseVector<double> beta_row(const spaces::TrialDofMap& dofs, const std::vector<t2t::ElementOperators>& ops);

enum class SolverKind { Cholesky, ConjugateGradient };

struct SolverOptions {
    SolverKind kind = SolverKind::Cholesky;
    double tolerance = 1e-12;  // CG relative residual
    int max_iterations = 100000;
};

struct SolveReport {
    double relative_residual = 0.0;
    int iterations = 0;
};

/// Fills sys.x. Throws NotSpdError with the failing pivot (original
/// numbering) when the factorization breaks down; NotConverged for CG.
SolveReport solve_spd(LinearSystem& sys, const SolverOptions& options = {});

struct ConditionEstimate {
    double kappa = 0.0;
    double lambda_max = 0.0;
    double lambda_min = 0.0;
    int iterations_max = 0;
    int iterations_min = 0;
    bool converged = false;
};

/// Power iteration for lambda_max, inverse iteration (sparse Cholesky) for
/// lambda_min, both to the given relative tolerance on the Rayleigh quotient.
ConditionEstimate condition_estimate(const SparseMatrix& S, double tolerance = 1e-6, int max_iterations = 20000);
ConditionEstimate condition_estimate(const LinearSystem& sys, double tolerance = 1e-6, int max_iterations = 20000);

/// Lower triangle as "i j value" lines after "%%symmetric <n> <nnz>".
void export_matrix(const SparseMatrix& S, const std::filesystem::path& path);

}  // namespace dpg::system
