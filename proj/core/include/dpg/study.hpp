#pragma once

#include "dpg/extension.hpp"
#include "dpg/manufactured.hpp"
#include "dpg/pipeline.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace dpg::study {

/// Errors of a trial function against the exact solution. Trace and flux
/// errors use the discrete minimum-energy extension norms at the enriched
/// degrees p+3 (traces) and p+2 (fluxes).
struct ErrorNorms {
    double sigma_l2 = 0.0;
    double u_l2 = 0.0;
    double trace_h12 = 0.0;  // discrete
    double flux_hm12 = 0.0;  // discrete
    std::vector<int> flagged_elements;  // singular extension problems

    double total() const;
};

/// Degrees of the extension problems used for error reporting.
int error_trace_degree(int p);
int error_flux_degree(int p);

/// `local[k]` is the element-local trial vector of element k.
ErrorNorms compute_errors(const Discretization& d, const std::vector<Eigen::VectorXd>& local,
                          const ManufacturedSolution& exact, extension::Method method = extension::Method::Kkt);

/// Errors of the computed solution.
ErrorNorms solution_errors(const Discretization& d, const ManufacturedSolution& exact,
                           extension::Method method = extension::Method::Kkt);

/// Best-approximation surrogate in U_h: L2 projections of sigma and u, the
/// continuous degree p+1 trace interpolant, and L2 projections of the flux.
std::vector<Eigen::VectorXd> best_approximation(const Discretization& d, const ManufacturedSolution& exact);

struct Quasioptimality {
    double error = 0.0;
    double best = 0.0;
    double ratio = 0.0;
};

Quasioptimality quasioptimality_check(const Discretization& d, const ManufacturedSolution& exact);

/// eta^2 = sum_K (l_K - B_K u_K)^T G_K^{-1} (l_K - B_K u_K), plus the beta
/// residual for elasticity.
struct ResidualIndicator {
    double eta = 0.0;
    std::vector<double> element;  // eta_K
    double beta = 0.0;
};

ResidualIndicator residual_indicator(const Discretization& d);

/// max_i |b(U, V_i) - l(V_i)| / max_i |l(V_i)| over all local test basis
/// functions, with U the exact solution evaluated by direct quadrature.
double residual_check(const Discretization& d, const ManufacturedSolution& exact);

/// Discrete U-Gram over the free DOFs: L2 on sigma and u, extension norms of
/// degree p+1 (traces) and p (fluxes), unit weight on alpha.
Eigen::SparseMatrix<double> u_gram(const Discretization& d);

struct ConstantsReport {
    double c_pi = 0.0;           // probe-space lower bound on the reference element
    double norm_equiv_min = 0.0;  // min sqrt(x^T S x / x^T M x)
    double norm_equiv_max = 0.0;
    double lambda0 = 0.0;         // extremal eigenvalues of the U-Gram
    double lambda1 = 0.0;
    double kappa = 0.0;           // of S on the same mesh
    double kappa_slope = 0.0;
    double rate_sigma = 0.0;
    double rate_u = 0.0;
    int dofs = 0;
};

/// Fills the mesh-level entries (norm equivalence, lambdas, kappa) from `d`.
ConstantsReport measure_constants(const Discretization& d);
std::string constants_text(const ConstantsReport& report);

struct StudyConfig {
    spaces::ProblemKind problem = spaces::ProblemKind::Poisson;
    int p = 1;
    spaces::TestSpec test;
    /// Level l uses unit_square_mesh(n * 2^l) unless a base mesh is given,
    /// which is then refined uniformly.
    int n = 2;
    int levels = 4;
    std::optional<mesh::Mesh> base_mesh;
    system::SolverOptions solver;
    bool condition = true;
    double condition_tolerance = 1e-6;
    bool errors = true;
    double mu = 1.0;
    double lambda = 1.0;
    int quadrature_degree = -1;
};

struct LevelResult {
    int level = 0;
    double h = 0.0;
    int dofs = 0;
    int elements = 0;
    ErrorNorms errors;
    double eta = 0.0;
    double kappa = 0.0;
    Quasioptimality quasi;
    double alpha = 0.0;
    system::SolveReport solve;
};

struct RateTable {
    std::vector<LevelResult> rows;
    std::vector<std::optional<double>> rate_sigma;  // pairwise; empty on the first row
    std::vector<std::optional<double>> rate_u;
    double fit_sigma = 0.0;  // least squares over the last three levels
    double fit_u = 0.0;
    double kappa_slope = 0.0;  // least squares over all levels
    bool failed = false;
    std::string failure;
};

/// Pairwise rates and least-squares fits from `rows`.
void fill_rates(RateTable& table);

/// Least-squares slope of log y against log x.
double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

mesh::Mesh level_mesh(const StudyConfig& config, int level);

/// Solves on every level. A failing level stops the study; the partial table
/// is returned with `failed` set.
RateTable convergence_study(const StudyConfig& config, const ManufacturedSolution& exact);

/// kappa(S) per level with the fitted slope; needs at least two levels.
RateTable condition_study(const StudyConfig& config);

/// level,h,dofs,err_sigma_L2,err_u_L2,err_trace_h12,err_flux_hm12,eta,kappa,rate_sigma,rate_u
std::string rates_csv(const RateTable& table);

/// Two-column "log h  log err" files, one per quantity.
void write_plot_data(const RateTable& table, const std::filesystem::path& dir);

}  // namespace dpg::study
