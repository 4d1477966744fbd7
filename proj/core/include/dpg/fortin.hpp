#pragma once

#include "dpg/compliance.hpp"
#include "dpg/mesh.hpp"
#include "dpg/spaces.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace dpg::fortin {

enum class FortinKind { Pi0, Grad, Div, DivSym, Skew };

std::string to_string(FortinKind kind);

/// Linear operator on the reference triangle acting on polynomials of degree
/// <= `space_degree`, written in coordinates of the orthonormal basis
/// simplex_basis(2, space_degree) (component-major; symmetric fields use
/// Mandel components). `matrix` maps input to output coordinates.
struct FortinOperator {
    FortinKind kind = FortinKind::Pi0;
    int p = 0;
    int r = 2;
    int space_degree = 8;
    int components = 1;
    Eigen::MatrixXd matrix;
    Eigen::MatrixXd functionals;  // defining moments (rows) over input coefficients
    int equations = 0;
    int unknowns = 0;     // dimension of the constrained target space
    double sigma_min = 0.0;
    double sigma_max = 0.0;
    bool square = true;
    bool singular = false;

    /// Smallest singular value of the square system scaled by its largest.
    double normalized_sigma_min() const { return sigma_max > 0.0 ? sigma_min / sigma_max : 0.0; }
    int size() const { return static_cast<int>(matrix.rows()); }
};

inline constexpr int kDefaultProbeDegree = 8;

/// Pi_r^0, r = p + 2: target B_r^grad, moments against P_{p-1}(K) and P_p(dK).
FortinOperator build_pi0(int p, int probe_degree = kDefaultProbeDegree);
/// Pi_r^grad v = Pi_r^0 (v - mean v) + mean v.
FortinOperator build_pigrad(int p, int probe_degree = kDefaultProbeDegree);
/// Pi_{p+2}^div: target {tau in RT_{p+1} : <p_perp, tau.n> = 0 for p_perp in P_{p+1}^perp(dK)},
/// moments against P_p(K;V) and tilde-P_{p+1}(dK).
FortinOperator build_pidiv(int p, int probe_degree = kDefaultProbeDegree);
/// Symmetric variant (experimental in 2D): target P_{p+2}(K;S) with the
/// vertex normal-normal constraints n-^T tau n+ = 0 and <p_perp, tau n> = 0
/// for p_perp in P_{p+1}^perp(dK;V). A singular or non-square system yields a
/// minimal-norm least-squares operator and `singular = true`.
FortinOperator build_pidiv_sym(int p, int probe_degree = kDefaultProbeDegree);
/// L2 projection onto P_p(K) (skew coefficient).
FortinOperator build_piskew(int p, int probe_degree = kDefaultProbeDegree);

/// max |L (Pi v - v)| / max |L v| over the probe space, with L the defining
/// moments.
double moment_residual(const FortinOperator& op);

/// max ||div Pi tau - Pi_{p+1} div tau|| / ||tau||_{H(div)} over the probe
/// basis; only for Div and DivSym.
double div_commutativity_residual(const FortinOperator& op);

/// Probe-space lower bound for ||Pi||: largest generalized singular value of
/// Pi w.r.t. the V-norm (H1, H(div) or L2) on the mapped element.
double measure_cpi(const FortinOperator& op, const mesh::AffineMap& map);

struct IdentityResidual {
    std::string name;
    double residual = 0.0;
};

struct FortinReport {
    spaces::ProblemKind problem = spaces::ProblemKind::Poisson;
    int p = 0;
    int probe_degree = kDefaultProbeDegree;
    int probes = 0;
    double max_relative_residual = 0.0;  // of b(W, V - Pi V)
    std::vector<IdentityResidual> identities;
    double moment_residual = 0.0;        // worst over the operators used
    double div_commutativity = 0.0;
    double c_pi = 0.0;                   // probe-space lower bound
    double solvability_margin = 0.0;     // smallest normalized sigma_min
    bool experimental = false;           // true when Pi^(div,S) was singular
    double threshold = 1e-9;
    double commutativity_threshold = 1e-10;

    bool passed() const
    {
        return max_relative_residual <= threshold && moment_residual <= threshold &&
               div_commutativity <= commutativity_threshold;
    }
};

struct VerifyOptions {
    int probe_degree = kDefaultProbeDegree;
    int random_probes = 8;
    std::uint64_t seed = 1;
    double mu = 1.0;
    double lambda = 1.0;
};

/// Checks b(W, V - Pi V) = 0 for all local trial basis functions W on the
/// element given by `map`, over the probe basis of degree `probe_degree` plus
/// seeded random combinations.
FortinReport verify_fortin(spaces::ProblemKind problem, int p, const mesh::AffineMap& map,
                           const VerifyOptions& options = {});

/// "key: value" lines.
std::string report_text(const FortinReport& report);
/// CSV with one row per identity; `elements` labels the reports (default: index).
std::string report_csv(const std::vector<FortinReport>& reports, const std::vector<std::string>& elements = {});

}  // namespace dpg::fortin
