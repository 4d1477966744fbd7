#include "dpg/error.hpp"
#include "dpg/forms.hpp"
#include "dpg/fortin.hpp"
#include "dpg/refelem.hpp"

#include <algorithm>
#include <cstdio>
#include <random>
#include <sstream>

namespace dpg::fortin {

namespace {

using refelem::dim_p;
using Mat2 = Eigen::Matrix2d;

Eigen::MatrixXd block_diag(const Eigen::MatrixXd& a, int copies)
{
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(a.rows() * copies, a.cols() * copies);
    for (int c = 0; c < copies; ++c) out.block(c * a.rows(), c * a.cols(), a.rows(), a.cols()) = a;
    return out;
}

// Orthonormal basis probes (one per column) plus seeded random combinations.
Eigen::MatrixXd probe_set(int D, int components, int random, std::mt19937_64& rng)
{
    const Eigen::MatrixXd basis = Eigen::MatrixXd::Identity(dim_p(D) * components, dim_p(D) * components);
    Eigen::MatrixXd out(basis.rows(), basis.cols() + random);
    out.leftCols(basis.cols()) = basis;
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int j = 0; j < random; ++j) {
        Eigen::VectorXd w(basis.cols());
        for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = normal(rng);
        out.col(basis.cols() + j) = basis * w / w.norm();
    }
    return out;
}

struct Block {
    const char* name;
    int test_offset;
    int test_size;
    Eigen::MatrixXd push;  // reference coordinates -> physical test-basis coordinates
    Eigen::MatrixXd pi;    // reference operator
    Eigen::MatrixXd probes;
};

struct Column {
    const char* identity;
    int block;
    int offset;
    int size;
};

}  // namespace

FortinReport verify_fortin(spaces::ProblemKind problem, int p, const mesh::AffineMap& map,
                           const VerifyOptions& options)
{
    DPG_THROW_IF(p < 0, ErrorCode::InvalidArgument, "p must be >= 0");
    DPG_THROW_IF(!(map.det > 0.0), ErrorCode::InvertedElement, "Fortin check needs a positively oriented element");
    const int D = std::max(options.probe_degree, p + 2);
    const int nm = dim_p(D);
    const bool elastic = problem == spaces::ProblemKind::Elasticity;

    FortinReport report;
    report.problem = problem;
    report.p = p;
    report.probe_degree = D;

    const mesh::Mesh single({map.b, map.b + map.A.col(0), map.b + map.A.col(1)}, {{0, 1, 2}});
    spaces::TestLayout layout;
    layout.kind = problem;
    layout.p = p;
    layout.r_tau = D;
    layout.r_v = D;
    layout.q_degree = elastic ? D : 0;
    const forms::ElementTables tables = forms::make_tables(layout);

    Eigen::MatrixXd B;
    Eigen::RowVectorXd beta_row;
    const forms::ComplianceTensor compliance = forms::ComplianceTensor::isotropic(options.mu, options.lambda);
    if (elastic) {
        const forms::LocalFormBlocks blocks =
            forms::local_b_elasticity(single, 0, tables, compliance, compliance.trace_of_identity());
        B = blocks.B;
        beta_row = blocks.beta_row;
    } else {
        B = forms::local_b_poisson(single, 0, tables).B;
    }

    // Test functions are compositions of the same orthonormal basis, so the
    // scalar pushforward is the identity in these coordinates.
    const Eigen::MatrixXd qinv_t = Eigen::MatrixXd::Identity(nm, nm);
    const Mat2& A = map.A;
    std::mt19937_64 rng(options.seed);

    std::vector<FortinOperator> ops;
    std::vector<Block> blocks;
    const FortinOperator grad = build_pigrad(p, D);
    ops.push_back(build_pi0(p, D));
    if (!elastic) {
        const FortinOperator div = build_pidiv(p, D);
        Eigen::MatrixXd push(2 * nm, 2 * nm);
        for (int c = 0; c < 2; ++c) {
            for (int d = 0; d < 2; ++d) push.block(c * nm, d * nm, nm, nm) = (A(c, d) / map.det) * qinv_t;
        }
        blocks.push_back({"tau", 0, 2 * nm, push, div.matrix, probe_set(D, 2, options.random_probes, rng)});
        blocks.push_back({"v", 2 * nm, nm, qinv_t, grad.matrix, probe_set(D, 1, options.random_probes, rng)});
        ops.push_back(div);
    } else {
        const FortinOperator sym = build_pidiv_sym(p, D);
        const FortinOperator skew = build_piskew(p, D);
        Eigen::Matrix3d mandel_push;
        for (int c = 0; c < 3; ++c) {
            const Mat2 s = refelem::component_matrix(refelem::Kind::Symmetric, c);
            mandel_push.col(c) = forms::mandel(A * s * A.transpose()) / map.det;
        }
        Eigen::MatrixXd push(3 * nm, 3 * nm);
        for (int c = 0; c < 3; ++c) {
            for (int d = 0; d < 3; ++d) push.block(c * nm, d * nm, nm, nm) = mandel_push(c, d) * qinv_t;
        }
        blocks.push_back({"tau", 0, 3 * nm, push, sym.matrix, probe_set(D, 3, options.random_probes, rng)});
        blocks.push_back({"v", 3 * nm, 2 * nm, block_diag(qinv_t, 2), block_diag(grad.matrix, 2),
                          probe_set(D, 2, options.random_probes, rng)});
        blocks.push_back({"q", 5 * nm, nm, qinv_t, skew.matrix, probe_set(D, 1, options.random_probes, rng)});
        ops.push_back(sym);
        ops.push_back(skew);
        report.experimental = sym.singular;
    }

    const spaces::LocalTrialLayout trial = spaces::local_trial_layout(problem, p);
    std::vector<Column> columns;
    if (!elastic) {
        columns = {{"(sigma, tau - Pi tau)", 0, trial.sigma_offset, trial.sigma_size},
                   {"(u, div(tau - Pi tau))", 0, trial.u_offset, trial.u_size},
                   {"<u^, (tau - Pi tau).n>", 0, trial.trace_offset, trial.trace_size},
                   {"(sigma, grad(v - Pi v))", 1, trial.sigma_offset, trial.sigma_size},
                   {"<v - Pi v, sigma^_n>", 1, trial.flux_offset, trial.flux_size}};
    } else {
        columns = {{"(A sigma, tau - Pi tau)", 0, trial.sigma_offset, trial.sigma_size},
                   {"(u, div(tau - Pi tau))", 0, trial.u_offset, trial.u_size},
                   {"<u^, (tau - Pi tau) n>", 0, trial.trace_offset, trial.trace_size},
                   {"(alpha I, A(tau - Pi tau))/Q0", 0, trial.alpha_offset, 1},
                   {"(sigma, grad(v - Pi v))", 1, trial.sigma_offset, trial.sigma_size},
                   {"<v - Pi v, sigma^_n>", 1, trial.flux_offset, trial.flux_size},
                   {"(sigma, q - Pi q)", 2, trial.sigma_offset, trial.sigma_size}};
    }

    double scale = 0.0;
    std::vector<Eigen::MatrixXd> residuals;
    for (const Block& b : blocks) {
        const Eigen::MatrixXd rows = B.middleRows(b.test_offset, b.test_size);
        const Eigen::MatrixXd yv = b.push * b.probes;
        const Eigen::MatrixXd ypi = b.push * (b.pi * b.probes);
        scale = std::max(scale, (rows.transpose() * yv).cwiseAbs().maxCoeff());
        residuals.push_back(rows.transpose() * (yv - ypi));
        report.probes += static_cast<int>(b.probes.cols());
    }
    scale = std::max(scale, 1e-300);
    for (const Column& c : columns) {
        const double r =
            residuals[static_cast<std::size_t>(c.block)].middleRows(c.offset, c.size).cwiseAbs().maxCoeff() / scale;
        report.identities.push_back({c.identity, r});
        report.max_relative_residual = std::max(report.max_relative_residual, r);
    }

    if (elastic) {
        // beta is a global constant and Pi beta = beta, so this term vanishes identically.
        const double beta = 1.0;
        const double pi_beta = beta;
        const double r = (beta_row * (beta - pi_beta)).cwiseAbs().maxCoeff() / scale;
        report.identities.push_back({"(A sigma, (beta - Pi beta) I)/Q0", r});
        report.max_relative_residual = std::max(report.max_relative_residual, r);
    }

    report.solvability_margin = 1.0;
    for (const FortinOperator& op : ops) {
        report.moment_residual = std::max(report.moment_residual, moment_residual(op));
        // Pi0 is an intermediate without an h-uniform H1 bound; C_Pi is for Pi^grad.
        if (op.kind != FortinKind::Pi0) report.c_pi = std::max(report.c_pi, measure_cpi(op, map));
        if (op.kind != FortinKind::Skew) {
            report.solvability_margin = std::min(report.solvability_margin, op.normalized_sigma_min());
        }
        if (op.kind == FortinKind::Div || op.kind == FortinKind::DivSym) {
            report.div_commutativity = div_commutativity_residual(op);
        }
    }
    report.c_pi = std::max(report.c_pi, measure_cpi(grad, map));
    return report;
}

std::string report_text(const FortinReport& r)
{
    std::ostringstream out;
    char buf[160];
    out << "problem: " << spaces::to_string(r.problem) << '\n';
    out << "p: " << r.p << '\n';
    out << "probe_degree: " << r.probe_degree << '\n';
    out << "probes: " << r.probes << '\n';
    for (const auto& id : r.identities) {
        std::snprintf(buf, sizeof buf, "identity %s: %.3e\n", id.name.c_str(), id.residual);
        out << buf;
    }
    std::snprintf(buf, sizeof buf, "max_relative_residual: %.3e\n", r.max_relative_residual);
    out << buf;
    std::snprintf(buf, sizeof buf, "moment_residual: %.3e\n", r.moment_residual);
    out << buf;
    std::snprintf(buf, sizeof buf, "div_commutativity: %.3e\n", r.div_commutativity);
    out << buf;
    std::snprintf(buf, sizeof buf, "c_pi_lower_bound: %.6f\n", r.c_pi);
    out << buf;
    std::snprintf(buf, sizeof buf, "solvability_margin: %.3e\n", r.solvability_margin);
    out << buf;
    if (r.experimental) out << "experimental: symmetric div operator system is singular, least-squares used\n";
    out << "status: " << (r.passed() ? "PASS" : "FAIL") << '\n';
    return out.str();
}

std::string report_csv(const std::vector<FortinReport>& reports, const std::vector<std::string>& elements)
{
    DPG_THROW_IF(!elements.empty() && elements.size() != reports.size(), ErrorCode::InvalidArgument,
                 "one element label per report expected");
    std::ostringstream out;
    out << "element,problem,p,identity,residual\n";
    char buf[64];
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const FortinReport& r = reports[i];
        const std::string element = elements.empty() ? std::to_string(i) : elements[i];
        for (const auto& id : r.identities) {
            std::snprintf(buf, sizeof buf, "%.6e", id.residual);
            out << element << ',' << spaces::to_string(r.problem) << ',' << r.p << ",\"" << id.name << "\"," << buf
                << '\n';
        }
    }
    return out.str();
}

}  // namespace dpg::fortin
