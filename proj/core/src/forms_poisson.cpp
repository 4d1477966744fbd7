#include "dpg/forms.hpp"

#include "dpg/error.hpp"

#include <string>

namespace dpg::forms {

void factorize(LocalGram& gram)
{
    gram.llt.compute(gram.G);
    if (gram.llt.info() != Eigen::Success) {
        throw Error(ErrorCode::NotSpd, "Gram matrix of element " + std::to_string(gram.element) +
                                           " is not positive definite");
    }
}

LocalFormBlocks local_b_poisson(const mesh::Mesh& m, int k, const ElementTables& tables, const SourceFn& f)
{
    return local_b_poisson(element_geometry(m, k, tables), tables, f);
}

LocalFormBlocks local_b_poisson(const ElementGeometry& g, const ElementTables& t, const SourceFn& f)
{
    const auto trial = spaces::local_trial_layout(spaces::ProblemKind::Poisson, t.layout.p);
    const int np = t.trial_dim();
    const int nt = t.tau_dim();
    const int nv = t.v_dim();
    const int tau0 = 0;
    const int v0 = 2 * nt;

    LocalFormBlocks out;
    out.element = g.element;
    out.B = Eigen::MatrixXd::Zero(2 * nt + nv, trial.size);

    const Eigen::MatrixXd& P = t.trial.values;
    const Eigen::MatrixXd WP = g.weights.asDiagonal() * P;
    const Eigen::MatrixXd mass = t.tau.values.transpose() * WP;
    for (int c = 0; c < 2; ++c) {
        // (sigma, tau)
        out.B.block(tau0 + c * nt, trial.sigma_offset + c * np, nt, np) = mass;
        // -(u, div tau)
        out.B.block(tau0 + c * nt, trial.u_offset, nt, np) = -g.d(t.tau, c).transpose() * WP;
        // -(sigma, grad v)
        out.B.block(v0, trial.sigma_offset + c * np, nv, np) = -g.d(t.v, c).transpose() * WP;
    }
    for (int e = 0; e < 3; ++e) {
        const EdgeGeometry& eg = g.edges[static_cast<std::size_t>(e)];
        const Eigen::MatrixXd wt = eg.weights.asDiagonal() * eg.trace;
        const Eigen::MatrixXd& tau_e = t.tau_edge[static_cast<std::size_t>(e)];
        for (int c = 0; c < 2; ++c) {
            // <u^, tau . n>
            out.B.block(tau0 + c * nt, trial.trace_offset, nt, trial.trace_size) +=
                eg.normal(c) * tau_e.transpose() * wt;
        }
        // <v, sigma^_n>; the flux table carries the orientation sign
        out.B.block(v0, trial.flux_offset, nv, trial.flux_size) +=
            t.v_edge[static_cast<std::size_t>(e)].transpose() * eg.weights.asDiagonal() * eg.flux;
    }

    out.load = Eigen::VectorXd::Zero(out.B.rows());
    if (f) {
        Eigen::VectorXd fw(g.points.rows());
        for (Eigen::Index i = 0; i < g.points.rows(); ++i) fw(i) = g.weights(i) * f(g.points.row(i).transpose())(0);
        out.load.segment(v0, nv) = t.v.values.transpose() * fw;
    }
    return out;
}

LocalGram local_gram_poisson(const mesh::Mesh& m, int k, const ElementTables& tables)
{
    return local_gram_poisson(element_geometry(m, k, tables), tables);
}

LocalGram local_gram_poisson(const ElementGeometry& g, const ElementTables& t)
{
    const int nt = t.tau_dim();
    const int nv = t.v_dim();
    LocalGram out;
    out.element = g.element;
    out.G = Eigen::MatrixXd::Zero(2 * nt + nv, 2 * nt + nv);

    const Eigen::MatrixXd tdx = g.dx(t.tau);
    const Eigen::MatrixXd tdy = g.dy(t.tau);
    const auto W = g.weights.asDiagonal();
    const Eigen::MatrixXd mass = t.tau.values.transpose() * W * t.tau.values;
    const std::array<const Eigen::MatrixXd*, 2> td{&tdx, &tdy};
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            Eigen::MatrixXd blk = td[static_cast<std::size_t>(a)]->transpose() * W * *td[static_cast<std::size_t>(b)];
            if (a == b) blk += mass;
            out.G.block(a * nt, b * nt, nt, nt) = blk;
        }
    }
    const Eigen::MatrixXd vdx = g.dx(t.v);
    const Eigen::MatrixXd vdy = g.dy(t.v);
    out.G.block(2 * nt, 2 * nt, nv, nv) = t.v.values.transpose() * W * t.v.values +
                                          vdx.transpose() * W * vdx + vdy.transpose() * W * vdy;
    out.G = 0.5 * (out.G + out.G.transpose()).eval();
    factorize(out);
    return out;
}

}  // namespace dpg::forms
