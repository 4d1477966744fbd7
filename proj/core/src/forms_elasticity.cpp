#include "dpg/forms.hpp"

#include "dpg/error.hpp"

namespace dpg::forms {

using refelem::component_matrix;
using refelem::Kind;

LocalFormBlocks local_b_elasticity(const mesh::Mesh& m, int k, const ElementTables& tables,
                                   const ComplianceTensor& a, double q0, const SourceFn& f)
{
    return local_b_elasticity(element_geometry(m, k, tables), tables, a, q0, f);
}

LocalFormBlocks local_b_elasticity(const ElementGeometry& g, const ElementTables& t, const ComplianceTensor& a,
                                   double q0, const SourceFn& f)
{
    DPG_THROW_IF(!(q0 > 0.0), ErrorCode::InvalidArgument, "Q0 must be positive");
    const auto trial = spaces::local_trial_layout(spaces::ProblemKind::Elasticity, t.layout.p);
    const int np = t.trial_dim();
    const int nt = t.tau_dim();
    const int nv = t.v_dim();
    const int nq = t.q_dim();
    const int v0 = 3 * nt;
    const int q0row = v0 + 2 * nv;
    const int tpc = t.trace.trace_size();
    const int fpc = t.trace.flux_size();

    LocalFormBlocks out;
    out.element = g.element;
    out.B = Eigen::MatrixXd::Zero(3 * nt + 2 * nv + nq, trial.size);
    out.beta_row = Eigen::RowVectorXd::Zero(trial.size);

    const auto W = g.weights.asDiagonal();
    const Eigen::MatrixXd& P = t.trial.values;
    const Eigen::MatrixXd WP = W * P;
    const Eigen::MatrixXd tau_mass = t.tau.values.transpose() * WP;
    const std::array<Eigen::MatrixXd, 2> dtau{g.dx(t.tau), g.dy(t.tau)};
    const std::array<Eigen::MatrixXd, 2> dv{g.dx(t.v), g.dy(t.v)};
    const Mat3& am = a.matrix();
    const Eigen::Vector3d m_identity(1.0, 1.0, 0.0);
    const Eigen::Vector3d a_identity = am * m_identity;
    const Mat2 skew = component_matrix(Kind::Skew, 0);

    std::array<Mat2, 3> frame;
    for (int c = 0; c < 3; ++c) frame[static_cast<std::size_t>(c)] = component_matrix(Kind::Symmetric, c);

    for (int c = 0; c < 4; ++c) {
        const Mat2 ec = component_matrix(Kind::Matrix, c);
        const Eigen::Vector3d a_sym = am * mandel(ec);
        const int col = trial.sigma_offset + c * np;
        // (A sigma, tau)
        for (int ct = 0; ct < 3; ++ct) out.B.block(ct * nt, col, nt, np) = a_sym(ct) * tau_mass;
        // (sigma, grad v): sigma_ab d_b v_a
        const int ia = c / 2;
        const int ib = c % 2;
        out.B.block(v0 + ia * nv, col, nv, np) = dv[static_cast<std::size_t>(ib)].transpose() * WP;
        // (sigma, q)
        const double sq = (ec.array() * skew.array()).sum();
        if (sq != 0.0) out.B.block(q0row, col, nq, np) = sq * t.q.transpose() * WP;
        // (A sigma, beta I) / Q0
        out.beta_row.segment(col, np) = (m_identity.dot(a_sym) / q0) * g.weights.transpose() * P;
    }

    for (int ct = 0; ct < 3; ++ct) {
        const Mat2& s = frame[static_cast<std::size_t>(ct)];
        // (u, div tau): (div tau)_i = S_ij d_j phi
        for (int i = 0; i < 2; ++i) {
            const Eigen::MatrixXd div_i =
                s(i, 0) * dtau[0] + s(i, 1) * dtau[1];
            out.B.block(ct * nt, trial.u_offset + i * np, nt, np) = div_i.transpose() * WP;
        }
        // (alpha I, A tau) / Q0 = (A I, tau) / Q0
        out.B.block(ct * nt, trial.alpha_offset, nt, 1) =
            (a_identity(ct) / q0) * t.tau.values.transpose() * g.weights;
    }

    for (int e = 0; e < 3; ++e) {
        const EdgeGeometry& eg = g.edges[static_cast<std::size_t>(e)];
        const Eigen::MatrixXd wt = eg.weights.asDiagonal() * eg.trace;
        const Eigen::MatrixXd wf = eg.weights.asDiagonal() * eg.flux;
        const Eigen::MatrixXd& tau_e = t.tau_edge[static_cast<std::size_t>(e)];
        for (int ct = 0; ct < 3; ++ct) {
            const Vec2 sn = frame[static_cast<std::size_t>(ct)] * eg.normal;
            // -<u^, tau n>
            for (int i = 0; i < 2; ++i) {
                out.B.block(ct * nt, trial.trace_offset + i * tpc, nt, tpc) -= sn(i) * tau_e.transpose() * wt;
            }
        }
        // -<v, sigma^_n>
        for (int i = 0; i < 2; ++i) {
            out.B.block(v0 + i * nv, trial.flux_offset + i * fpc, nv, fpc) -=
                t.v_edge[static_cast<std::size_t>(e)].transpose() * wf;
        }
    }

    out.load = Eigen::VectorXd::Zero(out.B.rows());
    if (f) {
        Eigen::MatrixXd fw(g.points.rows(), 2);
        for (Eigen::Index i = 0; i < g.points.rows(); ++i) {
            const Eigen::VectorXd fx = f(g.points.row(i).transpose());
            fw(i, 0) = g.weights(i) * fx(0);
            fw(i, 1) = g.weights(i) * fx(1);
        }
        for (int i = 0; i < 2; ++i) out.load.segment(v0 + i * nv, nv) = t.v.values.transpose() * fw.col(i);
    }
    return out;
}

LocalGram local_gram_elasticity(const mesh::Mesh& m, int k, const ElementTables& tables)
{
    return local_gram_elasticity(element_geometry(m, k, tables), tables);
}

LocalGram local_gram_elasticity(const ElementGeometry& g, const ElementTables& t)
{
    const int nt = t.tau_dim();
    const int nv = t.v_dim();
    const int nq = t.q_dim();
    const int n = 3 * nt + 2 * nv + nq;
    LocalGram out;
    out.element = g.element;
    out.G = Eigen::MatrixXd::Zero(n, n);

    const auto W = g.weights.asDiagonal();
    const std::array<Eigen::MatrixXd, 2> dtau{g.dx(t.tau), g.dy(t.tau)};
    const Eigen::MatrixXd tau_mass = t.tau.values.transpose() * W * t.tau.values;
    // div of phi S_c, component i: sum_j S_c(i,j) d_j phi
    std::array<std::array<Eigen::MatrixXd, 2>, 3> div;
    for (int c = 0; c < 3; ++c) {
        const Mat2 s = component_matrix(Kind::Symmetric, c);
        for (int i = 0; i < 2; ++i) {
            div[static_cast<std::size_t>(c)][static_cast<std::size_t>(i)] = s(i, 0) * dtau[0] + s(i, 1) * dtau[1];
        }
    }
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
            Eigen::MatrixXd blk = Eigen::MatrixXd::Zero(nt, nt);
            for (int i = 0; i < 2; ++i) {
                blk += div[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)].transpose() * W *
                       div[static_cast<std::size_t>(b)][static_cast<std::size_t>(i)];
            }
            if (a == b) blk += tau_mass;
            out.G.block(a * nt, b * nt, nt, nt) = blk;
        }
    }
    const Eigen::MatrixXd vdx = g.dx(t.v);
    const Eigen::MatrixXd vdy = g.dy(t.v);
    const Eigen::MatrixXd vblk =
        t.v.values.transpose() * W * t.v.values + vdx.transpose() * W * vdx + vdy.transpose() * W * vdy;
    for (int i = 0; i < 2; ++i) out.G.block(3 * nt + i * nv, 3 * nt + i * nv, nv, nv) = vblk;
    out.G.block(3 * nt + 2 * nv, 3 * nt + 2 * nv, nq, nq) = t.q.transpose() * W * t.q;
    out.G = 0.5 * (out.G + out.G.transpose()).eval();
    factorize(out);
    return out;
}

}  // namespace dpg::forms
