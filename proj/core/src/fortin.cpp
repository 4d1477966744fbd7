#include "dpg/fortin.hpp"

#include "dpg/error.hpp"
#include "dpg/refelem.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace dpg::fortin {

using refelem::component_matrix;
using refelem::dim_p;
using refelem::Kind;
using refelem::legendre01;
using refelem::monomial_index;
using Mat2 = Eigen::Matrix2d;
using Vec2 = Eigen::Vector2d;

std::string to_string(FortinKind kind)
{
    switch (kind) {
        case FortinKind::Pi0: return "pi0";
        case FortinKind::Grad: return "grad";
        case FortinKind::Div: return "div";
        case FortinKind::DivSym: return "div-sym";
        case FortinKind::Skew: return "skew";
    }
    return "unknown";
}

namespace {

// Values of the orthonormal basis of P_D (points x functions).
Eigen::MatrixXd mono_values(int degree, const Eigen::MatrixX2d& pts)
{
    return refelem::simplex_basis(2, degree).tabulate_values(pts);
}

void mono_tables(int degree, const Eigen::MatrixX2d& pts, Eigen::MatrixXd& v, Eigen::MatrixXd& dx, Eigen::MatrixXd& dy)
{
    refelem::Tabulation t = refelem::simplex_basis(2, degree).tabulate(pts);
    v = std::move(t.values);
    dx = std::move(t.dx);
    dy = std::move(t.dy);
}

Eigen::MatrixX2d edge_points(int e, const Eigen::VectorXd& s)
{
    Eigen::MatrixX2d pts(s.size(), 2);
    for (Eigen::Index i = 0; i < s.size(); ++i) pts.row(i) = refelem::reference_edge_point(e, s(i)).transpose();
    return pts;
}

// Monomial coefficients of degree d (rows) to orthonormal P_D coordinates.
// The orthonormal bases share their leading functions across degrees.
Eigen::MatrixXd padded(const Eigen::MatrixXd& coeffs, int D)
{
    const int d = static_cast<int>(std::lround((std::sqrt(8.0 * coeffs.cols() + 1.0) - 3.0) / 2.0));
    const Eigen::MatrixXd& q = refelem::simplex_basis(2, d).coefficients();
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(coeffs.rows(), dim_p(D));
    out.leftCols(coeffs.cols()) = q.transpose().fullPivLu().solve(coeffs.transpose()).transpose();
    return out;
}

// d/dx and d/dy in orthonormal coordinates: entry (s, t) = int phi_s d phi_t.
void derivative_matrices(int D, Eigen::MatrixXd& Dx, Eigen::MatrixXd& Dy)
{
    const auto& rule = refelem::quadrature_rule(2 * D);
    Eigen::MatrixXd v, dx, dy;
    mono_tables(D, rule.points, v, dx, dy);
    Dx = v.transpose() * rule.weights.asDiagonal() * dx;
    Dy = v.transpose() * rule.weights.asDiagonal() * dy;
}

Eigen::MatrixXd block_diagonal(const Eigen::MatrixXd& a, int copies)
{
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(a.rows() * copies, a.cols() * copies);
    for (int c = 0; c < copies; ++c) out.block(c * a.rows(), c * a.cols(), a.rows(), a.cols()) = a;
    return out;
}

Eigen::MatrixXd nullspace(const Eigen::MatrixXd& c, double tol, int* rank_out = nullptr)
{
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(c, Eigen::ComputeFullV);
    const Eigen::VectorXd& s = svd.singularValues();
    int rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (s(i) > tol * std::max(s(0), 1e-300)) ++rank;
    }
    if (rank_out) *rank_out = rank;
    return svd.matrixV().rightCols(c.cols() - rank);
}

// Moments int_0^1 T_j(e, s) L_m(s) ds of the continuous trace basis of degree
// k+1 against the Legendre basis of degree k+1 on each edge; also returns
// the P^perp_{k+1}(dK) basis in the discontinuous coordinates.
Eigen::MatrixXd perp_basis(int p)
{
    const refelem::TraceBasis trace(p);
    const int nl = p + 2;
    const auto& line = refelem::line_rule(2 * p + 6);
    Eigen::MatrixXd cc = Eigen::MatrixXd::Zero(trace.trace_size(), 3 * nl);
    Eigen::VectorXd tv(trace.trace_size());
    for (int e = 0; e < 3; ++e) {
        for (int i = 0; i < line.size(); ++i) {
            trace.trace_values(e, line.points(i), false, tv);
            for (int m = 0; m < nl; ++m) cc.col(e * nl + m) += line.weights(i) * legendre01(m, line.points(i)) * tv;
        }
    }
    Eigen::VectorXd len(3 * nl);
    for (int e = 0; e < 3; ++e) len.segment(e * nl, nl).setConstant(refelem::reference_edge_length(e));
    const Eigen::MatrixXd perp = nullspace(cc * len.asDiagonal(), 1e-10);
    DPG_THROW_IF(perp.cols() != 3, ErrorCode::Singular, "P^perp(dK) does not have dimension 3");
    return perp;
}

FortinOperator solve_system(FortinOperator op, const Eigen::MatrixXd& L, const Eigen::MatrixXd& target)
{
    op.functionals = L;
    op.equations = static_cast<int>(L.rows());
    op.unknowns = static_cast<int>(target.rows());
    op.square = op.equations == op.unknowns;
    const Eigen::MatrixXd M = L * target.transpose();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
    const Eigen::VectorXd& s = svd.singularValues();
    op.sigma_max = s.size() > 0 ? s(0) : 0.0;
    op.sigma_min = s.size() > 0 ? s(s.size() - 1) : 0.0;
    op.singular = !op.square || op.normalized_sigma_min() < 1e-12;
    Eigen::MatrixXd X;
    if (!op.singular) {
        X = M.fullPivLu().solve(L);
    } else {
        X = M.completeOrthogonalDecomposition().solve(L);
    }
    op.matrix = target.transpose() * X;
    return op;
}

int space_degree(int p, int probe_degree)
{
    DPG_THROW_IF(p < 0, ErrorCode::InvalidArgument, "Fortin operators need p >= 0");
    DPG_THROW_IF(probe_degree < 0, ErrorCode::InvalidArgument, "probe degree must be >= 0");
    return std::max(probe_degree, p + 2);
}

// Normal and boundary-trace moments on the reference boundary.
struct BoundaryTables {
    const refelem::LineRule* line;
    std::array<Eigen::MatrixXd, 3> mono;   // line points x monomials
    std::array<Eigen::MatrixXd, 3> trace;  // line points x trace basis (degree p+1)
};

BoundaryTables boundary_tables(int p, int D)
{
    BoundaryTables b;
    b.line = &refelem::line_rule(D + p + 4);
    const refelem::TraceBasis trace(p);
    Eigen::VectorXd tv(trace.trace_size());
    for (int e = 0; e < 3; ++e) {
        b.mono[static_cast<std::size_t>(e)] = mono_values(D, edge_points(e, b.line->points));
        Eigen::MatrixXd t(b.line->size(), trace.trace_size());
        for (int i = 0; i < b.line->size(); ++i) {
            trace.trace_values(e, b.line->points(i), false, tv);
            t.row(i) = tv.transpose();
        }
        b.trace[static_cast<std::size_t>(e)] = t;
    }
    return b;
}

// Rows int_K f phi_s mono over the orthonormal P_q basis.
Eigen::MatrixXd volume_moments(int q, int D)
{
    if (q < 0) return Eigen::MatrixXd(0, dim_p(D));
    const auto& rule = refelem::quadrature_rule(D + q + 2);
    const Eigen::MatrixXd phi = refelem::simplex_basis(2, q).tabulate_values(rule.points);
    const Eigen::MatrixXd mono = mono_values(D, rule.points);
    return phi.transpose() * rule.weights.asDiagonal() * mono;
}

}  // namespace

FortinOperator build_pi0(int p, int probe_degree)
{
    const int D = space_degree(p, probe_degree);
    FortinOperator op;
    op.kind = FortinKind::Pi0;
    op.p = p;
    op.r = p + 2;
    op.space_degree = D;
    op.components = 1;

    const Eigen::MatrixXd interior = volume_moments(p - 1, D);
    const auto& line = refelem::line_rule(D + p + 4);
    Eigen::MatrixXd edges = Eigen::MatrixXd::Zero(3 * (p + 1), dim_p(D));
    for (int e = 0; e < 3; ++e) {
        const Eigen::MatrixXd mono = mono_values(D, edge_points(e, line.points));
        for (int m = 0; m <= p; ++m) {
            Eigen::VectorXd w(line.size());
            for (int i = 0; i < line.size(); ++i) w(i) = line.weights(i) * legendre01(m, line.points(i));
            edges.row(e * (p + 1) + m) = refelem::reference_edge_length(e) * w.transpose() * mono;
        }
    }
    Eigen::MatrixXd L(interior.rows() + edges.rows(), dim_p(D));
    L << interior, edges;
    const Eigen::MatrixXd target = padded(refelem::bubble_space_grad(p, 2).coefficients(), D);
    return solve_system(op, L, target);
}

FortinOperator build_pigrad(int p, int probe_degree)
{
    FortinOperator op = build_pi0(p, probe_degree);
    op.kind = FortinKind::Grad;
    const int n = dim_p(op.space_degree);
    const auto& rule = refelem::quadrature_rule(op.space_degree);
    const Eigen::MatrixXd mono = mono_values(op.space_degree, rule.points);
    // mean v = |K^|^{-1} int v = 2 int v, expressed on the constant basis function.
    Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(n, n);
    mean.row(0) = 2.0 * rule.weights.transpose() * mono / mono(0, 0);
    op.matrix = op.matrix * (Eigen::MatrixXd::Identity(n, n) - mean) + mean;
    return op;
}

FortinOperator build_pidiv(int p, int probe_degree)
{
    const int D = space_degree(p, probe_degree);
    const int nm = dim_p(D);
    FortinOperator op;
    op.kind = FortinKind::Div;
    op.p = p;
    op.r = p + 2;
    op.space_degree = D;
    op.components = 2;

    // Target: RT_{p+1} subject to <p_perp, tau.n> = 0.
    const auto& rt = refelem::raviart_thomas_basis(p + 1);
    const int nrt = rt.size();
    const int dr = rt.degree();
    Eigen::MatrixXd rt_coeffs = Eigen::MatrixXd::Zero(nrt, 2 * nm);
    rt_coeffs.leftCols(nm) = padded(rt.coefficients().leftCols(dim_p(dr)), D);
    rt_coeffs.middleCols(nm, nm) = padded(rt.coefficients().rightCols(dim_p(dr)), D);

    const int nl = p + 2;
    const auto& line = refelem::line_rule(2 * p + 8);
    Eigen::MatrixXd normal_moments = Eigen::MatrixXd::Zero(3 * nl, nrt);
    for (int e = 0; e < 3; ++e) {
        Eigen::MatrixXd vx, vy, dv;
        rt.tabulate(edge_points(e, line.points), vx, vy, dv);
        const Vec2 n = refelem::reference_edge_normal(e);
        const Eigen::MatrixXd vn = n.x() * vx + n.y() * vy;
        for (int m = 0; m < nl; ++m) {
            Eigen::VectorXd w(line.size());
            for (int i = 0; i < line.size(); ++i) w(i) = line.weights(i) * legendre01(m, line.points(i));
            normal_moments.row(e * nl + m) = refelem::reference_edge_length(e) * w.transpose() * vn;
        }
    }
    const Eigen::MatrixXd constraint = perp_basis(p).transpose() * normal_moments;
    const Eigen::MatrixXd Z = nullspace(constraint, 1e-10);
    const Eigen::MatrixXd target = Z.transpose() * rt_coeffs;

    const Eigen::MatrixXd vol = volume_moments(p, D);
    const BoundaryTables bt = boundary_tables(p, D);
    const int ntr = 3 + 3 * p;
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(2 * vol.rows() + ntr, 2 * nm);
    for (int c = 0; c < 2; ++c) L.block(c * vol.rows(), c * nm, vol.rows(), nm) = vol;
    for (int e = 0; e < 3; ++e) {
        const Vec2 n = refelem::reference_edge_normal(e);
        const Eigen::MatrixXd wt =
            refelem::reference_edge_length(e) * (bt.line->weights.asDiagonal() * bt.trace[static_cast<std::size_t>(e)]);
        const Eigen::MatrixXd m = wt.transpose() * bt.mono[static_cast<std::size_t>(e)];
        for (int c = 0; c < 2; ++c) L.block(2 * vol.rows(), c * nm, ntr, nm) += n(c) * m;
    }
    return solve_system(op, L, target);
}

FortinOperator build_pidiv_sym(int p, int probe_degree)
{
    const int D = space_degree(p, probe_degree);
    const int nm = dim_p(D);
    FortinOperator op;
    op.kind = FortinKind::DivSym;
    op.p = p;
    op.r = p + 2;
    op.space_degree = D;
    op.components = 3;

    std::array<Mat2, 3> frame;
    for (int c = 0; c < 3; ++c) frame[static_cast<std::size_t>(c)] = component_matrix(Kind::Symmetric, c);

    const auto& full = refelem::simplex_basis(2, p + 2);
    const int ns = full.scalar_size();
    const Eigen::MatrixXd full_coeffs = block_diagonal(padded(full.coefficients(), D), 3);  // 3 ns x 3 nm

    // Vertex normal-normal constraints n-^T tau(v) n+ = 0.
    Eigen::MatrixXd constraints = Eigen::MatrixXd::Zero(3 + 6, 3 * ns);
    for (int j = 0; j < 3; ++j) {
        const Vec2 na = refelem::reference_edge_normal((j + 1) % 3);
        const Vec2 nb = refelem::reference_edge_normal((j + 2) % 3);
        const Eigen::VectorXd phi = full.values(refelem::reference_vertex(j));
        for (int c = 0; c < 3; ++c) {
            constraints.block(j, c * ns, 1, ns) =
                (na.dot(frame[static_cast<std::size_t>(c)] * nb)) * phi.transpose();
        }
    }
    // <p_perp e_i, tau n> = 0.
    const Eigen::MatrixXd perp = perp_basis(p);
    const int nl = p + 2;
    const auto& line = refelem::line_rule(2 * p + 8);
    for (int i = 0; i < 2; ++i) {
        Eigen::MatrixXd moments = Eigen::MatrixXd::Zero(3 * nl, 3 * ns);
        for (int e = 0; e < 3; ++e) {
            const Eigen::MatrixXd phi = full.tabulate_values(edge_points(e, line.points));
            const Vec2 n = refelem::reference_edge_normal(e);
            for (int m = 0; m < nl; ++m) {
                Eigen::VectorXd w(line.size());
                for (int q = 0; q < line.size(); ++q) w(q) = line.weights(q) * legendre01(m, line.points(q));
                const Eigen::RowVectorXd base = refelem::reference_edge_length(e) * w.transpose() * phi;
                for (int c = 0; c < 3; ++c) {
                    moments.block(e * nl + m, c * ns, 1, ns) = (frame[static_cast<std::size_t>(c)] * n)(i) * base;
                }
            }
        }
        constraints.middleRows(3 + 3 * i, 3) = perp.transpose() * moments;
    }
    const Eigen::MatrixXd Z = nullspace(constraints, 1e-10);
    const Eigen::MatrixXd target = Z.transpose() * full_coeffs;

    const Eigen::MatrixXd vol = volume_moments(p, D);
    const BoundaryTables bt = boundary_tables(p, D);
    const int ntr = 3 + 3 * p;
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(3 * vol.rows() + 2 * ntr, 3 * nm);
    for (int c = 0; c < 3; ++c) L.block(c * vol.rows(), c * nm, vol.rows(), nm) = vol;
    for (int e = 0; e < 3; ++e) {
        const Vec2 n = refelem::reference_edge_normal(e);
        const Eigen::MatrixXd wt =
            refelem::reference_edge_length(e) * (bt.line->weights.asDiagonal() * bt.trace[static_cast<std::size_t>(e)]);
        const Eigen::MatrixXd m = wt.transpose() * bt.mono[static_cast<std::size_t>(e)];
        for (int i = 0; i < 2; ++i) {
            for (int c = 0; c < 3; ++c) {
                const double coef = (frame[static_cast<std::size_t>(c)] * n)(i);
                if (coef != 0.0) L.block(3 * vol.rows() + i * ntr, c * nm, ntr, nm) += coef * m;
            }
        }
    }
    return solve_system(op, L, target);
}

FortinOperator build_piskew(int p, int probe_degree)
{
    const int D = space_degree(p, probe_degree);
    FortinOperator op;
    op.kind = FortinKind::Skew;
    op.p = p;
    op.r = p;
    op.space_degree = D;
    op.components = 1;
    const Eigen::MatrixXd L = volume_moments(p, D);
    const Eigen::MatrixXd target = padded(refelem::simplex_basis(2, p).coefficients(), D);
    return solve_system(op, L, target);
}

double moment_residual(const FortinOperator& op)
{
    const Eigen::MatrixXd probes = Eigen::MatrixXd::Identity(op.size(), op.size());
    const Eigen::MatrixXd lv = op.functionals * probes;
    const Eigen::MatrixXd res = op.functionals * (op.matrix * probes) - lv;
    const double scale = std::max(lv.cwiseAbs().maxCoeff(), 1e-300);
    return res.cwiseAbs().maxCoeff() / scale;
}

double div_commutativity_residual(const FortinOperator& op)
{
    DPG_THROW_IF(op.kind != FortinKind::Div && op.kind != FortinKind::DivSym, ErrorCode::InvalidArgument,
                 "div commutativity applies to div-type operators only");
    const int D = op.space_degree;
    const int nm = dim_p(D);
    Eigen::MatrixXd Dx, Dy;
    derivative_matrices(D, Dx, Dy);
    const Eigen::MatrixXd G = Eigen::MatrixXd::Identity(nm, nm);
    // L2 projection onto P_{p+1} in monomial coordinates.
    const Eigen::MatrixXd C = padded(refelem::simplex_basis(2, op.p + 1).coefficients(), D);
    const Eigen::MatrixXd proj = C.transpose() * C * G;

    const int out_comps = op.kind == FortinKind::Div ? 1 : 2;
    Eigen::MatrixXd div = Eigen::MatrixXd::Zero(out_comps * nm, op.components * nm);
    if (op.kind == FortinKind::Div) {
        div.block(0, 0, nm, nm) = Dx;
        div.block(0, nm, nm, nm) = Dy;
    } else {
        for (int c = 0; c < 3; ++c) {
            const Mat2 s = component_matrix(Kind::Symmetric, c);
            for (int i = 0; i < 2; ++i) div.block(i * nm, c * nm, nm, nm) = s(i, 0) * Dx + s(i, 1) * Dy;
        }
    }
    const Eigen::MatrixXd probes = Eigen::MatrixXd::Identity(op.size(), op.size());
    const Eigen::MatrixXd diff = div * op.matrix * probes - block_diagonal(proj, out_comps) * div * probes;
    const Eigen::MatrixXd Gout = block_diagonal(G, out_comps);
    const Eigen::MatrixXd Gin = block_diagonal(G, op.components);
    const Eigen::MatrixXd dvp = div * probes;
    double worst = 0.0;
    for (Eigen::Index j = 0; j < probes.cols(); ++j) {
        const double num = std::sqrt(std::max(0.0, diff.col(j).dot(Gout * diff.col(j))));
        const double den = std::sqrt(probes.col(j).dot(Gin * probes.col(j)) + dvp.col(j).dot(Gout * dvp.col(j)));
        worst = std::max(worst, num / den);
    }
    return worst;
}

double measure_cpi(const FortinOperator& op, const mesh::AffineMap& map)
{
    const int D = op.space_degree;
    const int nm = dim_p(D);
    const auto& rule = refelem::quadrature_rule(2 * D);
    Eigen::MatrixXd v, dx, dy;
    mono_tables(D, rule.points, v, dx, dy);
    const auto W = rule.weights.asDiagonal();
    const Eigen::MatrixXd mass = v.transpose() * W * v;
    const Mat2& A = map.A;
    const double det = map.det;

    Eigen::MatrixXd G;
    switch (op.kind) {
        case FortinKind::Pi0:
        case FortinKind::Grad: {
            const Mat2 B = map.inverse_transpose();
            const Eigen::MatrixXd gx = B(0, 0) * dx + B(0, 1) * dy;
            const Eigen::MatrixXd gy = B(1, 0) * dx + B(1, 1) * dy;
            G = det * (mass + gx.transpose() * W * gx + gy.transpose() * W * gy);
            break;
        }
        case FortinKind::Skew:
            G = det * mass;
            break;
        case FortinKind::Div: {
            const Mat2 ata = A.transpose() * A;
            G = Eigen::MatrixXd::Zero(2 * nm, 2 * nm);
            for (int a = 0; a < 2; ++a) {
                for (int b = 0; b < 2; ++b) G.block(a * nm, b * nm, nm, nm) = ata(a, b) * mass;
            }
            const std::array<const Eigen::MatrixXd*, 2> d{&dx, &dy};
            for (int a = 0; a < 2; ++a) {
                for (int b = 0; b < 2; ++b) {
                    G.block(a * nm, b * nm, nm, nm) +=
                        d[static_cast<std::size_t>(a)]->transpose() * W * *d[static_cast<std::size_t>(b)];
                }
            }
            G /= det;
            break;
        }
        case FortinKind::DivSym: {
            std::array<Mat2, 3> frame;
            for (int c = 0; c < 3; ++c) frame[static_cast<std::size_t>(c)] = component_matrix(Kind::Symmetric, c);
            G = Eigen::MatrixXd::Zero(3 * nm, 3 * nm);
            const Mat2 ata = A.transpose() * A;
            const std::array<const Eigen::MatrixXd*, 2> d{&dx, &dy};
            for (int a = 0; a < 3; ++a) {
                for (int b = 0; b < 3; ++b) {
                    const Mat2 sa = A * frame[static_cast<std::size_t>(a)] * A.transpose();
                    const Mat2 sb = A * frame[static_cast<std::size_t>(b)] * A.transpose();
                    Eigen::MatrixXd blk = (sa.array() * sb.array()).sum() * mass;
                    // |A div tau^|^2 with (div tau^)_i = S_c(i,j) d_j f_c
                    for (int j = 0; j < 2; ++j) {
                        for (int l = 0; l < 2; ++l) {
                            const Vec2 ca = frame[static_cast<std::size_t>(a)].col(j);
                            const Vec2 cb = frame[static_cast<std::size_t>(b)].col(l);
                            const double coef = ca.dot(ata * cb);
                            if (coef != 0.0) {
                                blk += coef * (d[static_cast<std::size_t>(j)]->transpose() * W *
                                               *d[static_cast<std::size_t>(l)]);
                            }
                        }
                    }
                    G.block(a * nm, b * nm, nm, nm) = blk;
                }
            }
            G /= det;
            break;
        }
    }

    const Eigen::MatrixXd& Gp = G;
    const Eigen::MatrixXd& Pi = op.matrix;
    Eigen::LLT<Eigen::MatrixXd> llt(0.5 * (Gp + Gp.transpose()));
    DPG_THROW_IF(llt.info() != Eigen::Success, ErrorCode::NotSpd, "probe-space V-Gram is not SPD");
    const Eigen::MatrixXd Linv = llt.matrixL().solve(Eigen::MatrixXd::Identity(Gp.rows(), Gp.cols()));
    const Eigen::MatrixXd K = Linv * Pi.transpose() * Gp * Pi * Linv.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (K + K.transpose()), Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(0.0, eig.eigenvalues().maxCoeff()));
}

}  // namespace dpg::fortin
