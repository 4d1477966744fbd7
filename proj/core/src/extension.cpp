#include "dpg/extension.hpp"

#include "dpg/error.hpp"
#include "dpg/refelem.hpp"

#include <string>

namespace dpg::extension {

using refelem::edge_bubble;
using refelem::legendre01;

namespace {

// Bubble coefficients c = M^{-1} (int_0^1 h b_m ds)_m for the edge modes.
Eigen::MatrixXd bubble_mass_inverse(int modes)
{
    const auto& line = refelem::line_rule(2 * modes + 6);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(modes, modes);
    for (int i = 0; i < line.size(); ++i) {
        for (int a = 0; a < modes; ++a) {
            for (int b = 0; b < modes; ++b) {
                m(a, b) += line.weights(i) * edge_bubble(a, line.points(i)) * edge_bubble(b, line.points(i));
            }
        }
    }
    return m.inverse();
}

Eigen::MatrixXd solve_kkt(const Eigen::MatrixXd& H, const Eigen::MatrixXd& C)
{
    const Eigen::Index n = H.rows();
    const Eigen::Index m = C.rows();
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n + m, n + m);
    K.topLeftCorner(n, n) = H;
    K.topRightCorner(n, m) = C.transpose();
    K.bottomLeftCorner(m, n) = C;
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(n + m, m);
    rhs.bottomRows(m).setIdentity();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(K);
    DPG_THROW_IF(!lu.isInvertible(), ErrorCode::Singular, "extension KKT system is singular");
    return lu.solve(rhs).topRows(n);
}

Eigen::MatrixXd solve_nullspace(const Eigen::MatrixXd& H, const Eigen::MatrixXd& C)
{
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(C, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::VectorXd& s = svd.singularValues();
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (s(i) > 1e-12 * s(0)) ++rank;
    }
    DPG_THROW_IF(rank != C.rows(), ErrorCode::Singular, "extension constraints are rank deficient");
    const Eigen::MatrixXd V = svd.matrixV();
    const Eigen::MatrixXd pinv = V.leftCols(rank) * s.head(rank).cwiseInverse().asDiagonal() *
                                 svd.matrixU().leftCols(rank).transpose();
    const Eigen::MatrixXd N = V.rightCols(V.cols() - rank);
    if (N.cols() == 0) return pinv;
    Eigen::LLT<Eigen::MatrixXd> llt(N.transpose() * H * N);
    DPG_THROW_IF(llt.info() != Eigen::Success, ErrorCode::Singular, "projected extension energy is not SPD");
    const Eigen::MatrixXd z = llt.solve(N.transpose() * H * pinv);
    return pinv - N * z;
}

Eigen::MatrixXd gram_from(const Eigen::MatrixXd& H, const Eigen::MatrixXd& C, Method method)
{
    const Eigen::MatrixXd E = method == Method::Kkt ? solve_kkt(H, C) : solve_nullspace(H, C);
    Eigen::MatrixXd M = E.transpose() * H * E;
    return 0.5 * (M + M.transpose());
}

}  // namespace

int trace_data_size(int k)
{
    return 3 * k;
}

int flux_data_size(int k)
{
    return 3 * (k + 1);
}

Eigen::VectorXd interpolate_trace(const EdgeFunction& g, int k)
{
    DPG_THROW_IF(k < 1, ErrorCode::InvalidArgument, "trace interpolation needs degree >= 1");
    Eigen::VectorXd d = Eigen::VectorXd::Zero(trace_data_size(k));
    for (int j = 0; j < 3; ++j) d(j) = g((j + 2) % 3, 0.0);
    const int modes = k - 1;
    if (modes == 0) return d;
    const Eigen::MatrixXd minv = bubble_mass_inverse(modes);
    const auto& line = refelem::line_rule(2 * k + 8);
    for (int e = 0; e < 3; ++e) {
        const double ga = d((e + 1) % 3);
        const double gb = d((e + 2) % 3);
        Eigen::VectorXd mom = Eigen::VectorXd::Zero(modes);
        for (int i = 0; i < line.size(); ++i) {
            const double s = line.points(i);
            const double h = g(e, s) - (1.0 - s) * ga - s * gb;
            for (int m = 0; m < modes; ++m) mom(m) += line.weights(i) * h * edge_bubble(m, s);
        }
        d.segment(3 + e * modes, modes) = minv * mom;
    }
    return d;
}

Eigen::VectorXd project_flux(const EdgeFunction& g, int k)
{
    DPG_THROW_IF(k < 0, ErrorCode::InvalidArgument, "flux projection needs degree >= 0");
    Eigen::VectorXd d = Eigen::VectorXd::Zero(flux_data_size(k));
    const auto& line = refelem::line_rule(2 * k + 8);
    for (int e = 0; e < 3; ++e) {
        for (int i = 0; i < line.size(); ++i) {
            const double s = line.points(i);
            const double gv = g(e, s);
            for (int m = 0; m <= k; ++m) d(e * (k + 1) + m) += line.weights(i) * gv * legendre01(m, s);
        }
    }
    return d;
}

Eigen::MatrixXd trace_constraints(int k)
{
    const auto& basis = refelem::simplex_basis(2, k);
    const int n = basis.scalar_size();
    const int modes = k - 1;
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(trace_data_size(k), n);
    for (int j = 0; j < 3; ++j) C.row(j) = basis.values(refelem::reference_vertex(j)).transpose();
    if (modes == 0) return C;
    const Eigen::MatrixXd minv = bubble_mass_inverse(modes);
    const auto& line = refelem::line_rule(2 * k + 8);
    for (int e = 0; e < 3; ++e) {
        Eigen::MatrixXd mom = Eigen::MatrixXd::Zero(modes, n);
        for (int i = 0; i < line.size(); ++i) {
            const double s = line.points(i);
            const Eigen::RowVectorXd h = basis.values(refelem::reference_edge_point(e, s)).transpose() -
                                         (1.0 - s) * C.row((e + 1) % 3) - s * C.row((e + 2) % 3);
            for (int m = 0; m < modes; ++m) mom.row(m) += line.weights(i) * edge_bubble(m, s) * h;
        }
        C.middleRows(3 + e * modes, modes) = minv * mom;
    }
    return C;
}

Eigen::MatrixXd flux_constraints(int k)
{
    const auto& rt = refelem::raviart_thomas_basis(k);
    const auto& line = refelem::line_rule(2 * k + 4);
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(flux_data_size(k), rt.size());
    for (int e = 0; e < 3; ++e) {
        Eigen::MatrixX2d pts(line.size(), 2);
        for (int i = 0; i < line.size(); ++i) pts.row(i) = refelem::reference_edge_point(e, line.points(i)).transpose();
        Eigen::MatrixXd vx, vy, dv;
        rt.tabulate(pts, vx, vy, dv);
        const Eigen::Vector2d n = refelem::reference_edge_normal(e);
        const Eigen::MatrixXd vn = n.x() * vx + n.y() * vy;
        for (int m = 0; m <= k; ++m) {
            Eigen::VectorXd w(line.size());
            for (int i = 0; i < line.size(); ++i) w(i) = line.weights(i) * legendre01(m, line.points(i));
            C.row(e * (k + 1) + m) = w.transpose() * vn;
        }
    }
    return C;
}

Eigen::MatrixXd trace_gram(const mesh::AffineMap& map, int k, Method method)
{
    const auto& basis = refelem::simplex_basis(2, k);
    const auto& rule = refelem::quadrature_rule(2 * k + 2);
    const refelem::Tabulation t = basis.tabulate(rule.points);
    const Eigen::Matrix2d B = map.inverse_transpose();
    const Eigen::MatrixXd dx = B(0, 0) * t.dx + B(0, 1) * t.dy;
    const Eigen::MatrixXd dy = B(1, 0) * t.dx + B(1, 1) * t.dy;
    const Eigen::VectorXd w = map.det * rule.weights;
    const auto W = w.asDiagonal();
    const Eigen::MatrixXd H = t.values.transpose() * W * t.values + dx.transpose() * W * dx + dy.transpose() * W * dy;
    return gram_from(H, trace_constraints(k), method);
}

Eigen::MatrixXd flux_gram(const mesh::AffineMap& map, int k, Method method)
{
    const auto& rt = refelem::raviart_thomas_basis(k);
    const auto& rule = refelem::quadrature_rule(2 * k + 4);
    Eigen::MatrixXd vx, vy, dv;
    rt.tabulate(rule.points, vx, vy, dv);
    // Piola: tau = A tau^ / det, div tau = div^ tau^ / det.
    const Eigen::MatrixXd px = (map.A(0, 0) * vx + map.A(0, 1) * vy) / map.det;
    const Eigen::MatrixXd py = (map.A(1, 0) * vx + map.A(1, 1) * vy) / map.det;
    const Eigen::MatrixXd pd = dv / map.det;
    const Eigen::VectorXd w = map.det * rule.weights;
    const auto W = w.asDiagonal();
    const Eigen::MatrixXd H = px.transpose() * W * px + py.transpose() * W * py + pd.transpose() * W * pd;

    // Parameter-space moments of tau.n on the physical edge are the reference
    // moments scaled by |e^| / |e|.
    Eigen::MatrixXd C = flux_constraints(k);
    for (int e = 0; e < 3; ++e) {
        const Eigen::Vector2d a = map.forward(refelem::reference_vertex((e + 1) % 3));
        const Eigen::Vector2d b = map.forward(refelem::reference_vertex((e + 2) % 3));
        C.middleRows(e * (k + 1), k + 1) *= refelem::reference_edge_length(e) / (b - a).norm();
    }
    return gram_from(H, C, method);
}

}  // namespace dpg::extension
