#include "dpg/geometry.hpp"

#include "dpg/error.hpp"

#include <algorithm>
#include <string>

namespace dpg::forms {

using refelem::Kind;
using refelem::simplex_basis;

int default_quadrature_degree(const spaces::TestLayout& layout)
{
    const int r = std::max({layout.r_tau, layout.r_v, layout.q_degree});
    return 2 * std::max(r, layout.p + 1) + 2;
}

ElementTables make_tables(const spaces::TestLayout& layout, int quadrature_degree)
{
    ElementTables t;
    t.layout = layout;
    t.quadrature_degree = quadrature_degree < 0 ? default_quadrature_degree(layout) : quadrature_degree;
    const int r = std::max({layout.r_tau, layout.r_v, layout.q_degree});
    DPG_THROW_IF(t.quadrature_degree < 2 * r || t.quadrature_degree < layout.p + r, ErrorCode::InvalidArgument,
                 "quadrature exactness " + std::to_string(t.quadrature_degree) + " is insufficient for p = " +
                     std::to_string(layout.p) + ", r = " + std::to_string(r));
    t.rule = &refelem::quadrature_rule(t.quadrature_degree);
    t.line = &refelem::line_rule(t.quadrature_degree);
    t.trace = refelem::TraceBasis(layout.p);

    const auto& trial = simplex_basis(2, layout.p);
    const auto& tau = simplex_basis(2, layout.r_tau);
    const auto& v = simplex_basis(2, layout.r_v);
    t.trial = trial.tabulate(t.rule->points);
    t.tau = tau.tabulate(t.rule->points);
    t.v = v.tabulate(t.rule->points);
    t.q = simplex_basis(2, layout.q_degree).tabulate_values(t.rule->points);

    const Eigen::Index ns = t.line->points.size();
    for (int e = 0; e < 3; ++e) {
        Eigen::MatrixX2d pts(ns, 2);
        for (Eigen::Index i = 0; i < ns; ++i) pts.row(i) = refelem::reference_edge_point(e, t.line->points(i)).transpose();
        t.trial_edge[static_cast<std::size_t>(e)] = trial.tabulate_values(pts);
        t.tau_edge[static_cast<std::size_t>(e)] = tau.tabulate_values(pts);
        t.v_edge[static_cast<std::size_t>(e)] = v.tabulate_values(pts);
    }
    return t;
}

Eigen::MatrixXd ElementGeometry::dx(const refelem::Tabulation& t) const
{
    return grad_map(0, 0) * t.dx + grad_map(0, 1) * t.dy;
}

Eigen::MatrixXd ElementGeometry::dy(const refelem::Tabulation& t) const
{
    return grad_map(1, 0) * t.dx + grad_map(1, 1) * t.dy;
}

ElementGeometry element_geometry(const mesh::Mesh& m, int k, const ElementTables& tables)
{
    ElementGeometry g;
    g.element = k;
    g.map = m.map(k);
    g.grad_map = g.map.inverse_transpose();
    const auto& rule = *tables.rule;
    g.points.resize(rule.size(), 2);
    for (int i = 0; i < rule.size(); ++i) g.points.row(i) = g.map.forward(rule.points.row(i).transpose()).transpose();
    g.weights = g.map.det * rule.weights;

    const auto& line = *tables.line;
    const Eigen::Index ns = line.points.size();
    const auto& tri = m.triangles()[static_cast<std::size_t>(k)];
    for (int e = 0; e < 3; ++e) {
        EdgeGeometry& eg = g.edges[static_cast<std::size_t>(e)];
        const Vec2& a = m.vertices()[static_cast<std::size_t>(tri[static_cast<std::size_t>((e + 1) % 3)])];
        const Vec2& b = m.vertices()[static_cast<std::size_t>(tri[static_cast<std::size_t>((e + 2) % 3)])];
        const Vec2 d = b - a;
        eg.length = d.norm();
        eg.normal = Vec2(d.y(), -d.x()) / eg.length;
        eg.reversed = m.edge_reversed(k, e);
        eg.flux_sign = m.flux_sign(k, e);
        eg.points.resize(ns, 2);
        eg.weights = eg.length * line.weights;
        eg.trace.resize(ns, tables.trace.trace_size());
        eg.flux.resize(ns, tables.trace.flux_size());
        Eigen::VectorXd tv(tables.trace.trace_size()), fv(tables.trace.flux_size());
        for (Eigen::Index i = 0; i < ns; ++i) {
            const double s = line.points(i);
            eg.points.row(i) = (a + s * d).transpose();
            tables.trace.trace_values(e, s, eg.reversed, tv);
            tables.trace.flux_values(e, s, eg.reversed, fv);
            eg.trace.row(i) = tv.transpose();
            eg.flux.row(i) = eg.flux_sign * fv.transpose();
        }
    }
    return g;
}

}  // namespace dpg::forms
