#include "dpg/spaces.hpp"

#include "dpg/error.hpp"
#include "dpg/polynomial.hpp"

#include <string>

namespace dpg::spaces {

using refelem::dim_p;

std::string_view to_string(ProblemKind kind)
{
    return kind == ProblemKind::Poisson ? "poisson" : "elasticity";
}

LocalTrialLayout local_trial_layout(ProblemKind kind, int p)
{
    DPG_THROW_IF(p < 0, ErrorCode::InvalidArgument, "trial degree must be >= 0");
    LocalTrialLayout l;
    l.kind = kind;
    l.p = p;
    const bool elas = kind == ProblemKind::Elasticity;
    l.components = elas ? 2 : 1;
    l.sigma_size = (elas ? 4 : 2) * dim_p(p);
    l.u_offset = l.sigma_size;
    l.u_size = l.components * dim_p(p);
    l.trace_offset = l.u_offset + l.u_size;
    l.trace_size = l.components * (3 + 3 * p);
    l.flux_offset = l.trace_offset + l.trace_size;
    l.flux_size = l.components * 3 * (p + 1);
    l.size = l.flux_offset + l.flux_size;
    if (elas) l.alpha_offset = l.size++;
    return l;
}

int TrialDofMap::vertex_dof(int v, int c) const
{
    return vertex_dofs_[static_cast<std::size_t>(v * layout_.components + c)];
}

int TrialDofMap::edge_dof(int f, int m, int c) const
{
    return edge_dofs_[static_cast<std::size_t>((f * layout_.components + c) * layout_.p + m)];
}

int TrialDofMap::flux_dof(int f, int m, int c) const
{
    return flux_dofs_[static_cast<std::size_t>((f * layout_.components + c) * (layout_.p + 1) + m)];
}

TrialDofMap build_trial_space(const mesh::Mesh& m, int p, ProblemKind kind)
{
    TrialDofMap map;
    map.layout_ = local_trial_layout(kind, p);
    const LocalTrialLayout& l = map.layout_;
    const int nc = l.components;
    const int ne = m.num_elements();

    int next = 0;
    std::vector<int> field_offset(static_cast<std::size_t>(ne));
    for (int k = 0; k < ne; ++k) {
        field_offset[static_cast<std::size_t>(k)] = next;
        next += l.sigma_size + l.u_size;
    }
    map.num_field_ = next;

    map.vertex_dofs_.assign(static_cast<std::size_t>(m.num_vertices() * nc), -1);
    for (int v = 0; v < m.num_vertices(); ++v) {
        for (int c = 0; c < nc; ++c) {
            if (m.vertex_on_boundary(v)) {
                ++map.num_constrained_;
            } else {
                map.vertex_dofs_[static_cast<std::size_t>(v * nc + c)] = next++;
            }
        }
    }
    map.edge_dofs_.assign(static_cast<std::size_t>(m.num_facets() * nc * p), -1);
    for (int f = 0; f < m.num_facets(); ++f) {
        for (int c = 0; c < nc; ++c) {
            for (int mode = 0; mode < p; ++mode) {
                if (m.facet(f).boundary) {
                    ++map.num_constrained_;
                } else {
                    map.edge_dofs_[static_cast<std::size_t>((f * nc + c) * p + mode)] = next++;
                }
            }
        }
    }
    map.num_trace_ = next - map.num_field_;

    map.flux_dofs_.resize(static_cast<std::size_t>(m.num_facets() * nc * (p + 1)));
    for (auto& d : map.flux_dofs_) d = next++;
    map.num_flux_ = static_cast<int>(map.flux_dofs_.size());

    if (kind == ProblemKind::Elasticity) map.alpha_ = next++;
    map.num_dofs_ = next;
    DPG_THROW_IF(map.num_dofs_ == 0, ErrorCode::InvalidArgument, "trial space has no free DOFs");

    map.element_dofs_.resize(static_cast<std::size_t>(ne));
    const int tpc = 3 + 3 * p;  // trace DOFs per component
    const int fpc = 3 * (p + 1);
    for (int k = 0; k < ne; ++k) {
        std::vector<int>& dofs = map.element_dofs_[static_cast<std::size_t>(k)];
        dofs.assign(static_cast<std::size_t>(l.size), -1);
        const int base = field_offset[static_cast<std::size_t>(k)];
        for (int i = 0; i < l.sigma_size + l.u_size; ++i) dofs[static_cast<std::size_t>(i)] = base + i;
        const auto& tri = m.triangles()[static_cast<std::size_t>(k)];
        for (int c = 0; c < nc; ++c) {
            const int t0 = l.trace_offset + c * tpc;
            for (int j = 0; j < 3; ++j) {
                dofs[static_cast<std::size_t>(t0 + j)] = map.vertex_dof(tri[static_cast<std::size_t>(j)], c);
            }
            for (int e = 0; e < 3; ++e) {
                const int f = m.element_facet(k, e);
                for (int mode = 0; mode < p; ++mode) {
                    dofs[static_cast<std::size_t>(t0 + 3 + e * p + mode)] = map.edge_dof(f, mode, c);
                }
                const int f0 = l.flux_offset + c * fpc + e * (p + 1);
                for (int mode = 0; mode <= p; ++mode) {
                    dofs[static_cast<std::size_t>(f0 + mode)] = map.flux_dof(f, mode, c);
                }
            }
        }
        if (l.alpha_offset >= 0) dofs[static_cast<std::size_t>(l.alpha_offset)] = map.alpha_;
    }
    return map;
}

int TestLayout::tau_size() const
{
    return (kind == ProblemKind::Elasticity ? 3 : 2) * dim_p(r_tau);
}

int TestLayout::v_size() const
{
    return (kind == ProblemKind::Elasticity ? 2 : 1) * dim_p(r_v);
}

int TestLayout::q_size() const
{
    return kind == ProblemKind::Elasticity ? dim_p(q_degree) : 0;
}

TestLayout build_test_layout(const mesh::Mesh& m, int p, const TestSpec& spec, ProblemKind kind)
{
    DPG_THROW_IF(m.num_elements() == 0, ErrorCode::InvalidArgument, "empty mesh");
    DPG_THROW_IF(p < 0, ErrorCode::InvalidArgument, "trial degree must be >= 0");
    TestLayout t;
    t.kind = kind;
    t.p = p;
    t.mode = spec.mode;
    t.q_degree = p;
    if (spec.mode == TestMode::Split) {
        t.r_tau = p + 2;
        t.r_v = p + kDimension;
    } else {
        const int r = spec.r < 0 ? p + kDimension : spec.r;
        DPG_THROW_IF(!spec.allow_deficient && r < p + kDimension, ErrorCode::InvalidArgument,
                     "test degree r = " + std::to_string(r) + " is below p + N = " + std::to_string(p + kDimension));
        DPG_THROW_IF(r < 0, ErrorCode::InvalidArgument, "test degree must be >= 0");
        t.r_tau = r;
        t.r_v = r;
    }
    return t;
}

}  // namespace dpg::spaces
