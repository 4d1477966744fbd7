#pragma once

#include "dpg/mesh.hpp"

#include <string_view>
#include <vector>

namespace dpg::spaces {

enum class ProblemKind { Poisson, Elasticity };

std::string_view to_string(ProblemKind kind);

/// Column layout of the element-local trial vector.
///
/// Poisson:    [sigma (2 dim P_p) | u (dim P_p) | u^ (3+3p) | sigma^_n (3(p+1))]
/// Elasticity: [sigma (4 dim P_p) | u (2 dim P_p) | u^ (2(3+3p)) | sigma^_n (2 3(p+1)) | alpha]
/// Vector-valued blocks are component-major.
struct LocalTrialLayout {
    ProblemKind kind = ProblemKind::Poisson;
    int p = 0;
    int components = 1;  // of u, u^ and sigma^_n
    int sigma_offset = 0, sigma_size = 0;
    int u_offset = 0, u_size = 0;
    int trace_offset = 0, trace_size = 0;  // per component: trace_size / components
    int flux_offset = 0, flux_size = 0;
    int alpha_offset = -1;
    int size = 0;
};

LocalTrialLayout local_trial_layout(ProblemKind kind, int p);

/// Global numbering of the free trial degrees of freedom. Constrained
/// trace DOFs (boundary vertices, modes on boundary facets) map to -1.
///
/// Order: per element sigma then u; then free vertex trace DOFs; then free
/// edge trace modes per facet; then flux DOFs per facet; then alpha.
class TrialDofMap {
public:
    ProblemKind kind() const { return layout_.kind; }
    int p() const { return layout_.p; }
    const LocalTrialLayout& local_layout() const { return layout_; }

    int num_dofs() const { return num_dofs_; }
    int num_elements() const { return static_cast<int>(element_dofs_.size()); }
    int num_constrained() const { return num_constrained_; }
    int num_field_dofs() const { return num_field_; }
    int num_trace_dofs() const { return num_trace_; }
    int num_flux_dofs() const { return num_flux_; }
    /// -1 for Poisson.
    int alpha_dof() const { return alpha_; }

    /// Local-to-global map in LocalTrialLayout order; -1 marks constrained entries.
    const std::vector<int>& element_dofs(int k) const { return element_dofs_[static_cast<std::size_t>(k)]; }

    int vertex_dof(int v, int c = 0) const;
    int edge_dof(int f, int m, int c = 0) const;
    int flux_dof(int f, int m, int c = 0) const;

private:
    friend TrialDofMap build_trial_space(const mesh::Mesh& m, int p, ProblemKind kind);

    LocalTrialLayout layout_;
    int num_dofs_ = 0;
    int num_constrained_ = 0;
    int num_field_ = 0;
    int num_trace_ = 0;
    int num_flux_ = 0;
    int alpha_ = -1;
    std::vector<std::vector<int>> element_dofs_;
    std::vector<int> vertex_dofs_;  // [v * components + c]
    std::vector<int> edge_dofs_;    // [(f * components + c) * p + m]
    std::vector<int> flux_dofs_;    // [(f * components + c) * (p + 1) + m]
};

TrialDofMap build_trial_space(const mesh::Mesh& m, int p, ProblemKind kind);

enum class TestMode { Uniform, Split };

struct TestSpec {
    TestMode mode = TestMode::Uniform;
    /// Uniform degree; negative selects the default p + 2.
    int r = -1;
    /// Lets tests build layouts below the admissible degree.
    bool allow_deficient = false;
};

/// Per-element test space: tau in P_{r_tau}, v in P_{r_v} and for elasticity
/// q in P_{q_degree}(K; skew) plus the global scalar beta.
///
/// Row layout of B_K: Poisson [tau (2 dim P_{r_tau}) | v (dim P_{r_v})];
/// elasticity [tau (3 dim P_{r_tau}) | v (2 dim P_{r_v}) | q (dim P_{q_degree})].
struct TestLayout {
    ProblemKind kind = ProblemKind::Poisson;
    int p = 0;
    int r_tau = 2;
    int r_v = 2;
    int q_degree = 0;
    TestMode mode = TestMode::Uniform;

    int tau_size() const;
    int v_size() const;
    int q_size() const;
    int element_size() const { return tau_size() + v_size() + q_size(); }
    /// Number of global test scalars (beta).
    int global_size() const { return kind == ProblemKind::Elasticity ? 1 : 0; }
};

inline constexpr int kDimension = 2;

TestLayout build_test_layout(const mesh::Mesh& m, int p, const TestSpec& spec, ProblemKind kind);

}  // namespace dpg::spaces
