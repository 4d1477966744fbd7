#pragma once

#include "dpg/compliance.hpp"
#include "dpg/forms.hpp"
#include "dpg/mesh.hpp"
#include "dpg/spaces.hpp"
#include "dpg/system.hpp"
#include "dpg/t2t.hpp"

#include <vector>

namespace dpg {

struct ProblemSetup {
    spaces::ProblemKind kind = spaces::ProblemKind::Poisson;
    int p = 1;
    spaces::TestSpec test;
    forms::SourceFn f;
    double mu = 1.0;
    double lambda = 1.0;
    int quadrature_degree = -1;
};

/// Everything built for one mesh: local grams and operators, the condensed
/// system and, after solve(), its solution.
struct Discretization {
    mesh::Mesh mesh;
    spaces::ProblemKind kind = spaces::ProblemKind::Poisson;
    int p = 0;
    spaces::TrialDofMap dofs;
    spaces::TestLayout layout;
    forms::ElementTables tables;
    forms::ComplianceTensor compliance = forms::ComplianceTensor::identity();
    double q0 = 1.0;
    std::vector<forms::LocalGram> grams;
    std::vector<t2t::ElementOperators> ops;
    system::LinearSystem system;

    /// Element-local trial vector of a global vector (constrained entries 0).
    Eigen::VectorXd gather(int k, const Eigen::VectorXd& x) const;
    Eigen::VectorXd local_solution(int k) const { return gather(k, system.x); }
    /// alpha_h (elasticity), 0 otherwise.
    double alpha() const;
};

Discretization discretize(mesh::Mesh mesh, const ProblemSetup& setup);

system::SolveReport solve(Discretization& d, const system::SolverOptions& options = {});

/// Dense oracle sum_K B_K^T G_K^{-1} B_K (plus the beta term) over the free DOFs.
Eigen::MatrixXd dense_stiffness_oracle(const Discretization& d);

}  // namespace dpg
