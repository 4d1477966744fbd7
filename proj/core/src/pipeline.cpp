#include "dpg/pipeline.hpp"

#include "dpg/error.hpp"

namespace dpg {

Eigen::VectorXd Discretization::gather(int k, const Eigen::VectorXd& x) const
{
    const auto& map = dofs.element_dofs(k);
    Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(map.size()));
    if (x.size() == 0) return out;
    for (std::size_t i = 0; i < map.size(); ++i) {
        if (map[i] >= 0) out(static_cast<Eigen::Index>(i)) = x(map[i]);
    }
    return out;
}

double Discretization::alpha() const
{
    if (dofs.alpha_dof() < 0 || system.x.size() == 0) return 0.0;
    return system.x(dofs.alpha_dof());
}

Discretization discretize(mesh::Mesh mesh, const ProblemSetup& setup)
{
    Discretization d;
    d.mesh = std::move(mesh);
    d.kind = setup.kind;
    d.p = setup.p;
    d.dofs = spaces::build_trial_space(d.mesh, setup.p, setup.kind);
    d.layout = spaces::build_test_layout(d.mesh, setup.p, setup.test, setup.kind);
    d.tables = forms::make_tables(d.layout, setup.quadrature_degree);
    const bool elastic = setup.kind == spaces::ProblemKind::Elasticity;
    if (elastic) {
        d.compliance = forms::ComplianceTensor::isotropic(setup.mu, setup.lambda);
        d.q0 = d.compliance.trace_of_identity();
    }

    const int ne = d.mesh.num_elements();
    d.grams.reserve(static_cast<std::size_t>(ne));
    d.ops.reserve(static_cast<std::size_t>(ne));
    for (int k = 0; k < ne; ++k) {
        const forms::ElementGeometry g = forms::element_geometry(d.mesh, k, d.tables);
        forms::LocalGram gram =
            elastic ? forms::local_gram_elasticity(g, d.tables) : forms::local_gram_poisson(g, d.tables);
        const forms::LocalFormBlocks blocks =
            elastic ? forms::local_b_elasticity(g, d.tables, d.compliance, d.q0, setup.f)
                    : forms::local_b_poisson(g, d.tables, setup.f);
        d.ops.push_back(t2t::trial_to_test_local(gram, blocks));
        d.grams.push_back(std::move(gram));
    }
    d.system = system::assemble(d.dofs, d.ops);
    return d;
}

system::SolveReport solve(Discretization& d, const system::SolverOptions& options)
{
    return system::solve_spd(d.system, options);
}

Eigen::MatrixXd dense_stiffness_oracle(const Discretization& d)
{
    const int n = d.dofs.num_dofs();
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(n);
    for (int k = 0; k < d.mesh.num_elements(); ++k) {
        const auto& op = d.ops[static_cast<std::size_t>(k)];
        const Eigen::MatrixXd& G = d.grams[static_cast<std::size_t>(k)].G;
        // Independent of the cached factor: a pivoted LU of the raw Gram.
        const Eigen::MatrixXd local = op.B.transpose() * G.fullPivLu().solve(op.B);
        const auto& map = d.dofs.element_dofs(k);
        for (std::size_t i = 0; i < map.size(); ++i) {
            if (map[i] < 0) continue;
            if (op.beta_row.size() > 0) beta(map[i]) += op.beta_row(static_cast<Eigen::Index>(i));
            for (std::size_t j = 0; j < map.size(); ++j) {
                if (map[j] >= 0) {
                    S(map[i], map[j]) += local(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
                }
            }
        }
    }
    if (d.kind == spaces::ProblemKind::Elasticity) S += beta * beta.transpose();
    return S;
}

}  // namespace dpg
