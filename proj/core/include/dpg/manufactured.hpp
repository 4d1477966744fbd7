#pragma once

#include "dpg/forms.hpp"
#include "dpg/spaces.hpp"

#include <Eigen/Dense>

#include <functional>
#include <string>

namespace dpg::study {

using Vec2 = Eigen::Vector2d;

/// Closed-form exact solution with its load.
///
/// Poisson: sigma = -grad u, div sigma = f, so f = -lap u.
/// Elasticity: A sigma = eps(u), f = -div sigma, sigma symmetric.
/// `u` has 1 or 2 components; `sigma` is (s_x, s_y) for Poisson and the
/// row-major matrix (s11, s12, s21, s22) for elasticity.
struct ManufacturedSolution {
    spaces::ProblemKind problem = spaces::ProblemKind::Poisson;
    std::string name;
    std::function<Eigen::VectorXd(const Vec2&)> u;
    std::function<Eigen::VectorXd(const Vec2&)> sigma;
    forms::SourceFn f;
    double mu = 1.0;
    double lambda = 1.0;

    int u_components() const { return problem == spaces::ProblemKind::Poisson ? 1 : 2; }
    /// sigma n, one component per u component.
    Eigen::VectorXd flux(const Vec2& x, const Vec2& n) const;
};

/// u = sin(pi x) sin(pi y) on the unit square.
ManufacturedSolution poisson_sine();

/// u = x y (1 - x - y): zero on the boundary of the reference triangle and
/// in U_h for p >= 3.
ManufacturedSolution poisson_patch();

/// u = (sin(pi x) sin(pi y), x (1-x) y (1-y)) with isotropic (mu, lambda).
ManufacturedSolution elasticity_smooth(double mu = 1.0, double lambda = 1.0);

/// u = (w, -2 w) with w = x y (1 - x - y); in U_h for p >= 3.
ManufacturedSolution elasticity_patch(double mu = 1.0, double lambda = 1.0);

/// Default smooth solution of the given problem.
ManufacturedSolution smooth_solution(spaces::ProblemKind problem, double mu = 1.0, double lambda = 1.0);

}  // namespace dpg::study
