#include "dpg/manufactured.hpp"

#include <cmath>
#include <numbers>

namespace dpg::study {

namespace {

using std::numbers::pi;

// Value, gradient and Hessian (xx, xy, yy) of a scalar field.
struct Jet {
    double v = 0.0;
    Vec2 g = Vec2::Zero();
    double hxx = 0.0, hxy = 0.0, hyy = 0.0;
};

using JetFn = std::function<Jet(const Vec2&)>;

Jet sine_jet(const Vec2& x)
{
    const double sx = std::sin(pi * x.x()), cx = std::cos(pi * x.x());
    const double sy = std::sin(pi * x.y()), cy = std::cos(pi * x.y());
    Jet j;
    j.v = sx * sy;
    j.g = Vec2(pi * cx * sy, pi * sx * cy);
    j.hxx = -pi * pi * sx * sy;
    j.hxy = pi * pi * cx * cy;
    j.hyy = -pi * pi * sx * sy;
    return j;
}

Jet bubble_square_jet(const Vec2& x)
{
    // x (1-x) y (1-y)
    const double a = x.x() * (1.0 - x.x()), b = x.y() * (1.0 - x.y());
    const double da = 1.0 - 2.0 * x.x(), db = 1.0 - 2.0 * x.y();
    Jet j;
    j.v = a * b;
    j.g = Vec2(da * b, a * db);
    j.hxx = -2.0 * b;
    j.hxy = da * db;
    j.hyy = -2.0 * a;
    return j;
}

Jet bubble_triangle_jet(const Vec2& x)
{
    // x y (1 - x - y)
    const double X = x.x(), Y = x.y();
    Jet j;
    j.v = X * Y * (1.0 - X - Y);
    j.g = Vec2(Y * (1.0 - 2.0 * X - Y), X * (1.0 - X - 2.0 * Y));
    j.hxx = -2.0 * Y;
    j.hxy = 1.0 - 2.0 * X - 2.0 * Y;
    j.hyy = -2.0 * X;
    return j;
}

ManufacturedSolution poisson_from(std::string name, JetFn jet)
{
    ManufacturedSolution s;
    s.problem = spaces::ProblemKind::Poisson;
    s.name = std::move(name);
    s.u = [jet](const Vec2& x) { return Eigen::VectorXd::Constant(1, jet(x).v); };
    s.sigma = [jet](const Vec2& x) {
        const Jet j = jet(x);
        Eigen::VectorXd out(2);
        out << -j.g.x(), -j.g.y();
        return out;
    };
    s.f = [jet](const Vec2& x) {
        const Jet j = jet(x);
        return Eigen::VectorXd::Constant(1, -(j.hxx + j.hyy));
    };
    return s;
}

ManufacturedSolution elasticity_from(std::string name, JetFn u1, JetFn u2, double mu, double lambda)
{
    ManufacturedSolution s;
    s.problem = spaces::ProblemKind::Elasticity;
    s.name = std::move(name);
    s.mu = mu;
    s.lambda = lambda;
    s.u = [u1, u2](const Vec2& x) {
        Eigen::VectorXd out(2);
        out << u1(x).v, u2(x).v;
        return out;
    };
    s.sigma = [u1, u2, mu, lambda](const Vec2& x) {
        const Jet a = u1(x), b = u2(x);
        const double e11 = a.g.x(), e22 = b.g.y(), e12 = 0.5 * (a.g.y() + b.g.x());
        const double tr = e11 + e22;
        Eigen::VectorXd out(4);
        out << 2.0 * mu * e11 + lambda * tr, 2.0 * mu * e12, 2.0 * mu * e12, 2.0 * mu * e22 + lambda * tr;
        return out;
    };
    s.f = [u1, u2, mu, lambda](const Vec2& x) {
        const Jet a = u1(x), b = u2(x);
        // div sigma = mu lap u + (mu + lambda) grad div u
        const double div_x = a.hxx + b.hxy;
        const double div_y = a.hxy + b.hyy;
        Eigen::VectorXd out(2);
        out << -(mu * (a.hxx + a.hyy) + (mu + lambda) * div_x), -(mu * (b.hxx + b.hyy) + (mu + lambda) * div_y);
        return out;
    };
    return s;
}

}  // namespace

Eigen::VectorXd ManufacturedSolution::flux(const Vec2& x, const Vec2& n) const
{
    const Eigen::VectorXd s = sigma(x);
    if (problem == spaces::ProblemKind::Poisson) return Eigen::VectorXd::Constant(1, s(0) * n.x() + s(1) * n.y());
    Eigen::VectorXd out(2);
    out << s(0) * n.x() + s(1) * n.y(), s(2) * n.x() + s(3) * n.y();
    return out;
}

ManufacturedSolution poisson_sine()
{
    return poisson_from("poisson-sine", sine_jet);
}

ManufacturedSolution poisson_patch()
{
    return poisson_from("poisson-patch", bubble_triangle_jet);
}

ManufacturedSolution elasticity_smooth(double mu, double lambda)
{
    return elasticity_from("elasticity-smooth", sine_jet, bubble_square_jet, mu, lambda);
}

ManufacturedSolution elasticity_patch(double mu, double lambda)
{
    const JetFn minus_two = [](const Vec2& x) {
        Jet j = bubble_triangle_jet(x);
        j.v *= -2.0;
        j.g *= -2.0;
        j.hxx *= -2.0;
        j.hxy *= -2.0;
        j.hyy *= -2.0;
        return j;
    };
    return elasticity_from("elasticity-patch", bubble_triangle_jet, minus_two, mu, lambda);
}

ManufacturedSolution smooth_solution(spaces::ProblemKind problem, double mu, double lambda)
{
    return problem == spaces::ProblemKind::Poisson ? poisson_sine() : elasticity_smooth(mu, lambda);
}

}  // namespace dpg::study
