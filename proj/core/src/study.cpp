#include "dpg/study.hpp"

#include "dpg/error.hpp"
#include "dpg/refelem.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

namespace dpg::study {

using refelem::dim_p;
using spaces::ProblemKind;
using Mat2 = Eigen::Matrix2d;

namespace {

struct EdgeFrame {
    Vec2 a, b;
    Vec2 normal;  // outward
    bool reversed = false;
    double sign = 1.0;

    Vec2 point(double s) const { return a + s * (b - a); }
};

std::array<EdgeFrame, 3> edge_frames(const mesh::Mesh& m, int k)
{
    std::array<EdgeFrame, 3> out;
    const auto& t = m.triangles()[static_cast<std::size_t>(k)];
    for (int e = 0; e < 3; ++e) {
        EdgeFrame& f = out[static_cast<std::size_t>(e)];
        f.a = m.vertices()[static_cast<std::size_t>(t[static_cast<std::size_t>((e + 1) % 3)])];
        f.b = m.vertices()[static_cast<std::size_t>(t[static_cast<std::size_t>((e + 2) % 3)])];
        const Vec2 d = f.b - f.a;
        f.normal = Vec2(d.y(), -d.x()) / d.norm();
        f.reversed = m.edge_reversed(k, e);
        f.sign = m.flux_sign(k, e);
    }
    return out;
}

double parity(int m, bool reversed)
{
    return (reversed && m % 2 == 1) ? -1.0 : 1.0;
}

// Sign changes between the data layouts of the extension module (local edge
// direction, outward flux) and the local trial layout.
Eigen::VectorXd trace_signs(int p, const std::array<EdgeFrame, 3>& edges)
{
    Eigen::VectorXd s = Eigen::VectorXd::Ones(3 + 3 * p);
    for (int e = 0; e < 3; ++e) {
        for (int m = 0; m < p; ++m) s(3 + e * p + m) = parity(m, edges[static_cast<std::size_t>(e)].reversed);
    }
    return s;
}

Eigen::VectorXd flux_signs(int p, const std::array<EdgeFrame, 3>& edges)
{
    Eigen::VectorXd s(3 * (p + 1));
    for (int e = 0; e < 3; ++e) {
        const EdgeFrame& f = edges[static_cast<std::size_t>(e)];
        for (int m = 0; m <= p; ++m) s(e * (p + 1) + m) = f.sign * parity(m, f.reversed);
    }
    return s;
}

int sigma_components(ProblemKind kind)
{
    return kind == ProblemKind::Poisson ? 2 : 4;
}

int error_quadrature_degree(int p)
{
    return std::min(2 * p + 12, refelem::kMaxQuadratureDegree);
}

}  // namespace

double ErrorNorms::total() const
{
    return std::sqrt(sigma_l2 * sigma_l2 + u_l2 * u_l2 + trace_h12 * trace_h12 + flux_hm12 * flux_hm12);
}

int error_trace_degree(int p)
{
    return p + 3;
}

int error_flux_degree(int p)
{
    return p + 2;
}

ErrorNorms compute_errors(const Discretization& d, const std::vector<Eigen::VectorXd>& local,
                          const ManufacturedSolution& exact, extension::Method method)
{
    DPG_THROW_IF(static_cast<int>(local.size()) != d.mesh.num_elements(), ErrorCode::InvalidArgument,
                 "one local vector per element expected");
    DPG_THROW_IF(exact.problem != d.kind, ErrorCode::InvalidArgument, "exact solution is for another problem");
    const int p = d.p;
    const int np = dim_p(p);
    const auto& L = d.dofs.local_layout();
    const int nc = L.components;
    const int nsig = sigma_components(d.kind);
    const int ntr = 3 + 3 * p;
    const int nfl = 3 * (p + 1);
    const int kt = error_trace_degree(p);
    const int kf = error_flux_degree(p);

    const auto& rule = refelem::quadrature_rule(error_quadrature_degree(p));
    const Eigen::MatrixXd phi = refelem::simplex_basis(2, p).tabulate_values(rule.points);
    const refelem::TraceBasis tb(p);
    Eigen::VectorXd tv(ntr);
    Eigen::VectorXd fv(np > 0 ? p + 1 : 1);

    ErrorNorms out;
    double es = 0.0, eu = 0.0, et = 0.0, ef = 0.0;
    for (int k = 0; k < d.mesh.num_elements(); ++k) {
        const auto& x = local[static_cast<std::size_t>(k)];
        const mesh::AffineMap& map = d.mesh.map(k);
        for (int q = 0; q < rule.size(); ++q) {
            const Vec2 xp = map.forward(rule.points.row(q).transpose());
            const double w = map.det * rule.weights(q);
            const Eigen::VectorXd s = exact.sigma(xp);
            const Eigen::VectorXd u = exact.u(xp);
            for (int c = 0; c < nsig; ++c) {
                const double diff = s(c) - phi.row(q).dot(x.segment(L.sigma_offset + c * np, np));
                es += w * diff * diff;
            }
            for (int c = 0; c < nc; ++c) {
                const double diff = u(c) - phi.row(q).dot(x.segment(L.u_offset + c * np, np));
                eu += w * diff * diff;
            }
        }

        const auto edges = edge_frames(d.mesh, k);
        Eigen::MatrixXd mt, mf;
        try {
            mt = extension::trace_gram(map, kt, method);
            mf = extension::flux_gram(map, kf, method);
        } catch (const Error&) {
            out.flagged_elements.push_back(k);
            continue;
        }
        for (int c = 0; c < nc; ++c) {
            const auto xt = x.segment(L.trace_offset + c * ntr, ntr);
            const auto xf = x.segment(L.flux_offset + c * nfl, nfl);
            const extension::EdgeFunction gt = [&](int e, double s) {
                const EdgeFrame& f = edges[static_cast<std::size_t>(e)];
                tb.trace_values(e, s, f.reversed, tv);
                return exact.u(f.point(s))(c) - tv.dot(xt);
            };
            const Eigen::VectorXd dt = extension::interpolate_trace(gt, kt);
            et += dt.dot(mt * dt);
            const extension::EdgeFunction gf = [&](int e, double s) {
                const EdgeFrame& f = edges[static_cast<std::size_t>(e)];
                const double t = f.reversed ? 1.0 - s : s;
                double h = 0.0;
                for (int m = 0; m <= p; ++m) h += xf(e * (p + 1) + m) * refelem::legendre01(m, t);
                return exact.flux(f.point(s), f.normal)(c) - f.sign * h;
            };
            const Eigen::VectorXd df = extension::project_flux(gf, kf);
            ef += df.dot(mf * df);
        }
    }
    out.sigma_l2 = std::sqrt(es);
    out.u_l2 = std::sqrt(eu);
    out.trace_h12 = std::sqrt(std::max(0.0, et));
    out.flux_hm12 = std::sqrt(std::max(0.0, ef));
    return out;
}

ErrorNorms solution_errors(const Discretization& d, const ManufacturedSolution& exact, extension::Method method)
{
    std::vector<Eigen::VectorXd> local;
    local.reserve(static_cast<std::size_t>(d.mesh.num_elements()));
    for (int k = 0; k < d.mesh.num_elements(); ++k) local.push_back(d.local_solution(k));
    return compute_errors(d, local, exact, method);
}

std::vector<Eigen::VectorXd> best_approximation(const Discretization& d, const ManufacturedSolution& exact)
{
    const int p = d.p;
    const int np = dim_p(p);
    const auto& L = d.dofs.local_layout();
    const int nc = L.components;
    const int nsig = sigma_components(d.kind);
    const int ntr = 3 + 3 * p;
    const int nfl = 3 * (p + 1);
    const auto& rule = refelem::quadrature_rule(error_quadrature_degree(p));
    const Eigen::MatrixXd phi = refelem::simplex_basis(2, p).tabulate_values(rule.points);

    std::vector<Eigen::VectorXd> out;
    out.reserve(static_cast<std::size_t>(d.mesh.num_elements()));
    for (int k = 0; k < d.mesh.num_elements(); ++k) {
        Eigen::VectorXd x = Eigen::VectorXd::Zero(L.size);
        const mesh::AffineMap& map = d.mesh.map(k);
        // The physical mass matrix of the orthonormal basis is det * I.
        for (int q = 0; q < rule.size(); ++q) {
            const Vec2 xp = map.forward(rule.points.row(q).transpose());
            const Eigen::VectorXd s = exact.sigma(xp);
            const Eigen::VectorXd u = exact.u(xp);
            const Eigen::VectorXd wphi = rule.weights(q) * phi.row(q).transpose();
            for (int c = 0; c < nsig; ++c) x.segment(L.sigma_offset + c * np, np) += s(c) * wphi;
            for (int c = 0; c < nc; ++c) x.segment(L.u_offset + c * np, np) += u(c) * wphi;
        }
        const auto edges = edge_frames(d.mesh, k);
        const Eigen::VectorXd ts = trace_signs(p, edges);
        const Eigen::VectorXd fs = flux_signs(p, edges);
        for (int c = 0; c < nc; ++c) {
            const extension::EdgeFunction gt = [&](int e, double s) {
                return exact.u(edges[static_cast<std::size_t>(e)].point(s))(c);
            };
            x.segment(L.trace_offset + c * ntr, ntr) = ts.cwiseProduct(extension::interpolate_trace(gt, p + 1));
            const extension::EdgeFunction gf = [&](int e, double s) {
                const EdgeFrame& f = edges[static_cast<std::size_t>(e)];
                return exact.flux(f.point(s), f.normal)(c);
            };
            x.segment(L.flux_offset + c * nfl, nfl) = fs.cwiseProduct(extension::project_flux(gf, p));
        }
        out.push_back(std::move(x));
    }
    return out;
}

Quasioptimality quasioptimality_check(const Discretization& d, const ManufacturedSolution& exact)
{
    Quasioptimality q;
    q.error = solution_errors(d, exact).total();
    q.best = compute_errors(d, best_approximation(d, exact), exact).total();
    q.ratio = q.best > 0.0 ? q.error / q.best : (q.error > 0.0 ? std::numeric_limits<double>::infinity() : 1.0);
    return q;
}

ResidualIndicator residual_indicator(const Discretization& d)
{
    ResidualIndicator out;
    double sum = 0.0;
    double beta = 0.0;
    for (int k = 0; k < d.mesh.num_elements(); ++k) {
        const auto& op = d.ops[static_cast<std::size_t>(k)];
        const Eigen::VectorXd u = d.local_solution(k);
        const Eigen::VectorXd r = op.load - op.B * u;
        const double ek = std::max(0.0, r.dot(d.grams[static_cast<std::size_t>(k)].llt.solve(r)));
        out.element.push_back(std::sqrt(ek));
        sum += ek;
        if (op.beta_row.size() > 0) beta -= op.beta_row.dot(u);
    }
    out.beta = std::abs(beta);
    out.eta = std::sqrt(sum + beta * beta);
    return out;
}

double residual_check(const Discretization& d, const ManufacturedSolution& exact)
{
    const bool elastic = d.kind == ProblemKind::Elasticity;
    const auto& layout = d.layout;
    const int qdeg = std::min(2 * std::max(layout.r_tau, layout.r_v) + 16, refelem::kMaxQuadratureDegree);
    const auto& rule = refelem::quadrature_rule(qdeg);
    const auto& line = refelem::line_rule(qdeg);
    const auto& btau = refelem::simplex_basis(2, layout.r_tau);
    const auto& bv = refelem::simplex_basis(2, layout.r_v);
    const refelem::Tabulation tau = btau.tabulate(rule.points);
    const refelem::Tabulation v = bv.tabulate(rule.points);
    const int nt = btau.scalar_size();
    const int nv = bv.scalar_size();

    std::array<Mat2, 3> sym;
    for (int c = 0; c < 3; ++c) sym[static_cast<std::size_t>(c)] = refelem::component_matrix(refelem::Kind::Symmetric, c);
    const Mat2 skew = refelem::component_matrix(refelem::Kind::Skew, 0);

    double worst = 0.0;
    double scale = 0.0;
    for (int k = 0; k < d.mesh.num_elements(); ++k) {
        const mesh::AffineMap& map = d.mesh.map(k);
        const Mat2 B = map.inverse_transpose();
        const Eigen::MatrixXd dtx = B(0, 0) * tau.dx + B(0, 1) * tau.dy;
        const Eigen::MatrixXd dty = B(1, 0) * tau.dx + B(1, 1) * tau.dy;
        const Eigen::MatrixXd dvx = B(0, 0) * v.dx + B(0, 1) * v.dy;
        const Eigen::MatrixXd dvy = B(1, 0) * v.dx + B(1, 1) * v.dy;
        const int ntau_rows = elastic ? 3 * nt : 2 * nt;
        const int nv_rows = elastic ? 2 * nv : nv;
        const int nq_rows = elastic ? dim_p(layout.q_degree) : 0;
        Eigen::VectorXd b = Eigen::VectorXd::Zero(ntau_rows + nv_rows + nq_rows);
        Eigen::VectorXd l = Eigen::VectorXd::Zero(b.size());
        Eigen::VectorXd mag = Eigen::VectorXd::Zero(b.size());
        auto add = [&](Eigen::Index i, double term) {
            b(i) += term;
            mag(i) = std::max(mag(i), std::abs(term));
        };
        const Eigen::MatrixXd qv =
            elastic ? refelem::simplex_basis(2, layout.q_degree).tabulate_values(rule.points) : Eigen::MatrixXd();

        for (int q = 0; q < rule.size(); ++q) {
            const Vec2 xp = map.forward(rule.points.row(q).transpose());
            const double w = map.det * rule.weights(q);
            const Eigen::VectorXd s = exact.sigma(xp);
            const Eigen::VectorXd u = exact.u(xp);
            const Eigen::VectorXd f = exact.f(xp);
            if (!elastic) {
                for (int j = 0; j < nt; ++j) {
                    const double psi = tau.values(q, j);
                    add(j, w * (s(0) * psi - u(0) * dtx(q, j)));
                    add(nt + j, w * (s(1) * psi - u(0) * dty(q, j)));
                }
                for (int j = 0; j < nv; ++j) {
                    add(2 * nt + j, -w * (s(0) * dvx(q, j) + s(1) * dvy(q, j)));
                    l(2 * nt + j) += w * f(0) * v.values(q, j);
                }
            } else {
                Mat2 sm;
                sm << s(0), s(1), s(2), s(3);
                const Mat2 asig = d.compliance.apply(sm);
                for (int c = 0; c < 3; ++c) {
                    const Mat2& S = sym[static_cast<std::size_t>(c)];
                    const double as = (asig.array() * S.array()).sum();
                    for (int j = 0; j < nt; ++j) {
                        const Vec2 grad(dtx(q, j), dty(q, j));
                        const Vec2 div = S * grad;
                        add(c * nt + j, w * (as * tau.values(q, j) + u.dot(div)));
                    }
                }
                for (int i = 0; i < 2; ++i) {
                    for (int j = 0; j < nv; ++j) {
                        add(ntau_rows + i * nv + j, w * (sm(i, 0) * dvx(q, j) + sm(i, 1) * dvy(q, j)));
                        l(ntau_rows + i * nv + j) += w * f(i) * v.values(q, j);
                    }
                }
                const double sk = (sm.array() * skew.array()).sum();
                for (int j = 0; j < nq_rows; ++j) add(ntau_rows + nv_rows + j, w * sk * qv(q, j));
            }
        }

        const auto edges = edge_frames(d.mesh, k);
        for (int e = 0; e < 3; ++e) {
            const EdgeFrame& fr = edges[static_cast<std::size_t>(e)];
            const double len = (fr.b - fr.a).norm();
            Eigen::MatrixX2d pts(line.size(), 2);
            for (int i = 0; i < line.size(); ++i) pts.row(i) = refelem::reference_edge_point(e, line.points(i)).transpose();
            const Eigen::MatrixXd te = btau.tabulate_values(pts);
            const Eigen::MatrixXd ve = bv.tabulate_values(pts);
            for (int i = 0; i < line.size(); ++i) {
                const Vec2 xp = fr.point(line.points(i));
                const double w = len * line.weights(i);
                const Eigen::VectorXd u = exact.u(xp);
                const Eigen::VectorXd sn = exact.flux(xp, fr.normal);
                if (!elastic) {
                    for (int j = 0; j < nt; ++j) {
                        add(j, w * u(0) * te(i, j) * fr.normal.x());
                        add(nt + j, w * u(0) * te(i, j) * fr.normal.y());
                    }
                    for (int j = 0; j < nv; ++j) add(2 * nt + j, w * ve(i, j) * sn(0));
                } else {
                    for (int c = 0; c < 3; ++c) {
                        const Vec2 tn = sym[static_cast<std::size_t>(c)] * fr.normal;
                        for (int j = 0; j < nt; ++j) add(c * nt + j, -w * u.dot(tn) * te(i, j));
                    }
                    for (int ic = 0; ic < 2; ++ic) {
                        for (int j = 0; j < nv; ++j) add(ntau_rows + ic * nv + j, -w * ve(i, j) * sn(ic));
                    }
                }
            }
        }
        worst = std::max(worst, (b - l).cwiseAbs().maxCoeff());
        scale = std::max({scale, l.cwiseAbs().maxCoeff(), mag.maxCoeff()});
    }
    return scale > 0.0 ? worst / scale : worst;
}

Eigen::SparseMatrix<double> u_gram(const Discretization& d)
{
    const int p = d.p;
    const auto& L = d.dofs.local_layout();
    const int nc = L.components;
    const int ntr = 3 + 3 * p;
    const int nfl = 3 * (p + 1);
    std::vector<Eigen::Triplet<double>> trip;
    for (int k = 0; k < d.mesh.num_elements(); ++k) {
        const mesh::AffineMap& map = d.mesh.map(k);
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(L.size, L.size);
        m.block(L.sigma_offset, L.sigma_offset, L.sigma_size, L.sigma_size).diagonal().setConstant(map.det);
        m.block(L.u_offset, L.u_offset, L.u_size, L.u_size).diagonal().setConstant(map.det);
        const auto edges = edge_frames(d.mesh, k);
        const Eigen::VectorXd ts = trace_signs(p, edges);
        const Eigen::VectorXd fs = flux_signs(p, edges);
        const Eigen::MatrixXd mt = ts.asDiagonal() * extension::trace_gram(map, p + 1) * ts.asDiagonal();
        const Eigen::MatrixXd mf = fs.asDiagonal() * extension::flux_gram(map, p) * fs.asDiagonal();
        for (int c = 0; c < nc; ++c) {
            m.block(L.trace_offset + c * ntr, L.trace_offset + c * ntr, ntr, ntr) = mt;
            m.block(L.flux_offset + c * nfl, L.flux_offset + c * nfl, nfl, nfl) = mf;
        }
        const auto& map_dofs = d.dofs.element_dofs(k);
        for (std::size_t i = 0; i < map_dofs.size(); ++i) {
            if (map_dofs[i] < 0) continue;
            for (std::size_t j = 0; j < map_dofs.size(); ++j) {
                const double v = m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
                if (map_dofs[j] >= 0 && v != 0.0) trip.emplace_back(map_dofs[i], map_dofs[j], v);
            }
        }
    }
    if (d.dofs.alpha_dof() >= 0) trip.emplace_back(d.dofs.alpha_dof(), d.dofs.alpha_dof(), 1.0);
    Eigen::SparseMatrix<double> M(d.dofs.num_dofs(), d.dofs.num_dofs());
    M.setFromTriplets(trip.begin(), trip.end());
    return M;
}

ConstantsReport measure_constants(const Discretization& d)
{
    constexpr int kDenseLimit = 4000;
    const int n = d.system.size();
    DPG_THROW_IF(n > kDenseLimit, ErrorCode::Unsupported,
                 "constants are measured densely; use a mesh with at most " + std::to_string(kDenseLimit) + " DOFs");
    ConstantsReport r;
    r.dofs = n;
    const Eigen::MatrixXd S = Eigen::MatrixXd(d.system.S);
    const Eigen::MatrixXd M = Eigen::MatrixXd(u_gram(d));
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> gen(S, M, Eigen::EigenvaluesOnly);
    DPG_THROW_IF(gen.info() != Eigen::Success, ErrorCode::NotConverged, "generalized eigenproblem failed");
    r.norm_equiv_min = std::sqrt(std::max(0.0, gen.eigenvalues().minCoeff()));
    r.norm_equiv_max = std::sqrt(std::max(0.0, gen.eigenvalues().maxCoeff()));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> em(M, Eigen::EigenvaluesOnly);
    r.lambda0 = em.eigenvalues().minCoeff();
    r.lambda1 = em.eigenvalues().maxCoeff();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S, Eigen::EigenvaluesOnly);
    r.kappa = es.eigenvalues().maxCoeff() / es.eigenvalues().minCoeff();
    return r;
}

std::string constants_text(const ConstantsReport& r)
{
    std::ostringstream out;
    char buf[128];
    auto line = [&](const char* key, double v) {
        std::snprintf(buf, sizeof buf, "%s: %.6e\n", key, v);
        out << buf;
    };
    out << "dofs: " << r.dofs << '\n';
    line("c_pi_lower_bound", r.c_pi);
    line("norm_equivalence_min", r.norm_equiv_min);
    line("norm_equivalence_max", r.norm_equiv_max);
    line("lambda0", r.lambda0);
    line("lambda1", r.lambda1);
    line("kappa", r.kappa);
    line("kappa_slope", r.kappa_slope);
    line("rate_sigma", r.rate_sigma);
    line("rate_u", r.rate_u);
    return out.str();
}

double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    DPG_THROW_IF(x.size() != y.size() || x.size() < 2, ErrorCode::InvalidArgument,
                 "slope fit needs at least two points");
    const double n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        DPG_THROW_IF(!(x[i] > 0.0) || !(y[i] > 0.0), ErrorCode::InvalidArgument, "slope fit needs positive data");
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

void fill_rates(RateTable& t)
{
    const std::size_t n = t.rows.size();
    t.rate_sigma.assign(n, std::nullopt);
    t.rate_u.assign(n, std::nullopt);
    auto pair_rate = [&](double e0, double e1, double h0, double h1) -> std::optional<double> {
        if (!(e0 > 0.0) || !(e1 > 0.0)) return std::nullopt;
        return std::log(e0 / e1) / std::log(h0 / h1);
    };
    for (std::size_t i = 1; i < n; ++i) {
        const auto& a = t.rows[i - 1];
        const auto& b = t.rows[i];
        t.rate_sigma[i] = pair_rate(a.errors.sigma_l2, b.errors.sigma_l2, a.h, b.h);
        t.rate_u[i] = pair_rate(a.errors.u_l2, b.errors.u_l2, a.h, b.h);
    }
    t.fit_sigma = t.fit_u = 0.0;
    if (n >= 2) {
        const std::size_t first = n >= 3 ? n - 3 : 0;
        std::vector<double> h, es, eu;
        for (std::size_t i = first; i < n; ++i) {
            h.push_back(t.rows[i].h);
            es.push_back(t.rows[i].errors.sigma_l2);
            eu.push_back(t.rows[i].errors.u_l2);
        }
        const auto positive = [](const std::vector<double>& v) {
            return std::all_of(v.begin(), v.end(), [](double x) { return x > 0.0; });
        };
        if (positive(es)) t.fit_sigma = fit_loglog_slope(h, es);
        if (positive(eu)) t.fit_u = fit_loglog_slope(h, eu);
        std::vector<double> hk, k;
        for (const auto& r : t.rows) {
            if (r.kappa > 0.0) {
                hk.push_back(r.h);
                k.push_back(r.kappa);
            }
        }
        if (hk.size() == n) t.kappa_slope = fit_loglog_slope(hk, k);
    }
}

mesh::Mesh level_mesh(const StudyConfig& config, int level)
{
    if (config.base_mesh) {
        mesh::Mesh m = *config.base_mesh;
        for (int l = 0; l < level; ++l) m = mesh::refine_uniform(m);
        return m;
    }
    return mesh::unit_square_mesh(config.n << level);
}

namespace {

ProblemSetup setup_for(const StudyConfig& config, forms::SourceFn f)
{
    ProblemSetup s;
    s.kind = config.problem;
    s.p = config.p;
    s.test = config.test;
    s.f = std::move(f);
    s.mu = config.mu;
    s.lambda = config.lambda;
    s.quadrature_degree = config.quadrature_degree;
    return s;
}

}  // namespace

RateTable convergence_study(const StudyConfig& config, const ManufacturedSolution& exact)
{
    DPG_THROW_IF(config.levels < 1, ErrorCode::InvalidArgument, "a study needs at least one level");
    DPG_THROW_IF(exact.problem != config.problem, ErrorCode::InvalidArgument, "exact solution is for another problem");
    RateTable table;
    const ProblemSetup setup = setup_for(config, exact.f);
    for (int level = 0; level < config.levels; ++level) {
        try {
            LevelResult row;
            row.level = level;
            Discretization d = discretize(level_mesh(config, level), setup);
            row.h = d.mesh.h_max();
            row.dofs = d.dofs.num_dofs();
            row.elements = d.mesh.num_elements();
            row.solve = solve(d, config.solver);
            row.alpha = d.alpha();
            if (config.errors) {
                row.errors = solution_errors(d, exact);
                row.quasi = quasioptimality_check(d, exact);
            }
            row.eta = residual_indicator(d).eta;
            if (config.condition) row.kappa = system::condition_estimate(d.system, config.condition_tolerance).kappa;
            table.rows.push_back(std::move(row));
        } catch (const Error& e) {
            table.failed = true;
            table.failure = "level " + std::to_string(level) + ": " + e.what();
            break;
        }
    }
    fill_rates(table);
    return table;
}

RateTable condition_study(const StudyConfig& config)
{
    DPG_THROW_IF(config.levels < 2, ErrorCode::InvalidArgument,
                 "condition study needs at least two levels to fit a slope");
    RateTable table;
    const ProblemSetup setup = setup_for(config, nullptr);
    for (int level = 0; level < config.levels; ++level) {
        LevelResult row;
        row.level = level;
        Discretization d = discretize(level_mesh(config, level), setup);
        row.h = d.mesh.h_max();
        row.dofs = d.dofs.num_dofs();
        row.elements = d.mesh.num_elements();
        const system::ConditionEstimate est = system::condition_estimate(d.system, config.condition_tolerance);
        DPG_THROW_IF(!est.converged, ErrorCode::NotConverged,
                     "condition estimate did not converge on level " + std::to_string(level));
        row.kappa = est.kappa;
        table.rows.push_back(std::move(row));
    }
    fill_rates(table);
    return table;
}

std::string rates_csv(const RateTable& t)
{
    std::ostringstream out;
    out << "level,h,dofs,err_sigma_L2,err_u_L2,err_trace_h12,err_flux_hm12,eta,kappa,rate_sigma,rate_u\n";
    char buf[512];
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const LevelResult& r = t.rows[i];
        std::snprintf(buf, sizeof buf, "%d,%.6e,%d,%.6e,%.6e,%.6e,%.6e,%.6e,", r.level, r.h, r.dofs, r.errors.sigma_l2,
                      r.errors.u_l2, r.errors.trace_h12, r.errors.flux_hm12, r.eta);
        out << buf;
        if (r.kappa > 0.0) {
            std::snprintf(buf, sizeof buf, "%.6e", r.kappa);
            out << buf;
        }
        out << ',';
        if (i < t.rate_sigma.size() && t.rate_sigma[i]) {
            std::snprintf(buf, sizeof buf, "%.4f", *t.rate_sigma[i]);
            out << buf;
        }
        out << ',';
        if (i < t.rate_u.size() && t.rate_u[i]) {
            std::snprintf(buf, sizeof buf, "%.4f", *t.rate_u[i]);
            out << buf;
        }
        out << '\n';
    }
    return out.str();
}

void write_plot_data(const RateTable& t, const std::filesystem::path& dir)
{
    const std::vector<std::pair<const char*, std::function<double(const LevelResult&)>>> series = {
        {"err_sigma_L2.dat", [](const LevelResult& r) { return r.errors.sigma_l2; }},
        {"err_u_L2.dat", [](const LevelResult& r) { return r.errors.u_l2; }},
        {"err_trace_h12.dat", [](const LevelResult& r) { return r.errors.trace_h12; }},
        {"err_flux_hm12.dat", [](const LevelResult& r) { return r.errors.flux_hm12; }},
        {"eta.dat", [](const LevelResult& r) { return r.eta; }},
        {"kappa.dat", [](const LevelResult& r) { return r.kappa; }},
    };
    char buf[96];
    for (const auto& [file, get] : series) {
        std::ofstream out(dir / file);
        DPG_THROW_IF(!out, ErrorCode::Io, "cannot write " + (dir / file).string());
        for (const auto& r : t.rows) {
            const double v = get(r);
            if (!(v > 0.0)) continue;
            std::snprintf(buf, sizeof buf, "%.8e %.8e\n", std::log(r.h), std::log(v));
            out << buf;
        }
    }
}

}  // namespace dpg::study
