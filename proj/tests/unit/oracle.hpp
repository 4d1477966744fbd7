#pragma once

// Brute-force evaluation of the ultraweak forms by pointwise basis
// evaluation; shares no code with the assembled blocks beyond the bases.

#include "dpg/compliance.hpp"
#include "dpg/mesh.hpp"
#include "dpg/refelem.hpp"
#include "dpg/spaces.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace oracle {

using dpg::refelem::component_matrix;
using dpg::refelem::Kind;
using Mat2 = Eigen::Matrix2d;
using Vec2 = Eigen::Vector2d;

struct Edge {
    Vec2 a, b, n;
    double length;
    bool reversed;
    double sign;
};

inline Edge edge(const dpg::mesh::Mesh& m, int k, int e)
{
    const auto& t = m.triangles()[static_cast<std::size_t>(k)];
    Edge out;
    out.a = m.vertices()[static_cast<std::size_t>(t[static_cast<std::size_t>((e + 1) % 3)])];
    out.b = m.vertices()[static_cast<std::size_t>(t[static_cast<std::size_t>((e + 2) % 3)])];
    const Vec2 d = out.b - out.a;
    out.length = d.norm();
    out.n = Vec2(d.y(), -d.x()) / out.length;
    out.reversed = t[static_cast<std::size_t>((e + 1) % 3)] > t[static_cast<std::size_t>((e + 2) % 3)];
    out.sign = m.flux_sign(k, e);
    return out;
}

// Value and physical gradient of scalar basis function s of degree d at physical x.
inline double scalar(int d, int s, const dpg::mesh::AffineMap& map, const Vec2& x, Vec2* grad = nullptr)
{
    const auto& b = dpg::refelem::simplex_basis(2, d);
    const Vec2 xh = map.inverse(x);
    if (grad) *grad = map.A_inv.transpose() * b.gradients(xh).row(s).transpose();
    return b.values(xh)(s);
}

/// b(W_j, V_i) for Poisson, element k, with local trial index j and test row i
/// in the documented layouts.
inline double poisson_entry(const dpg::mesh::Mesh& m, int k, int p, int r, int i, int j, int qdeg)
{
    const auto L = dpg::spaces::local_trial_layout(dpg::spaces::ProblemKind::Poisson, p);
    const int np = dpg::refelem::dim_p(p);
    const int nr = dpg::refelem::dim_p(r);
    const auto& map = m.map(k);
    const auto& rule = dpg::refelem::quadrature_rule(qdeg);
    const auto& line = dpg::refelem::line_rule(qdeg);
    const dpg::refelem::TraceBasis tb(p);
    Eigen::VectorXd tv(tb.trace_size()), fv(tb.flux_size());

    // Test function: tau component ct or v.
    const bool is_tau = i < 2 * nr;
    const int ct = is_tau ? i / nr : -1;
    const int ts = is_tau ? i % nr : i - 2 * nr;

    double sum = 0.0;
    for (int q = 0; q < rule.size(); ++q) {
        const Vec2 x = map.forward(rule.points.row(q).transpose());
        const double w = map.det * rule.weights(q);
        Vec2 gtest;
        const double test = scalar(r, ts, map, x, &gtest);
        Vec2 sigma = Vec2::Zero();
        double u = 0.0;
        if (j < L.sigma_offset + L.sigma_size) {
            sigma(j / np) = scalar(p, j % np, map, x);
        } else if (j < L.u_offset + L.u_size) {
            u = scalar(p, j - L.u_offset, map, x);
        }
        if (is_tau) {
            // (sigma, tau) - (u, div tau)
            sum += w * (sigma(ct) * test - u * gtest(ct));
        } else {
            // -(sigma, grad v)
            sum += -w * sigma.dot(gtest);
        }
    }
    for (int e = 0; e < 3; ++e) {
        const Edge ed = edge(m, k, e);
        for (int q = 0; q < line.size(); ++q) {
            const double s = line.points(q);
            const Vec2 x = ed.a + s * (ed.b - ed.a);
            const double w = ed.length * line.weights(q);
            const double test = scalar(r, ts, map, x);
            double uhat = 0.0, flux = 0.0;
            if (j >= L.trace_offset && j < L.trace_offset + L.trace_size) {
                tb.trace_values(e, s, ed.reversed, tv);
                uhat = tv(j - L.trace_offset);
            } else if (j >= L.flux_offset && j < L.flux_offset + L.flux_size) {
                tb.flux_values(e, s, ed.reversed, fv);
                flux = ed.sign * fv(j - L.flux_offset);
            }
            if (is_tau) sum += w * uhat * test * ed.n(ct);  // <u^, tau.n>
            else sum += w * test * flux;                    // <v, sigma^_n>
        }
    }
    return sum;
}

/// Elasticity entry; rows [tau (3 nr) | v (2 nr) | q (dim P_p)], columns per layout.
inline double elasticity_entry(const dpg::mesh::Mesh& m, int k, int p, int r, int i, int j, int qdeg,
                               const dpg::forms::ComplianceTensor& A, double q0)
{
    const auto L = dpg::spaces::local_trial_layout(dpg::spaces::ProblemKind::Elasticity, p);
    const int np = dpg::refelem::dim_p(p);
    const int nr = dpg::refelem::dim_p(r);
    const auto& map = m.map(k);
    const auto& rule = dpg::refelem::quadrature_rule(qdeg);
    const auto& line = dpg::refelem::line_rule(qdeg);
    const dpg::refelem::TraceBasis tb(p);
    Eigen::VectorXd tv(tb.trace_size()), fv(tb.flux_size());
    const int ntr = tb.trace_size(), nfl = tb.flux_size();

    enum { Tau, V, Q } block;
    int comp = 0, ts = 0, deg = r;
    if (i < 3 * nr) {
        block = Tau;
        comp = i / nr;
        ts = i % nr;
    } else if (i < 5 * nr) {
        block = V;
        comp = (i - 3 * nr) / nr;
        ts = (i - 3 * nr) % nr;
    } else {
        block = Q;
        ts = i - 5 * nr;
        deg = p;
    }

    auto trial_volume = [&](const Vec2& x, Mat2& sigma, Vec2& u, double& alpha) {
        sigma.setZero();
        u.setZero();
        alpha = 0.0;
        if (j < L.sigma_offset + L.sigma_size) {
            sigma = component_matrix(Kind::Matrix, j / np) * scalar(p, j % np, map, x);
        } else if (j >= L.u_offset && j < L.u_offset + L.u_size) {
            u((j - L.u_offset) / np) = scalar(p, (j - L.u_offset) % np, map, x);
        } else if (j == L.alpha_offset) {
            alpha = 1.0;
        }
    };

    double sum = 0.0;
    for (int q = 0; q < rule.size(); ++q) {
        const Vec2 x = map.forward(rule.points.row(q).transpose());
        const double w = map.det * rule.weights(q);
        Vec2 g;
        const double phi = scalar(deg, ts, map, x, &g);
        Mat2 sigma;
        Vec2 u;
        double alpha;
        trial_volume(x, sigma, u, alpha);
        if (block == Tau) {
            const Mat2 S = component_matrix(Kind::Symmetric, comp);
            const Mat2 tau = phi * S;
            const Vec2 div = S * g;
            const Mat2 asig = A.apply(sigma);
            const Mat2 atau = A.apply(tau);
            sum += w * ((asig.array() * tau.array()).sum() + u.dot(div) + alpha * atau.trace() / q0);
        } else if (block == V) {
            // (sigma, grad v) with grad v = e_comp g^T
            sum += w * sigma.row(comp).dot(g);
        } else {
            const Mat2 qm = phi * component_matrix(Kind::Skew, 0);
            sum += w * (sigma.array() * qm.array()).sum();
        }
    }
    if (block == Q) return sum;
    for (int e = 0; e < 3; ++e) {
        const Edge ed = edge(m, k, e);
        for (int q = 0; q < line.size(); ++q) {
            const double s = line.points(q);
            const Vec2 x = ed.a + s * (ed.b - ed.a);
            const double w = ed.length * line.weights(q);
            const double phi = scalar(r, ts, map, x);
            Vec2 uhat = Vec2::Zero(), flux = Vec2::Zero();
            if (j >= L.trace_offset && j < L.trace_offset + L.trace_size) {
                const int c = (j - L.trace_offset) / ntr;
                tb.trace_values(e, s, ed.reversed, tv);
                uhat(c) = tv((j - L.trace_offset) % ntr);
            } else if (j >= L.flux_offset && j < L.flux_offset + L.flux_size) {
                const int c = (j - L.flux_offset) / nfl;
                tb.flux_values(e, s, ed.reversed, fv);
                flux(c) = ed.sign * fv((j - L.flux_offset) % nfl);
            }
            if (block == Tau) {
                const Vec2 tn = phi * (component_matrix(Kind::Symmetric, comp) * ed.n);
                sum -= w * uhat.dot(tn);
            } else {
                sum -= w * phi * flux(comp);
            }
        }
    }
    return sum;
}

}  // namespace oracle
