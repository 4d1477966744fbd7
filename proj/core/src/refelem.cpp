#include "dpg/refelem.hpp"

#include "dpg/error.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>

namespace dpg::refelem {

int component_count(Kind kind)
{
    switch (kind) {
        case Kind::Scalar: return 1;
        case Kind::Vector: return 2;
        case Kind::Symmetric: return 3;
        case Kind::Skew: return 1;
        case Kind::Matrix: return 4;
    }
    return 1;
}

Mat2 component_matrix(Kind kind, int c)
{
    const double r = 1.0 / std::sqrt(2.0);
    Mat2 m = Mat2::Zero();
    switch (kind) {
        case Kind::Symmetric:
            if (c == 0) m(0, 0) = 1.0;
            else if (c == 1) m(1, 1) = 1.0;
            else m(0, 1) = m(1, 0) = r;
            break;
        case Kind::Skew:
            m(0, 1) = r;
            m(1, 0) = -r;
            break;
        case Kind::Matrix:
            m(c / 2, c % 2) = 1.0;
            break;
        default:
            throw Error(ErrorCode::InvalidArgument, "component_matrix needs a matrix kind");
    }
    return m;
}

Vec2 reference_vertex(int v)
{
    switch (v) {
        case 0: return {0.0, 0.0};
        case 1: return {1.0, 0.0};
        default: return {0.0, 1.0};
    }
}

Vec2 reference_edge_point(int edge, double s)
{
    const Vec2 a = reference_vertex((edge + 1) % 3);
    const Vec2 b = reference_vertex((edge + 2) % 3);
    return a + s * (b - a);
}

double reference_edge_length(int edge)
{
    return edge == 0 ? std::sqrt(2.0) : 1.0;
}

Vec2 reference_edge_normal(int edge)
{
    const Vec2 d = reference_vertex((edge + 2) % 3) - reference_vertex((edge + 1) % 3);
    return Vec2(d.y(), -d.x()).normalized();
}

ReferenceBasis::ReferenceBasis(int dimension, int degree, Kind kind, Eigen::MatrixXd coefficients)
    : dimension_(dimension), degree_(degree), kind_(kind), coefficients_(std::move(coefficients))
{
    DPG_THROW_IF(dimension != 2, ErrorCode::Unsupported,
                 "only triangles (dimension 2) are supported, got " + std::to_string(dimension));
    DPG_THROW_IF(coefficients_.cols() != dim_p(degree), ErrorCode::InvalidArgument,
                 "coefficient matrix does not match the monomial count");
}

Eigen::VectorXd ReferenceBasis::values(const Vec2& xhat) const
{
    Eigen::VectorXd m(dim_p(degree_));
    monomial_values(degree_, xhat.x(), xhat.y(), m);
    return coefficients_ * m;
}

Eigen::MatrixX2d ReferenceBasis::gradients(const Vec2& xhat) const
{
    const int nm = dim_p(degree_);
    Eigen::VectorXd v(nm), dx(nm), dy(nm);
    monomial_values_and_gradients(degree_, xhat.x(), xhat.y(), v, dx, dy);
    Eigen::MatrixX2d g(scalar_size(), 2);
    g.col(0) = coefficients_ * dx;
    g.col(1) = coefficients_ * dy;
    return g;
}

Tabulation ReferenceBasis::tabulate(const Eigen::MatrixX2d& points) const
{
    const int nm = dim_p(degree_);
    const Eigen::Index np = points.rows();
    Eigen::MatrixXd mv(np, nm), mx(np, nm), my(np, nm);
    Eigen::VectorXd v(nm), dx(nm), dy(nm);
    for (Eigen::Index i = 0; i < np; ++i) {
        monomial_values_and_gradients(degree_, points(i, 0), points(i, 1), v, dx, dy);
        mv.row(i) = v.transpose();
        mx.row(i) = dx.transpose();
        my.row(i) = dy.transpose();
    }
    const Eigen::MatrixXd ct = coefficients_.transpose();
    return {mv * ct, mx * ct, my * ct};
}

Eigen::MatrixXd ReferenceBasis::tabulate_values(const Eigen::MatrixX2d& points) const
{
    const int nm = dim_p(degree_);
    Eigen::MatrixXd mv(points.rows(), nm);
    Eigen::VectorXd v(nm);
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
        monomial_values(degree_, points(i, 0), points(i, 1), v);
        mv.row(i) = v.transpose();
    }
    return mv * coefficients_.transpose();
}

ReferenceBasis ReferenceBasis::with_kind(Kind kind) const
{
    return ReferenceBasis(dimension_, degree_, kind, coefficients_);
}

namespace {

// One modified Gram-Schmidt sweep over the columns of `samples` (already
// scaled by sqrt of the quadrature weights). Returns T such that
// samples * T has orthonormal columns.
Eigen::MatrixXd mgs_sweep(Eigen::MatrixXd samples)
{
    const Eigen::Index n = samples.cols();
    Eigen::MatrixXd T = Eigen::MatrixXd::Identity(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < j; ++i) {
            const double rij = samples.col(i).dot(samples.col(j));
            samples.col(j) -= rij * samples.col(i);
            T.col(j) -= rij * T.col(i);
        }
        const double rjj = samples.col(j).norm();
        DPG_THROW_IF(!(rjj > 1e-300), ErrorCode::Singular, "monomials are numerically dependent");
        samples.col(j) /= rjj;
        T.col(j) /= rjj;
    }
    return T;
}

Eigen::MatrixXd orthonormal_monomial_coefficients(int degree)
{
    const QuadratureRule& rule = quadrature_rule(2 * degree + 2);
    const int nm = dim_p(degree);
    Eigen::MatrixXd samples(rule.size(), nm);
    Eigen::VectorXd m(nm);
    for (int i = 0; i < rule.size(); ++i) {
        monomial_values(degree, rule.points(i, 0), rule.points(i, 1), m);
        samples.row(i) = std::sqrt(rule.weights(i)) * m.transpose();
    }
    const Eigen::MatrixXd T1 = mgs_sweep(samples);
    const Eigen::MatrixXd T2 = mgs_sweep(samples * T1);
    return (T1 * T2).transpose();
}

}  // namespace

const ReferenceBasis& simplex_basis(int dimension, int degree, Kind kind)
{
    DPG_THROW_IF(dimension != 2, ErrorCode::Unsupported,
                 "only dimension 2 is supported, got " + std::to_string(dimension));
    DPG_THROW_IF(degree < 0 || degree > kMaxBasisDegree, ErrorCode::InvalidArgument,
                 "basis degree out of range: " + std::to_string(degree));

    static std::mutex mutex;
    static std::map<std::pair<int, int>, std::unique_ptr<const ReferenceBasis>> cache;
    const auto key = std::make_pair(degree, static_cast<int>(kind));
    std::lock_guard lock(mutex);
    auto it = cache.find(key);
    if (it == cache.end()) {
        auto basis = std::make_unique<const ReferenceBasis>(dimension, degree, kind,
                                                            orthonormal_monomial_coefficients(degree));
        it = cache.emplace(key, std::move(basis)).first;
    }
    return *it->second;
}

ReferenceBasis bubble_space_grad(int p, int dimension)
{
    DPG_THROW_IF(p < 0, ErrorCode::InvalidArgument, "bubble_space_grad needs p >= 0");
    const int r = p + dimension;
    const ReferenceBasis& full = simplex_basis(dimension, r);
    const int n = full.scalar_size();

    Eigen::MatrixXd vertex_rows(3, n);
    for (int v = 0; v < 3; ++v) vertex_rows.row(v) = full.values(reference_vertex(v)).transpose();

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(vertex_rows, Eigen::ComputeFullV);
    const Eigen::VectorXd& sv = svd.singularValues();
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > 1e-10 * sv(0)) ++rank;
    }
    DPG_THROW_IF(rank != 3, ErrorCode::Singular,
                 "vertex-vanishing constraints are rank deficient (rank " + std::to_string(rank) + ")");
    const Eigen::MatrixXd null = svd.matrixV().rightCols(n - rank);
    return ReferenceBasis(dimension, r, Kind::Scalar, null.transpose() * full.coefficients());
}

Eigen::MatrixXd reference_gram(const ReferenceBasis& basis, int quadrature_degree)
{
    const QuadratureRule& rule = quadrature_rule(quadrature_degree);
    const Eigen::MatrixXd vals = basis.tabulate_values(rule.points);
    return vals.transpose() * rule.weights.asDiagonal() * vals;
}

VectorPolynomialBasis::VectorPolynomialBasis(int degree, Eigen::MatrixXd coefficients)
    : degree_(degree), coefficients_(std::move(coefficients))
{
    DPG_THROW_IF(coefficients_.cols() != 2 * dim_p(degree), ErrorCode::InvalidArgument,
                 "vector coefficient matrix does not match the monomial count");
}

void VectorPolynomialBasis::tabulate(const Eigen::MatrixX2d& points, Eigen::MatrixXd& vx, Eigen::MatrixXd& vy,
                                     Eigen::MatrixXd& div) const
{
    const int nm = dim_p(degree_);
    const Eigen::Index np = points.rows();
    Eigen::MatrixXd mv(np, nm), mx(np, nm), my(np, nm);
    Eigen::VectorXd v(nm), dx(nm), dy(nm);
    for (Eigen::Index i = 0; i < np; ++i) {
        monomial_values_and_gradients(degree_, points(i, 0), points(i, 1), v, dx, dy);
        mv.row(i) = v.transpose();
        mx.row(i) = dx.transpose();
        my.row(i) = dy.transpose();
    }
    const auto cx = coefficients_.leftCols(nm).transpose();
    const auto cy = coefficients_.rightCols(nm).transpose();
    vx = mv * cx;
    vy = mv * cy;
    div = mx * cx + my * cy;
}

const VectorPolynomialBasis& raviart_thomas_basis(int k)
{
    DPG_THROW_IF(k < 0 || k + 1 > kMaxBasisDegree, ErrorCode::InvalidArgument,
                 "Raviart-Thomas degree out of range: " + std::to_string(k));
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<const VectorPolynomialBasis>> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(k);
    if (it != cache.end()) return *it->second;

    const int d = k + 1;
    const int nm = dim_p(d);
    const int n = 2 * dim_p(k) + k + 1;
    Eigen::MatrixXd spanning = Eigen::MatrixXd::Zero(n, 2 * nm);
    int row = 0;
    for (int c = 0; c < 2; ++c) {
        for (int m = 0; m < dim_p(k); ++m) spanning(row++, c * nm + m) = 1.0;
    }
    // (X, Y) X^(k-j) Y^j with X = 2x - 1, Y = 2y - 1.
    for (int j = 0; j <= k; ++j) {
        spanning(row, monomial_index(k - j + 1, j)) = 1.0;
        spanning(row, nm + monomial_index(k - j, j + 1)) = 1.0;
        ++row;
    }

    const QuadratureRule& rule = quadrature_rule(2 * d + 2);
    VectorPolynomialBasis raw(d, spanning);
    Eigen::MatrixXd vx, vy, dv;
    raw.tabulate(rule.points, vx, vy, dv);
    const Eigen::VectorXd sw = rule.weights.array().sqrt();
    Eigen::MatrixXd samples(2 * rule.size(), n);
    samples.topRows(rule.size()) = sw.asDiagonal() * vx;
    samples.bottomRows(rule.size()) = sw.asDiagonal() * vy;
    const Eigen::MatrixXd T1 = mgs_sweep(samples);
    const Eigen::MatrixXd T2 = mgs_sweep(samples * T1);
    Eigen::MatrixXd coeffs = (T1 * T2).transpose() * spanning;
    it = cache.emplace(k, std::make_unique<const VectorPolynomialBasis>(d, std::move(coeffs))).first;
    return *it->second;
}

double edge_bubble(int m, double t)
{
    return 4.0 * t * (1.0 - t) * legendre01(m, t);
}

TraceBasis::TraceBasis(int p) : p_(p)
{
    DPG_THROW_IF(p < 0, ErrorCode::InvalidArgument, "trace basis needs p >= 0");
}

void TraceBasis::trace_values(int edge, double s, bool reversed, Eigen::Ref<Eigen::VectorXd> out) const
{
    out.setZero();
    out((edge + 1) % 3) = 1.0 - s;
    out((edge + 2) % 3) = s;
    const double t = reversed ? 1.0 - s : s;
    for (int m = 0; m < p_; ++m) out(3 + edge * p_ + m) = edge_bubble(m, t);
}

void TraceBasis::flux_values(int edge, double s, bool reversed, Eigen::Ref<Eigen::VectorXd> out) const
{
    out.setZero();
    const double t = reversed ? 1.0 - s : s;
    legendre01_all(p_, t, out.segment(edge * (p_ + 1), p_ + 1));
}

}  // namespace dpg::refelem
