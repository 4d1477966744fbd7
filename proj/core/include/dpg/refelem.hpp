#pragma once

#include "dpg/polynomial.hpp"
#include "dpg/quadrature.hpp"

#include <Eigen/Dense>

#include <array>

namespace dpg::refelem {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

enum class Kind { Scalar, Vector, Symmetric, Skew, Matrix };

/// Number of scalar components: 1, 2, 3, 1, 4.
int component_count(Kind kind);

/// Frobenius-orthonormal frame for the matrix kinds. Symmetric uses
/// E11, E22, (E12 + E21)/sqrt2; Skew uses (E12 - E21)/sqrt2; Matrix uses
/// E11, E12, E21, E22.
Mat2 component_matrix(Kind kind, int c);

/// Reference vertices (0,0), (1,0), (0,1).
Vec2 reference_vertex(int v);

/// Local edge e runs from vertex (e+1)%3 to (e+2)%3 (counter-clockwise).
Vec2 reference_edge_point(int edge, double s);
double reference_edge_length(int edge);
Vec2 reference_edge_normal(int edge);

struct Tabulation {
    Eigen::MatrixXd values;  // points x functions
    Eigen::MatrixXd dx;      // reference derivatives
    Eigen::MatrixXd dy;
};

/// Scalar polynomial functions on the reference triangle, stored as a
/// coefficient matrix over the graded-lex monomials of `degree()`. A
/// vector/matrix kind reuses the scalar functions per component: function
/// index c * scalar_size() + s is phi_s times component c.
class ReferenceBasis {
public:
    ReferenceBasis() = default;
    ReferenceBasis(int dimension, int degree, Kind kind, Eigen::MatrixXd coefficients);

    int dimension() const { return dimension_; }
    int degree() const { return degree_; }
    Kind kind() const { return kind_; }
    int components() const { return component_count(kind_); }
    int scalar_size() const { return static_cast<int>(coefficients_.rows()); }
    int size() const { return scalar_size() * components(); }
    const Eigen::MatrixXd& coefficients() const { return coefficients_; }

    Eigen::VectorXd values(const Vec2& xhat) const;
    /// Rows are functions, columns d/dx, d/dy (reference coordinates).
    Eigen::MatrixX2d gradients(const Vec2& xhat) const;

    Tabulation tabulate(const Eigen::MatrixX2d& points) const;
    Eigen::MatrixXd tabulate_values(const Eigen::MatrixX2d& points) const;

    /// Same scalar functions, different component kind.
    ReferenceBasis with_kind(Kind kind) const;

private:
    int dimension_ = 2;
    int degree_ = 0;
    Kind kind_ = Kind::Scalar;
    Eigen::MatrixXd coefficients_;
};

inline constexpr int kMaxBasisDegree = 24;

/// L2(K^)-orthonormal basis of P_d (or its vector/matrix variants), built by
/// modified Gram-Schmidt over the graded-lex monomials, applied twice.
/// Bases are cached per (d, kind).
const ReferenceBasis& simplex_basis(int dimension, int degree, Kind kind = Kind::Scalar);

/// Orthonormal basis of B_r^grad = { q in P_r : q vanishes at the vertices },
/// r = p + dimension.
ReferenceBasis bubble_space_grad(int p, int dimension);

/// Gram matrix of the scalar functions under a rule of the given exactness.
Eigen::MatrixXd reference_gram(const ReferenceBasis& basis, int quadrature_degree);

/// Vector polynomials over the monomials of `degree()`. Row i of the
/// coefficient matrix is [x-component | y-component].
class VectorPolynomialBasis {
public:
    VectorPolynomialBasis() = default;
    VectorPolynomialBasis(int degree, Eigen::MatrixXd coefficients);

    int degree() const { return degree_; }
    int size() const { return static_cast<int>(coefficients_.rows()); }
    const Eigen::MatrixXd& coefficients() const { return coefficients_; }

    /// Reference values (points x functions) of both components and the divergence.
    void tabulate(const Eigen::MatrixX2d& points, Eigen::MatrixXd& vx, Eigen::MatrixXd& vy,
                  Eigen::MatrixXd& div) const;

private:
    int degree_ = 0;
    Eigen::MatrixXd coefficients_;
};

/// L2-orthonormal basis of the Raviart-Thomas space RT_k = P_k^2 + x P_k,
/// dimension (k+1)(k+3). Normal traces are in P_k on every edge.
const VectorPolynomialBasis& raviart_thomas_basis(int k);

/// Edge bubble used for the interior modes of the continuous trace space.
double edge_bubble(int m, double t);

/// Local trace/flux spaces on the boundary of one triangle.
///
/// Continuous space tilde-P_{p+1}(dK): 3 vertex hats followed by p interior
/// modes per edge (edge 0, 1, 2). Discontinuous space P_p(dK): p+1 orthonormal
/// Legendre functions per edge. Edge-local parameter s follows the local
/// counter-clockwise direction; `reversed` switches edge modes to 1 - s so
/// neighbouring elements can share a global parameterization.
class TraceBasis {
public:
    explicit TraceBasis(int p);

    int flux_degree() const { return p_; }
    int trace_degree() const { return p_ + 1; }
    int flux_size() const { return 3 * (p_ + 1); }
    int trace_size() const { return 3 + 3 * p_; }
    int flux_per_edge() const { return p_ + 1; }
    int modes_per_edge() const { return p_; }

    void trace_values(int edge, double s, bool reversed, Eigen::Ref<Eigen::VectorXd> out) const;
    void flux_values(int edge, double s, bool reversed, Eigen::Ref<Eigen::VectorXd> out) const;

private:
    int p_;
};

}  // namespace dpg::refelem
