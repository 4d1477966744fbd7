#include "dpg/quadrature.hpp"

#include "dpg/error.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <string>

namespace dpg::refelem {

namespace {

struct Recurrence {
    Eigen::VectorXd a;  // diagonal
    Eigen::VectorXd b;  // b(k) couples p_{k-1} and p_k, b(0) unused
    double mu0 = 0.0;
};

Recurrence jacobi_recurrence(int n, double alpha, double beta)
{
    Recurrence rec;
    rec.a.resize(n + 1);
    rec.b.setZero(n + 1);
    const double ab = alpha + beta;
    rec.mu0 = std::pow(2.0, ab + 1.0) * std::tgamma(alpha + 1.0) * std::tgamma(beta + 1.0) /
              std::tgamma(ab + 2.0);
    for (int k = 0; k <= n; ++k) {
        const double s = 2.0 * k + ab;
        if (k == 0) {
            rec.a(0) = (beta - alpha) / (ab + 2.0);
        } else {
            rec.a(k) = (beta * beta - alpha * alpha) / (s * (s + 2.0));
        }
        if (k >= 1) {
            const double num = 4.0 * k * (k + alpha) * (k + beta) * (k + ab);
            const double den = s * s * (s + 1.0) * (s - 1.0);
            rec.b(k) = num / den;
        }
    }
    // Closed form for k = 1 avoids the removable 0/0 when alpha + beta = -1.
    if (n >= 1) {
        rec.b(1) = 4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
    }
    return rec;
}

// Orthonormal polynomial values p_0..p_n at x and the derivative of p_n.
void evaluate_orthonormal(const Recurrence& rec, int n, double x, Eigen::VectorXd& p, double& dpn)
{
    p.resize(n + 1);
    Eigen::VectorXd dp(n + 1);
    p(0) = 1.0 / std::sqrt(rec.mu0);
    dp(0) = 0.0;
    if (n >= 1) {
        const double s1 = std::sqrt(rec.b(1));
        p(1) = (x - rec.a(0)) * p(0) / s1;
        dp(1) = p(0) / s1;
    }
    for (int k = 1; k < n; ++k) {
        const double sk1 = std::sqrt(rec.b(k + 1));
        const double sk = std::sqrt(rec.b(k));
        p(k + 1) = ((x - rec.a(k)) * p(k) - sk * p(k - 1)) / sk1;
        dp(k + 1) = (p(k) + (x - rec.a(k)) * dp(k) - sk * dp(k - 1)) / sk1;
    }
    dpn = dp(n);
}

QuadratureRule build_triangle_rule(int q)
{
    // Collapsed (Stroud conical product) rule: x = a (1 - b), y = b with Jacobian (1 - b).
    const int n = std::max(1, (q + 2) / 2);
    Eigen::VectorXd za, wa, zb, wb;
    gauss_jacobi(n, 0.0, 0.0, za, wa);
    gauss_jacobi(n, 1.0, 0.0, zb, wb);

    QuadratureRule rule;
    rule.exactness = 2 * n - 1;
    rule.points.resize(n * n, 2);
    rule.barycentric.resize(n * n, 3);
    rule.weights.resize(n * n);
    int idx = 0;
    for (int j = 0; j < n; ++j) {
        const double b = 0.5 * (zb(j) + 1.0);
        const double wbj = 0.25 * wb(j);
        for (int i = 0; i < n; ++i) {
            const double a = 0.5 * (za(i) + 1.0);
            const double x = a * (1.0 - b);
            const double y = b;
            rule.points(idx, 0) = x;
            rule.points(idx, 1) = y;
            rule.barycentric(idx, 0) = 1.0 - x - y;
            rule.barycentric(idx, 1) = x;
            rule.barycentric(idx, 2) = y;
            rule.weights(idx) = 0.5 * wa(i) * wbj;
            ++idx;
        }
    }
    return rule;
}

LineRule build_line_rule(int q)
{
    const int n = std::max(1, (q + 2) / 2);
    Eigen::VectorXd z, w;
    gauss_jacobi(n, 0.0, 0.0, z, w);
    LineRule rule;
    rule.exactness = 2 * n - 1;
    rule.points = 0.5 * (z.array() + 1.0);
    rule.weights = 0.5 * w;
    return rule;
}

template <typename Rule, typename Builder>
const Rule& cached(int q, Builder build)
{
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<const Rule>> cache;
    DPG_THROW_IF(q < 0, ErrorCode::InvalidArgument, "quadrature degree must be non-negative");
    DPG_THROW_IF(q > kMaxQuadratureDegree, ErrorCode::Unsupported,
                 "quadrature degree " + std::to_string(q) + " exceeds the supported maximum " +
                     std::to_string(kMaxQuadratureDegree));
    // Odd and even requests share a rule.
    const int key = (q + 2) / 2;
    std::lock_guard lock(mutex);
    auto it = cache.find(key);
    if (it == cache.end()) {
        it = cache.emplace(key, std::make_unique<const Rule>(build(2 * key - 1))).first;
    }
    return *it->second;
}

}  // namespace

void gauss_jacobi(int n, double alpha, double beta, Eigen::VectorXd& nodes, Eigen::VectorXd& weights)
{
    DPG_THROW_IF(n < 1, ErrorCode::InvalidArgument, "gauss_jacobi needs n >= 1");
    const Recurrence rec = jacobi_recurrence(n, alpha, beta);

    // Golub-Welsch for starting values.
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int k = 0; k < n; ++k) {
        J(k, k) = rec.a(k);
        if (k + 1 < n) {
            J(k, k + 1) = J(k + 1, k) = std::sqrt(rec.b(k + 1));
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(J);
    nodes = eig.eigenvalues();
    weights.resize(n);

    // Newton polish on p_n, then Christoffel weights 1 / sum p_k^2.
    Eigen::VectorXd p;
    for (int i = 0; i < n; ++i) {
        double x = nodes(i);
        for (int it = 0; it < 3; ++it) {
            double dpn = 0.0;
            evaluate_orthonormal(rec, n, x, p, dpn);
            if (dpn == 0.0) break;
            const double dx = p(n) / dpn;
            x -= dx;
            if (std::abs(dx) < 1e-17) break;
        }
        nodes(i) = x;
        double dpn = 0.0;
        evaluate_orthonormal(rec, n, x, p, dpn);
        weights(i) = 1.0 / p.head(n).squaredNorm();
    }
}

const QuadratureRule& quadrature_rule(int q)
{
    return cached<QuadratureRule>(q, build_triangle_rule);
}

const LineRule& line_rule(int q)
{
    return cached<LineRule>(q, build_line_rule);
}

}  // namespace dpg::refelem
