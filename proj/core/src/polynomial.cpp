#include "dpg/polynomial.hpp"

#include <cmath>

namespace dpg::refelem {

namespace {

void powers(int degree, double s, double* out)
{
    out[0] = 1.0;
    for (int k = 1; k <= degree; ++k) out[k] = out[k - 1] * s;
}

}  // namespace

void monomial_values(int degree, double x, double y, Eigen::Ref<Eigen::VectorXd> out)
{
    double px[64], py[64];
    powers(degree, 2.0 * x - 1.0, px);
    powers(degree, 2.0 * y - 1.0, py);
    int idx = 0;
    for (int k = 0; k <= degree; ++k) {
        for (int j = 0; j <= k; ++j) out(idx++) = px[k - j] * py[j];
    }
}

void monomial_values_and_gradients(int degree, double x, double y, Eigen::Ref<Eigen::VectorXd> value,
                                   Eigen::Ref<Eigen::VectorXd> dx, Eigen::Ref<Eigen::VectorXd> dy)
{
    double px[64], py[64];
    powers(degree, 2.0 * x - 1.0, px);
    powers(degree, 2.0 * y - 1.0, py);
    int idx = 0;
    for (int k = 0; k <= degree; ++k) {
        for (int j = 0; j <= k; ++j) {
            const int i = k - j;
            value(idx) = px[i] * py[j];
            // d/dx = 2 d/dX
            dx(idx) = i > 0 ? 2.0 * i * px[i - 1] * py[j] : 0.0;
            dy(idx) = j > 0 ? 2.0 * j * px[i] * py[j - 1] : 0.0;
            ++idx;
        }
    }
}

double legendre01(int k, double t)
{
    const double z = 2.0 * t - 1.0;
    double p0 = 1.0;
    if (k == 0) return 1.0;
    double p1 = z;
    for (int n = 1; n < k; ++n) {
        const double p2 = ((2.0 * n + 1.0) * z * p1 - n * p0) / (n + 1.0);
        p0 = p1;
        p1 = p2;
    }
    return std::sqrt(2.0 * k + 1.0) * p1;
}

void legendre01_all(int n, double t, Eigen::Ref<Eigen::VectorXd> out)
{
    const double z = 2.0 * t - 1.0;
    double p0 = 1.0;
    double p1 = z;
    out(0) = 1.0;
    if (n >= 1) out(1) = std::sqrt(3.0) * z;
    for (int m = 1; m < n; ++m) {
        const double p2 = ((2.0 * m + 1.0) * z * p1 - m * p0) / (m + 1.0);
        p0 = p1;
        p1 = p2;
        out(m + 1) = std::sqrt(2.0 * (m + 1) + 1.0) * p2;
    }
}

}  // namespace dpg::refelem
