#pragma once

#include <Eigen/Dense>

#include <vector>

namespace dpg::forms {

using Mat3 = Eigen::Matrix3d;

/// Mandel coordinates (s11, s22, sqrt2 s12) of the symmetric part of s.
Eigen::Vector3d mandel(const Eigen::Matrix2d& s);
Eigen::Matrix2d from_mandel(const Eigen::Vector3d& m);

/// Compliance tensor acting on symmetric 2x2 matrices, stored as its 3x3
/// matrix in Mandel coordinates. Non-symmetric inputs are symmetrized first.
class ComplianceTensor {
public:
    /// Throws InvalidArgument unless the matrix is symmetric positive definite.
    explicit ComplianceTensor(const Mat3& mandel_matrix);

    /// Plane-strain inverse of sigma = 2 mu eps + lambda tr(eps) I.
    static ComplianceTensor isotropic(double mu, double lambda);
    static ComplianceTensor identity();

    const Mat3& matrix() const { return m_; }
    Eigen::Matrix2d apply(const Eigen::Matrix2d& sigma) const;
    /// tr(A I).
    double trace_of_identity() const;

private:
    Mat3 m_;
};

Eigen::Matrix2d compliance_apply(const ComplianceTensor& c, const Eigen::Matrix2d& sigma);

/// Element-wise constant compliance.
class ComplianceField {
public:
    ComplianceField(const ComplianceTensor& uniform, int num_elements);
    explicit ComplianceField(std::vector<ComplianceTensor> per_element);

    const ComplianceTensor& on(int k) const { return tensors_[static_cast<std::size_t>(k)]; }
    int size() const { return static_cast<int>(tensors_.size()); }
    /// Minimum over elements of tr(A_K I).
    double q0() const { return q0_; }

private:
    std::vector<ComplianceTensor> tensors_;
    double q0_ = 0.0;
};

double q0(const ComplianceField& field);

}  // namespace dpg::forms
