#include "dpg/compliance.hpp"

#include "dpg/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dpg::forms {

namespace {
const double kSqrt2 = std::sqrt(2.0);
}

Eigen::Vector3d mandel(const Eigen::Matrix2d& s)
{
    return {s(0, 0), s(1, 1), 0.5 * kSqrt2 * (s(0, 1) + s(1, 0))};
}

Eigen::Matrix2d from_mandel(const Eigen::Vector3d& m)
{
    Eigen::Matrix2d s;
    s << m(0), m(2) / kSqrt2, m(2) / kSqrt2, m(1);
    return s;
}

ComplianceTensor::ComplianceTensor(const Mat3& mandel_matrix) : m_(mandel_matrix)
{
    DPG_THROW_IF(!m_.allFinite(), ErrorCode::InvalidArgument, "compliance has non-finite entries");
    DPG_THROW_IF((m_ - m_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * m_.cwiseAbs().maxCoeff(),
                 ErrorCode::InvalidArgument, "compliance is not symmetric");
    Eigen::SelfAdjointEigenSolver<Mat3> eig(m_);
    DPG_THROW_IF(eig.eigenvalues().minCoeff() <= 0.0, ErrorCode::InvalidArgument,
                 "compliance is not positive definite on symmetric matrices");
}

ComplianceTensor ComplianceTensor::isotropic(double mu, double lambda)
{
    DPG_THROW_IF(!(mu > 0.0) || !(mu + lambda > 0.0), ErrorCode::InvalidArgument,
                 "isotropic compliance needs mu > 0 and mu + lambda > 0");
    const Eigen::Vector3d mi(1.0, 1.0, 0.0);
    const Mat3 m = (Mat3::Identity() - lambda / (2.0 * mu + 2.0 * lambda) * mi * mi.transpose()) / (2.0 * mu);
    return ComplianceTensor(m);
}

ComplianceTensor ComplianceTensor::identity()
{
    return ComplianceTensor(Mat3::Identity());
}

Eigen::Matrix2d ComplianceTensor::apply(const Eigen::Matrix2d& sigma) const
{
    return from_mandel(m_ * mandel(sigma));
}

double ComplianceTensor::trace_of_identity() const
{
    return apply(Eigen::Matrix2d::Identity()).trace();
}

Eigen::Matrix2d compliance_apply(const ComplianceTensor& c, const Eigen::Matrix2d& sigma)
{
    return c.apply(sigma);
}

ComplianceField::ComplianceField(const ComplianceTensor& uniform, int num_elements)
    : ComplianceField(std::vector<ComplianceTensor>(static_cast<std::size_t>(num_elements), uniform))
{
}

ComplianceField::ComplianceField(std::vector<ComplianceTensor> per_element) : tensors_(std::move(per_element))
{
    DPG_THROW_IF(tensors_.empty(), ErrorCode::InvalidArgument, "compliance field is empty");
    q0_ = std::numeric_limits<double>::infinity();
    for (const auto& t : tensors_) q0_ = std::min(q0_, t.trace_of_identity());
    DPG_THROW_IF(!(q0_ > 0.0), ErrorCode::InvalidArgument, "Q0 must be positive");
}

double q0(const ComplianceField& field)
{
    return field.q0();
}

}  // namespace dpg::forms
