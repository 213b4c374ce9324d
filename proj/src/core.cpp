#include "pcr/core.hpp"

#include <cmath>

namespace pcr {

PointCloud::PointCloud(Matrix coords, Matrix attrs)
    : coords_(std::move(coords)), attrs_(std::move(attrs)) {
    if (coords_.rows() < 1) throw EmptyCloud("point cloud has no points");
    if (coords_.cols() != 3)
        throw DimensionMismatch("coordinate block must have 3 columns, got " +
                                std::to_string(coords_.cols()));
    if (attrs_.size() == 0 && attrs_.rows() != coords_.rows())
        attrs_.resize(coords_.rows(), 0);
    if (attrs_.rows() != coords_.rows())
        throw DimensionMismatch("attribute rows do not match point count");
    if (!coords_.allFinite() || !attrs_.allFinite())
        throw BadParams("point cloud contains non-finite entries");
}

Matrix PointCloud::stacked() const {
    Matrix m(size(), 3 + attrs_.cols());
    m.leftCols(3) = coords_;
    if (attrs_.cols() > 0) m.rightCols(attrs_.cols()) = attrs_;
    return m;
}

RigidTransform RigidTransform::inverse() const {
    // p' = p R + a^T  =>  p = p' R^T - (R a)^T
    RigidTransform inv;
    inv.rotation = rotation.transpose();
    inv.shift = -(rotation * shift);
    return inv;
}

bool is_rotation(const Eigen::Matrix3d& r, double tol) {
    const double ortho = (r.transpose() * r - Eigen::Matrix3d::Identity()).norm();
    return ortho <= tol && std::abs(r.determinant() - 1.0) <= tol;
}

Eigen::Matrix3d axis_rotation(int axis, double angle) {
    if (axis < 0 || axis > 2) throw BadParams("rotation axis must be 0, 1 or 2");
    const double c = std::cos(angle), s = std::sin(angle);
    Eigen::Matrix3d r = Eigen::Matrix3d::Identity();
    const int u = (axis + 1) % 3, v = (axis + 2) % 3;
    r(u, u) = c;
    r(u, v) = -s;
    r(v, u) = s;
    r(v, v) = c;
    return r;
}

PointCloud recenter(const PointCloud& cloud) {
    Matrix coords = cloud.coords();
    const Eigen::RowVector3d mean = coords.colwise().mean();
    coords.rowwise() -= mean;
    return PointCloud(std::move(coords), cloud.attrs());
}

double spectral_norm(const Matrix& m) {
    if (!m.allFinite()) throw BadParams("spectral_norm: non-finite entries");
    const Matrix gram = m.transpose() * m;  // d x d, d small
    const double scale = gram.cwiseAbs().maxCoeff();
    if (scale == 0.0) return 0.0;

    const Eigen::Index d = gram.cols();
    Vector v = Vector::Ones(d) / std::sqrt(static_cast<double>(d));
    double lambda = 0.0;
    constexpr int kMaxIter = 10000;
    constexpr double kRelTol = 1e-10;
    for (int it = 0; it < kMaxIter; ++it) {
        Vector w = gram * v;
        const double norm = w.norm();
        if (norm == 0.0) {
            // started orthogonal to the range; perturb deterministically
            v = Vector::Zero(d);
            v(it % d) = 1.0;
            continue;
        }
        v = w / norm;
        const double next = v.dot(gram * v);
        if (std::abs(next - lambda) <= kRelTol * std::abs(next)) {
            return std::sqrt(next);
        }
        lambda = next;
    }
    throw ConvergenceFailure("spectral_norm: power iteration did not converge");
}

PointCloud scale_normalize(const PointCloud& cloud, double c) {
    if (c <= 0.0) throw BadParams("scale_normalize: c must be positive");
    const double norm = spectral_norm(cloud.coords());
    if (norm == 0.0) throw DegenerateCloud("scale_normalize: zero coordinate matrix");
    return PointCloud(cloud.coords() * (c / norm), cloud.attrs());
}

PointCloud apply_transform(const PointCloud& cloud, const RigidTransform& t) {
    if (!is_rotation(t.rotation, 1e-6))
        throw InvalidRotation("apply_transform: rotation block is not orthonormal");
    Matrix coords = cloud.coords() * t.rotation;
    coords.rowwise() += t.shift.transpose();
    return PointCloud(std::move(coords), cloud.attrs());
}

}  // namespace pcr
