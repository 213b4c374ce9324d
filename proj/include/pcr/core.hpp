#pragma once

#include <Eigen/Dense>

#include "pcr/errors.hpp"

namespace pcr {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/**
 * Point cloud stored as an N x K attribute matrix with a designated
 * 3-column coordinate block. Rows are points; the first block holds the
 * 3D coordinates and the remaining K-3 columns hold other attributes
 * (color, texture, intensity, ...). Immutable after construction, so
 * instances can be shared freely between threads.
 */
class PointCloud {
public:
    // attrs may have zero columns but must have one row per point.
    PointCloud(Matrix coords, Matrix attrs = Matrix());

    const Matrix& coords() const { return coords_; }
    const Matrix& attrs() const { return attrs_; }

    Eigen::Index size() const { return coords_.rows(); }
    Eigen::Index attr_count() const { return attrs_.cols(); }

    // Full N x K matrix [coords | attrs].
    Matrix stacked() const;

private:
    Matrix coords_;  // N x 3
    Matrix attrs_;   // N x (K-3)
};

/// Rigid motion: p -> p * rotation + shift (points as row vectors).
struct RigidTransform {
    Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
    Eigen::Vector3d shift = Eigen::Vector3d::Zero();

    RigidTransform inverse() const;
};

/// True when r is orthonormal with determinant +1 within tol.
bool is_rotation(const Eigen::Matrix3d& r, double tol = 1e-9);

/// Rotation by angle (radians) about a coordinate axis (0=x, 1=y, 2=z).
Eigen::Matrix3d axis_rotation(int axis, double angle);

/// Shifts the cloud so the coordinate column means are zero. Attributes
/// are untouched.
PointCloud recenter(const PointCloud& cloud);

/**
 * Uniformly rescales coordinates so the spectral norm of the coordinate
 * matrix equals c. Throws DegenerateCloud when the coordinates are all
 * zero.
 */
PointCloud scale_normalize(const PointCloud& cloud, double c = 1.0);

/**
 * Largest singular value of m, computed by power iteration on m^T m to
 * relative tolerance 1e-10 (at most 10000 iterations). Returns 0 for a
 * zero matrix; throws ConvergenceFailure if the iteration stalls.
 */
double spectral_norm(const Matrix& m);

/// coords <- coords * R + 1 a^T. Throws InvalidRotation if R is not
/// orthonormal within 1e-6.
PointCloud apply_transform(const PointCloud& cloud, const RigidTransform& t);

}  // namespace pcr
