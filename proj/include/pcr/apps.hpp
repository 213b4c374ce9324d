#pragma once

#include <vector>

#include "pcr/core.hpp"
#include "pcr/graph.hpp"

namespace pcr {

struct SphereFit {
    Eigen::Vector3d center = Eigen::Vector3d::Zero();
    double radius = 0.0;
    double rms_residual = 0.0;  // rms of ||x_i - c|| - r
};

/**
 * Least-squares sphere fit: algebraic solve for center and radius,
 * refined by Gauss-Newton on the geometric residual (at most 50
 * iterations, tolerance 1e-10). Throws DegenerateConfiguration for
 * coplanar or collinear input and BadParams for N < 4.
 */
SphereFit fit_sphere(const PointCloud& cloud);

/**
 * Applies (I + A_norm)/2 to the coordinates `passes` times. The halving
 * keeps the filtered cloud at the original scale. Attributes pass
 * through unchanged.
 */
PointCloud denoise_lowpass(const PointCloud& cloud, const ShiftOperator& shift, int passes);

struct RegistrationReport {
    double rmse = 0.0;           // sqrt(sum_i min_j ||xhat_i - x_j||^2)
    double shift_error = 0.0;    // ||ahat - a||_2
    double rotation_error = 0.0; // ||Rhat - R||_F
    int iterations = 0;
    RigidTransform recovered;
    bool converged = true;
    std::vector<double> rmse_history;  // mean correspondence rmse per iteration
};

/**
 * Point-to-point ICP: nearest-neighbor correspondences through a k-d
 * tree and closed-form rigid updates from the cross-covariance SVD.
 * Stops when the correspondence RMSE change drops below tol or after
 * max_iter iterations (non-convergence is reported, not fatal). When a
 * ground-truth transform is supplied the report carries the shift and
 * rotation errors against it.
 */
RegistrationReport icp_register(const PointCloud& source, const PointCloud& target,
                                int max_iter = 60, double tol = 1e-10,
                                const RigidTransform* truth = nullptr);

/// Fills the paper-style metrics: RMSE of registered vs reference via
/// nearest neighbors, shift error in l2, rotation error in Frobenius.
RegistrationReport registration_metrics(const RigidTransform& recovered,
                                        const RigidTransform& truth,
                                        const PointCloud& registered,
                                        const PointCloud& reference);

}  // namespace pcr
