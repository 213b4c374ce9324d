#pragma once

#include "pcr/filters.hpp"
#include "pcr/graph.hpp"

namespace pcr {

enum class FeatureKind { raw, local_variation, pairwise_variation, don };

/**
 * Per-point features driving resampling. Variation kinds store one
 * nonnegative magnitude per point; raw features keep the full N x K
 * response.
 */
struct FeatureVector {
    Matrix values;
    FeatureKind kind = FeatureKind::raw;

    /// ||f_i||_2 per point (for a variation column this is the value
    /// itself).
    Vector row_norms() const { return values.rowwise().norm(); }
};

/**
 * Local variation f_i = ||(h_HH(A) X)_i||^2 with the Haar high-pass
 * filter on a transition shift: the squared distance from each point to
 * the convex combination of its neighbors. X is the coordinate block,
 * optionally concatenated with the attributes.
 */
FeatureVector local_variation(const ShiftOperator& shift, const PointCloud& cloud,
                              bool include_attrs = false);

/// Pairwise-difference variation f_i = sum_j W_ij ||x_i - x_j||^2, the
/// per-point share of the Laplacian quadratic form.
FeatureVector pairwise_variation(const SparseGraph& graph, const PointCloud& cloud);

/**
 * Difference-of-normals contour score: unit PCA normals at two
 * neighborhood radii, sign-aligned, score = ||n_s - n_l|| / 2. Throws
 * BadParams unless r_small < r_large, InsufficientNeighbors when a point
 * has fewer than 3 neighbors at the small radius.
 */
FeatureVector don_scores(const PointCloud& cloud, double r_small, double r_large);

}  // namespace pcr
