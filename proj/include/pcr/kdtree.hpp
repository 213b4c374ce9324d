#pragma once

#include <vector>

#include <Eigen/Dense>

namespace pcr {

/**
 * Static 3D k-d tree over the rows of an N x 3 matrix. Built once with
 * median splits; supports exact nearest-neighbor and fixed-radius
 * queries. Queries are const and safe to run from multiple threads.
 */
class KdTree3 {
public:
    explicit KdTree3(const Eigen::MatrixXd& points);

    Eigen::Index size() const { return pts_.rows(); }

    /// Index of the closest point to q (ties broken toward the smaller
    /// index). Optionally reports the squared distance.
    Eigen::Index nearest(const Eigen::Vector3d& q, double* dist2 = nullptr) const;

    /// Indices of all points with ||p - q|| <= radius, ascending.
    std::vector<Eigen::Index> radius_search(const Eigen::Vector3d& q, double radius) const;

private:
    struct Node {
        double split = 0.0;
        int axis = -1;        // -1 marks a leaf
        int left = -1;
        int right = -1;
        int begin = 0;        // leaf: range into order_
        int end = 0;
    };

    int build(int begin, int end);
    void nearest_impl(int node, const Eigen::Vector3d& q, Eigen::Index& best,
                      double& best_d2) const;
    void radius_impl(int node, const Eigen::Vector3d& q, double r2,
                     std::vector<Eigen::Index>& out) const;

    Eigen::MatrixXd pts_;
    std::vector<int> order_;
    std::vector<Node> nodes_;
    int root_ = -1;

    static constexpr int kLeafSize = 16;
};

}  // namespace pcr
