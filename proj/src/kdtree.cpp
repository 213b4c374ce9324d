#include "pcr/kdtree.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace pcr {

KdTree3::KdTree3(const Eigen::MatrixXd& points) : pts_(points) {
    order_.resize(static_cast<size_t>(pts_.rows()));
    std::iota(order_.begin(), order_.end(), 0);
    nodes_.reserve(order_.size() / kLeafSize * 2 + 4);
    if (!order_.empty()) root_ = build(0, static_cast<int>(order_.size()));
}

int KdTree3::build(int begin, int end) {
    Node node;
    if (end - begin <= kLeafSize) {
        node.begin = begin;
        node.end = end;
        nodes_.push_back(node);
        return static_cast<int>(nodes_.size()) - 1;
    }
    Eigen::Vector3d lo = Eigen::Vector3d::Constant(std::numeric_limits<double>::infinity());
    Eigen::Vector3d hi = -lo;
    for (int i = begin; i < end; ++i) {
        const auto p = pts_.row(order_[static_cast<size_t>(i)]);
        for (int a = 0; a < 3; ++a) {
            lo[a] = std::min(lo[a], p[a]);
            hi[a] = std::max(hi[a], p[a]);
        }
    }
    int axis = 0;
    (hi - lo).maxCoeff(&axis);
    const int mid = (begin + end) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [&](int a, int b) {
                         const double va = pts_(a, axis), vb = pts_(b, axis);
                         return va < vb || (va == vb && a < b);
                     });
    node.axis = axis;
    node.split = pts_(order_[static_cast<size_t>(mid)], axis);
    nodes_.push_back(node);
    const int self = static_cast<int>(nodes_.size()) - 1;
    const int left = build(begin, mid);
    const int right = build(mid, end);
    nodes_[static_cast<size_t>(self)].left = left;
    nodes_[static_cast<size_t>(self)].right = right;
    return self;
}

void KdTree3::nearest_impl(int ni, const Eigen::Vector3d& q, Eigen::Index& best,
                           double& best_d2) const {
    const Node& node = nodes_[static_cast<size_t>(ni)];
    if (node.axis < 0) {
        for (int i = node.begin; i < node.end; ++i) {
            const Eigen::Index idx = order_[static_cast<size_t>(i)];
            const double d2 = (pts_.row(idx).transpose() - q).squaredNorm();
            if (d2 < best_d2 || (d2 == best_d2 && idx < best)) {
                best_d2 = d2;
                best = idx;
            }
        }
        return;
    }
    const double delta = q[node.axis] - node.split;
    const int near = delta < 0 ? node.left : node.right;
    const int far = delta < 0 ? node.right : node.left;
    nearest_impl(near, q, best, best_d2);
    if (delta * delta <= best_d2) nearest_impl(far, q, best, best_d2);
}

Eigen::Index KdTree3::nearest(const Eigen::Vector3d& q, double* dist2) const {
    Eigen::Index best = -1;
    double best_d2 = std::numeric_limits<double>::infinity();
    if (root_ >= 0) nearest_impl(root_, q, best, best_d2);
    if (dist2) *dist2 = best_d2;
    return best;
}

void KdTree3::radius_impl(int ni, const Eigen::Vector3d& q, double r2,
                          std::vector<Eigen::Index>& out) const {
    const Node& node = nodes_[static_cast<size_t>(ni)];
    if (node.axis < 0) {
        for (int i = node.begin; i < node.end; ++i) {
            const Eigen::Index idx = order_[static_cast<size_t>(i)];
            if ((pts_.row(idx).transpose() - q).squaredNorm() <= r2) out.push_back(idx);
        }
        return;
    }
    const double delta = q[node.axis] - node.split;
    const int near = delta < 0 ? node.left : node.right;
    const int far = delta < 0 ? node.right : node.left;
    radius_impl(near, q, r2, out);
    if (delta * delta <= r2) radius_impl(far, q, r2, out);
}

std::vector<Eigen::Index> KdTree3::radius_search(const Eigen::Vector3d& q, double radius) const {
    std::vector<Eigen::Index> out;
    if (root_ >= 0 && radius >= 0) radius_impl(root_, q, radius * radius, out);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace pcr
