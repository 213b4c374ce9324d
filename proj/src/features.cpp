#include "pcr/features.hpp"

#include <cmath>

#include "pcr/kdtree.hpp"
#include "pcr/parallel.hpp"

namespace pcr {

FeatureVector local_variation(const ShiftOperator& shift, const PointCloud& cloud,
                              bool include_attrs) {
    if (shift.size() != cloud.size())
        throw DimensionMismatch("local_variation: shift size does not match cloud size");
    const GraphFilter hh = haar_highpass(shift);
    const Matrix signal = include_attrs ? cloud.stacked() : cloud.coords();
    const Matrix response = apply_filter(hh, signal);
    FeatureVector f;
    f.kind = FeatureKind::local_variation;
    f.values = response.rowwise().squaredNorm();
    return f;
}

FeatureVector pairwise_variation(const SparseGraph& graph, const PointCloud& cloud) {
    if (graph.size() != cloud.size())
        throw DimensionMismatch("pairwise_variation: graph size does not match cloud size");
    const SparseMat& w = graph.adjacency();
    const Matrix& x = cloud.coords();
    Vector f = Vector::Zero(cloud.size());
    for (Eigen::Index i = 0; i < w.rows(); ++i)
        for (SparseMat::InnerIterator it(w, i); it; ++it)
            f(i) += it.value() * (x.row(i) - x.row(it.col())).squaredNorm();
    FeatureVector out;
    out.kind = FeatureKind::pairwise_variation;
    out.values = std::move(f);
    return out;
}

namespace {

// Unit normal of the neighborhood within `radius` of point i: the
// eigenvector of the covariance belonging to the smallest eigenvalue.
// Returns false when fewer than 3 other points fall inside the radius.
bool pca_normal(const Matrix& coords, const KdTree3& tree, Eigen::Index i, double radius,
                Eigen::Vector3d& normal) {
    const Eigen::Vector3d q = coords.row(i).transpose();
    const auto idx = tree.radius_search(q, radius);
    if (idx.size() < 4) return false;  // self plus at least 3 neighbors
    Eigen::Vector3d mean = Eigen::Vector3d::Zero();
    for (Eigen::Index j : idx) mean += coords.row(j).transpose();
    mean /= static_cast<double>(idx.size());
    Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
    for (Eigen::Index j : idx) {
        const Eigen::Vector3d d = coords.row(j).transpose() - mean;
        cov += d * d.transpose();
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(cov);
    normal = es.eigenvectors().col(0);  // ascending eigenvalues
    return true;
}

}  // namespace

FeatureVector don_scores(const PointCloud& cloud, double r_small, double r_large) {
    if (!(r_small > 0.0) || !(r_large > 0.0) || r_small >= r_large)
        throw BadParams("don_scores: need 0 < r_small < r_large");
    const Matrix& coords = cloud.coords();
    const KdTree3 tree(coords);
    const Eigen::Index n = cloud.size();
    Vector scores(n);
    std::vector<Eigen::Index> starved;
    std::vector<char> ok(static_cast<size_t>(n), 1);
    parallel_for(n, [&](std::int64_t i) {
        Eigen::Vector3d ns, nl;
        if (!pca_normal(coords, tree, i, r_small, ns)) {
            ok[static_cast<size_t>(i)] = 0;
            return;
        }
        pca_normal(coords, tree, i, r_large, nl);  // superset of the small ball
        if (ns.dot(nl) < 0.0) ns = -ns;            // sign-align small to large
        scores(i) = 0.5 * (ns - nl).norm();
    });
    for (Eigen::Index i = 0; i < n; ++i)
        if (!ok[static_cast<size_t>(i)])
            throw InsufficientNeighbors("don_scores: point " + std::to_string(i) +
                                        " has fewer than 3 neighbors at r_small");
    FeatureVector out;
    out.kind = FeatureKind::don;
    out.values = std::move(scores);
    return out;
}

}  // namespace pcr
