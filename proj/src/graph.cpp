#include "pcr/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <vector>

#include "pcr/io.hpp"
#include "pcr/kdtree.hpp"
#include "pcr/parallel.hpp"

namespace pcr {

SparseGraph::SparseGraph(std::shared_ptr<const SparseMat> adjacency, GraphParams params)
    : adjacency_(std::move(adjacency)), params_(params) {
    degrees_ = *adjacency_ * Vector::Ones(adjacency_->cols());
}

SparseGraph build_graph(const PointCloud& cloud, double sigma, double tau) {
    if (sigma <= 0.0 || tau <= 0.0) throw BadParams("build_graph: sigma and tau must be positive");
    const Eigen::Index n = cloud.size();
    const Matrix& coords = cloud.coords();
    const KdTree3 tree(coords);
    const double inv_sigma2 = 1.0 / (sigma * sigma);

    // per-point neighbor lists, filled independently so the loop can run
    // in parallel while keeping a deterministic result
    std::vector<std::vector<std::pair<Eigen::Index, double>>> nbrs(static_cast<size_t>(n));
    parallel_for(n, [&](std::int64_t i) {
        const Eigen::Vector3d q = coords.row(i).transpose();
        for (Eigen::Index j : tree.radius_search(q, tau)) {
            if (j <= i) continue;  // upper triangle; mirrored below
            const double d2 = (coords.row(j) - coords.row(i)).squaredNorm();
            nbrs[static_cast<size_t>(i)].emplace_back(j, std::exp(-d2 * inv_sigma2));
        }
    });

    std::vector<Eigen::Triplet<double>> triplets;
    for (Eigen::Index i = 0; i < n; ++i)
        for (const auto& [j, w] : nbrs[static_cast<size_t>(i)]) {
            triplets.emplace_back(static_cast<int>(i), static_cast<int>(j), w);
            triplets.emplace_back(static_cast<int>(j), static_cast<int>(i), w);
        }

    auto adj = std::make_shared<SparseMat>(n, n);
    adj->setFromTriplets(triplets.begin(), triplets.end());
    adj->makeCompressed();
    return SparseGraph(std::move(adj), GraphParams{sigma, tau});
}

GraphParams auto_graph_params(const PointCloud& cloud, int k) {
    if (k < 1) throw BadParams("auto_graph_params: k must be >= 1");
    const Eigen::Index n = cloud.size();
    const Matrix& coords = cloud.coords();
    const Eigen::Index samples = std::min<Eigen::Index>(n, 1000);
    const Eigen::Index stride = std::max<Eigen::Index>(1, n / samples);

    double total = 0.0;
    Eigen::Index used = 0;
    std::vector<double> d2(static_cast<size_t>(n));
    for (Eigen::Index s = 0; s < n && used < samples; s += stride, ++used) {
        for (Eigen::Index j = 0; j < n; ++j)
            d2[static_cast<size_t>(j)] = (coords.row(j) - coords.row(s)).squaredNorm();
        const Eigen::Index kth = std::min<Eigen::Index>(k, n - 1);
        std::nth_element(d2.begin(), d2.begin() + kth, d2.end());
        total += std::sqrt(d2[static_cast<size_t>(kth)]);
    }
    const double sigma = used > 0 ? total / static_cast<double>(used) : 0.0;
    if (sigma <= 0.0)
        throw DegenerateCloud("auto_graph_params: all sampled points coincide");
    return GraphParams{sigma, 2.0 * sigma};
}

ShiftOperator::ShiftOperator(ShiftKind kind, std::shared_ptr<const SparseMat> matrix,
                             Vector degrees)
    : kind_(kind),
      matrix_(std::move(matrix)),
      degrees_(std::move(degrees)),
      lambda_cache_(std::make_shared<std::atomic<double>>(
          std::numeric_limits<double>::quiet_NaN())) {}

ShiftOperator shift_operator(const SparseGraph& graph, ShiftKind kind, IsolatedPolicy policy) {
    const Eigen::Index n = graph.size();
    const SparseMat& w = graph.adjacency();
    Vector deg = graph.degrees();

    if (kind == ShiftKind::adjacency)
        return ShiftOperator(kind, std::make_shared<SparseMat>(w), std::move(deg));
    if (kind == ShiftKind::laplacian) {
        SparseMat lap = -w;
        for (Eigen::Index i = 0; i < n; ++i) lap.coeffRef(i, i) += deg(i);
        lap.makeCompressed();
        return ShiftOperator(kind, std::make_shared<SparseMat>(std::move(lap)), std::move(deg));
    }

    // transition / normalized adjacency need positive degrees
    SparseMat base = w;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (deg(i) > 0.0) continue;
        if (policy == IsolatedPolicy::strict)
            throw IsolatedNode("shift_operator: node " + std::to_string(i) + " has degree 0");
        base.coeffRef(i, i) = 1.0;  // self-loop: the point predicts itself
        deg(i) = 1.0;
    }
    base.makeCompressed();

    SparseMat out = base;
    if (kind == ShiftKind::transition) {
        for (Eigen::Index i = 0; i < n; ++i)
            for (SparseMat::InnerIterator it(out, i); it; ++it)
                it.valueRef() /= deg(i);
    } else {  // normalized_adjacency
        Vector dinv_sqrt = deg.cwiseSqrt().cwiseInverse();
        for (Eigen::Index i = 0; i < n; ++i)
            for (SparseMat::InnerIterator it(out, i); it; ++it)
                it.valueRef() *= dinv_sqrt(i) * dinv_sqrt(it.col());
    }
    return ShiftOperator(kind, std::make_shared<SparseMat>(std::move(out)), std::move(deg));
}

double lambda_max(const ShiftOperator& op) {
    const double cached = op.lambda_cache_->load(std::memory_order_relaxed);
    if (!std::isnan(cached)) return cached;

    double result = 0.0;
    if (op.kind() == ShiftKind::transition) {
        result = 1.0;  // row-stochastic
    } else {
        const SparseMat& a = op.matrix();
        const Eigen::Index n = a.rows();
        if (a.nonZeros() == 0) {
            result = 0.0;
        } else {
            Vector v = Vector::Ones(n);
            for (Eigen::Index i = 0; i < n; ++i) v(i) += 1e-3 * ((i % 7) - 3);
            v.normalize();
            double est = 0.0;
            bool done = false;
            constexpr int kMaxIter = 20000;
            constexpr double kRelTol = 1e-9;
            for (int it = 0; it < kMaxIter; ++it) {
                Vector w = a * v;
                const double norm = w.norm();
                if (norm == 0.0) {
                    v.setZero();
                    v(it % n) = 1.0;
                    continue;
                }
                if (std::abs(norm - est) <= kRelTol * norm) {
                    est = norm;
                    done = true;
                    break;
                }
                est = norm;
                v = w / norm;
            }
            if (!done) throw ConvergenceFailure("lambda_max: power iteration did not converge");
            result = est;
        }
    }
    op.lambda_cache_->store(result, std::memory_order_relaxed);
    return result;
}

void dump_edges_csv(const SparseGraph& graph, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << "i,j,w\n";
    const SparseMat& w = graph.adjacency();
    for (Eigen::Index i = 0; i < w.rows(); ++i)
        for (SparseMat::InnerIterator it(w, i); it; ++it)
            if (it.col() > i)
                out << i << ',' << it.col() << ',' << format_double(it.value()) << '\n';
}

}  // namespace pcr
