#pragma once

#include <atomic>
#include <memory>
#include <string>

#include <Eigen/Sparse>

#include "pcr/core.hpp"

namespace pcr {

using SparseMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;

struct GraphParams {
    double sigma = 0.0;
    double tau = 0.0;
};

/**
 * Epsilon-neighborhood graph over the points of a cloud. Edge weights
 * are exp(-d^2/sigma^2) for pairs closer than tau, zero diagonal,
 * symmetric. Immutable; copies share the adjacency storage.
 */
class SparseGraph {
public:
    SparseGraph(std::shared_ptr<const SparseMat> adjacency, GraphParams params);

    Eigen::Index size() const { return adjacency_->rows(); }
    const SparseMat& adjacency() const { return *adjacency_; }
    const Vector& degrees() const { return degrees_; }
    const GraphParams& params() const { return params_; }

private:
    std::shared_ptr<const SparseMat> adjacency_;
    Vector degrees_;
    GraphParams params_;
};

/**
 * Builds the graph with an exact fixed-radius neighbor search (k-d
 * tree). Only the 3D coordinates are used. Throws BadParams when sigma
 * or tau is not positive.
 */
SparseGraph build_graph(const PointCloud& cloud, double sigma, double tau);

/**
 * Data-driven defaults: sigma is the mean distance to the k-th nearest
 * neighbor over a deterministic subsample of at most 1000 points, and
 * tau = 2 sigma.
 */
GraphParams auto_graph_params(const PointCloud& cloud, int k = 10);

enum class ShiftKind { adjacency, transition, normalized_adjacency, laplacian };

/// What to do with degree-0 nodes when forming transition/normalized
/// operators: give them a unit self-loop, or refuse.
enum class IsolatedPolicy { self_loop, strict };

/**
 * A graph shift operator derived from a SparseGraph: the adjacency W,
 * the transition matrix D^-1 W, the normalized adjacency
 * D^-1/2 W D^-1/2, or the Laplacian D - W. Immutable and cheap to copy.
 */
class ShiftOperator {
public:
    ShiftOperator(ShiftKind kind, std::shared_ptr<const SparseMat> matrix, Vector degrees);

    ShiftKind kind() const { return kind_; }
    Eigen::Index size() const { return matrix_->rows(); }
    const SparseMat& matrix() const { return *matrix_; }

    /// Degree vector after the isolated-node policy was applied; used to
    /// symmetrize the transition operator.
    const Vector& degrees() const { return degrees_; }

private:
    ShiftKind kind_;
    std::shared_ptr<const SparseMat> matrix_;
    Vector degrees_;
    friend double lambda_max(const ShiftOperator& op);
    mutable std::shared_ptr<std::atomic<double>> lambda_cache_;
};

ShiftOperator shift_operator(const SparseGraph& graph, ShiftKind kind,
                             IsolatedPolicy policy = IsolatedPolicy::self_loop);

/**
 * Largest-magnitude eigenvalue, cached per operator. A transition
 * operator returns exactly 1 without iterating; other kinds run power
 * iteration to relative tolerance 1e-9.
 */
double lambda_max(const ShiftOperator& op);

/// Debug dump of the upper-triangle edge list as CSV rows "i,j,w".
void dump_edges_csv(const SparseGraph& graph, const std::string& path);

}  // namespace pcr
