#pragma once

#include "pcr/graph.hpp"

namespace pcr {

/**
 * Top-b eigenpairs of a shift operator, ordered by descending
 * eigenvalue. `orthonormal` always holds eigenvectors of the symmetric
 * form of the operator; for a transition shift, `shift_basis` holds the
 * back-transformed (non-orthogonal) eigenvectors of D^-1 W, otherwise it
 * equals `orthonormal`.
 */
struct EigenBasis {
    Vector eigenvalues;   // size b, descending
    Matrix orthonormal;   // n x b
    Matrix shift_basis;   // n x b
    Vector dsqrt;         // n, only set for a transition shift
    bool transition = false;

    Eigen::Index bandwidth() const { return eigenvalues.size(); }

    /// Graph Fourier transform restricted to this band: V^-1 s.
    Matrix analysis(const Matrix& signal) const;
    /// Inverse transform: V s_hat.
    Matrix synthesis(const Matrix& coef) const;
};

/**
 * Lanczos iteration with full reorthogonalization on the (symmetrized)
 * shift operator. Transition operators are handled through the
 * similarity D^1/2 (D^-1 W) D^-1/2, which shares their spectrum. Throws
 * BandwidthTooLarge when b is outside [1, n], ConvergenceFailure if the
 * requested pairs do not converge.
 */
EigenBasis truncated_eigenbasis(const ShiftOperator& op, int b);

}  // namespace pcr
