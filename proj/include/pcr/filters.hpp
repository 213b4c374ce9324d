#pragma once

#include <utility>
#include <vector>

#include "pcr/graph.hpp"
#include "pcr/spectral.hpp"

namespace pcr {

enum class FilterNormalization { none, by_lambda_max };

/**
 * Polynomial graph filter h(A) = sum_l h_l A^l over a shift operator.
 * With by_lambda_max normalization the polynomial is evaluated in
 * A / |lambda_max|.
 */
class GraphFilter {
public:
    GraphFilter(Vector coefficients, ShiftOperator shift,
                FilterNormalization normalization = FilterNormalization::none);

    const Vector& coefficients() const { return coefficients_; }
    const ShiftOperator& shift() const { return shift_; }
    FilterNormalization normalization() const { return normalization_; }
    Eigen::Index length() const { return coefficients_.size(); }

    /// Frequency response sum_l h_l lambda^l (lambda already normalized).
    double response(double lambda) const;

private:
    Vector coefficients_;
    ShiftOperator shift_;
    FilterNormalization normalization_;
};

/**
 * Applies the filter with Horner's scheme using only sparse
 * matrix-vector products; powers of the shift are never materialized.
 * signal must have one row per node.
 */
Matrix apply_filter(const GraphFilter& filter, const Matrix& signal);

/// I - A on a transition shift (h = (1, -1)). Throws WrongShiftKind for
/// any other shift, since shift invariance needs A 1 = 1.
GraphFilter haar_highpass(const ShiftOperator& shift);

/// I + A/|lambda_max| (h = (1, 1) with by_lambda_max normalization).
GraphFilter haar_lowpass(const ShiftOperator& shift);

/**
 * Bandlimiting projector V_(b) V_(b)^T built from the truncated
 * eigenbasis. The orthonormal symmetric basis is the default; passing
 * use_shift_basis on a transition shift selects the oblique projector in
 * the transition eigenvectors instead.
 */
class IdealLowPass {
public:
    IdealLowPass(EigenBasis basis, bool use_shift_basis);

    Eigen::Index bandwidth() const { return basis_.bandwidth(); }
    /// Rows of this matrix are the leverage-score vectors v_i.
    const Matrix& basis() const;
    Matrix project(const Matrix& signal) const;

private:
    EigenBasis basis_;
    bool use_shift_basis_;
};

IdealLowPass ideal_lowpass(const ShiftOperator& shift, int b, bool use_shift_basis = false);

struct FittedFilter {
    GraphFilter filter;
    double residual;  // l2 norm of the constraint residual
};

/**
 * Least-squares fit of filter coefficients to point constraints
 * h(lambda_i) = c_i via the Vandermonde system. Requires at most L
 * constraints; throws IllConditioned when the system's condition number
 * exceeds 1e12.
 */
FittedFilter fit_coefficients(const ShiftOperator& shift,
                              const std::vector<std::pair<double, double>>& response,
                              int length);

}  // namespace pcr
