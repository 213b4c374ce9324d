#pragma once

#include <cstdint>
#include <vector>

#include "pcr/features.hpp"
#include "pcr/filters.hpp"

namespace pcr {

/**
 * Per-point resampling probabilities, summing to 1. floor_mix records
 * the beta applied as pi <- (1-beta) pi + beta/N, which keeps every
 * point selectable (finite inverse-probability weights).
 */
struct ResamplingDistribution {
    Vector probs;
    double floor_mix = 0.0;

    Eigen::Index size() const { return probs.size(); }

    /// Normalizes nonnegative weights. Throws AllZeroFeatures when they
    /// sum to zero.
    static ResamplingDistribution from_weights(const Vector& weights);

    ResamplingDistribution with_floor(double beta) const;
};

/// Optimal distribution for a rotation-invariant feature operator:
/// pi_i proportional to ||f_i||_2.
ResamplingDistribution dist_invariant(const FeatureVector& features);

/**
 * Optimal distribution for a rotation-variant linear operator F:
 * pi_i proportional to sqrt(c^2 ||F_i||^2 + ||(F X_o)_i||^2), where c is
 * the spectral norm of the (normalized) coordinate block.
 */
ResamplingDistribution dist_variant(const Vector& f_row_norms, const Vector& fxo_row_norms,
                                    double c);

/// All-pass strategy (F = I): uniform over geometry, attribute-weighted
/// when the cloud has extra attributes.
ResamplingDistribution dist_allpass(const PointCloud& cloud, double c);

/**
 * High-pass strategy: pi from the local variation on a transition
 * shift. exponent selects ||(h_HH A) x_i||^exponent; 2 matches the
 * squared-magnitude form, 1 the unsquared row-norm form.
 */
ResamplingDistribution dist_highpass(const ShiftOperator& shift, const PointCloud& cloud,
                                     int exponent = 2);

/// Ideal low-pass strategy: leverage-score row norms of V_(b) combined
/// with the projected-attribute term.
ResamplingDistribution dist_ideal_lowpass(const IdealLowPass& basis, const PointCloud& cloud,
                                          double c);

/// Haar low-pass strategy: row norms of I + A_norm and of
/// (I + A_norm) X_o, computed from the sparse rows.
ResamplingDistribution dist_haar_lowpass(const ShiftOperator& shift, const PointCloud& cloud,
                                         double c);

/**
 * M i.i.d. index draws with replacement plus the rescaling weights
 * 1/sqrt(M pi_i) that make the zero-padded reconstruction unbiased.
 * Deterministic given the seed.
 */
struct ResampleResult {
    std::vector<Eigen::Index> indices;  // length M, order preserved
    Vector weights;                     // length M
    std::uint64_t seed = 0;
};

/// Inverse-CDF sampling (binary search on the cumulative distribution).
/// Throws BadParams for M < 1, ZeroSupport when all probabilities are 0.
ResampleResult sample(const ResamplingDistribution& dist, int draws, std::uint64_t seed);

/**
 * Reconstruction error of one resampling trial: the squared Frobenius
 * residual of the rescaled zero-padded reconstruction S Psi^T Psi f
 * against f, normalized by the number of draws so its expectation equals
 * mse_closed_form for every M. Repeated indices accumulate multiplicity;
 * the rescaling applies 1/(M pi_i) per sampled point.
 */
double reconstruction_error(const Matrix& features, const ResampleResult& result);

/**
 * Exact expected reconstruction error sum_i (1/pi_i - 1) ||f_i||^2.
 * Points with pi_i = 0 but nonzero features make the expectation
 * infinite; that is reported as +inf rather than an error so sweeps
 * stay total.
 */
double mse_closed_form(const Matrix& features, const ResamplingDistribution& dist);

/// Rotation-variant form c^2 Tr(F Q F^T) + Tr(F X_o Q (F X_o)^T) using
/// per-row norms of F and the matrix F X_o.
double mse_closed_form_variant(const Vector& f_row_norms, const Matrix& fxo,
                               const ResamplingDistribution& dist, double c);

struct UnbiasednessReport {
    double relative_bias = 0.0;  // ||mean - f||_F / ||f||_F
    double empirical_mse = 0.0;  // mean reconstruction_error over trials
    Matrix mean_weighted;        // mean of S Psi^T Psi f
    Matrix mean_unweighted;      // mean of Psi^T Psi f
};

/// Monte-Carlo check of the unbiasedness of the rescaled reconstruction.
UnbiasednessReport unbiasedness_check(const Matrix& features, const ResamplingDistribution& dist,
                                      int draws, int trials, std::uint64_t seed);

}  // namespace pcr
