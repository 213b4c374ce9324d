#include "pcr/resampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pcr/random.hpp"

namespace pcr {

ResamplingDistribution ResamplingDistribution::from_weights(const Vector& weights) {
    if (weights.size() < 1) throw BadParams("distribution needs at least one point");
    if (!weights.allFinite() || weights.minCoeff() < 0.0)
        throw BadParams("distribution weights must be finite and nonnegative");
    const double total = weights.sum();
    if (total <= 0.0) throw AllZeroFeatures("all feature magnitudes are zero");
    ResamplingDistribution dist;
    dist.probs = weights / total;
    return dist;
}

ResamplingDistribution ResamplingDistribution::with_floor(double beta) const {
    if (beta < 0.0 || beta > 1.0) throw BadParams("floor mix beta must lie in [0, 1]");
    ResamplingDistribution out;
    const double n = static_cast<double>(probs.size());
    out.probs = (1.0 - beta) * probs + Vector::Constant(probs.size(), beta / n);
    out.floor_mix = beta;
    return out;
}

ResamplingDistribution dist_invariant(const FeatureVector& features) {
    return ResamplingDistribution::from_weights(features.row_norms());
}

ResamplingDistribution dist_variant(const Vector& f_row_norms, const Vector& fxo_row_norms,
                                    double c) {
    if (c <= 0.0) throw BadParams("dist_variant: c must be positive");
    if (fxo_row_norms.size() > 0 && fxo_row_norms.size() != f_row_norms.size())
        throw DimensionMismatch("dist_variant: row-norm vectors disagree");
    Vector w = (c * c) * f_row_norms.array().square();
    if (fxo_row_norms.size() > 0) w.array() += fxo_row_norms.array().square();
    return ResamplingDistribution::from_weights(w.cwiseSqrt());
}

ResamplingDistribution dist_allpass(const PointCloud& cloud, double c) {
    const Vector ones = Vector::Ones(cloud.size());
    if (cloud.attr_count() == 0) return dist_variant(ones, Vector(), c);
    return dist_variant(ones, cloud.attrs().rowwise().norm(), c);
}

ResamplingDistribution dist_highpass(const ShiftOperator& shift, const PointCloud& cloud,
                                     int exponent) {
    if (exponent != 1 && exponent != 2) throw BadParams("dist_highpass: exponent must be 1 or 2");
    const FeatureVector lv = local_variation(shift, cloud);
    Vector w = lv.values.col(0);  // already squared magnitudes
    if (exponent == 1) w = w.cwiseSqrt();
    return ResamplingDistribution::from_weights(w);
}

ResamplingDistribution dist_ideal_lowpass(const IdealLowPass& basis, const PointCloud& cloud,
                                          double c) {
    const Matrix& v = basis.basis();
    if (v.rows() != cloud.size())
        throw DimensionMismatch("dist_ideal_lowpass: basis does not match cloud");
    const Vector lev = v.rowwise().norm();
    if (cloud.attr_count() == 0) return dist_variant(lev, Vector(), c);
    const Matrix projected = basis.project(cloud.attrs());
    return dist_variant(lev, projected.rowwise().norm(), c);
}

ResamplingDistribution dist_haar_lowpass(const ShiftOperator& shift, const PointCloud& cloud,
                                         double c) {
    if (shift.size() != cloud.size())
        throw DimensionMismatch("dist_haar_lowpass: shift does not match cloud");
    const SparseMat& a = shift.matrix();
    const double lmax = lambda_max(shift);
    const double inv = lmax > 0.0 ? 1.0 / lmax : 1.0;
    const Eigen::Index n = shift.size();

    // row norms of I + A_norm straight from the sparse rows
    Vector f_norms(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double diag = 1.0;
        double off = 0.0;
        for (SparseMat::InnerIterator it(a, i); it; ++it) {
            const double v = it.value() * inv;
            if (it.col() == i)
                diag += v;
            else
                off += v * v;
        }
        f_norms(i) = std::sqrt(diag * diag + off);
    }
    if (cloud.attr_count() == 0) return dist_variant(f_norms, Vector(), c);
    Matrix fx = inv * (a * cloud.attrs());
    fx += cloud.attrs();
    return dist_variant(f_norms, fx.rowwise().norm(), c);
}

ResampleResult sample(const ResamplingDistribution& dist, int draws, std::uint64_t seed) {
    if (draws < 1) throw BadParams("sample: need at least one draw");
    const Eigen::Index n = dist.probs.size();
    Vector cdf(n);
    double acc = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        acc += dist.probs(i);
        cdf(i) = acc;
    }
    if (acc <= 0.0) throw ZeroSupport("sample: distribution has no support");

    ResampleResult result;
    result.seed = seed;
    result.indices.resize(static_cast<size_t>(draws));
    result.weights.resize(draws);
    Rng rng(seed);
    const double m = static_cast<double>(draws);
    for (int j = 0; j < draws; ++j) {
        const double u = rng.uniform() * acc;
        const double* begin = cdf.data();
        Eigen::Index idx = std::upper_bound(begin, begin + n, u) - begin;
        // u rounding up to acc can push past the end; step back to support
        if (idx >= n) idx = n - 1;
        while (idx > 0 && dist.probs(idx) <= 0.0) --idx;
        result.indices[static_cast<size_t>(j)] = idx;
        result.weights(j) = 1.0 / std::sqrt(m * dist.probs(idx));
    }
    return result;
}

double reconstruction_error(const Matrix& features, const ResampleResult& result) {
    const Eigen::Index n = features.rows();
    const Eigen::Index m = static_cast<Eigen::Index>(result.indices.size());
    if (m < 1) throw BadParams("reconstruction_error: empty resample");

    // diagonal of S Psi^T Psi: multiplicity times 1/(M pi_i)
    Vector scale = Vector::Zero(n);
    for (Eigen::Index j = 0; j < m; ++j) {
        const Eigen::Index idx = result.indices[static_cast<size_t>(j)];
        if (idx < 0 || idx >= n)
            throw DimensionMismatch("reconstruction_error: sample index out of range");
        const double w = result.weights(j);
        scale(idx) += w * w;
    }
    double err = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
        err += (scale(i) - 1.0) * (scale(i) - 1.0) * features.row(i).squaredNorm();
    // normalized per draw so the mean over trials matches the closed form
    return static_cast<double>(m) * err;
}

double mse_closed_form(const Matrix& features, const ResamplingDistribution& dist) {
    if (features.rows() != dist.probs.size())
        throw DimensionMismatch("mse_closed_form: feature rows do not match distribution");
    double total = 0.0;
    for (Eigen::Index i = 0; i < features.rows(); ++i) {
        const double f2 = features.row(i).squaredNorm();
        if (f2 == 0.0) continue;
        const double pi = dist.probs(i);
        if (pi <= 0.0) return std::numeric_limits<double>::infinity();
        total += (1.0 / pi - 1.0) * f2;
    }
    return total;
}

double mse_closed_form_variant(const Vector& f_row_norms, const Matrix& fxo,
                               const ResamplingDistribution& dist, double c) {
    if (f_row_norms.size() != dist.probs.size())
        throw DimensionMismatch("mse_closed_form_variant: rows do not match distribution");
    if (fxo.size() > 0 && fxo.rows() != f_row_norms.size())
        throw DimensionMismatch("mse_closed_form_variant: attribute rows disagree");
    double total = 0.0;
    for (Eigen::Index i = 0; i < f_row_norms.size(); ++i) {
        double f2 = c * c * f_row_norms(i) * f_row_norms(i);
        if (fxo.size() > 0) f2 += fxo.row(i).squaredNorm();
        if (f2 == 0.0) continue;
        const double pi = dist.probs(i);
        if (pi <= 0.0) return std::numeric_limits<double>::infinity();
        total += (1.0 / pi - 1.0) * f2;
    }
    return total;
}

UnbiasednessReport unbiasedness_check(const Matrix& features, const ResamplingDistribution& dist,
                                      int draws, int trials, std::uint64_t seed) {
    if (trials < 1) throw BadParams("unbiasedness_check: need at least one trial");
    if (features.rows() != dist.probs.size())
        throw DimensionMismatch("unbiasedness_check: feature rows do not match distribution");
    const Eigen::Index n = features.rows();

    Matrix sum_weighted = Matrix::Zero(n, features.cols());
    Matrix sum_unweighted = Matrix::Zero(n, features.cols());
    double sum_err = 0.0;
    for (int t = 0; t < trials; ++t) {
        const ResampleResult r = sample(dist, draws, mix_seed(seed + static_cast<std::uint64_t>(t)));
        Vector count = Vector::Zero(n);
        Vector scale = Vector::Zero(n);
        for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(r.indices.size()); ++j) {
            const Eigen::Index idx = r.indices[static_cast<size_t>(j)];
            count(idx) += 1.0;
            scale(idx) += r.weights(j) * r.weights(j);
        }
        sum_weighted += scale.asDiagonal() * features;
        sum_unweighted += count.asDiagonal() * features;
        double err = 0.0;
        for (Eigen::Index i = 0; i < n; ++i)
            err += (scale(i) - 1.0) * (scale(i) - 1.0) * features.row(i).squaredNorm();
        sum_err += static_cast<double>(draws) * err;
    }

    UnbiasednessReport report;
    report.mean_weighted = sum_weighted / static_cast<double>(trials);
    report.mean_unweighted = sum_unweighted / static_cast<double>(trials);
    report.empirical_mse = sum_err / static_cast<double>(trials);
    const double fnorm = features.norm();
    report.relative_bias =
        fnorm > 0.0 ? (report.mean_weighted - features).norm() / fnorm : 0.0;
    return report;
}

}  // namespace pcr
