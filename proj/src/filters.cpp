#include "pcr/filters.hpp"

#include <cmath>

namespace pcr {

GraphFilter::GraphFilter(Vector coefficients, ShiftOperator shift,
                         FilterNormalization normalization)
    : coefficients_(std::move(coefficients)),
      shift_(std::move(shift)),
      normalization_(normalization) {
    if (coefficients_.size() < 1) throw BadParams("graph filter needs at least one coefficient");
    if (!coefficients_.allFinite()) throw BadParams("graph filter coefficients must be finite");
}

double GraphFilter::response(double lambda) const {
    double acc = 0.0;
    for (Eigen::Index l = coefficients_.size() - 1; l >= 0; --l)
        acc = acc * lambda + coefficients_(l);
    return acc;
}

Matrix apply_filter(const GraphFilter& filter, const Matrix& signal) {
    const SparseMat& a = filter.shift().matrix();
    if (signal.rows() != a.rows())
        throw DimensionMismatch("apply_filter: signal rows do not match graph size");
    const Vector& h = filter.coefficients();
    const Eigen::Index len = h.size();
    double inv_scale = 1.0;
    if (filter.normalization() == FilterNormalization::by_lambda_max) {
        const double lmax = lambda_max(filter.shift());
        if (lmax > 0.0) inv_scale = 1.0 / lmax;
    }
    // Horner: y = h_{L-1} X; y = A_norm y + h_l X
    Matrix y = h(len - 1) * signal;
    for (Eigen::Index l = len - 2; l >= 0; --l) {
        y = inv_scale * (a * y);
        y.noalias() += h(l) * signal;
    }
    return y;
}

GraphFilter haar_highpass(const ShiftOperator& shift) {
    if (shift.kind() != ShiftKind::transition)
        throw WrongShiftKind("haar_highpass: requires a transition shift (A 1 = 1)");
    Vector h(2);
    h << 1.0, -1.0;
    return GraphFilter(std::move(h), shift, FilterNormalization::none);
}

GraphFilter haar_lowpass(const ShiftOperator& shift) {
    Vector h(2);
    h << 1.0, 1.0;
    return GraphFilter(std::move(h), shift, FilterNormalization::by_lambda_max);
}

IdealLowPass::IdealLowPass(EigenBasis basis, bool use_shift_basis)
    : basis_(std::move(basis)), use_shift_basis_(use_shift_basis) {}

const Matrix& IdealLowPass::basis() const {
    return use_shift_basis_ ? basis_.shift_basis : basis_.orthonormal;
}

Matrix IdealLowPass::project(const Matrix& signal) const {
    if (signal.rows() != basis_.orthonormal.rows())
        throw DimensionMismatch("project: signal rows do not match graph size");
    if (!use_shift_basis_ || !basis_.transition)
        return basis_.orthonormal * (basis_.orthonormal.transpose() * signal);
    // oblique bandlimiting projector V_(b) V_(b)^-1 in the shift basis
    return basis_.synthesis(basis_.analysis(signal));
}

IdealLowPass ideal_lowpass(const ShiftOperator& shift, int b, bool use_shift_basis) {
    return IdealLowPass(truncated_eigenbasis(shift, b), use_shift_basis);
}

FittedFilter fit_coefficients(const ShiftOperator& shift,
                              const std::vector<std::pair<double, double>>& response,
                              int length) {
    if (length < 1) throw BadParams("fit_coefficients: length must be >= 1");
    const Eigen::Index m = static_cast<Eigen::Index>(response.size());
    if (m < 1) throw BadParams("fit_coefficients: no constraints given");
    if (m > length)
        throw BadParams("fit_coefficients: more constraints than coefficients");

    Matrix vander(m, length);
    Vector target(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const auto& [lambda, c] = response[static_cast<size_t>(i)];
        double p = 1.0;
        for (int l = 0; l < length; ++l) {
            vander(i, l) = p;
            p *= lambda;
        }
        target(i) = c;
    }

    Eigen::JacobiSVD<Matrix> svd(vander, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double smax = sv(0);
    const double smin = sv(sv.size() - 1);
    if (smin <= 0.0 || smax / smin > 1e12)
        throw IllConditioned("fit_coefficients: Vandermonde system is ill-conditioned");

    const Vector h = svd.solve(target);
    const double residual = (vander * h - target).norm();
    return FittedFilter{GraphFilter(h, shift, FilterNormalization::none), residual};
}

}  // namespace pcr
