#include "pcr/spectral.hpp"

#include <cmath>

#include "pcr/random.hpp"

namespace pcr {

namespace {

// Symmetric form of the operator: the matrix itself, or for a
// transition shift the similar matrix D^1/2 (D^-1 W) D^-1/2.
SparseMat symmetric_form(const ShiftOperator& op) {
    if (op.kind() != ShiftKind::transition) return op.matrix();
    SparseMat s = op.matrix();
    const Vector dsqrt = op.degrees().cwiseSqrt();
    for (Eigen::Index i = 0; i < s.rows(); ++i)
        for (SparseMat::InnerIterator it(s, i); it; ++it)
            it.valueRef() *= dsqrt(i) / dsqrt(it.col());
    return s;
}

Vector random_unit(Rng& rng, Eigen::Index n) {
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = rng.normal();
    const double norm = v.norm();
    return norm > 0 ? Vector(v / norm) : Vector(Vector::Unit(n, 0));
}

}  // namespace

Matrix EigenBasis::analysis(const Matrix& signal) const {
    if (signal.rows() != orthonormal.rows())
        throw DimensionMismatch("analysis: signal row count does not match graph size");
    if (!transition) return orthonormal.transpose() * signal;
    return orthonormal.transpose() * (dsqrt.asDiagonal() * signal);
}

Matrix EigenBasis::synthesis(const Matrix& coef) const {
    if (coef.rows() != eigenvalues.size())
        throw DimensionMismatch("synthesis: coefficient rows do not match bandwidth");
    if (!transition) return orthonormal * coef;
    return dsqrt.cwiseInverse().asDiagonal() * (orthonormal * coef);
}

EigenBasis truncated_eigenbasis(const ShiftOperator& op, int b) {
    const Eigen::Index n = op.size();
    if (b < 1 || b > n)
        throw BandwidthTooLarge("truncated_eigenbasis: bandwidth " + std::to_string(b) +
                                " outside [1, " + std::to_string(n) + "]");

    const SparseMat s = symmetric_form(op);
    Rng rng(0x5eedba5edULL);

    // Lanczos vectors, grown on demand; k never exceeds n because the
    // iteration is exact once the space is exhausted.
    Eigen::Index cap = std::min<Eigen::Index>(n, std::max<Eigen::Index>(4 * b + 48, 96)) + 1;
    Matrix q(n, cap);
    Vector alpha = Vector::Zero(n);
    Vector beta = Vector::Zero(n);  // beta(k) couples q_k and q_{k+1}

    q.col(0) = random_unit(rng, n);
    double scale = 1e-30;
    Eigen::Index k = 0;

    Eigen::SelfAdjointEigenSolver<Matrix> ritz;
    const double tol = 1e-11;

    auto reorthogonalize = [&](Vector& w, Eigen::Index cols) {
        // two passes of classical Gram-Schmidt against all kept vectors
        for (int pass = 0; pass < 2; ++pass)
            w.noalias() -= q.leftCols(cols) * (q.leftCols(cols).transpose() * w);
    };
    auto tridiagonal = [&](Eigen::Index m) {
        Matrix tri = Matrix::Zero(m, m);
        for (Eigen::Index i = 0; i < m; ++i) {
            tri(i, i) = alpha(i);
            if (i + 1 < m) tri(i, i + 1) = tri(i + 1, i) = beta(i);
        }
        return tri;
    };

    bool converged = false;
    while (k < n) {
        if (k + 1 >= cap) {
            cap = std::min<Eigen::Index>(n + 1, cap + cap / 2 + 8);
            q.conservativeResize(Eigen::NoChange, cap);
        }
        Vector w = s * q.col(k);
        alpha(k) = q.col(k).dot(w);
        scale = std::max(scale, std::abs(alpha(k)));
        reorthogonalize(w, k + 1);
        const double wn = w.norm();
        ++k;
        if (wn <= 1e-13 * std::max(scale, 1.0)) {
            if (k >= n) break;
            // invariant subspace found; restart in its orthogonal complement
            Vector fresh = random_unit(rng, n);
            reorthogonalize(fresh, k);
            const double fn = fresh.norm();
            if (fn <= 1e-13) break;
            beta(k - 1) = 0.0;
            q.col(k) = fresh / fn;
        } else {
            beta(k - 1) = wn;
            q.col(k) = w / wn;
        }

        const bool last = (k == n);
        if (k >= b && (last || k == b || k % 8 == 0)) {
            ritz.compute(tridiagonal(k));
            const double bk = last ? 0.0 : beta(k - 1);
            bool all_ok = true;
            for (int j = 0; j < b; ++j) {
                const Eigen::Index col = k - 1 - j;  // largest eigenvalues
                const double resid = std::abs(bk * ritz.eigenvectors()(k - 1, col));
                if (resid > tol * std::max(scale, 1.0)) {
                    all_ok = false;
                    break;
                }
            }
            if (all_ok) {
                converged = true;
                break;
            }
        }
    }
    if (k < b) throw ConvergenceFailure("truncated_eigenbasis: Krylov space collapsed");
    if (!converged) ritz.compute(tridiagonal(k));

    EigenBasis basis;
    basis.eigenvalues = Vector(b);
    basis.orthonormal = Matrix(n, b);
    for (int j = 0; j < b; ++j) {
        const Eigen::Index col = k - 1 - j;
        basis.eigenvalues(j) = ritz.eigenvalues()(col);
        basis.orthonormal.col(j).noalias() = q.leftCols(k) * ritz.eigenvectors().col(col);
        basis.orthonormal.col(j).normalize();
    }
    basis.transition = (op.kind() == ShiftKind::transition);
    if (basis.transition) {
        basis.dsqrt = op.degrees().cwiseSqrt();
        basis.shift_basis = basis.dsqrt.cwiseInverse().asDiagonal() * basis.orthonormal;
    } else {
        basis.shift_basis = basis.orthonormal;
    }
    return basis;
}

}  // namespace pcr
