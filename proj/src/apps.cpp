#include "pcr/apps.hpp"

#include <cmath>
#include <limits>

#include "pcr/filters.hpp"
#include "pcr/kdtree.hpp"
#include "pcr/parallel.hpp"

namespace pcr {

SphereFit fit_sphere(const PointCloud& cloud) {
    const Eigen::Index n = cloud.size();
    if (n < 4) throw BadParams("fit_sphere: need at least 4 points");
    const Matrix& p = cloud.coords();

    // algebraic init: ||p||^2 = 2 c.p + (r^2 - ||c||^2), linear in (c, k)
    Matrix a(n, 4);
    Vector b(n);
    a.leftCols(3) = 2.0 * p;
    a.col(3).setOnes();
    b = p.rowwise().squaredNorm();
    Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    if (sv(3) <= 1e-10 * sv(0))
        throw DegenerateConfiguration("fit_sphere: points are coplanar or collinear");
    const Eigen::Vector4d sol = svd.solve(b);
    Eigen::Vector3d center = sol.head<3>();
    double r2 = sol(3) + center.squaredNorm();
    if (r2 <= 0.0) throw DegenerateConfiguration("fit_sphere: nonpositive squared radius");
    double radius = std::sqrt(r2);

    // Gauss-Newton on the geometric residual ||p_i - c|| - r
    constexpr int kMaxIter = 50;
    constexpr double kTol = 1e-10;
    Vector resid(n);
    for (int iter = 0; iter < kMaxIter; ++iter) {
        Eigen::Matrix4d jtj = Eigen::Matrix4d::Zero();
        Eigen::Vector4d jtr = Eigen::Vector4d::Zero();
        for (Eigen::Index i = 0; i < n; ++i) {
            const Eigen::Vector3d d = p.row(i).transpose() - center;
            const double dist = d.norm();
            if (dist <= 1e-15) continue;
            const double e = dist - radius;
            Eigen::Vector4d j;
            j.head<3>() = -d / dist;
            j(3) = -1.0;
            jtj += j * j.transpose();
            jtr += j * e;
        }
        const Eigen::Vector4d step = jtj.ldlt().solve(-jtr);
        center += step.head<3>();
        radius += step(3);
        if (step.norm() <= kTol * std::max(1.0, radius)) break;
    }
    if (!(radius > 0.0)) throw DegenerateConfiguration("fit_sphere: collapsed radius");

    for (Eigen::Index i = 0; i < n; ++i)
        resid(i) = (p.row(i).transpose() - center).norm() - radius;
    SphereFit fit;
    fit.center = center;
    fit.radius = radius;
    fit.rms_residual = std::sqrt(resid.squaredNorm() / static_cast<double>(n));
    return fit;
}

PointCloud denoise_lowpass(const PointCloud& cloud, const ShiftOperator& shift, int passes) {
    if (passes < 1) throw BadParams("denoise_lowpass: passes must be >= 1");
    if (shift.size() != cloud.size())
        throw DimensionMismatch("denoise_lowpass: shift does not match cloud");
    const GraphFilter lp = haar_lowpass(shift);
    Matrix coords = cloud.coords();
    for (int i = 0; i < passes; ++i) coords = 0.5 * apply_filter(lp, coords);
    return PointCloud(std::move(coords), cloud.attrs());
}

namespace {

// Closed-form rigid fit (rows): min over R,a of sum ||s_i R + a^T - t_i||^2.
RigidTransform kabsch(const Matrix& src, const Matrix& dst) {
    const Eigen::RowVector3d sc = src.colwise().mean();
    const Eigen::RowVector3d dc = dst.colwise().mean();
    const Eigen::Matrix3d cross =
        (src.rowwise() - sc).transpose() * (dst.rowwise() - dc);
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::Matrix3d r = svd.matrixU() * svd.matrixV().transpose();
    if (r.determinant() < 0.0) {
        Eigen::Matrix3d flip = Eigen::Matrix3d::Identity();
        flip(2, 2) = -1.0;
        r = svd.matrixU() * flip * svd.matrixV().transpose();
    }
    RigidTransform t;
    t.rotation = r;
    t.shift = (dc - sc * r).transpose();
    return t;
}

double paper_rmse(const Matrix& registered, const KdTree3& reference_tree) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < registered.rows(); ++i) {
        double d2 = 0.0;
        reference_tree.nearest(registered.row(i).transpose(), &d2);
        total += d2;
    }
    return std::sqrt(total);
}

}  // namespace

RegistrationReport icp_register(const PointCloud& source, const PointCloud& target,
                                int max_iter, double tol, const RigidTransform* truth) {
    if (source.size() < 3 || target.size() < 3)
        throw BadParams("icp_register: both clouds need at least 3 points");
    const Matrix& src = source.coords();
    const KdTree3 tree(target.coords());

    RigidTransform current;
    RegistrationReport report;
    double prev_rmse = std::numeric_limits<double>::infinity();
    Matrix matched(src.rows(), 3);
    report.converged = false;
    for (int iter = 0; iter < max_iter; ++iter) {
        Matrix moved = src * current.rotation;
        moved.rowwise() += current.shift.transpose();

        std::vector<double> d2(static_cast<size_t>(src.rows()));
        parallel_for(src.rows(), [&](std::int64_t i) {
            double dist2 = 0.0;
            const Eigen::Index j = tree.nearest(moved.row(i).transpose(), &dist2);
            matched.row(i) = target.coords().row(j);
            d2[static_cast<size_t>(i)] = dist2;
        });
        double mse = 0.0;
        for (double v : d2) mse += v;
        mse /= static_cast<double>(src.rows());
        const double rmse = std::sqrt(mse);
        report.rmse_history.push_back(rmse);
        report.iterations = iter + 1;

        current = kabsch(src, matched);
        if (std::abs(prev_rmse - rmse) < tol) {
            report.converged = true;
            break;
        }
        prev_rmse = rmse;
    }

    report.recovered = current;
    Matrix registered = src * current.rotation;
    registered.rowwise() += current.shift.transpose();
    report.rmse = paper_rmse(registered, tree);
    if (truth) {
        report.shift_error = (current.shift - truth->shift).norm();
        report.rotation_error = (current.rotation - truth->rotation).norm();
    }
    return report;
}

RegistrationReport registration_metrics(const RigidTransform& recovered,
                                        const RigidTransform& truth,
                                        const PointCloud& registered,
                                        const PointCloud& reference) {
    RegistrationReport report;
    report.recovered = recovered;
    report.shift_error = (recovered.shift - truth.shift).norm();
    report.rotation_error = (recovered.rotation - truth.rotation).norm();
    const KdTree3 tree(reference.coords());
    report.rmse = paper_rmse(registered.coords(), tree);
    return report;
}

}  // namespace pcr
