#include "pcr/shapes.hpp"

#include <cmath>

#include "pcr/random.hpp"

namespace pcr {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Builder {
    std::vector<Eigen::Vector3d> pts;
    std::vector<PointRole> roles;
    std::vector<double> texture;
    bool with_texture = false;

    void add(const Eigen::Vector3d& p, PointRole role, double tex = 0.0) {
        pts.push_back(p);
        roles.push_back(role);
        if (with_texture) texture.push_back(tex);
    }

    ShapeFixture finish(const Eigen::Vector3d& center) {
        const Eigen::Index n = static_cast<Eigen::Index>(pts.size());
        Matrix coords(n, 3);
        for (Eigen::Index i = 0; i < n; ++i) coords.row(i) = (pts[i] + center).transpose();
        Matrix attrs(n, with_texture ? 1 : 0);
        if (with_texture)
            for (Eigen::Index i = 0; i < n; ++i) attrs(i, 0) = texture[i];
        return ShapeFixture{PointCloud(std::move(coords), std::move(attrs)), std::move(roles)};
    }
};

ShapeFixture build_line(int n, const ShapeParams& p) {
    if (n < 3) throw BadParams("line needs at least 3 points");
    if (p.length <= 0) throw BadParams("line length must be positive");
    Builder b;
    const double h = p.length / (n - 1);
    for (int i = 0; i < n; ++i) {
        const PointRole role =
            (i == 0 || i == n - 1) ? PointRole::boundary : PointRole::interior;
        b.add({i * h, 0.0, 0.0}, role);
    }
    return b.finish(p.center);
}

ShapeFixture build_circle(int n, const ShapeParams& p) {
    if (n < 4) throw BadParams("circle needs at least 4 points");
    if (p.radius <= 0) throw BadParams("circle radius must be positive");
    Builder b;
    for (int i = 0; i < n; ++i) {
        const double a = 2.0 * kPi * i / n;
        b.add({p.radius * std::cos(a), p.radius * std::sin(a), 0.0}, PointRole::interior);
    }
    return b.finish(p.center);
}

ShapeFixture build_polygon(int n, const ShapeParams& p) {
    if (p.corners < 3) throw BadParams("polygon needs at least 3 corners");
    if (n < p.corners) throw BadParams("polygon needs at least one point per corner");
    if (p.radius <= 0) throw BadParams("polygon radius must be positive");
    Builder b;
    std::vector<Eigen::Vector3d> verts;
    for (int k = 0; k < p.corners; ++k) {
        const double a = 2.0 * kPi * k / p.corners;
        verts.emplace_back(p.radius * std::cos(a), p.radius * std::sin(a), 0.0);
    }
    const int base = n / p.corners;
    const int extra = n % p.corners;
    for (int k = 0; k < p.corners; ++k) {
        const int m = base + (k < extra ? 1 : 0);
        const Eigen::Vector3d& a = verts[static_cast<size_t>(k)];
        const Eigen::Vector3d& c = verts[static_cast<size_t>((k + 1) % p.corners)];
        for (int j = 0; j < m; ++j) {
            const double t = static_cast<double>(j) / m;
            b.add(a + t * (c - a), j == 0 ? PointRole::fold : PointRole::interior);
        }
    }
    return b.finish(p.center);
}

// Two square m x m lattice faces sharing one edge, dihedral angle
// angle_deg. cube_faces is the 90-degree special case. Every lattice
// edge, including those crossing the fold, has length h = size/(m-1).
ShapeFixture build_hinge(int n, const ShapeParams& p, double angle_deg) {
    if (p.size <= 0) throw BadParams("face size must be positive");
    if (angle_deg <= 0 || angle_deg >= 180) throw BadParams("hinge angle must be in (0, 180)");
    int m = 3;
    while (2 * m * m - m < n) ++m;
    if (n < 15) throw BadParams("hinge/cube-faces needs at least 15 points");
    const double h = p.size / (m - 1);
    const double rad = angle_deg * kPi / 180.0;
    const Eigen::Vector3d ua(1.0, 0.0, 0.0);
    const Eigen::Vector3d ub(std::cos(rad), 0.0, std::sin(rad));
    const Eigen::Vector3d uf(0.0, 1.0, 0.0);  // fold direction

    // texture patch: disk on face A in (arm, fold) parameters
    const double tex_cx = 0.60 * p.size, tex_cy = 0.50 * p.size, tex_r = 0.25 * p.size;

    Builder b;
    b.with_texture = p.texture_patch;
    for (int j = 0; j < m; ++j) {
        const bool rim = (j == 0 || j == m - 1);
        b.add(j * h * uf, rim ? PointRole::boundary : PointRole::fold);
    }
    for (int side = 0; side < 2; ++side) {
        const Eigen::Vector3d& u = side == 0 ? ua : ub;
        for (int i = 1; i < m; ++i) {
            for (int j = 0; j < m; ++j) {
                const bool rim = (i == m - 1 || j == 0 || j == m - 1);
                double tex = 0.0;
                if (p.texture_patch && side == 0) {
                    const double dx = i * h - tex_cx, dy = j * h - tex_cy;
                    tex = (dx * dx + dy * dy <= tex_r * tex_r) ? 1.0 : 0.0;
                }
                b.add(i * h * u + j * h * uf,
                      rim ? PointRole::boundary : PointRole::interior, tex);
            }
        }
    }
    return b.finish(p.center);
}

ShapeFixture build_sphere(int n, const ShapeParams& p) {
    if (n < 4) throw BadParams("sphere needs at least 4 points");
    if (p.radius <= 0) throw BadParams("sphere radius must be positive");
    Builder b;
    Rng rng(p.seed);
    for (int i = 0; i < n; ++i) {
        Eigen::Vector3d dir;
        double norm = 0.0;
        do {
            dir = {rng.normal(), rng.normal(), rng.normal()};
            norm = dir.norm();
        } while (norm < 1e-12);
        b.add(p.radius / norm * dir, PointRole::interior);
    }
    return b.finish(p.center);
}

}  // namespace

ShapeFixture make_shape_fixture(ShapeKind kind, int n, const ShapeParams& params) {
    switch (kind) {
        case ShapeKind::line:
            return build_line(n, params);
        case ShapeKind::circle:
            return build_circle(n, params);
        case ShapeKind::polygon:
            return build_polygon(n, params);
        case ShapeKind::cube_faces:
            return build_hinge(n, params, 90.0);
        case ShapeKind::hinge:
            return build_hinge(n, params, params.angle_deg);
        case ShapeKind::sphere:
            return build_sphere(n, params);
    }
    throw BadParams("unknown shape kind");
}

PointCloud make_shape(ShapeKind kind, int n, const ShapeParams& params) {
    return make_shape_fixture(kind, n, params).cloud;
}

}  // namespace pcr
