#pragma once

#include <cstdint>
#include <vector>

#include "pcr/core.hpp"

namespace pcr {

enum class ShapeKind { line, polygon, circle, cube_faces, hinge, sphere };

struct ShapeParams {
    double length = 1.0;       // line: total extent along +x
    int corners = 4;           // polygon: vertex count
    double radius = 1.0;       // circle / sphere / polygon circumradius
    Eigen::Vector3d center = Eigen::Vector3d::Zero();
    double size = 1.0;         // cube_faces / hinge: face edge length
    double angle_deg = 90.0;   // hinge: dihedral angle between the faces
    bool texture_patch = false;  // hinge: add a binary texture attribute
    std::uint64_t seed = 0;    // sphere: direction sampling seed
};

/// Geometric role of each generated point, used to check contour claims.
enum class PointRole : std::uint8_t {
    interior,  // flat/smooth region
    fold,      // shared edge between faces, or polygon corner
    boundary,  // open border of a face, or line endpoint
};

struct ShapeFixture {
    PointCloud cloud;
    std::vector<PointRole> roles;
};

/**
 * Deterministic synthetic shapes for tests and demos. Points are spread
 * uniformly along the shape. Grid shapes (cube_faces, hinge) round n up
 * to the nearest full lattice, so cloud.size() can exceed n. Throws
 * BadParams when n is below the shape minimum or params are invalid.
 */
PointCloud make_shape(ShapeKind kind, int n, const ShapeParams& params = {});

/// Same as make_shape but also labels each point with its role.
ShapeFixture make_shape_fixture(ShapeKind kind, int n, const ShapeParams& params = {});

}  // namespace pcr
