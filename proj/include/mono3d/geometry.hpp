#pragma once

#include <array>
#include <vector>

namespace mono3d {

struct CameraIntrinsics {
  double f = 0.0;   // focal length, pixels
  double cu = 0.0;  // principal point u, pixels
  double cv = 0.0;  // principal point v, pixels
};

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;
};

// Point on the BEV (ground) plane.
struct Vec2 {
  double x = 0.0, z = 0.0;
};

/// Oriented 3D box in camera coordinates (x right, y down, z forward).
/// (x, y, z) is the bottom-face center; yaw rotates about the vertical axis.
struct Box3D {
  double x = 0.0, y = 0.0, z = 0.0;
  double h = 0.0, w = 0.0, l = 0.0;
  double yaw = 0.0;
};

/// Convex counter-clockwise polygon on the BEV plane.
struct Polygon2D {
  std::vector<Vec2> pts;
};

/// Normalizes an angle to (-pi, pi].
double normalize_yaw(double yaw);

/// Perspective projection d = f * h3d / h2d. Throws std::domain_error on
/// non-positive input.
double project_depth(double f, double h3d, double h2d);

/// Unit-depth back-projection of pixel (u, v): ((u-cu)/f, (v-cv)/f, 1).
Vec3 backproject_ray(double u, double v, const CameraIntrinsics& cam);

/// Back-projection scaled by a known depth. Throws on depth <= 0.
Vec3 decode_center(double u, double v, double depth, const CameraIntrinsics& cam);

/// The eight corners of the yaw-rotated cuboid. Bottom face at y = b.y,
/// top face at y = b.y - h. Length runs along x at yaw = 0, width along z.
std::array<Vec3, 8> box_corners(const Box3D& b);

/// BEV footprint rectangle as a CCW polygon.
Polygon2D footprint(const Box3D& b);

/// Extent of the footprint projected onto the z (depth) axis.
double footprint_extent_z(const Box3D& b);

double polygon_area(const Polygon2D& p);

/// Sutherland-Hodgman clip of a convex subject polygon against a convex
/// CCW clip polygon.
Polygon2D clip_convex(const Polygon2D& subject, const Polygon2D& clip);

/// Rotated-rectangle IoU of the BEV footprints. Throws std::domain_error for
/// degenerate (near-zero area) footprints.
double bev_iou(const Box3D& a, const Box3D& b);

/// Volumetric IoU: BEV intersection area times vertical overlap over the
/// union volume. Throws std::domain_error for degenerate boxes.
double iou3d(const Box3D& a, const Box3D& b);

/// Same box translated along the depth axis by d_prime.
Box3D shift_depth(const Box3D& b, double d_prime);

}  // namespace mono3d
