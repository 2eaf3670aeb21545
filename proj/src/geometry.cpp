#include "mono3d/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mono3d {

namespace {

constexpr double kVertexEps = 1e-9;   // vertex-coincidence tolerance, meters
constexpr double kAreaEps = 1e-12;    // areas below this are treated as zero, m^2

double cross(const Vec2& o, const Vec2& a, const Vec2& b) {
  return (a.x - o.x) * (b.z - o.z) - (a.z - o.z) * (b.x - o.x);
}

void validate_box(const Box3D& b) {
  if (!(b.h > 0.0) || !(b.w > 0.0) || !(b.l > 0.0)) {
    throw std::domain_error("box has non-positive dimensions");
  }
}

}  // namespace

double normalize_yaw(double yaw) {
  constexpr double pi = std::numbers::pi;
  double y = std::fmod(yaw + pi, 2.0 * pi);
  if (y <= 0.0) y += 2.0 * pi;
  return y - pi;
}

double project_depth(double f, double h3d, double h2d) {
  if (!(f > 0.0) || !(h3d > 0.0) || !(h2d > 0.0)) {
    throw std::domain_error("project_depth requires positive f, h3d, h2d");
  }
  return f * h3d / h2d;
}

Vec3 backproject_ray(double u, double v, const CameraIntrinsics& cam) {
  if (!(cam.f > 0.0)) throw std::domain_error("camera focal length must be positive");
  return {(u - cam.cu) / cam.f, (v - cam.cv) / cam.f, 1.0};
}

Vec3 decode_center(double u, double v, double depth, const CameraIntrinsics& cam) {
  if (!(depth > 0.0)) throw std::domain_error("decode_center requires depth > 0");
  Vec3 ray = backproject_ray(u, v, cam);
  return {ray.x * depth, ray.y * depth, depth};
}

std::array<Vec3, 8> box_corners(const Box3D& b) {
  const double c = std::cos(b.yaw);
  const double s = std::sin(b.yaw);
  const double dx[4] = {+b.l / 2, -b.l / 2, -b.l / 2, +b.l / 2};
  const double dz[4] = {+b.w / 2, +b.w / 2, -b.w / 2, -b.w / 2};
  std::array<Vec3, 8> out{};
  for (int i = 0; i < 4; ++i) {
    const double x = b.x + dx[i] * c + dz[i] * s;
    const double z = b.z - dx[i] * s + dz[i] * c;
    out[i] = {x, b.y, z};          // bottom face
    out[i + 4] = {x, b.y - b.h, z};  // top face
  }
  return out;
}

Polygon2D footprint(const Box3D& b) {
  const auto corners = box_corners(b);
  Polygon2D poly;
  poly.pts.reserve(4);
  for (int i = 0; i < 4; ++i) poly.pts.push_back({corners[i].x, corners[i].z});
  // Enforce CCW orientation regardless of yaw sign conventions.
  double a2 = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    const Vec2& p = poly.pts[i];
    const Vec2& q = poly.pts[(i + 1) % 4];
    a2 += p.x * q.z - q.x * p.z;
  }
  if (a2 < 0.0) std::reverse(poly.pts.begin(), poly.pts.end());
  return poly;
}

double footprint_extent_z(const Box3D& b) {
  const auto poly = footprint(b);
  double lo = poly.pts[0].z, hi = poly.pts[0].z;
  for (const auto& p : poly.pts) {
    lo = std::min(lo, p.z);
    hi = std::max(hi, p.z);
  }
  return hi - lo;
}

double polygon_area(const Polygon2D& p) {
  if (p.pts.size() < 3) return 0.0;
  double a2 = 0.0;
  for (std::size_t i = 0; i < p.pts.size(); ++i) {
    const Vec2& u = p.pts[i];
    const Vec2& v = p.pts[(i + 1) % p.pts.size()];
    a2 += u.x * v.z - v.x * u.z;
  }
  return std::abs(a2) * 0.5;
}

Polygon2D clip_convex(const Polygon2D& subject, const Polygon2D& clip) {
  std::vector<Vec2> out = subject.pts;
  const std::size_t m = clip.pts.size();
  for (std::size_t e = 0; e < m && !out.empty(); ++e) {
    const Vec2 a = clip.pts[e];
    const Vec2 b = clip.pts[(e + 1) % m];
    std::vector<Vec2> in;
    in.swap(out);
    for (std::size_t i = 0; i < in.size(); ++i) {
      const Vec2 p = in[i];
      const Vec2 q = in[(i + 1) % in.size()];
      const double dp = cross(a, b, p);
      const double dq = cross(a, b, q);
      const bool p_in = dp >= -kVertexEps;
      const bool q_in = dq >= -kVertexEps;
      if (p_in) out.push_back(p);
      if (p_in != q_in) {
        const double t = dp / (dp - dq);
        out.push_back({p.x + t * (q.x - p.x), p.z + t * (q.z - p.z)});
      }
    }
  }
  // Drop near-coincident vertices produced by grazing intersections.
  std::vector<Vec2> dedup;
  dedup.reserve(out.size());
  for (const auto& p : out) {
    if (dedup.empty() || std::abs(p.x - dedup.back().x) > kVertexEps ||
        std::abs(p.z - dedup.back().z) > kVertexEps) {
      dedup.push_back(p);
    }
  }
  while (dedup.size() > 1 && std::abs(dedup.front().x - dedup.back().x) <= kVertexEps &&
         std::abs(dedup.front().z - dedup.back().z) <= kVertexEps) {
    dedup.pop_back();
  }
  return Polygon2D{std::move(dedup)};
}

namespace {

double bev_intersection_area(const Box3D& a, const Box3D& b) {
  const Polygon2D inter = clip_convex(footprint(a), footprint(b));
  const double area = polygon_area(inter);
  return area < kAreaEps ? 0.0 : area;
}

}  // namespace

double bev_iou(const Box3D& a, const Box3D& b) {
  validate_box(a);
  validate_box(b);
  const double area_a = polygon_area(footprint(a));
  const double area_b = polygon_area(footprint(b));
  if (area_a < kAreaEps || area_b < kAreaEps) {
    throw std::domain_error("bev_iou: degenerate footprint");
  }
  const double inter = bev_intersection_area(a, b);
  return inter / (area_a + area_b - inter);
}

double iou3d(const Box3D& a, const Box3D& b) {
  validate_box(a);
  validate_box(b);
  const double area_a = polygon_area(footprint(a));
  const double area_b = polygon_area(footprint(b));
  if (area_a < kAreaEps || area_b < kAreaEps) {
    throw std::domain_error("iou3d: degenerate footprint");
  }
  // y points down: each box spans [y - h, y].
  const double y_overlap =
      std::max(0.0, std::min(a.y, b.y) - std::max(a.y - a.h, b.y - b.h));
  const double inter = bev_intersection_area(a, b) * y_overlap;
  const double vol_union = area_a * a.h + area_b * b.h - inter;
  return inter / vol_union;
}

Box3D shift_depth(const Box3D& b, double d_prime) {
  Box3D out = b;
  out.z += d_prime;
  return out;
}

}  // namespace mono3d
