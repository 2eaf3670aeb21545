#include "mono3d/confidence.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace mono3d {

double iou(const Box3D& a, const Box3D& b, IouKind kind) {
  return kind == IouKind::Bev ? bev_iou(a, b) : iou3d(a, b);
}

double depth_shift_tolerance(const Box3D& b, const ScoreConfig& cfg) {
  if (!(cfg.iou_threshold > 0.0) || !(cfg.iou_threshold < 1.0)) {
    throw std::domain_error("depth_shift_tolerance: threshold must be in (0, 1)");
  }
  if (!(cfg.search_tol > 0.0)) {
    throw std::domain_error("depth_shift_tolerance: tolerance must be positive");
  }
  const double th = cfg.iou_threshold;
  auto iou_at = [&](double t) { return iou(shift_depth(b, t), b, cfg.kind); };

  const double diag = std::sqrt(b.h * b.h + b.w * b.w + b.l * b.l);
  const double cap = cfg.cap_diagonals * diag;

  // IoU against a pure depth translate is non-increasing in |d'|, so a
  // doubling bracket followed by bisection is sound.
  double lo = 0.0;
  double hi = cfg.bracket_start;
  while (hi < cap && iou_at(hi) >= th) {
    lo = hi;
    hi *= 2.0;
  }
  if (hi >= cap && iou_at(cap) >= th) return cap;

  while (hi - lo > cfg.search_tol) {
    const double mid = 0.5 * (lo + hi);
    if (iou_at(mid) >= th) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

double iou_confidence(double sigma_d, double delta_d) {
  if (!(sigma_d > 0.0)) throw std::domain_error("iou_confidence: sigma_d must be positive");
  if (delta_d < 0.0) throw std::domain_error("iou_confidence: delta_d must be >= 0");
  return 1.0 - std::exp(-std::numbers::sqrt2 * delta_d / sigma_d);
}

double vanilla_confidence(double sigma_d) {
  if (sigma_d < 0.0) throw std::domain_error("vanilla_confidence: sigma_d must be >= 0");
  return std::exp(-sigma_d);
}

double fuse_scores(double p_2d, double p_3d_given_2d) {
  if (p_2d < 0.0 || p_2d > 1.0 || p_3d_given_2d < 0.0 || p_3d_given_2d > 1.0) {
    throw std::domain_error("fuse_scores: probabilities must be in [0, 1]");
  }
  return p_2d * p_3d_given_2d;
}

std::vector<std::size_t> nms3d_indices(const std::vector<Detection>& dets,
                                       double iou_threshold, IouKind kind) {
  std::vector<std::size_t> order(dets.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return dets[a].p_3d > dets[b].p_3d;
  });

  std::vector<std::size_t> kept;
  kept.reserve(dets.size());
  for (std::size_t idx : order) {
    const Detection& d = dets[idx];
    bool suppressed = false;
    for (std::size_t k : kept) {
      if (dets[k].class_id != d.class_id) continue;
      if (iou(dets[k].box, d.box, kind) > iou_threshold) {
        suppressed = true;
        break;
      }
    }
    if (!suppressed) kept.push_back(idx);
  }
  return kept;
}

std::vector<Detection> nms3d(const std::vector<Detection>& dets,
                             double iou_threshold, IouKind kind) {
  std::vector<Detection> kept;
  for (std::size_t idx : nms3d_indices(dets, iou_threshold, kind)) {
    kept.push_back(dets[idx]);
  }
  return kept;
}

}  // namespace mono3d
