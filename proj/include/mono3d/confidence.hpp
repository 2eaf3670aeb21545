#pragma once

#include <vector>

#include "mono3d/geometry.hpp"

namespace mono3d {

enum class IouKind { Bev, Iou3d };

double iou(const Box3D& a, const Box3D& b, IouKind kind);

/// Configuration for the IoU-guided confidence: the acceptance threshold,
/// which IoU parameterizes it, and the depth-shift search controls.
struct ScoreConfig {
  double iou_threshold = 0.7;   // th, in (0, 1)
  IouKind kind = IouKind::Iou3d;
  double search_tol = 1e-4;     // bisection tolerance, meters
  double bracket_start = 0.125; // initial bracket width, meters
  double cap_diagonals = 10.0;  // search cap as a multiple of the box diagonal
};

/// Largest depth shift d' >= 0 keeping iou(shift_depth(b, d'), b) at or above
/// the threshold; by translation symmetry the negative side is identical.
/// Exponential bracketing followed by bisection to cfg.search_tol.
double depth_shift_tolerance(const Box3D& b, const ScoreConfig& cfg);

/// Probability mass of a Laplace depth belief inside [mu_d - dd, mu_d + dd]:
/// 1 - exp(-sqrt(2) * delta_d / sigma_d).
double iou_confidence(double sigma_d, double delta_d);

/// Legacy mapping exp(-sigma_d), blind to object size and orientation.
double vanilla_confidence(double sigma_d);

/// p_3d = p_2d * p_3d_given_2d. Inputs must lie in [0, 1].
double fuse_scores(double p_2d, double p_3d_given_2d);

/// Detection unit flowing through scoring, NMS, and evaluation.
struct Detection {
  Box3D box;
  int class_id = 0;
  double p_2d = 0.0;
  double p_3d_given_2d = 0.0;
  double p_3d = 0.0;
  double sigma_d = 0.0;  // meters
};

/// Greedy class-aware suppression over 3D boxes by descending p_3d; ties are
/// broken by input order. A detection is dropped when its IoU with an
/// already-kept detection of the same class exceeds the threshold.
std::vector<Detection> nms3d(const std::vector<Detection>& dets,
                             double iou_threshold, IouKind kind);

/// Same suppression, returning the kept input indices in keep order.
std::vector<std::size_t> nms3d_indices(const std::vector<Detection>& dets,
                                       double iou_threshold, IouKind kind);

}  // namespace mono3d
