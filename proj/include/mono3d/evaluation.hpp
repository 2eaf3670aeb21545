#pragma once

#include <cstddef>
#include <vector>

#include "mono3d/confidence.hpp"
#include "mono3d/geometry.hpp"

namespace mono3d {

struct GtBox {
  Box3D box;
  int class_id = 0;
};

/// One-to-one greedy matching by descending detection score: each detection
/// takes the highest-IoU uncovered ground truth with IoU >= threshold.
struct MatchResult {
  std::vector<int> det_to_gt;    // -1 when unmatched
  std::vector<double> det_iou;   // IoU at match, 0 otherwise
  std::vector<bool> gt_covered;
};

MatchResult match(const std::vector<Detection>& dets, const std::vector<GtBox>& gts,
                  double iou_threshold, IouKind kind);

struct PRPoint {
  double score = 0.0;
  double precision = 0.0;
  double recall = 0.0;
};

struct PRCurve {
  std::vector<PRPoint> points;  // one point per detection, score-sorted
  std::size_t num_gt = 0;
};

/// Score-sorted precision/recall sweep from pooled (score, is-true-positive)
/// pairs; ties broken by input order.
PRCurve pr_curve(const std::vector<std::pair<double, bool>>& scored_tp,
                 std::size_t num_gt);

/// Interpolated average precision at 11 or 40 recall points, in percent.
/// AP11 samples {0, 0.1, ..., 1.0}; AP40 samples {1/40, ..., 40/40}.
double average_precision(const PRCurve& curve, int points);

struct DepthDiagnostic {
  double mu_d = 0.0;
  double sigma_d = 0.0;
  double delta_d = 0.0;
  double z_gt = 0.0;
};

struct CoverageRow {
  double nominal = 0.0;
  double empirical = 0.0;
};

struct CalibrationReport {
  std::vector<CoverageRow> coverage;  // nominal levels 0.5, 1-1/e, 0.8, 0.9
  double spearman_rho = 0.0;          // rank correlation of sigma_d vs |error|
  std::size_t n = 0;
};

CalibrationReport calibration_report(const std::vector<DepthDiagnostic>& diags);

double spearman(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace mono3d
