#include "mono3d/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace mono3d {

MatchResult match(const std::vector<Detection>& dets, const std::vector<GtBox>& gts,
                  double iou_threshold, IouKind kind) {
  MatchResult res;
  res.det_to_gt.assign(dets.size(), -1);
  res.det_iou.assign(dets.size(), 0.0);
  res.gt_covered.assign(gts.size(), false);

  std::vector<std::size_t> order(dets.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return dets[a].p_3d > dets[b].p_3d;
  });

  for (std::size_t idx : order) {
    const Detection& d = dets[idx];
    int best_gt = -1;
    double best_iou = 0.0;
    for (std::size_t g = 0; g < gts.size(); ++g) {
      if (res.gt_covered[g] || gts[g].class_id != d.class_id) continue;
      const double v = iou(d.box, gts[g].box, kind);
      if (v >= iou_threshold && v > best_iou) {
        best_iou = v;
        best_gt = static_cast<int>(g);
      }
    }
    if (best_gt >= 0) {
      res.det_to_gt[idx] = best_gt;
      res.det_iou[idx] = best_iou;
      res.gt_covered[best_gt] = true;
    }
  }
  return res;
}

PRCurve pr_curve(const std::vector<std::pair<double, bool>>& scored_tp,
                 std::size_t num_gt) {
  std::vector<std::size_t> order(scored_tp.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scored_tp[a].first > scored_tp[b].first;
  });

  PRCurve curve;
  curve.num_gt = num_gt;
  curve.points.reserve(scored_tp.size());
  std::size_t tp = 0, fp = 0;
  for (std::size_t idx : order) {
    scored_tp[idx].second ? ++tp : ++fp;
    PRPoint p;
    p.score = scored_tp[idx].first;
    p.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    p.recall = num_gt == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(num_gt);
    curve.points.push_back(p);
  }
  return curve;
}

double average_precision(const PRCurve& curve, int points) {
  if (points != 11 && points != 40) {
    throw std::invalid_argument("average_precision: points must be 11 or 40");
  }
  double total = 0.0;
  for (int k = 0; k < points; ++k) {
    const double r = points == 11 ? 0.1 * k : static_cast<double>(k + 1) / 40.0;
    double best = 0.0;
    for (const PRPoint& p : curve.points) {
      if (p.recall >= r - 1e-12) best = std::max(best, p.precision);
    }
    total += best;
  }
  return total / points * 100.0;
}

namespace {

std::vector<double> ranks(const std::vector<double>& v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> r(v.size(), 0.0);
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double avg = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[order[k]] = avg;
    i = j + 1;
  }
  return r;
}

}  // namespace

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 2) {
    throw std::invalid_argument("spearman: need two equal-length series");
  }
  const std::vector<double> ra = ranks(a);
  const std::vector<double> rb = ranks(b);
  const double n = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += ra[i];
    mb += rb[i];
  }
  ma /= n;
  mb /= n;
  double cov = 0.0, va = 0.0, vb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    cov += (ra[i] - ma) * (rb[i] - mb);
    va += (ra[i] - ma) * (ra[i] - ma);
    vb += (rb[i] - mb) * (rb[i] - mb);
  }
  if (va == 0.0 || vb == 0.0) return 0.0;
  return cov / std::sqrt(va * vb);
}

CalibrationReport calibration_report(const std::vector<DepthDiagnostic>& diags) {
  if (diags.empty()) throw std::invalid_argument("calibration_report: empty input");
  const double levels[] = {0.5, 1.0 - std::exp(-1.0), 0.8, 0.9};

  CalibrationReport rep;
  rep.n = diags.size();
  for (double p : levels) {
    // Laplace central interval at mass p: half-width sigma * (-ln(1-p)) / sqrt(2)
    const double k = -std::log(1.0 - p) / std::sqrt(2.0);
    std::size_t inside = 0;
    for (const auto& d : diags) {
      if (std::abs(d.z_gt - d.mu_d) <= k * d.sigma_d) ++inside;
    }
    rep.coverage.push_back({p, static_cast<double>(inside) / static_cast<double>(rep.n)});
  }

  std::vector<double> sig(diags.size()), err(diags.size());
  for (std::size_t i = 0; i < diags.size(); ++i) {
    sig[i] = diags[i].sigma_d;
    err[i] = std::abs(diags[i].z_gt - diags[i].mu_d);
  }
  rep.spearman_rho = diags.size() >= 2 ? spearman(sig, err) : 0.0;
  return rep;
}

}  // namespace mono3d
