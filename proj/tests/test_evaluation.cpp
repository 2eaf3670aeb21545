#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "mono3d/evaluation.hpp"
#include "mono3d/rng.hpp"
#include "support/oracles.hpp"

using namespace mono3d;

namespace {

Box3D box_at(double z, double x = 0.0) {
  return Box3D{x, 1.5, z, 1.5, 1.6, 4.0, 0.0};
}

Detection det_at(double z, double score, double x = 0.0, int cls = 0) {
  Detection d;
  d.box = box_at(z, x);
  d.class_id = cls;
  d.p_2d = 1.0;
  d.p_3d_given_2d = score;
  d.p_3d = score;
  return d;
}

}  // namespace

TEST_CASE("match: perfect duplicates are all matched") {
  const std::vector<GtBox> gts{{box_at(10.0), 0}, {box_at(30.0), 0}};
  const std::vector<Detection> dets{det_at(10.0, 0.9), det_at(30.0, 0.8)};
  const auto m = match(dets, gts, 0.7, IouKind::Iou3d);
  CHECK(m.det_to_gt[0] == 0);
  CHECK(m.det_to_gt[1] == 1);
  CHECK(m.gt_covered[0]);
  CHECK(m.gt_covered[1]);
  CHECK(m.det_iou[0] == doctest::Approx(1.0));
}

TEST_CASE("match: empty detections match nothing") {
  const std::vector<GtBox> gts{{box_at(10.0), 0}};
  const auto m = match({}, gts, 0.7, IouKind::Iou3d);
  CHECK(m.det_to_gt.empty());
  CHECK_FALSE(m.gt_covered[0]);
}

TEST_CASE("match: one-to-one rule leaves the second detection unmatched") {
  const std::vector<GtBox> gts{{box_at(10.0), 0}};
  const std::vector<Detection> dets{det_at(10.05, 0.6), det_at(10.0, 0.9)};
  const auto m = match(dets, gts, 0.5, IouKind::Iou3d);
  CHECK(m.det_to_gt[1] == 0);   // higher score matched first
  CHECK(m.det_to_gt[0] == -1);  // then the GT is taken
}

TEST_CASE("match respects the class label") {
  const std::vector<GtBox> gts{{box_at(10.0), 1}};
  const std::vector<Detection> dets{det_at(10.0, 0.9, 0.0, 0)};
  const auto m = match(dets, gts, 0.5, IouKind::Iou3d);
  CHECK(m.det_to_gt[0] == -1);
}

TEST_CASE("AP: single correct detection scores 100 on both point sets") {
  const PRCurve curve = pr_curve({{1.0, true}}, 1);
  CHECK(average_precision(curve, 11) == doctest::Approx(100.0));
  CHECK(average_precision(curve, 40) == doctest::Approx(100.0));
}

TEST_CASE("AP: no correct detections scores 0") {
  const PRCurve curve = pr_curve({{0.9, false}, {0.8, false}}, 3);
  CHECK(average_precision(curve, 11) == doctest::Approx(0.0));
  CHECK(average_precision(curve, 40) == doctest::Approx(0.0));
}

TEST_CASE("AP40 worked example: 83.33") {
  // 2 GT; detections: correct 0.9, wrong 0.8, correct 0.7
  const std::vector<std::pair<double, bool>> scored{{0.9, true}, {0.8, false}, {0.7, true}};
  const PRCurve curve = pr_curve(scored, 2);
  const double ap40 = average_precision(curve, 40);
  CHECK(ap40 == doctest::Approx(250.0 / 3.0).epsilon(1e-9));
  CHECK(ap40 == doctest::Approx(83.33).epsilon(1e-4));
  CHECK(ap40 == doctest::Approx(test::brute_force_ap(scored, 2, 40)).epsilon(1e-12));
}

TEST_CASE("match followed by AP equals exhaustive brute force on small scenes") {
  Rng rng(606);
  for (int trial = 0; trial < 150; ++trial) {
    const int n_gt = rng.uniform_int(1, 4);
    const int n_det = rng.uniform_int(1, 6);
    std::vector<GtBox> gts;
    for (int g = 0; g < n_gt; ++g) gts.push_back({box_at(10.0 + 20.0 * g), 0});
    std::vector<Detection> dets;
    for (int i = 0; i < n_det; ++i) {
      // near one of the GTs with a depth error that may or may not match
      const int g = rng.uniform_int(0, n_gt - 1);
      dets.push_back(det_at(10.0 + 20.0 * g + rng.uniform(-2.0, 2.0), rng.uniform01()));
    }
    const MatchResult m = match(dets, gts, 0.5, IouKind::Iou3d);
    std::vector<std::pair<double, bool>> scored;
    for (std::size_t i = 0; i < dets.size(); ++i) {
      scored.emplace_back(dets[i].p_3d, m.det_to_gt[i] >= 0);
    }
    const PRCurve curve = pr_curve(scored, n_gt);
    for (int pts : {11, 40}) {
      CHECK(average_precision(curve, pts) ==
            doctest::Approx(test::brute_force_ap(scored, n_gt, pts)).epsilon(1e-12));
    }
  }
}

TEST_CASE("AP equals exhaustive brute force on small instances") {
  Rng rng(555);
  for (int trial = 0; trial < 400; ++trial) {
    const int n_det = rng.uniform_int(1, 6);
    const int n_gt = rng.uniform_int(1, 6);
    std::vector<std::pair<double, bool>> scored;
    int tp_budget = n_gt;
    for (int i = 0; i < n_det; ++i) {
      const bool tp = tp_budget > 0 && rng.uniform01() < 0.5;
      if (tp) --tp_budget;
      scored.emplace_back(rng.uniform01(), tp);
    }
    const PRCurve curve = pr_curve(scored, n_gt);
    for (int pts : {11, 40}) {
      CHECK(average_precision(curve, pts) ==
            doctest::Approx(test::brute_force_ap(scored, n_gt, pts)).epsilon(1e-12));
    }
  }
}

TEST_CASE("AP11 and AP40 agree within 2 points on a dense curve") {
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    Rng r(seed);
    std::vector<std::pair<double, bool>> scored;
    const int n = 1000;
    std::size_t tp_total = 0;
    for (int i = 0; i < n; ++i) {
      // quality degrades smoothly with rank so precision falls gradually
      const double score = 1.0 - static_cast<double>(i) / n;
      const bool tp = r.uniform01() < 0.95 - 0.65 * static_cast<double>(i) / n;
      tp_total += tp;
      scored.emplace_back(score, tp);
    }
    const PRCurve curve = pr_curve(scored, tp_total);  // recall sweeps to 1
    const double a11 = average_precision(curve, 11);
    const double a40 = average_precision(curve, 40);
    CHECK(std::abs(a11 - a40) <= 2.0);
  }
}

TEST_CASE("AP is invariant under strictly monotone score transforms") {
  Rng rng(557);
  std::vector<std::pair<double, bool>> scored;
  for (int i = 0; i < 50; ++i) scored.emplace_back(rng.uniform01(), rng.uniform01() < 0.5);
  std::vector<std::pair<double, bool>> warped = scored;
  for (auto& [s, tp] : warped) s = std::exp(3.0 * s) + 7.0;
  const PRCurve a = pr_curve(scored, 30);
  const PRCurve b = pr_curve(warped, 30);
  CHECK(average_precision(a, 40) == doctest::Approx(average_precision(b, 40)).epsilon(1e-12));
  CHECK(average_precision(a, 11) == doctest::Approx(average_precision(b, 11)).epsilon(1e-12));
}

TEST_CASE("calibration report covers a well-calibrated Laplace belief") {
  Rng rng(31);
  std::vector<DepthDiagnostic> diags(100'000);
  for (auto& d : diags) {
    d.sigma_d = rng.uniform(0.5, 4.0);
    d.mu_d = rng.uniform(10.0, 60.0);
    d.z_gt = d.mu_d + rng.laplace(0.0, d.sigma_d);
    d.delta_d = 0.5;
  }
  const auto rep = calibration_report(diags);
  REQUIRE(rep.coverage.size() == 4);
  CHECK(rep.coverage[1].nominal == doctest::Approx(1.0 - std::exp(-1.0)));
  CHECK(std::abs(rep.coverage[1].empirical - rep.coverage[1].nominal) <= 0.02);
  CHECK(std::abs(rep.coverage[0].empirical - 0.5) <= 0.02);
  CHECK(std::abs(rep.coverage[2].empirical - 0.8) <= 0.02);
  CHECK(std::abs(rep.coverage[3].empirical - 0.9) <= 0.02);
  CHECK(rep.spearman_rho > 0.3);

  // doubling the reported sigma inflates coverage
  std::vector<DepthDiagnostic> wide = diags;
  for (auto& d : wide) d.sigma_d *= 2.0;
  const auto over = calibration_report(wide);
  CHECK(over.coverage[1].empirical > rep.coverage[1].empirical + 0.1);
}

TEST_CASE("constant sigma carries no rank signal") {
  Rng rng(32);
  std::vector<DepthDiagnostic> diags(20'000);
  for (auto& d : diags) {
    d.sigma_d = 1.7;
    d.mu_d = 30.0;
    d.z_gt = d.mu_d + rng.laplace(0.0, d.sigma_d);
    d.delta_d = 0.5;
  }
  const auto rep = calibration_report(diags);
  CHECK(std::abs(rep.spearman_rho) < 0.05);
}

TEST_CASE("calibration report rejects empty input") {
  CHECK_THROWS_AS(calibration_report({}), std::invalid_argument);
}

TEST_CASE("spearman rank correlation") {
  const std::vector<double> a{1, 2, 3, 4, 5};
  const std::vector<double> inc{2, 4, 6, 8, 10};
  const std::vector<double> dec{5, 4, 3, 2, 1};
  CHECK(spearman(a, inc) == doctest::Approx(1.0));
  CHECK(spearman(a, dec) == doctest::Approx(-1.0));
}
