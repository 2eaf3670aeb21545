#include "mono3d/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mono3d {

namespace {

double jittered(double base, double jitter, Rng& rng) {
  return base * std::exp(rng.uniform(-jitter, jitter));
}

bool bev_disjoint(const Box3D& candidate, const std::vector<SceneObject>& placed) {
  const Polygon2D cand = footprint(candidate);
  for (const auto& other : placed) {
    const Polygon2D inter = clip_convex(cand, footprint(other.box));
    if (polygon_area(inter) > 1e-12) return false;
  }
  return true;
}

}  // namespace

Scene gen_scene(const SceneConfig& cfg, Rng& rng) {
  if (cfg.min_objects < 1 || cfg.max_objects < cfg.min_objects) {
    throw std::invalid_argument("gen_scene: bad object count range");
  }
  if (!(cfg.depth_min > 0.0) || !(cfg.depth_max >= cfg.depth_min)) {
    throw std::invalid_argument("gen_scene: bad depth range");
  }
  if (cfg.priors.empty()) throw std::invalid_argument("gen_scene: no class priors");

  Scene scene;
  scene.cam = cfg.cam;
  const int target = cfg.min_objects == cfg.max_objects
                         ? cfg.min_objects
                         : rng.uniform_int(cfg.min_objects, cfg.max_objects);
  for (int i = 0; i < target; ++i) {
    bool placed = false;
    for (int attempt = 0; attempt < cfg.max_attempts_per_object; ++attempt) {
      const int cls = cfg.priors.size() == 1
                          ? 0
                          : rng.uniform_int(0, static_cast<int>(cfg.priors.size()) - 1);
      const ClassPrior& prior = cfg.priors[cls];
      Box3D b;
      b.z = rng.uniform(cfg.depth_min, cfg.depth_max);
      b.x = rng.uniform(-cfg.lateral_frac, cfg.lateral_frac) * b.z;
      b.y = cfg.ground_y;
      b.h = jittered(prior.h, cfg.dim_jitter, rng);
      b.w = jittered(prior.w, cfg.dim_jitter, rng);
      b.l = jittered(prior.l, cfg.dim_jitter, rng);
      b.yaw = normalize_yaw(rng.uniform(-std::numbers::pi, std::numbers::pi));
      if (bev_disjoint(b, scene.objects)) {
        scene.objects.push_back({b, cls});
        placed = true;
        break;
      }
    }
    if (!placed) {
      throw SceneGenError("gen_scene: rejection budget exhausted after placing " +
                              std::to_string(scene.objects.size()) + " objects",
                          static_cast<int>(scene.objects.size()));
    }
  }
  return scene;
}

EstimatedObject simulate_estimates(const Box3D& gt, const CameraIntrinsics& cam,
                                   const NoiseModel& nm, Rng& rng) {
  if (!(gt.z > 0.0)) throw std::domain_error("simulate_estimates: gt depth must be positive");
  if (!(gt.z > nm.bias_mu)) {
    throw std::domain_error("simulate_estimates: depth must exceed the systematic gap");
  }

  // A constant projection gap makes the measurable 2D height correspond to
  // depth z - bias_mu; the bias stream recenters it.
  const double h2d_true = cam.f * gt.h / (gt.z - nm.bias_mu);

  const double scale = nm.het_exponent == 0.0
                           ? 1.0
                           : std::pow(gt.z / nm.het_ref_depth, nm.het_exponent);
  const double s2 = std::max(nm.h2d_sigma * scale, nm.sigma_floor);
  const double s3 = std::max(nm.h3d_sigma * scale, nm.sigma_floor);

  auto draw_guarded = [&rng](double truth, double sigma) {
    double v = rng.laplace(truth, sigma);
    while (v <= 0.1 * truth) v = rng.laplace(truth, sigma);
    return v;
  };
  const double m2 = nm.h2d_sigma > 0.0 ? draw_guarded(h2d_true, s2) : h2d_true;
  const double m3 = nm.h3d_sigma > 0.0 ? draw_guarded(gt.h, s3) : gt.h;

  const double report = nm.well_calibrated ? 1.0 : nm.miscal_scale;

  EstimatedObject est;
  est.h2d_true = h2d_true;
  est.beliefs.h2d = {m2, s2 * report};
  est.beliefs.h3d = {m3, s3 * report};
  est.sigma_b = nm.bias_sigma * report;
  est.mu_b = nm.bias_sigma > 0.0 ? rng.laplace(nm.bias_mu, nm.bias_sigma) : nm.bias_mu;

  const double logit = nm.p2d_sharpness * std::log(h2d_true / nm.p2d_ref_height) +
                       (nm.p2d_noise > 0.0 ? rng.laplace(0.0, nm.p2d_noise) : 0.0);
  est.p_2d = std::clamp(1.0 / (1.0 + std::exp(-logit)), 0.01, 0.999);
  return est;
}

SimulatedObject simulate_object(const Box3D& gt, int class_id,
                                const CameraIntrinsics& cam, const NoiseModel& nm,
                                const ScoreConfig& cfg, Rng& rng) {
  SimulatedObject obj;
  obj.gt = gt;
  obj.estimate = simulate_estimates(gt, cam, nm, rng);
  const ProjectedDepth proj = propagate(obj.estimate.beliefs, cam.f);
  obj.depth = combine_bias(proj.mu_p, proj.sigma_p, obj.estimate.mu_b, obj.estimate.sigma_b);

  obj.detection.box = gt;
  obj.detection.box.z = obj.depth.mu_d;
  obj.detection.box.h = obj.estimate.beliefs.h3d.mu;
  obj.detection.class_id = class_id;
  obj.detection.sigma_d = obj.depth.sigma_d;
  obj.detection.p_2d = obj.estimate.p_2d;
  obj.delta_d = depth_shift_tolerance(obj.detection.box, cfg);
  obj.detection.p_3d_given_2d = iou_confidence(obj.depth.sigma_d, obj.delta_d);
  obj.detection.p_3d = fuse_scores(obj.detection.p_2d, obj.detection.p_3d_given_2d);
  return obj;
}

PipelineResult run_pipeline(const Scene& scene, const NoiseModel& nm,
                            const ScoreConfig& cfg, Rng& rng) {
  PipelineResult out;
  out.detections.reserve(scene.objects.size());
  out.diags.reserve(scene.objects.size());
  for (const auto& gt : scene.objects) {
    const SimulatedObject obj = simulate_object(gt.box, gt.class_id, scene.cam, nm, cfg, rng);
    out.detections.push_back(obj.detection);

    ObjectDiag diag;
    diag.mu_d = obj.depth.mu_d;
    diag.sigma_d = obj.depth.sigma_d;
    diag.delta_d = obj.delta_d;
    diag.z_gt = gt.box.z;
    diag.depth_err = obj.depth.mu_d - gt.box.z;
    diag.p_2d = obj.estimate.p_2d;
    diag.p_3d = obj.detection.p_3d;
    out.diags.push_back(diag);
  }
  return out;
}

std::vector<AmplificationRow> amplification_study(const std::vector<double>& depths,
                                                  double h3d, double jitter, double f) {
  if (!(h3d > 0.0) || !(f > 0.0) || jitter < 0.0) {
    throw std::domain_error("amplification_study: inputs must be positive");
  }
  std::vector<AmplificationRow> rows;
  rows.reserve(depths.size());
  for (double d : depths) {
    if (!(d > 0.0)) throw std::domain_error("amplification_study: depths must be positive");
    AmplificationRow row;
    row.depth = d;
    row.h2d = f * h3d / d;
    row.shift_plus = f * (h3d + jitter) / row.h2d - d;        // = d * jitter / h3d
    const double h2d_tall = f * (h3d + jitter) / d;
    row.shift_minus = f * h3d / h2d_tall - d;                 // = -d * jitter / (h3d + jitter)
    rows.push_back(row);
  }
  return rows;
}

namespace presets {

NoiseModel calibration_noise() {
  NoiseModel nm;
  nm.h2d_sigma = 0.2;
  nm.h3d_sigma = 0.083;
  nm.het_exponent = 1.0;
  nm.bias_mu = 0.0;
  nm.bias_sigma = 0.2;
  return nm;
}

SceneConfig calibration_scene() {
  SceneConfig cfg;
  cfg.depth_min = 10.0;
  cfg.depth_max = 50.0;
  cfg.dim_jitter = 0.15;
  return cfg;
}

NoiseModel study_noise() {
  NoiseModel nm;
  nm.h2d_sigma = 1.0;
  nm.h3d_sigma = 0.083;
  nm.het_exponent = 1.0;
  nm.bias_mu = 0.0;
  nm.bias_sigma = 0.5;
  return nm;
}

SceneConfig study_scene() {
  SceneConfig cfg;
  cfg.min_objects = 6;
  cfg.max_objects = 6;
  cfg.depth_min = 12.0;
  cfg.depth_max = 45.0;
  cfg.dim_jitter = 0.25;
  return cfg;
}

}  // namespace presets

}  // namespace mono3d
