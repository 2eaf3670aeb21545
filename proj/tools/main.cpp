#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mono3d/confidence.hpp"
#include "mono3d/distributions.hpp"
#include "mono3d/evaluation.hpp"
#include "mono3d/geometry.hpp"
#include "mono3d/kitti_io.hpp"
#include "mono3d/propagation.hpp"
#include "mono3d/run_config.hpp"
#include "mono3d/simulator.hpp"
#include "mono3d/training.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace mono3d;

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

fs::path resolve_out_dir(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("MONO3D_OUT_DIR")) return env;
  return "out";
}

void write_text(const fs::path& path, const std::string& text) {
  if (!path.parent_path().empty()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

// Timestamps live only here; every primary artifact stays byte-stable.
void write_manifest(const fs::path& dir, const std::string& command, const json& config) {
  const auto now = std::chrono::system_clock::now();
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch());
  json manifest{{"schema", kManifestSchema},
                {"command", command},
                {"config_hash", fnv1a64(config.dump())},
                {"tool_version", kToolVersion},
                {"created_unix", secs.count()}};
  write_json(dir / "manifest.json", manifest);
}

RunConfig config_from_preset(const std::string& preset) {
  RunConfig cfg;
  if (preset == "default") return cfg;
  if (preset == "calibration") {
    cfg.scene = presets::calibration_scene();
    cfg.noise = presets::calibration_noise();
    return cfg;
  }
  if (preset == "study") {
    cfg.scene = presets::study_scene();
    cfg.noise = presets::study_noise();
    cfg.eval_iou_threshold = 0.5;
    return cfg;
  }
  throw std::runtime_error("unknown preset '" + preset + "' (default|calibration|study)");
}

// ---------------------------------------------------------------------------
// amplify

int cmd_amplify(double h3d, double jitter, const std::string& depth_spec, double focal,
                const std::string& out_flag) {
  std::vector<double> depths;
  {
    double lo = 0, hi = 0, step = 0;
    if (std::sscanf(depth_spec.c_str(), "%lf:%lf:%lf", &lo, &hi, &step) == 3) {
      if (!(step > 0.0) || hi < lo) throw std::runtime_error("bad --depths range");
      for (double d = lo; d <= hi + 1e-9; d += step) depths.push_back(d);
    } else {
      double single = 0;
      if (std::sscanf(depth_spec.c_str(), "%lf", &single) != 1) {
        throw std::runtime_error("--depths expects lo:hi:step or a single value");
      }
      depths.push_back(single);
    }
  }
  const auto rows = amplification_study(depths, h3d, jitter, focal);

  const fs::path dir = resolve_out_dir(out_flag);
  std::string csv = "depth,h2d,shift_plus,shift_minus\n";
  json jrows = json::array();
  for (const auto& r : rows) {
    csv += num(r.depth) + "," + num(r.h2d) + "," + num(r.shift_plus) + "," +
           num(r.shift_minus) + "\n";
    jrows.push_back({{"depth", r.depth},
                     {"h2d", r.h2d},
                     {"shift_plus", r.shift_plus},
                     {"shift_minus", r.shift_minus}});
  }
  const json config{{"h3d", h3d}, {"jitter", jitter}, {"depths", depth_spec}, {"focal", focal}};
  write_text(dir / "amplify.csv", csv);
  write_json(dir / "amplify.json",
             json{{"schema", kResultSchema}, {"kind", "amplify"}, {"config", config}, {"rows", jrows}});
  write_manifest(dir, "amplify", config);
  std::cout << csv;
  return 0;
}

// ---------------------------------------------------------------------------
// propagate

int cmd_propagate(double focal, double mu2d, double sigma2d, double mu3d, double sigma3d,
                  double mu_b, double sigma_b, std::size_t mc_samples,
                  std::optional<std::uint64_t> seed, const std::string& out_flag) {
  const HeightBeliefs hb{{mu2d, sigma2d}, {mu3d, sigma3d}};
  const ProjectedDepth proj = propagate(hb, focal);
  const ProjectedDepth legacy = legacy_geu(mu2d, hb.h3d, focal);
  const DepthBelief combined =
      combine_bias(proj.mu_p, std::max(proj.sigma_p, 1e-300), mu_b, sigma_b);

  json result{{"schema", kResultSchema},
              {"kind", "propagate"},
              {"config",
               {{"focal", focal},
                {"mu2d", mu2d},
                {"sigma2d", sigma2d},
                {"mu3d", mu3d},
                {"sigma3d", sigma3d},
                {"mu_b", mu_b},
                {"sigma_b", sigma_b}}},
              {"projected", {{"mu_p", proj.mu_p}, {"sigma_p", proj.sigma_p}}},
              {"legacy", {{"mu_p", legacy.mu_p}, {"sigma_p", legacy.sigma_p}}},
              {"depth",
               {{"mu_d", combined.mu_d},
                {"sigma_d", combined.sigma_d},
                {"mu_b", combined.mu_b},
                {"sigma_b", combined.sigma_b}}}};

  if (mc_samples > 0) {
    if (!seed) throw std::runtime_error("--seed is required with --mc-samples");
    Rng rng(*seed);
    const McDepthStats mc = mc_oracle(hb, focal, mc_samples, rng);
    result["mc"] = {{"samples", mc.samples},
                    {"mean", mc.mean},
                    {"stddev", mc.stddev},
                    {"rejection_rate", mc.rejection_rate},
                    {"rel_gap_sigma",
                     proj.sigma_p > 0.0 ? std::abs(mc.stddev - proj.sigma_p) / proj.sigma_p : 0.0},
                    {"seed", *seed}};
  }

  const fs::path dir = resolve_out_dir(out_flag);
  write_json(dir / "propagate.json", result);
  write_manifest(dir, "propagate", result["config"]);
  std::cout << result.dump(2) << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// score

int cmd_score(const std::string& input, const std::string& method, double th,
              const std::string& kind_name, double nms_threshold,
              const std::string& nms_kind_name, const std::string& out_flag) {
  const IouKind kind = iou_kind_from_name(kind_name);
  const IouKind nms_kind = iou_kind_from_name(nms_kind_name);
  const auto labels = read_kitti_labels(fs::path(input));

  ScoreConfig cfg;
  cfg.iou_threshold = th;
  cfg.kind = kind;

  struct Row {
    KittiLabel label;
    Detection det;
  };
  std::map<std::string, int> class_ids;
  std::vector<Row> rows;
  for (const auto& label : labels) {
    if (label.ignorable()) continue;
    if (!label.score) throw std::runtime_error("score: input rows need a score column (p_2d)");
    if (method != "const" && !label.sigma_d) {
      throw std::runtime_error("score: method '" + method +
                               "' needs the sigma_d column; input rows lack it");
    }
    Row row;
    row.label = label;
    row.det.box = box_from_label(label);
    const auto [it, inserted] = class_ids.emplace(label.type, static_cast<int>(class_ids.size()));
    row.det.class_id = it->second;
    row.det.p_2d = std::clamp(*label.score, 0.0, 1.0);
    row.det.sigma_d = label.sigma_d.value_or(0.0);
    if (method == "iounc") {
      row.det.p_3d_given_2d =
          iou_confidence(row.det.sigma_d, depth_shift_tolerance(row.det.box, cfg));
    } else if (method == "unc") {
      row.det.p_3d_given_2d = vanilla_confidence(row.det.sigma_d);
    } else if (method == "const") {
      row.det.p_3d_given_2d = 1.0;
    } else {
      throw std::runtime_error("score: unknown method '" + method + "' (iounc|unc|const)");
    }
    row.det.p_3d = fuse_scores(row.det.p_2d, row.det.p_3d_given_2d);
    rows.push_back(row);
  }

  std::vector<Detection> dets;
  dets.reserve(rows.size());
  for (const auto& row : rows) dets.push_back(row.det);
  const auto kept = nms3d_indices(dets, nms_threshold, nms_kind);

  std::string out_txt;
  for (std::size_t idx : kept) {
    KittiLabel label = rows[idx].label;
    label.score = rows[idx].det.p_3d;
    out_txt += serialize_kitti_label(label) + "\n";
  }

  const fs::path dir = resolve_out_dir(out_flag);
  const json config{{"input", input},
                    {"method", method},
                    {"th", th},
                    {"iou_kind", kind_name},
                    {"nms_threshold", nms_threshold},
                    {"nms_kind", nms_kind_name}};
  write_text(dir / "scored.txt", out_txt);
  write_json(dir / "score.json", json{{"schema", kResultSchema},
                                      {"kind", "score"},
                                      {"config", config},
                                      {"input_rows", rows.size()},
                                      {"kept_rows", kept.size()}});
  write_manifest(dir, "score", config);
  return 0;
}

// ---------------------------------------------------------------------------
// simulate

json run_one_seed(const RunConfig& cfg, std::uint64_t label_seed, int scenes_per_seed,
                  Rng seed_rng) {
  json jscenes = json::array();
  json jdets = json::array();
  json jdiags = json::array();
  json jkept = json::array();
  for (int s = 0; s < scenes_per_seed; ++s) {
    const Scene scene = gen_scene(cfg.scene, seed_rng);
    const PipelineResult res = run_pipeline(scene, cfg.noise, cfg.score, seed_rng);
    // suppression can drop detections whose noisy depths collide, so the
    // kept->object mapping rides along with the detection list
    const auto kept = nms3d_indices(res.detections, cfg.nms.iou_threshold, cfg.nms.kind);
    jscenes.push_back(scene_to_json(scene));
    json dd = json::array();
    json kk = json::array();
    for (std::size_t idx : kept) {
      dd.push_back(detection_to_json(res.detections[idx]));
      kk.push_back(idx);
    }
    jdets.push_back(dd);
    jkept.push_back(kk);
    json gg = json::array();
    for (const auto& d : res.diags) gg.push_back(diag_to_json(d));
    jdiags.push_back(gg);
  }
  json names = json::array();
  for (const auto& p : cfg.scene.priors) names.push_back(p.name);
  return json{{"schema", kSimSchema}, {"seed", label_seed},  {"class_names", names},
              {"scenes", jscenes},    {"detections", jdets}, {"diags", jdiags},
              {"det_object_index", jkept}};
}

void emit_kitti_tree(const fs::path& root, const json& sim) {
  for (std::size_t s = 0; s < sim["scenes"].size(); ++s) {
    char stem[16];
    std::snprintf(stem, sizeof(stem), "%06zu.txt", s);
    const Scene scene = scene_from_json(sim["scenes"][s]);
    std::string gt_txt;
    for (const auto& obj : scene.objects) {
      const std::string name = sim["class_names"][obj.class_id].get<std::string>();
      gt_txt += serialize_kitti_label(label_from_box(obj.box, name, scene.cam)) + "\n";
    }
    std::string pred_txt;
    for (const auto& jd : sim["detections"][s]) {
      const Detection det = detection_from_json(jd);
      const std::string name = sim["class_names"][det.class_id].get<std::string>();
      KittiLabel label = label_from_box(det.box, name, scene.cam);
      label.score = det.p_3d;
      label.sigma_d = det.sigma_d;
      pred_txt += serialize_kitti_label(label) + "\n";
    }
    write_text(root / "label_2" / stem, gt_txt);
    write_text(root / "pred_2" / stem, pred_txt);
    write_text(root / "calib" / stem, serialize_kitti_calib(scene.cam));
  }
}

int cmd_simulate(const std::string& config_path, const std::string& preset,
                 std::uint64_t seed, int n_seeds, int scenes_per_seed, bool emit_kitti,
                 const std::string& out_flag) {
  RunConfig cfg = config_path.empty() ? config_from_preset(preset) : load_run_config(config_path);
  const fs::path dir = resolve_out_dir(out_flag);
  const json jcfg = to_json(cfg);
  write_json(dir / "config.json", jcfg);

  const Rng master(seed);
  for (int k = 0; k < n_seeds; ++k) {
    const json sim = run_one_seed(cfg, seed + static_cast<std::uint64_t>(k), scenes_per_seed,
                                  master.substream(static_cast<std::uint64_t>(k)));
    char name[32];
    std::snprintf(name, sizeof(name), "sim_seed%04d.json", k);
    write_json(dir / name, sim);
    if (emit_kitti) {
      char kdir[32];
      std::snprintf(kdir, sizeof(kdir), "kitti/seed%04d", k);
      emit_kitti_tree(dir / kdir, sim);
    }
  }
  json config = jcfg;
  config["seed"] = seed;
  config["seeds"] = n_seeds;
  config["scenes_per_seed"] = scenes_per_seed;
  write_manifest(dir, "simulate", config);
  return 0;
}

// ---------------------------------------------------------------------------
// evaluate

double rescore(const Detection& det, const ObjectDiag& diag, const std::string& method) {
  if (method == "iounc") return fuse_scores(det.p_2d, iou_confidence(det.sigma_d, diag.delta_d));
  if (method == "unc") return fuse_scores(det.p_2d, vanilla_confidence(det.sigma_d));
  return det.p_2d;  // const
}

int cmd_evaluate(const std::string& input_dir, double iou_threshold,
                 const std::string& kind_name, const std::string& out_flag) {
  const IouKind kind = iou_kind_from_name(kind_name);
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(input_dir)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("sim_seed", 0) == 0 && entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw std::runtime_error("evaluate: no sim_seed*.json under " + input_dir);

  const std::vector<std::string> methods{"iounc", "unc", "const"};
  std::map<std::string, std::vector<double>> ap40, ap11;
  std::vector<DepthDiagnostic> all_diags;

  for (const auto& file : files) {
    std::ifstream in(file);
    json sim;
    in >> sim;
    require_schema(sim, kSimSchema);

    std::map<std::string, std::vector<std::pair<double, bool>>> scored;
    std::size_t num_gt = 0;
    for (std::size_t s = 0; s < sim["scenes"].size(); ++s) {
      const Scene scene = scene_from_json(sim["scenes"][s]);
      std::vector<GtBox> gts;
      for (const auto& o : scene.objects) gts.push_back({o.box, o.class_id});
      num_gt += gts.size();

      std::vector<Detection> dets;
      std::vector<ObjectDiag> diags;
      std::vector<std::size_t> det_obj;
      for (const auto& jd : sim["detections"][s]) dets.push_back(detection_from_json(jd));
      for (const auto& jd : sim["diags"][s]) diags.push_back(diag_from_json(jd));
      for (const auto& ji : sim["det_object_index"][s]) det_obj.push_back(ji.get<std::size_t>());
      if (dets.size() != det_obj.size()) {
        throw std::runtime_error("evaluate: detections/index length mismatch");
      }
      for (const auto& d : diags) all_diags.push_back({d.mu_d, d.sigma_d, d.delta_d, d.z_gt});

      for (const auto& method : methods) {
        std::vector<Detection> rescored = dets;
        for (std::size_t i = 0; i < rescored.size(); ++i) {
          rescored[i].p_3d = rescore(dets[i], diags.at(det_obj[i]), method);
        }
        const MatchResult m = match(rescored, gts, iou_threshold, kind);
        for (std::size_t i = 0; i < rescored.size(); ++i) {
          scored[method].emplace_back(rescored[i].p_3d, m.det_to_gt[i] >= 0);
        }
      }
    }
    for (const auto& method : methods) {
      const PRCurve curve = pr_curve(scored[method], num_gt);
      ap40[method].push_back(average_precision(curve, 40));
      ap11[method].push_back(average_precision(curve, 11));
    }
  }

  const CalibrationReport rep = calibration_report(all_diags);

  auto mean = [](const std::vector<double>& v) {
    double acc = 0.0;
    for (double x : v) acc += x;
    return v.empty() ? 0.0 : acc / static_cast<double>(v.size());
  };

  std::string csv = "class,iou_threshold,method,AP11,AP40\n";
  json jmethods;
  for (const auto& method : methods) {
    const double a11 = mean(ap11[method]);
    const double a40 = mean(ap40[method]);
    csv += "Car," + num(iou_threshold) + "," + method + "," + num(a11) + "," + num(a40) + "\n";
    jmethods[method] = {{"ap11_mean", a11}, {"ap40_mean", a40}, {"ap40_per_seed", ap40[method]}};
  }
  csv += "\nnominal_coverage,empirical_coverage\n";
  json jcov = json::array();
  for (const auto& row : rep.coverage) {
    csv += num(row.nominal) + "," + num(row.empirical) + "\n";
    jcov.push_back({{"nominal", row.nominal}, {"empirical", row.empirical}});
  }

  const json config{{"input_dir", input_dir},
                    {"iou_threshold", iou_threshold},
                    {"iou_kind", kind_name}};
  const fs::path dir = resolve_out_dir(out_flag);
  write_text(dir / "eval.csv", csv);
  write_json(dir / "eval.json", json{{"schema", kResultSchema},
                                     {"kind", "evaluate"},
                                     {"config", config},
                                     {"methods", jmethods},
                                     {"coverage", jcov},
                                     {"spearman_rho", rep.spearman_rho},
                                     {"objects", rep.n},
                                     {"seeds", files.size()}});
  write_manifest(dir, "evaluate", config);
  std::cout << csv;
  return 0;
}

// ---------------------------------------------------------------------------
// htl-trace

int cmd_htl_trace(std::uint64_t seed, int epochs, int window, const std::string& out_flag) {
  HtlConfig cfg = default_task_graph(epochs, window);
  HtlScheduler sched(cfg);
  Rng rng(seed);
  const double tau[7] = {3.0, 3.0, 3.5, 6.0, 6.0, 7.0, 12.0};
  const double base[7] = {2.0, 1.2, 1.5, 2.5, 1.8, 1.6, 3.5};

  std::string csv = "epoch,task,loss,ls,alpha,weight\n";
  json jtotals = json::array();
  for (int t = 0; t < epochs; ++t) {
    std::vector<double> losses(cfg.tasks.size());
    for (std::size_t i = 0; i < cfg.tasks.size(); ++i) {
      losses[i] = base[i] * std::exp(-t / tau[i]) + 0.2 + 0.002 * rng.uniform(-1.0, 1.0);
    }
    const auto w = sched.step(losses);
    std::vector<double> weights(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
      weights[i] = w[i].weight;
      csv += std::to_string(t) + "," + cfg.tasks[i].name + "," + num(losses[i]) + "," +
             num(w[i].ls) + "," + num(w[i].alpha) + "," + num(w[i].weight) + "\n";
    }
    jtotals.push_back({{"epoch", t},
                       {"plain_sum", sum_losses(losses)},
                       {"weighted_sum", weighted_sum_losses(losses, weights)}});
  }

  const json config{{"seed", seed}, {"epochs", epochs}, {"window", window}};
  const fs::path dir = resolve_out_dir(out_flag);
  write_text(dir / "htl_trace.csv", csv);
  write_json(dir / "htl.json", json{{"schema", kResultSchema},
                                    {"kind", "htl-trace"},
                                    {"config", config},
                                    {"totals", jtotals}});
  write_manifest(dir, "htl-trace", config);
  return 0;
}

// ---------------------------------------------------------------------------
// fit-residuals

int cmd_fit_residuals(const std::string& input_dir, std::size_t synthetic,
                      std::optional<std::uint64_t> seed, const std::string& out_flag) {
  std::vector<double> residuals;
  json source;
  if (!input_dir.empty()) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(input_dir)) {
      const std::string name = entry.path().filename().string();
      if (name.rfind("sim_seed", 0) == 0 && entry.path().extension() == ".json") {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());
    for (const auto& file : files) {
      std::ifstream in(file);
      json sim;
      in >> sim;
      require_schema(sim, kSimSchema);
      for (const auto& per_scene : sim["diags"]) {
        for (const auto& jd : per_scene) {
          const ObjectDiag d = diag_from_json(jd);
          residuals.push_back((d.z_gt - d.mu_d) / d.sigma_d);
        }
      }
    }
    source = {{"input_dir", input_dir}};
  } else {
    if (!seed) throw std::runtime_error("fit-residuals: --seed is required with --synthetic");
    // calibration preset with the bias stream off: the residual is the pure
    // propagated projection error
    SceneConfig scfg = presets::calibration_scene();
    NoiseModel nm = presets::calibration_noise();
    nm.bias_sigma = 0.0;
    Rng rng(*seed);
    while (residuals.size() < synthetic) {
      const Scene scene = gen_scene(scfg, rng);
      const PipelineResult res = run_pipeline(scene, nm, ScoreConfig{}, rng);
      for (const auto& d : res.diags) residuals.push_back((d.z_gt - d.mu_d) / d.sigma_d);
    }
    residuals.resize(synthetic);
    source = {{"synthetic", synthetic}, {"seed", *seed}};
  }
  if (residuals.empty()) throw std::runtime_error("fit-residuals: no residuals found");

  const auto hist = ResidualHistogram::from_samples(residuals);
  const double err_lap = fit_error(hist, DistFamily::Laplace);
  const double err_gau = fit_error(hist, DistFamily::Gauss);

  std::string csv = "bin_center,density,laplace_pdf,gauss_pdf\n";
  const LaplaceDist lap{0.0, 1.0};
  const GaussDist gau{0.0, 1.0};
  for (std::size_t i = 0; i < hist.density.size(); ++i) {
    const double c = hist.bin_center(i);
    csv += num(c) + "," + num(hist.density[i]) + "," + num(laplace_pdf(lap, c)) + "," +
           num(gauss_pdf(gau, c)) + "\n";
  }

  const fs::path dir = resolve_out_dir(out_flag);
  write_text(dir / "residuals.csv", csv);
  write_json(dir / "fit.json", json{{"schema", kResultSchema},
                                    {"kind", "fit-residuals"},
                                    {"config", source},
                                    {"samples", residuals.size()},
                                    {"fit_error_laplace", err_lap},
                                    {"fit_error_gauss", err_gau},
                                    {"laplace_fits_better", err_lap < err_gau}});
  write_manifest(dir, "fit-residuals", source);
  std::cout << "fit_error laplace=" << num(err_lap) << " gauss=" << num(err_gau) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mono3d: geometry-uncertainty toolkit for monocular 3D detection"};
  app.require_subcommand(1);

  std::string out_dir;
  app.add_option("--out", out_dir, "output directory (default $MONO3D_OUT_DIR or ./out)");

  auto* amplify = app.add_subcommand("amplify", "depth-shift table for a height jitter");
  double a_h3d = 1.5, a_jitter = 0.1, a_focal = 700.0;
  std::string a_depths = "10:80:10";
  amplify->add_option("--h3d", a_h3d, "physical height, m");
  amplify->add_option("--jitter", a_jitter, "height jitter, m");
  amplify->add_option("--depths", a_depths, "depth grid lo:hi:step, m");
  amplify->add_option("--focal", a_focal, "focal length, px");

  auto* propagate_cmd = app.add_subcommand("propagate", "project height beliefs to a depth belief");
  double p_focal = 700.0, p_mu2d = 17.5, p_sigma2d = 0.35, p_mu3d = 1.5, p_sigma3d = 0.15;
  double p_mub = 0.0, p_sigmab = 0.0;
  std::size_t p_mc = 0;
  std::uint64_t p_seed = 0;
  propagate_cmd->add_option("--focal", p_focal, "focal length, px");
  propagate_cmd->add_option("--mu2d", p_mu2d, "2D height mean, px");
  propagate_cmd->add_option("--sigma2d", p_sigma2d, "2D height std, px");
  propagate_cmd->add_option("--mu3d", p_mu3d, "3D height mean, m");
  propagate_cmd->add_option("--sigma3d", p_sigma3d, "3D height std, m");
  propagate_cmd->add_option("--mu-b", p_mub, "bias mean, m");
  propagate_cmd->add_option("--sigma-b", p_sigmab, "bias std, m");
  propagate_cmd->add_option("--mc-samples", p_mc, "Monte-Carlo check sample count");
  auto* p_seed_opt = propagate_cmd->add_option("--seed", p_seed, "RNG seed for the MC check");

  auto* score = app.add_subcommand("score", "fuse confidences into a prediction file, then NMS");
  std::string s_input, s_method = "iounc", s_kind = "3d", s_nms_kind = "bev";
  double s_th = 0.7, s_nms_th = 0.25;
  score->add_option("--input", s_input, "prediction file (KITTI rows + score [+ sigma_d])")
      ->required();
  score->add_option("--method", s_method, "iounc|unc|const");
  score->add_option("--th", s_th, "IoU acceptance threshold");
  score->add_option("--iou-kind", s_kind, "3d|bev for the depth-shift tolerance");
  score->add_option("--nms-threshold", s_nms_th, "NMS IoU threshold");
  score->add_option("--nms-kind", s_nms_kind, "3d|bev for NMS");

  auto* simulate = app.add_subcommand("simulate", "generate scenes and run the full pipeline");
  std::string m_config, m_preset = "default";
  std::uint64_t m_seed = 0;
  int m_seeds = 1, m_scenes = 25;
  bool m_no_kitti = false;
  simulate->add_option("--config", m_config, "run-config JSON file");
  simulate->add_option("--preset", m_preset, "default|calibration|study");
  auto* m_seed_opt = simulate->add_option("--seed", m_seed, "master seed");
  simulate->add_option("--seeds", m_seeds, "number of seeded runs");
  simulate->add_option("--scenes", m_scenes, "scenes per seeded run");
  simulate->add_flag("--no-kitti", m_no_kitti, "skip the KITTI-format tree");

  auto* evaluate = app.add_subcommand("evaluate", "AP and calibration over simulate outputs");
  std::string e_input, e_kind = "3d";
  double e_th = 0.5;
  evaluate->add_option("--input-dir", e_input, "directory holding sim_seed*.json")->required();
  evaluate->add_option("--iou-threshold", e_th, "matching IoU threshold");
  evaluate->add_option("--iou-kind", e_kind, "3d|bev matching");

  auto* htl = app.add_subcommand("htl-trace", "curriculum weights over a synthetic loss trace");
  std::uint64_t h_seed = 0;
  int h_epochs = 40, h_window = 3;
  auto* h_seed_opt = htl->add_option("--seed", h_seed, "RNG seed");
  htl->add_option("--epochs", h_epochs, "total epochs T");
  htl->add_option("--window", h_window, "trend window K");

  auto* fitres = app.add_subcommand("fit-residuals", "distribution-form check of depth residuals");
  std::string f_input;
  std::size_t f_synth = 100000;
  std::uint64_t f_seed = 0;
  fitres->add_option("--input-dir", f_input, "directory holding sim_seed*.json");
  fitres->add_option("--synthetic", f_synth, "synthetic sample count when no input dir");
  auto* f_seed_opt = fitres->add_option("--seed", f_seed, "RNG seed for the synthetic mode");

  // let --out appear after the subcommand name
  for (CLI::App* sub : {amplify, propagate_cmd, score, simulate, evaluate, htl, fitres}) {
    sub->fallthrough();
  }

  CLI11_PARSE(app, argc, argv);

  try {
    if (*amplify) return cmd_amplify(a_h3d, a_jitter, a_depths, a_focal, out_dir);
    if (*propagate_cmd) {
      return cmd_propagate(p_focal, p_mu2d, p_sigma2d, p_mu3d, p_sigma3d, p_mub, p_sigmab, p_mc,
                           p_seed_opt->count() ? std::optional<std::uint64_t>(p_seed) : std::nullopt,
                           out_dir);
    }
    if (*score) return cmd_score(s_input, s_method, s_th, s_kind, s_nms_th, s_nms_kind, out_dir);
    if (*simulate) {
      if (!m_seed_opt->count()) throw std::runtime_error("simulate: --seed is required");
      return cmd_simulate(m_config, m_preset, m_seed, m_seeds, m_scenes, !m_no_kitti, out_dir);
    }
    if (*evaluate) return cmd_evaluate(e_input, e_th, e_kind, out_dir);
    if (*htl) {
      if (!h_seed_opt->count()) throw std::runtime_error("htl-trace: --seed is required");
      return cmd_htl_trace(h_seed, h_epochs, h_window, out_dir);
    }
    if (*fitres) {
      return cmd_fit_residuals(
          f_input, f_synth,
          f_seed_opt->count() ? std::optional<std::uint64_t>(f_seed) : std::nullopt, out_dir);
    }
  } catch (const std::exception& e) {
    const json err{{"schema", kErrorSchema},
                   {"error", {{"type", typeid(e).name()}, {"message", e.what()}}}};
    std::cerr << err.dump(2) << "\n";
    return 1;
  }
  return 0;
}
