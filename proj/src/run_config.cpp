#include "mono3d/run_config.hpp"

#include <fstream>
#include <stdexcept>

namespace mono3d {

using nlohmann::json;

std::string iou_kind_name(IouKind kind) {
  return kind == IouKind::Bev ? "bev" : "3d";
}

IouKind iou_kind_from_name(const std::string& name) {
  if (name == "bev") return IouKind::Bev;
  if (name == "3d") return IouKind::Iou3d;
  throw std::runtime_error("unknown iou kind: '" + name + "' (expected 'bev' or '3d')");
}

void require_schema(const json& j, const std::string& expected) {
  if (!j.is_object() || !j.contains("schema") || !j["schema"].is_string()) {
    throw std::runtime_error("missing schema marker (expected '" + expected + "')");
  }
  const std::string got = j["schema"].get<std::string>();
  if (got != expected) {
    throw std::runtime_error("schema mismatch: got '" + got + "', expected '" + expected + "'");
  }
}

json to_json(const RunConfig& cfg) {
  json priors = json::array();
  for (const auto& p : cfg.scene.priors) {
    priors.push_back({{"name", p.name}, {"h", p.h}, {"w", p.w}, {"l", p.l}});
  }
  return json{
      {"schema", kConfigSchema},
      {"scene",
       {{"min_objects", cfg.scene.min_objects},
        {"max_objects", cfg.scene.max_objects},
        {"depth_min", cfg.scene.depth_min},
        {"depth_max", cfg.scene.depth_max},
        {"lateral_frac", cfg.scene.lateral_frac},
        {"dim_jitter", cfg.scene.dim_jitter},
        {"ground_y", cfg.scene.ground_y},
        {"priors", priors},
        {"camera", {{"f", cfg.scene.cam.f}, {"cu", cfg.scene.cam.cu}, {"cv", cfg.scene.cam.cv}}},
        {"max_attempts_per_object", cfg.scene.max_attempts_per_object}}},
      {"noise",
       {{"h2d_sigma", cfg.noise.h2d_sigma},
        {"h3d_sigma", cfg.noise.h3d_sigma},
        {"het_exponent", cfg.noise.het_exponent},
        {"het_ref_depth", cfg.noise.het_ref_depth},
        {"bias_mu", cfg.noise.bias_mu},
        {"bias_sigma", cfg.noise.bias_sigma},
        {"sigma_floor", cfg.noise.sigma_floor},
        {"well_calibrated", cfg.noise.well_calibrated},
        {"miscal_scale", cfg.noise.miscal_scale},
        {"p2d_sharpness", cfg.noise.p2d_sharpness},
        {"p2d_noise", cfg.noise.p2d_noise},
        {"p2d_ref_height", cfg.noise.p2d_ref_height}}},
      {"score",
       {{"iou_threshold", cfg.score.iou_threshold},
        {"iou_kind", iou_kind_name(cfg.score.kind)},
        {"search_tol", cfg.score.search_tol},
        {"bracket_start", cfg.score.bracket_start},
        {"cap_diagonals", cfg.score.cap_diagonals}}},
      {"nms", {{"iou_threshold", cfg.nms.iou_threshold}, {"iou_kind", iou_kind_name(cfg.nms.kind)}}},
      {"loss", {{"beta", cfg.loss_beta}}},
      {"htl", {{"total_epochs", cfg.htl.total_epochs}, {"window", cfg.htl.window}}},
      {"eval",
       {{"iou_threshold", cfg.eval_iou_threshold}, {"iou_kind", iou_kind_name(cfg.eval_iou_kind)}}},
  };
}

namespace {

template <typename T>
void maybe(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

void maybe_kind(const json& j, const char* key, IouKind& out) {
  if (j.contains(key)) out = iou_kind_from_name(j.at(key).get<std::string>());
}

}  // namespace

RunConfig run_config_from_json(const json& j) {
  require_schema(j, kConfigSchema);
  RunConfig cfg;
  if (j.contains("scene")) {
    const json& s = j["scene"];
    maybe(s, "min_objects", cfg.scene.min_objects);
    maybe(s, "max_objects", cfg.scene.max_objects);
    maybe(s, "depth_min", cfg.scene.depth_min);
    maybe(s, "depth_max", cfg.scene.depth_max);
    maybe(s, "lateral_frac", cfg.scene.lateral_frac);
    maybe(s, "dim_jitter", cfg.scene.dim_jitter);
    maybe(s, "ground_y", cfg.scene.ground_y);
    maybe(s, "max_attempts_per_object", cfg.scene.max_attempts_per_object);
    if (s.contains("camera")) {
      const json& c = s["camera"];
      maybe(c, "f", cfg.scene.cam.f);
      maybe(c, "cu", cfg.scene.cam.cu);
      maybe(c, "cv", cfg.scene.cam.cv);
    }
    if (s.contains("priors")) {
      cfg.scene.priors.clear();
      for (const auto& p : s["priors"]) {
        ClassPrior prior;
        maybe(p, "name", prior.name);
        maybe(p, "h", prior.h);
        maybe(p, "w", prior.w);
        maybe(p, "l", prior.l);
        cfg.scene.priors.push_back(prior);
      }
    }
  }
  if (j.contains("noise")) {
    const json& njs = j["noise"];
    maybe(njs, "h2d_sigma", cfg.noise.h2d_sigma);
    maybe(njs, "h3d_sigma", cfg.noise.h3d_sigma);
    maybe(njs, "het_exponent", cfg.noise.het_exponent);
    maybe(njs, "het_ref_depth", cfg.noise.het_ref_depth);
    maybe(njs, "bias_mu", cfg.noise.bias_mu);
    maybe(njs, "bias_sigma", cfg.noise.bias_sigma);
    maybe(njs, "sigma_floor", cfg.noise.sigma_floor);
    maybe(njs, "well_calibrated", cfg.noise.well_calibrated);
    maybe(njs, "miscal_scale", cfg.noise.miscal_scale);
    maybe(njs, "p2d_sharpness", cfg.noise.p2d_sharpness);
    maybe(njs, "p2d_noise", cfg.noise.p2d_noise);
    maybe(njs, "p2d_ref_height", cfg.noise.p2d_ref_height);
  }
  if (j.contains("score")) {
    const json& s = j["score"];
    maybe(s, "iou_threshold", cfg.score.iou_threshold);
    maybe_kind(s, "iou_kind", cfg.score.kind);
    maybe(s, "search_tol", cfg.score.search_tol);
    maybe(s, "bracket_start", cfg.score.bracket_start);
    maybe(s, "cap_diagonals", cfg.score.cap_diagonals);
  }
  if (j.contains("nms")) {
    maybe(j["nms"], "iou_threshold", cfg.nms.iou_threshold);
    maybe_kind(j["nms"], "iou_kind", cfg.nms.kind);
  }
  if (j.contains("loss")) maybe(j["loss"], "beta", cfg.loss_beta);
  if (j.contains("htl")) {
    maybe(j["htl"], "total_epochs", cfg.htl.total_epochs);
    maybe(j["htl"], "window", cfg.htl.window);
  }
  if (j.contains("eval")) {
    maybe(j["eval"], "iou_threshold", cfg.eval_iou_threshold);
    maybe_kind(j["eval"], "iou_kind", cfg.eval_iou_kind);
  }
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  json j;
  in >> j;
  return run_config_from_json(j);
}

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

json scene_to_json(const Scene& scene) {
  json objs = json::array();
  for (const auto& o : scene.objects) {
    objs.push_back({{"class_id", o.class_id},
                    {"x", o.box.x},
                    {"y", o.box.y},
                    {"z", o.box.z},
                    {"h", o.box.h},
                    {"w", o.box.w},
                    {"l", o.box.l},
                    {"yaw", o.box.yaw}});
  }
  return json{{"camera", {{"f", scene.cam.f}, {"cu", scene.cam.cu}, {"cv", scene.cam.cv}}},
              {"objects", objs}};
}

Scene scene_from_json(const json& j) {
  Scene scene;
  scene.cam.f = j.at("camera").at("f").get<double>();
  scene.cam.cu = j.at("camera").at("cu").get<double>();
  scene.cam.cv = j.at("camera").at("cv").get<double>();
  for (const auto& o : j.at("objects")) {
    SceneObject obj;
    obj.class_id = o.at("class_id").get<int>();
    obj.box.x = o.at("x").get<double>();
    obj.box.y = o.at("y").get<double>();
    obj.box.z = o.at("z").get<double>();
    obj.box.h = o.at("h").get<double>();
    obj.box.w = o.at("w").get<double>();
    obj.box.l = o.at("l").get<double>();
    obj.box.yaw = o.at("yaw").get<double>();
    scene.objects.push_back(obj);
  }
  return scene;
}

json detection_to_json(const Detection& det) {
  return json{{"class_id", det.class_id},
              {"x", det.box.x},
              {"y", det.box.y},
              {"z", det.box.z},
              {"h", det.box.h},
              {"w", det.box.w},
              {"l", det.box.l},
              {"yaw", det.box.yaw},
              {"p_2d", det.p_2d},
              {"p_3d_given_2d", det.p_3d_given_2d},
              {"p_3d", det.p_3d},
              {"sigma_d", det.sigma_d}};
}

Detection detection_from_json(const json& j) {
  Detection det;
  det.class_id = j.at("class_id").get<int>();
  det.box.x = j.at("x").get<double>();
  det.box.y = j.at("y").get<double>();
  det.box.z = j.at("z").get<double>();
  det.box.h = j.at("h").get<double>();
  det.box.w = j.at("w").get<double>();
  det.box.l = j.at("l").get<double>();
  det.box.yaw = j.at("yaw").get<double>();
  det.p_2d = j.at("p_2d").get<double>();
  det.p_3d_given_2d = j.at("p_3d_given_2d").get<double>();
  det.p_3d = j.at("p_3d").get<double>();
  det.sigma_d = j.at("sigma_d").get<double>();
  return det;
}

json diag_to_json(const ObjectDiag& d) {
  return json{{"mu_d", d.mu_d},       {"sigma_d", d.sigma_d}, {"delta_d", d.delta_d},
              {"z_gt", d.z_gt},       {"depth_err", d.depth_err},
              {"p_2d", d.p_2d},       {"p_3d", d.p_3d}};
}

ObjectDiag diag_from_json(const json& j) {
  ObjectDiag d;
  d.mu_d = j.at("mu_d").get<double>();
  d.sigma_d = j.at("sigma_d").get<double>();
  d.delta_d = j.at("delta_d").get<double>();
  d.z_gt = j.at("z_gt").get<double>();
  d.depth_err = j.at("depth_err").get<double>();
  d.p_2d = j.at("p_2d").get<double>();
  d.p_3d = j.at("p_3d").get<double>();
  return d;
}

}  // namespace mono3d
