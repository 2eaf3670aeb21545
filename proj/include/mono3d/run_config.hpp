#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "mono3d/confidence.hpp"
#include "mono3d/simulator.hpp"
#include "mono3d/training.hpp"

namespace mono3d {

inline constexpr const char* kConfigSchema = "mono3d-config/v1";
inline constexpr const char* kResultSchema = "mono3d-result/v1";
inline constexpr const char* kSimSchema = "mono3d-sim/v1";
inline constexpr const char* kErrorSchema = "mono3d-error/v1";
inline constexpr const char* kManifestSchema = "mono3d-manifest/v1";
inline constexpr const char* kToolVersion = "1.0.0";

struct NmsSettings {
  double iou_threshold = 0.25;
  IouKind kind = IouKind::Bev;
};

struct HtlSettings {
  int total_epochs = 140;
  int window = 5;
};

/// Everything a run needs besides the seed; serializable so that
/// (config, seed) fully determines every artifact.
struct RunConfig {
  SceneConfig scene;
  NoiseModel noise;
  ScoreConfig score;
  NmsSettings nms;
  double loss_beta = 0.5;
  HtlSettings htl;
  double eval_iou_threshold = 0.7;
  IouKind eval_iou_kind = IouKind::Iou3d;
};

nlohmann::json to_json(const RunConfig& cfg);
RunConfig run_config_from_json(const nlohmann::json& j);
RunConfig load_run_config(const std::string& path);

std::string iou_kind_name(IouKind kind);
IouKind iou_kind_from_name(const std::string& name);

/// FNV-1a 64 over the canonical JSON dump, for manifests.
std::uint64_t fnv1a64(const std::string& data);

nlohmann::json scene_to_json(const Scene& scene);
Scene scene_from_json(const nlohmann::json& j);
nlohmann::json detection_to_json(const Detection& det);
Detection detection_from_json(const nlohmann::json& j);
nlohmann::json diag_to_json(const ObjectDiag& d);
ObjectDiag diag_from_json(const nlohmann::json& j);

/// Throws std::runtime_error unless j carries the expected schema marker.
void require_schema(const nlohmann::json& j, const std::string& expected);

}  // namespace mono3d
