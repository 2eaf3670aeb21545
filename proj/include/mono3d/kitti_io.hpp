#pragma once

#include <filesystem>
#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mono3d/geometry.hpp"

namespace mono3d {

/// One object row of a KITTI label file: 15 base fields plus an optional
/// score and, as a local extension, an optional sigma_d column after the
/// score (KITTI has no uncertainty slot).
struct KittiLabel {
  std::string type;
  double truncated = 0.0;
  int occluded = 0;
  double alpha = 0.0;
  double bbox_left = 0.0, bbox_top = 0.0, bbox_right = 0.0, bbox_bottom = 0.0;
  double h = 0.0, w = 0.0, l = 0.0;  // dimensions, meters
  double x = 0.0, y = 0.0, z = 0.0;  // bottom-face center, camera frame
  double rotation_y = 0.0;
  std::optional<double> score;
  std::optional<double> sigma_d;

  bool ignorable() const { return type == "DontCare"; }
};

class KittiParseError : public std::runtime_error {
 public:
  KittiParseError(const std::string& what, int column_index)
      : std::runtime_error(what), column(column_index) {}
  int column;  // 1-based column of the offending / missing field
};

/// Parses one label row (15 to 17 whitespace-separated fields). Unknown class
/// strings are preserved verbatim; "DontCare" rows may carry non-positive
/// dimensions and are flagged ignorable.
KittiLabel parse_kitti_label(const std::string& line);

/// Canonical serialization: %.2f for geometry fields, %.6f for score and
/// sigma_d. parse/serialize round-trip canonical lines bit-identically.
std::string serialize_kitti_label(const KittiLabel& label);

std::vector<KittiLabel> read_kitti_labels(std::istream& in);
std::vector<KittiLabel> read_kitti_labels(const std::filesystem::path& path);

/// Extracts (f, cu, cv) from the left-color projection row "P2:" of a KITTI
/// calibration file: f = P[0][0], cu = P[0][2], cv = P[1][2]. Skew and
/// baseline entries are ignored by contract.
CameraIntrinsics parse_kitti_calib(std::istream& in);
CameraIntrinsics read_kitti_calib(const std::filesystem::path& path);

std::string serialize_kitti_calib(const CameraIntrinsics& cam);

Box3D box_from_label(const KittiLabel& label);
KittiLabel label_from_box(const Box3D& box, const std::string& type,
                          const CameraIntrinsics& cam);

}  // namespace mono3d
