#include "mono3d/kitti_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace mono3d {

namespace {

const char* kFieldNames[] = {
    "type",       "truncated", "occluded",    "alpha", "bbox_left", "bbox_top",
    "bbox_right", "bbox_bottom", "height",    "width", "length",    "x",
    "y",          "z",         "rotation_y",  "score", "sigma_d"};

double parse_double(const std::string& tok, int column) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &pos);
  } catch (const std::exception&) {
    throw KittiParseError("column " + std::to_string(column) + " (" +
                              kFieldNames[column - 1] + "): not a number: '" + tok + "'",
                          column);
  }
  if (pos != tok.size()) {
    throw KittiParseError("column " + std::to_string(column) + " (" +
                              kFieldNames[column - 1] + "): trailing characters in '" +
                              tok + "'",
                          column);
  }
  return v;
}

std::string fmt(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  // Avoid the "-0.00" artifact so round-trips are stable.
  std::string s(buf);
  if (s.find_first_not_of("-0.") == std::string::npos && s[0] == '-') s.erase(0, 1);
  return s;
}

}  // namespace

KittiLabel parse_kitti_label(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> tok;
  std::string t;
  while (ss >> t) tok.push_back(t);
  if (tok.size() < 15) {
    const int missing = static_cast<int>(tok.size()) + 1;
    throw KittiParseError("expected 15-17 fields, got " + std::to_string(tok.size()) +
                              "; first missing column " + std::to_string(missing) +
                              " (" + kFieldNames[missing - 1] + ")",
                          missing);
  }
  if (tok.size() > 17) {
    throw KittiParseError("expected 15-17 fields, got " + std::to_string(tok.size()), 18);
  }

  KittiLabel out;
  out.type = tok[0];
  out.truncated = parse_double(tok[1], 2);
  out.occluded = static_cast<int>(parse_double(tok[2], 3));
  out.alpha = parse_double(tok[3], 4);
  out.bbox_left = parse_double(tok[4], 5);
  out.bbox_top = parse_double(tok[5], 6);
  out.bbox_right = parse_double(tok[6], 7);
  out.bbox_bottom = parse_double(tok[7], 8);
  out.h = parse_double(tok[8], 9);
  out.w = parse_double(tok[9], 10);
  out.l = parse_double(tok[10], 11);
  out.x = parse_double(tok[11], 12);
  out.y = parse_double(tok[12], 13);
  out.z = parse_double(tok[13], 14);
  out.rotation_y = parse_double(tok[14], 15);
  if (tok.size() >= 16) out.score = parse_double(tok[15], 16);
  if (tok.size() >= 17) out.sigma_d = parse_double(tok[16], 17);

  if (!out.ignorable() && (!(out.h > 0.0) || !(out.w > 0.0) || !(out.l > 0.0))) {
    const int col = !(out.h > 0.0) ? 9 : (!(out.w > 0.0) ? 10 : 11);
    throw KittiParseError("column " + std::to_string(col) + " (" + kFieldNames[col - 1] +
                              "): non-positive dimension for type '" + out.type + "'",
                          col);
  }
  return out;
}

std::string serialize_kitti_label(const KittiLabel& label) {
  std::ostringstream out;
  out << label.type << ' ' << fmt(label.truncated, 2) << ' ' << label.occluded << ' '
      << fmt(label.alpha, 2) << ' ' << fmt(label.bbox_left, 2) << ' '
      << fmt(label.bbox_top, 2) << ' ' << fmt(label.bbox_right, 2) << ' '
      << fmt(label.bbox_bottom, 2) << ' ' << fmt(label.h, 2) << ' ' << fmt(label.w, 2)
      << ' ' << fmt(label.l, 2) << ' ' << fmt(label.x, 2) << ' ' << fmt(label.y, 2)
      << ' ' << fmt(label.z, 2) << ' ' << fmt(label.rotation_y, 2);
  if (label.score) out << ' ' << fmt(*label.score, 6);
  if (label.sigma_d) {
    if (!label.score) out << ' ' << fmt(0.0, 6);  // sigma_d requires the score slot
    out << ' ' << fmt(*label.sigma_d, 6);
  }
  return out.str();
}

std::vector<KittiLabel> read_kitti_labels(std::istream& in) {
  std::vector<KittiLabel> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    try {
      out.push_back(parse_kitti_label(line));
    } catch (const KittiParseError& e) {
      throw KittiParseError("line " + std::to_string(lineno) + ": " + e.what(), e.column);
    }
  }
  return out;
}

std::vector<KittiLabel> read_kitti_labels(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open label file: " + path.string());
  return read_kitti_labels(in);
}

CameraIntrinsics parse_kitti_calib(std::istream& in) {
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::string key;
    if (!(ss >> key)) continue;
    if (key != "P2:" && key != "P2") continue;
    std::vector<double> v;
    double x;
    while (ss >> x) v.push_back(x);
    if (v.size() != 12) {
      throw std::runtime_error("calib: P2 row has " + std::to_string(v.size()) +
                               " entries, expected 12");
    }
    CameraIntrinsics cam;
    cam.f = v[0];   // P[0][0]
    cam.cu = v[2];  // P[0][2]
    cam.cv = v[6];  // P[1][2]
    if (!(cam.f > 0.0)) throw std::runtime_error("calib: non-positive focal length");
    return cam;
  }
  throw std::runtime_error("calib: missing P2 row");
}

CameraIntrinsics read_kitti_calib(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open calib file: " + path.string());
  return parse_kitti_calib(in);
}

std::string serialize_kitti_calib(const CameraIntrinsics& cam) {
  std::ostringstream out;
  out << "P2:";
  const double p[12] = {cam.f, 0.0, cam.cu, 0.0, 0.0, cam.f, cam.cv, 0.0, 0.0, 0.0, 1.0, 0.0};
  for (double v : p) out << ' ' << fmt(v, 6);
  out << '\n';
  return out.str();
}

Box3D box_from_label(const KittiLabel& label) {
  Box3D b;
  b.x = label.x;
  b.y = label.y;
  b.z = label.z;
  b.h = label.h;
  b.w = label.w;
  b.l = label.l;
  b.yaw = normalize_yaw(label.rotation_y);
  return b;
}

KittiLabel label_from_box(const Box3D& box, const std::string& type,
                          const CameraIntrinsics& cam) {
  KittiLabel label;
  label.type = type;
  label.h = box.h;
  label.w = box.w;
  label.l = box.l;
  label.x = box.x;
  label.y = box.y;
  label.z = box.z;
  label.rotation_y = box.yaw;
  // alpha is the observation angle: yaw relative to the ray to the object.
  label.alpha = normalize_yaw(box.yaw - std::atan2(box.x, box.z));
  if (box.z > 0.0 && cam.f > 0.0) {
    // Projected 2D box of the cuboid corners.
    const auto corners = box_corners(box);
    double u_lo = 1e30, u_hi = -1e30, v_lo = 1e30, v_hi = -1e30;
    for (const auto& c : corners) {
      if (!(c.z > 0.0)) continue;
      const double u = cam.f * c.x / c.z + cam.cu;
      const double v = cam.f * c.y / c.z + cam.cv;
      u_lo = std::min(u_lo, u);
      u_hi = std::max(u_hi, u);
      v_lo = std::min(v_lo, v);
      v_hi = std::max(v_hi, v);
    }
    label.bbox_left = u_lo;
    label.bbox_top = v_lo;
    label.bbox_right = u_hi;
    label.bbox_bottom = v_hi;
  }
  return label;
}

}  // namespace mono3d
