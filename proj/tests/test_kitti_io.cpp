#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "mono3d/kitti_io.hpp"
#include "mono3d/run_config.hpp"

using namespace mono3d;

namespace {

const char* kCanonical =
    "Car 0.00 0 -1.58 587.01 173.33 614.12 200.12 1.65 1.67 3.64 -0.65 1.71 46.70 -1.59";

}  // namespace

TEST_CASE("canonical label lines round-trip bit-identically") {
  const KittiLabel label = parse_kitti_label(kCanonical);
  CHECK(serialize_kitti_label(label) == kCanonical);
  CHECK(label.type == "Car");
  CHECK(label.h == doctest::Approx(1.65));
  CHECK(label.z == doctest::Approx(46.70));

  const std::string with_score = std::string(kCanonical) + " 0.912345";
  CHECK(serialize_kitti_label(parse_kitti_label(with_score)) == with_score);

  const std::string with_sigma = with_score + " 2.345678";
  const KittiLabel full = parse_kitti_label(with_sigma);
  CHECK(full.score.has_value());
  CHECK(full.sigma_d.has_value());
  CHECK(*full.sigma_d == doctest::Approx(2.345678));
  CHECK(serialize_kitti_label(full) == with_sigma);
}

TEST_CASE("a 14-field line names the missing column") {
  const std::string line = "Car 0.00 0 -1.58 587.01 173.33 614.12 200.12 1.65 1.67 3.64 -0.65 1.71 46.70";
  try {
    parse_kitti_label(line);
    FAIL("expected KittiParseError");
  } catch (const KittiParseError& e) {
    CHECK(e.column == 15);
    CHECK(std::string(e.what()).find("rotation_y") != std::string::npos);
  }
}

TEST_CASE("numeric garbage reports the offending column") {
  const std::string line =
      "Car 0.00 0 -1.58 587.01 173.33 614.12 200.12 1.65 oops 3.64 -0.65 1.71 46.70 -1.59";
  try {
    parse_kitti_label(line);
    FAIL("expected KittiParseError");
  } catch (const KittiParseError& e) {
    CHECK(e.column == 10);
  }
}

TEST_CASE("DontCare rows allow non-positive dimensions and flag ignorable") {
  const std::string line = "DontCare -1 -1 -10 503.89 169.71 590.61 190.13 -1 -1 -1 -1000 -1000 -1000 -10";
  const KittiLabel label = parse_kitti_label(line);
  CHECK(label.ignorable());
  CHECK(label.h == doctest::Approx(-1.0));

  const std::string bad = "Car 0.00 0 -1.58 587.01 173.33 614.12 200.12 -1.65 1.67 3.64 -0.65 1.71 46.70 -1.59";
  CHECK_THROWS_AS(parse_kitti_label(bad), KittiParseError);
}

TEST_CASE("unknown class strings are preserved verbatim") {
  const std::string line =
      "Quadricycle 0.00 0 -1.58 587.01 173.33 614.12 200.12 1.65 1.67 3.64 -0.65 1.71 46.70 -1.59";
  CHECK(parse_kitti_label(line).type == "Quadricycle");
}

TEST_CASE("calib parse extracts the P2 projection entries") {
  std::istringstream in(
      "P0: 1 0 0 0 0 1 0 0 0 0 1 0\n"
      "P2: 700.0 0.0 620.0 44.85 0.0 700.0 190.0 0.21 0.0 0.0 1.0 0.003\n");
  const CameraIntrinsics cam = parse_kitti_calib(in);
  CHECK(cam.f == doctest::Approx(700.0));
  CHECK(cam.cu == doctest::Approx(620.0));
  CHECK(cam.cv == doctest::Approx(190.0));
}

TEST_CASE("calib parse round-trips the serializer") {
  const CameraIntrinsics cam{721.5377, 609.5593, 172.854};
  std::istringstream in(serialize_kitti_calib(cam));
  const CameraIntrinsics back = parse_kitti_calib(in);
  CHECK(back.f == doctest::Approx(cam.f).epsilon(1e-6));
  CHECK(back.cu == doctest::Approx(cam.cu).epsilon(1e-6));
  CHECK(back.cv == doctest::Approx(cam.cv).epsilon(1e-6));
}

TEST_CASE("calib errors") {
  std::istringstream missing("P0: 1 0 0 0 0 1 0 0 0 0 1 0\n");
  CHECK_THROWS(parse_kitti_calib(missing));
  std::istringstream malformed("P2: 700.0 0.0 620.0\n");
  CHECK_THROWS(parse_kitti_calib(malformed));
}

TEST_CASE("read_kitti_labels skips blank lines and reports line numbers") {
  std::istringstream in(std::string(kCanonical) + "\n\n" + kCanonical + "\n");
  const auto labels = read_kitti_labels(in);
  CHECK(labels.size() == 2);

  std::istringstream bad(std::string(kCanonical) + "\nCar 1 2\n");
  try {
    read_kitti_labels(bad);
    FAIL("expected KittiParseError");
  } catch (const KittiParseError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("box conversion keeps the bottom-center convention") {
  const KittiLabel label = parse_kitti_label(kCanonical);
  const Box3D box = box_from_label(label);
  CHECK(box.y == doctest::Approx(label.y));
  CHECK(box.h == doctest::Approx(label.h));
  CHECK(box.yaw == doctest::Approx(-1.59));

  const CameraIntrinsics cam{700.0, 620.0, 190.0};
  const KittiLabel back = label_from_box(box, label.type, cam);
  CHECK(back.type == "Car");
  CHECK(back.z == doctest::Approx(label.z));
  CHECK(back.bbox_bottom > back.bbox_top);
  CHECK(back.bbox_right > back.bbox_left);
}

TEST_CASE("run config round-trips through JSON with a schema marker") {
  RunConfig cfg;
  cfg.noise.h2d_sigma = 1.25;
  cfg.scene.depth_max = 77.0;
  cfg.score.iou_threshold = 0.65;
  cfg.nms.kind = IouKind::Iou3d;
  const auto j = to_json(cfg);
  CHECK(j["schema"] == kConfigSchema);
  const RunConfig back = run_config_from_json(j);
  CHECK(back.noise.h2d_sigma == doctest::Approx(1.25));
  CHECK(back.scene.depth_max == doctest::Approx(77.0));
  CHECK(back.score.iou_threshold == doctest::Approx(0.65));
  CHECK(back.nms.kind == IouKind::Iou3d);
}

TEST_CASE("schema violations are rejected on read") {
  nlohmann::json j = to_json(RunConfig{});
  j["schema"] = "mono3d-config/v999";
  CHECK_THROWS(run_config_from_json(j));
  nlohmann::json none = {{"scene", {{"depth_max", 10.0}}}};
  CHECK_THROWS(run_config_from_json(none));
}

TEST_CASE("detection and diagnostic JSON round-trips") {
  Detection det;
  det.box = {1.0, 1.65, 30.0, 1.5, 1.6, 4.0, 0.4};
  det.class_id = 2;
  det.p_2d = 0.9;
  det.p_3d_given_2d = 0.5;
  det.p_3d = 0.45;
  det.sigma_d = 1.75;
  const Detection back = detection_from_json(detection_to_json(det));
  CHECK(back.box.z == doctest::Approx(30.0));
  CHECK(back.p_3d == doctest::Approx(0.45));
  CHECK(back.sigma_d == doctest::Approx(1.75));

  ObjectDiag diag{30.5, 1.7, 0.4, 30.0, 0.5, 0.9, 0.45};
  const ObjectDiag dback = diag_from_json(diag_to_json(diag));
  CHECK(dback.mu_d == doctest::Approx(30.5));
  CHECK(dback.delta_d == doctest::Approx(0.4));
}
