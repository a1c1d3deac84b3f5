#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gp3d/box_deduction.hpp"
#include "gp3d/edge_mining.hpp"

namespace gp3d {

/// One object annotation in the KITTI label layout. The location is the
/// center of the 3D box's bottom face in the camera frame, matching the
/// bottom-center convention used throughout this library.
struct LabelRecord {
  std::string category;
  double truncated = 0;
  int occluded = 0;
  double alpha = 0;
  double left = 0, top = 0, right = 0, bottom = 0;  // 2-D box, pixels
  double h = 0, w = 0, l = 0;                       // dimensions, meters
  double x = 0, y = 0, z = 0;                       // bottom center, meters
  double rotation_y = 0;                            // radians

  double height2d() const { return bottom - top; }
};

/// Camera calibration: the left color camera projection P2, row major.
struct CalibRecord {
  std::array<double, 12> p2{};

  CameraIntrinsics intrinsics() const { return {p2[0], p2[5], p2[2], p2[6]}; }
};

/// Contact-point and horizon pseudo labels of one frame.
struct PseudoLabelFrame {
  std::string frame_id;
  std::vector<ContactPointSet> objects;
  ImageLine horizon;
};

std::vector<LabelRecord> parse_labels(std::string_view text);
std::string emit_labels(std::span<const LabelRecord> records);

CalibRecord parse_calib(std::string_view text);
std::string emit_calib(const CalibRecord& calib);

/// One line per object: frame id, category, point count, then "tag u v"
/// triplets with six decimals; one "frame id HL k b" line closes each
/// frame. Frames and objects keep their input order.
std::string emit_pseudo_labels(std::span<const PseudoLabelFrame> frames);
std::vector<PseudoLabelFrame> parse_pseudo_labels(std::string_view text);

/// Loads a binary Netpbm image: P5 grayscale or P6 color, maxval 255.
/// Color is converted with luma weights 0.299/0.587/0.114, rounding half
/// up.
GrayImage load_netpbm(std::span<const unsigned char> bytes);
GrayImage load_netpbm_file(const std::string& path);

/// Binary P5 serialization of a grayscale image.
std::string save_pgm(const GrayImage& img);

}  // namespace gp3d
