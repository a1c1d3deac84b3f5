#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gp3d/box_deduction.hpp"
#include "gp3d/dataset_io.hpp"

namespace gp3d {

/// One object row of an evaluation table, matched across prediction and
/// ground truth by (frame, id).
struct ObjectRecord {
  std::string frame;
  std::string id;
  std::string category;
  double depth = 0;   ///< z of the bottom center, meters
  double height = 0;  ///< meters
  double length = 0;
  double width = 0;
  double x = 0, y = 0;
  double yaw = 0;
};

/// Mean absolute depth error bucketed by ground-truth depth:
/// [0, 20), [20, 40), [40, inf).
struct DepthBucketReport {
  std::array<double, 3> mean_abs_error{};
  std::array<std::int64_t, 3> count{};
  std::int64_t unmatched_pred = 0;
  std::int64_t unmatched_gt = 0;
};

/// Mean L1 errors of depth and the three box dimensions.
struct DimErrorReport {
  double depth = 0;
  double height = 0;
  double length = 0;
  double width = 0;
  std::int64_t count = 0;
  std::int64_t unmatched_pred = 0;
  std::int64_t unmatched_gt = 0;
};

DepthBucketReport eval_depth_buckets(std::span<const ObjectRecord> pred,
                                     std::span<const ObjectRecord> gt);
DimErrorReport eval_dim_errors(std::span<const ObjectRecord> pred,
                               std::span<const ObjectRecord> gt);

/// One cell of the ground-tilt drift experiment.
struct TiltSweepRow {
  double pitch_deg = 0;
  double depth_m = 0;
  double fixed_error_m = 0;    ///< back-projection with the flat horizon (0, cv)
  double dynamic_error_m = 0;  ///< back-projection with the plane's own horizon
};

/// For every (pitch, depth) cell, puts a ground-truth point at that depth
/// on the pitched plane, projects it, and back-projects the pixel once
/// with the flat horizon and once with the plane's true horizon, reporting
/// both absolute depth errors. The dynamic error is zero up to rounding;
/// the fixed error grows with depth and tilt.
std::vector<TiltSweepRow> tilt_sweep(std::span<const double> pitches_deg,
                                     std::span<const double> depths_m,
                                     const CameraIntrinsics& k, double camera_height);

/// Car wheel contact points resting on an arbitrary ground plane. The
/// wheel rectangle is spanned by the plane's unit tangent directions whose
/// bird's-eye headings are the yaw axis and its normal, so all four points
/// lie on the plane through the bottom center and the bird's-eye heading
/// of the front pair is exactly the yaw. On a level plane this reduces to
/// the yaw-rotated local wheel layout.
std::array<CameraPoint, 4> contact_points_on_plane(const ObjectBox3D& box,
                                                   const GroundPlane& plane,
                                                   const WheelbaseRatios& ratios);

/// One synthesized frame: ground-truth boxes resting on the plane, their
/// observed contact pixels (optionally pixel-noised), and the plane's
/// horizon line.
struct SynthScene {
  std::vector<ObjectBox3D> boxes;
  std::vector<ContactPointSet> contacts;
  ImageLine horizon;
};

/// Deterministic scene generator: cars with uniform yaw, depths in
/// [5, 80] m, resting on the given plane (tilt at most 10 degrees).
/// Contact pixels get isotropic Gaussian noise of the given standard
/// deviation; with zero noise the scene deduces back exactly.
SynthScene synth_scene(std::uint64_t seed, int n_objects, const GroundPlane& plane,
                       const CameraIntrinsics& k, double noise_px);

/// Ground-truth/prediction rows for the eval commands, one per box.
std::vector<ObjectRecord> to_records(std::string_view frame_id,
                                     std::span<const ObjectBox3D> boxes);

/// CSV with a header row; numbers at 9 significant digits.
std::string records_to_csv(std::span<const ObjectRecord> records);
std::vector<ObjectRecord> records_from_csv(std::string_view text);
std::string depth_report_to_csv(const DepthBucketReport& report);
std::string dim_report_to_csv(const DimErrorReport& report);
std::string tilt_sweep_to_csv(std::span<const TiltSweepRow> rows);

}  // namespace gp3d
