#pragma once

#include <array>
#include <optional>
#include <span>

#include "gp3d/box_deduction.hpp"

namespace gp3d {

/// The four wheel contact points in the object's local frame (axes aligned
/// with the camera axes, origin at the bottom-face center, front along +X,
/// left along +Z). All on the bottom face, y = 0.
struct LocalContactPoints {
  CameraPoint lf, rf, rr, lr;
};

/// Object pose: yaw about the Y axis and the bottom-center translation in
/// the camera frame.
struct PoseRT {
  double yaw = 0;
  CameraPoint t;
};

/// Image extent used to flag contact pixels that fall outside the frame.
struct ImageSize {
  int width = 0;
  int height = 0;
};

/// Ground geometry of the two-point categories. The values are dataset
/// tunables, not measured constants.
struct TwoPointGeometry {
  double pedestrian_foot_offset = 0.15;  ///< feet at local (0, 0, +-offset), meters
  double cyclist_wheel_ratio = 0.35;     ///< wheels at local (+-ratio*length, 0, 0)
};

/// Wheel contact points of a car in its local frame, from the box length
/// and width and the wheelbase ratios.
LocalContactPoints local_contact_points(double length, double width,
                                        const WheelbaseRatios& ratios);

/// Local-to-camera transform: yaw rotation about Y, then translation.
CameraPoint local_to_camera(const CameraPoint& local, const PoseRT& pose);

/// Projects a car's wheel contact points into the image, preserving the
/// LF/RF/RR/LR labels. The 2-D height of the returned set is the pinhole
/// height fy * h / z at the bottom center. When image bounds are given,
/// out-of-frame pixels are emitted with their visibility flag cleared.
ContactPointSet contact_pixel_labels(const ObjectBox3D& box, const WheelbaseRatios& ratios,
                                     const CameraIntrinsics& k,
                                     std::optional<ImageSize> bounds = std::nullopt);

/// Two-point contact labels for pedestrians and cyclists. Pedestrian feet
/// straddle the heading axis; cyclist wheels lie along it, front wheel
/// first (tagged Left).
ContactPointSet pedestrian_cyclist_labels(const ObjectBox3D& box, Category category,
                                          const CameraIntrinsics& k,
                                          const TwoPointGeometry& geometry = {},
                                          std::optional<ImageSize> bounds = std::nullopt);

/// Horizon line of the scene from its boxes: fits a plane through the
/// bottom centers and projects it to infinity. Needs at least min_points
/// boxes whose bottom centers are not collinear in (x, z).
ImageLine horizon_pseudo_label(std::span<const ObjectBox3D> boxes, const CameraIntrinsics& k,
                               int min_points = 3);

}  // namespace gp3d
