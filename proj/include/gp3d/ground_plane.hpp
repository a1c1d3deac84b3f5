#pragma once

#include <span>

#include "gp3d/camera.hpp"

namespace gp3d {

/// Image line v = k*u + b. Used for the horizon.
struct ImageLine {
  double k = 0;  ///< slope dv/du
  double b = 0;  ///< intercept, pixels (v at u = 0)
};

/// Ground plane y = a*x + b*z + c in the camera coordinate system.
/// c is the camera height above ground when the plane is the road surface.
struct GroundPlane {
  double a = 0;  ///< dy/dx
  double b = 0;  ///< dy/dz
  double c = 0;  ///< meters

  double y_at(double x, double z) const { return a * x + b * z + c; }
};

/// Camera attitude relative to the ground plane, radians.
struct EgoPose {
  double roll = 0;
  double pitch = 0;
};

/// KITTI camera mount height above ground, meters.
inline constexpr double kDefaultCameraHeight = 1.65;

/// Ground plane through the scene derived from the image horizon line and
/// the camera height above ground. The plane through the horizon and the
/// optical center is parallel to the ground; shifting it down by
/// camera_height along Y gives the road surface.
GroundPlane horizon_to_plane(const ImageLine& horizon, const CameraIntrinsics& k,
                             double camera_height);

/// Image horizon of a ground plane: exact inverse of horizon_to_plane in
/// (k, b), independent of the plane's height offset c.
ImageLine plane_to_horizon(const GroundPlane& plane, const CameraIntrinsics& k);

/// Camera roll/pitch implied by the horizon line. Both are zero exactly
/// when the derived plane coefficients (a, b) are zero.
EgoPose ego_pose(const ImageLine& horizon, const CameraIntrinsics& k);

/// Least-squares line fit minimizing sum (v_i - k*u_i - b)^2.
/// Needs at least two points with distinct u.
ImageLine fit_line_lsq(std::span<const Pixel> points);

/// Least-squares plane fit minimizing sum (y_i - a*x_i - b*z_i - c)^2.
/// Needs at least three points whose (x, z) projections are not collinear.
GroundPlane fit_plane_lsq(std::span<const CameraPoint> points);

}  // namespace gp3d
