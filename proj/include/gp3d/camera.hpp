#pragma once

#include <cmath>
#include <string>

#include "gp3d/errors.hpp"

namespace gp3d {

/// Pinhole intrinsics of a rectified camera. Zero skew, no distortion.
struct CameraIntrinsics {
  double fx = 0;  ///< focal length in pixels, X
  double fy = 0;  ///< focal length in pixels, Y
  double cu = 0;  ///< principal point u, pixels
  double cv = 0;  ///< principal point v, pixels
};

/// Continuous image coordinates: u right, v down, origin top-left.
struct Pixel {
  double u = 0;
  double v = 0;
};

/// Point in the camera coordinate system: X right, Y down, Z forward
/// along the optical axis, meters.
struct CameraPoint {
  double x = 0;
  double y = 0;
  double z = 0;

  CameraPoint operator+(const CameraPoint& o) const { return {x + o.x, y + o.y, z + o.z}; }
  CameraPoint operator-(const CameraPoint& o) const { return {x - o.x, y - o.y, z - o.z}; }
  CameraPoint operator*(double s) const { return {x * s, y * s, z * s}; }
  double norm() const { return std::sqrt(x * x + y * y + z * z); }
};

inline CameraPoint operator*(double s, const CameraPoint& p) { return p * s; }

/// Projects a camera-frame point to the image. The point must be in front
/// of the camera (z > 0).
inline Pixel project(const CameraPoint& p, const CameraIntrinsics& k) {
  if (!(p.z > 0)) {
    throw NonPositiveDepth("cannot project point with z = " + std::to_string(p.z));
  }
  return {k.fx * p.x / p.z + k.cu, k.fy * p.y / p.z + k.cv};
}

/// Direction of the viewing ray through a pixel, at unit depth:
/// project(backproject_ray(p) * s) == p for every s > 0.
inline CameraPoint backproject_ray(const Pixel& p, const CameraIntrinsics& k) {
  return {(p.u - k.cu) / k.fx, (p.v - k.cv) / k.fy, 1.0};
}

}  // namespace gp3d
