#include "gp3d/ground_plane.hpp"

#include <algorithm>
#include <cmath>

namespace gp3d {

namespace {

constexpr double kPlausibleSlopeLimit = 10.0;  // |a|, |b| beyond this is no ground plane
constexpr double kDetGuard = 1e-12;            // on the column-scaled normal matrix

void check_plausible(double a, double b) {
  if (std::abs(a) > kPlausibleSlopeLimit || std::abs(b) > kPlausibleSlopeLimit) {
    throw ImplausiblePlane("plane slopes (" + std::to_string(a) + ", " + std::to_string(b) +
                           ") exceed |" + std::to_string(kPlausibleSlopeLimit) + "|");
  }
}

double max_abs(std::span<const double> v) {
  double m = 0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m == 0 ? 1.0 : m;
}

}  // namespace

GroundPlane horizon_to_plane(const ImageLine& horizon, const CameraIntrinsics& k,
                             double camera_height) {
  if (!(camera_height > 0)) {
    throw NonPositiveHeight("camera height must be positive, got " +
                            std::to_string(camera_height));
  }
  const double a = horizon.k * k.fx / k.fy;
  const double b = (horizon.k * k.cu + horizon.b - k.cv) / k.fy;
  check_plausible(a, b);
  return {a, b, camera_height};
}

ImageLine plane_to_horizon(const GroundPlane& plane, const CameraIntrinsics& k) {
  const double kh = plane.a * k.fy / k.fx;
  const double bh = plane.b * k.fy - kh * k.cu + k.cv;
  return {kh, bh};
}

EgoPose ego_pose(const ImageLine& horizon, const CameraIntrinsics& k) {
  return {std::atan(horizon.k * k.fx / k.fy),
          std::atan((horizon.k * k.cu + horizon.b - k.cv) / k.fy)};
}

ImageLine fit_line_lsq(std::span<const Pixel> points) {
  if (points.size() < 2) {
    throw DegenerateInput("line fit needs at least 2 points, got " +
                          std::to_string(points.size()));
  }
  // Normal equations for columns [u, 1], with the u column scaled to
  // max-abs 1 so the determinant guard is scale independent.
  std::vector<double> us(points.size());
  std::transform(points.begin(), points.end(), us.begin(), [](const Pixel& p) { return p.u; });
  const double su = max_abs(us);

  double suu = 0, su1 = 0, s11 = 0, suv = 0, s1v = 0;
  for (const Pixel& p : points) {
    const double u = p.u / su;
    suu += u * u;
    su1 += u;
    s11 += 1.0;
    suv += u * p.v;
    s1v += p.v;
  }
  const double det = suu * s11 - su1 * su1;
  if (std::abs(det) < kDetGuard) {
    throw DegenerateInput("line fit is rank deficient (all u nearly equal)");
  }
  const double k_scaled = (suv * s11 - s1v * su1) / det;
  const double b = (suu * s1v - su1 * suv) / det;
  return {k_scaled / su, b};
}

GroundPlane fit_plane_lsq(std::span<const CameraPoint> points) {
  if (points.size() < 3) {
    throw DegenerateInput("plane fit needs at least 3 points, got " +
                          std::to_string(points.size()));
  }
  std::vector<double> xs(points.size()), zs(points.size());
  std::transform(points.begin(), points.end(), xs.begin(), [](const CameraPoint& p) { return p.x; });
  std::transform(points.begin(), points.end(), zs.begin(), [](const CameraPoint& p) { return p.z; });
  const double sx = max_abs(xs);
  const double sz = max_abs(zs);

  // Normal equations A^T A [a b c]^T = A^T y for columns [x, z, 1].
  double m00 = 0, m01 = 0, m02 = 0, m11 = 0, m12 = 0, m22 = 0;
  double r0 = 0, r1 = 0, r2 = 0;
  for (const CameraPoint& p : points) {
    const double x = p.x / sx;
    const double z = p.z / sz;
    m00 += x * x;
    m01 += x * z;
    m02 += x;
    m11 += z * z;
    m12 += z;
    m22 += 1.0;
    r0 += x * p.y;
    r1 += z * p.y;
    r2 += p.y;
  }
  const double det = m00 * (m11 * m22 - m12 * m12) - m01 * (m01 * m22 - m12 * m02) +
                     m02 * (m01 * m12 - m11 * m02);
  if (std::abs(det) < kDetGuard) {
    throw DegenerateInput("plane fit is rank deficient ((x, z) nearly collinear)");
  }
  // Cramer's rule on the symmetric 3x3 system.
  const double da = r0 * (m11 * m22 - m12 * m12) - m01 * (r1 * m22 - m12 * r2) +
                    m02 * (r1 * m12 - m11 * r2);
  const double db = m00 * (r1 * m22 - m12 * r2) - r0 * (m01 * m22 - m12 * m02) +
                    m02 * (m01 * r2 - r1 * m02);
  const double dc = m00 * (m11 * r2 - r1 * m12) - m01 * (m01 * r2 - r1 * m02) +
                    r0 * (m01 * m12 - m11 * m02);
  const double a = da / det / sx;
  const double b = db / det / sz;
  const double c = dc / det;
  check_plausible(a, b);
  return {a, b, c};
}

}  // namespace gp3d
