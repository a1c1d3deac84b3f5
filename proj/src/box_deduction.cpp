#include "gp3d/box_deduction.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

namespace gp3d {

namespace {

constexpr double kPi = std::numbers::pi;

const CategoryDims& average_dims(Category c, const DeductionConfig& cfg) {
  return c == Category::Pedestrian ? cfg.pedestrian : cfg.cyclist;
}

void check_positive_dims(double l, double w, double h) {
  if (!(l > 0) || !(w > 0) || !(h > 0)) {
    throw NonPositiveDimension("derived dimensions must be positive, got l=" +
                               std::to_string(l) + " w=" + std::to_string(w) +
                               " h=" + std::to_string(h));
  }
}

}  // namespace

const char* to_string(ContactTag tag) {
  switch (tag) {
    case ContactTag::LeftFront: return "LF";
    case ContactTag::RightFront: return "RF";
    case ContactTag::RightRear: return "RR";
    case ContactTag::LeftRear: return "LR";
    case ContactTag::Left: return "Left";
    case ContactTag::Right: return "Right";
  }
  return "?";
}

std::optional<ContactTag> contact_tag_from_string(std::string_view s) {
  if (s == "LF") return ContactTag::LeftFront;
  if (s == "RF") return ContactTag::RightFront;
  if (s == "RR") return ContactTag::RightRear;
  if (s == "LR") return ContactTag::LeftRear;
  if (s == "Left") return ContactTag::Left;
  if (s == "Right") return ContactTag::Right;
  return std::nullopt;
}

double wrap_angle(double radians) {
  double r = std::remainder(radians, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

CameraPoint backproject_contact(const Pixel& p, const ImageLine& horizon,
                                const CameraIntrinsics& k, double camera_height) {
  if (!(camera_height > 0)) {
    throw NonPositiveHeight("camera height must be positive, got " +
                            std::to_string(camera_height));
  }
  // The vertical pixel distance to the horizon, scaled by the camera
  // height, is the inverse-depth factor of the ray/plane intersection.
  const double below = p.v - horizon.k * p.u - horizon.b;
  if (!(below > 0)) {
    throw AboveHorizon("pixel (" + std::to_string(p.u) + ", " + std::to_string(p.v) +
                       ") is not below the horizon line");
  }
  const double z = k.fy * camera_height / below;
  const double y = (p.v - k.cv) * camera_height / below;
  const double x = (p.u - k.cu) * camera_height / below * (k.fy / k.fx);
  return {x, y, z};
}

CameraPoint bottom_center(std::span<const CameraPoint> points) {
  if (points.size() != 2 && points.size() != 4) {
    throw WrongArity("bottom center needs 2 or 4 contact points, got " +
                     std::to_string(points.size()));
  }
  CameraPoint sum;
  for (const CameraPoint& p : points) sum = sum + p;
  return sum * (1.0 / static_cast<double>(points.size()));
}

Dimensions derive_dimensions(Category category, std::span<const CameraPoint> points,
                             std::optional<double> h2d, const WheelbaseRatios& ratios,
                             double depth, double fy, const DeductionConfig& config) {
  if (!(depth > 0)) {
    throw NonPositiveDepth("object depth must be positive, got " + std::to_string(depth));
  }
  if (h2d && !(*h2d > 0)) {
    throw NonPositiveDimension("2-D box height must be positive, got " + std::to_string(*h2d));
  }

  Dimensions dims;
  if (category == Category::Car) {
    if (points.size() != 4) {
      throw WrongArity("car dimensions need 4 contact points, got " +
                       std::to_string(points.size()));
    }
    const CameraPoint front = points[0] + points[1];  // LF + RF
    const CameraPoint rear = points[2] + points[3];   // RR + LR
    const CameraPoint right = points[1] + points[2];  // RF + RR
    const CameraPoint left = points[0] + points[3];   // LF + LR
    dims.l = (front - rear).norm() / (2.0 * ratios.k_l);
    dims.w = (right - left).norm() / (2.0 * ratios.k_w);
    dims.h = h2d ? depth * *h2d / fy : config.car_fallback_height;
  } else {
    if (points.size() != 2) {
      throw WrongArity("two-point category needs 2 contact points, got " +
                       std::to_string(points.size()));
    }
    const CategoryDims& avg = average_dims(category, config);
    dims.l = avg.length;
    dims.w = avg.width;
    dims.h = h2d ? depth * *h2d / fy : avg.height;
  }
  check_positive_dims(dims.l, dims.w, dims.h);
  return dims;
}

double derive_rotation(std::span<const CameraPoint> points, const CameraPoint& center) {
  if (points.size() != 4) {
    throw WrongArity("rotation needs 4 contact points, got " + std::to_string(points.size()));
  }
  const double mx = 0.5 * (points[0].x + points[1].x) - center.x;
  const double mz = 0.5 * (points[0].z + points[1].z) - center.z;
  if (std::hypot(mx, mz) < 1e-9) {
    throw DegenerateFront("front midpoint coincides with the bottom center");
  }
  return wrap_angle(std::atan2(mz, mx));
}

ObjectBox3D deduce_box(const ContactPointSet& contacts, const ImageLine& horizon,
                       const CameraIntrinsics& k, double camera_height,
                       const DeductionConfig& config, const AttributeBias& bias) {
  // Order the pixels canonically by tag and require the full set.
  std::vector<CameraPoint> pts;
  if (contacts.category == Category::Car) {
    static constexpr std::array<ContactTag, 4> order = {
        ContactTag::LeftFront, ContactTag::RightFront, ContactTag::RightRear,
        ContactTag::LeftRear};
    if (contacts.points.size() != 4) {
      throw WrongArity("car needs 4 contact pixels, got " +
                       std::to_string(contacts.points.size()));
    }
    for (ContactTag tag : order) {
      const auto it = std::find_if(contacts.points.begin(), contacts.points.end(),
                                   [&](const ContactPixel& c) { return c.tag == tag; });
      if (it == contacts.points.end()) {
        throw WrongArity(std::string("missing car contact tag ") + to_string(tag));
      }
      pts.push_back(backproject_contact(it->px, horizon, k, camera_height));
    }
  } else {
    if (contacts.points.size() != 2) {
      throw WrongArity("two-point category needs 2 contact pixels, got " +
                       std::to_string(contacts.points.size()));
    }
    for (ContactTag tag : {ContactTag::Left, ContactTag::Right}) {
      const auto it = std::find_if(contacts.points.begin(), contacts.points.end(),
                                   [&](const ContactPixel& c) { return c.tag == tag; });
      if (it == contacts.points.end()) {
        throw WrongArity(std::string("missing contact tag ") + to_string(tag));
      }
      pts.push_back(backproject_contact(it->px, horizon, k, camera_height));
    }
  }

  ObjectBox3D box;
  box.bottom_center = bottom_center(pts);
  const double depth = box.bottom_center.z;
  const Dimensions dims =
      derive_dimensions(contacts.category, pts, contacts.h2d, config.ratios, depth, k.fy, config);
  box.l = dims.l;
  box.w = dims.w;
  box.h = dims.h;

  switch (contacts.category) {
    case Category::Car:
      box.yaw = derive_rotation(pts, box.bottom_center);
      break;
    case Category::Cyclist: {
      // Heading along the wheel axis, front wheel minus rear wheel.
      const CameraPoint d = pts[0] - pts[1];
      if (std::hypot(d.x, d.z) < 1e-9) {
        throw DegenerateFront("cyclist wheels coincide in the X-Z plane");
      }
      box.yaw = wrap_angle(std::atan2(d.z, d.x));
      break;
    }
    case Category::Pedestrian:
      box.yaw = 0.0;  // feet give no usable facing direction
      break;
  }

  box.bottom_center.z += bias.depth;
  box.l += bias.dl;
  box.w += bias.dw;
  box.h += bias.dh;
  box.yaw = wrap_angle(box.yaw + bias.rot);
  return box;
}

}  // namespace gp3d
