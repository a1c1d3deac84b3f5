#pragma once

#include <optional>
#include <span>
#include <vector>

#include "gp3d/ground_plane.hpp"

namespace gp3d {

enum class Category { Car, Pedestrian, Cyclist };

/// Role of one ground contact point. Cars use the four wheel tags; the
/// two-point categories use Left/Right. For cyclists the pair is the front
/// wheel (Left) and the rear wheel (Right).
enum class ContactTag { LeftFront, RightFront, RightRear, LeftRear, Left, Right };

const char* to_string(ContactTag tag);
std::optional<ContactTag> contact_tag_from_string(std::string_view s);

struct ContactPixel {
  ContactTag tag = ContactTag::LeftFront;
  Pixel px;
  bool visible = true;  ///< false when the pixel fell outside known image bounds
};

/// Ground contact observations of one object: the labeled contact pixels
/// and, when known, the object's 2-D box height used for the pinhole
/// height estimate.
struct ContactPointSet {
  Category category = Category::Car;
  std::vector<ContactPixel> points;  // Car: LF, RF, RR, LR; others: Left, Right
  std::optional<double> h2d;         // pixels, > 0
};

/// 3D box resting on the ground: bottom-face center, metric dimensions and
/// bird's-eye-view heading.
struct ObjectBox3D {
  CameraPoint bottom_center;
  double l = 0;    ///< length, meters
  double w = 0;    ///< width, meters
  double h = 0;    ///< height, meters
  double yaw = 0;  ///< radians in (-pi, pi], from the X axis in the X-Z plane
};

/// Ratio of wheel contact spacing to the 3D box length/width.
/// The defaults are the KITTI car averages.
struct WheelbaseRatios {
  double k_l = 0.7;
  double k_w = 0.9;
};

struct CategoryDims {
  double length = 0;
  double width = 0;
  double height = 0;
};

/// Tunables of the box deduction. The two-point categories get their
/// length/width from these averages; heights are used only when no 2-D box
/// height is available.
struct DeductionConfig {
  WheelbaseRatios ratios;
  CategoryDims pedestrian{0.8, 0.6, 1.75};
  CategoryDims cyclist{1.76, 0.6, 1.7};
  double car_fallback_height = 1.5;
};

/// Additive refinement of deduced attributes, e.g. from a learned
/// correction stage. All zero by default.
struct AttributeBias {
  double depth = 0;
  double dl = 0, dw = 0, dh = 0;
  double rot = 0;
};

/// Intersects the viewing ray of a contact pixel with the ground plane
/// given by its horizon line and the camera height. The pixel must be
/// strictly below the horizon.
CameraPoint backproject_contact(const Pixel& p, const ImageLine& horizon,
                                const CameraIntrinsics& k, double camera_height);

/// Arithmetic mean of 2 or 4 contact points; its z is the object depth.
CameraPoint bottom_center(std::span<const CameraPoint> points);

struct Dimensions {
  double l = 0, w = 0, h = 0;
};

/// Metric dimensions from camera-frame contact points. Cars invert the
/// wheelbase ratios over the four wheel points (ordered LF, RF, RR, LR);
/// two-point categories use the configured averages. Height comes from the
/// pinhole relation depth * h2d / fy, or the configured fallback when no
/// 2-D height is known.
Dimensions derive_dimensions(Category category, std::span<const CameraPoint> points,
                             std::optional<double> h2d, const WheelbaseRatios& ratios,
                             double depth, double fy, const DeductionConfig& config = {});

/// Heading of a car from its four contact points (ordered LF, RF, RR, LR)
/// and bottom center: the direction from the center to the front-pair
/// midpoint in the X-Z plane, radians in (-pi, pi].
double derive_rotation(std::span<const CameraPoint> points, const CameraPoint& center);

/// Full deduction: back-projects every contact pixel onto the ground plane
/// and derives position, dimensions and rotation.
ObjectBox3D deduce_box(const ContactPointSet& contacts, const ImageLine& horizon,
                       const CameraIntrinsics& k, double camera_height,
                       const DeductionConfig& config = {}, const AttributeBias& bias = {});

/// Wraps an angle to (-pi, pi].
double wrap_angle(double radians);

}  // namespace gp3d
