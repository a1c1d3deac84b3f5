#include "gp3d/pseudo_labels.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace gp3d {

namespace {

bool inside(const Pixel& p, const ImageSize& size) {
  return p.u >= 0 && p.u < size.width && p.v >= 0 && p.v < size.height;
}

ContactPixel project_tagged(ContactTag tag, const CameraPoint& pc, const CameraIntrinsics& k,
                            const std::optional<ImageSize>& bounds) {
  if (!(pc.z > 0)) {
    throw BehindCamera(std::string("contact point ") + to_string(tag) +
                       " is behind the camera, z = " + std::to_string(pc.z));
  }
  ContactPixel out;
  out.tag = tag;
  out.px = project(pc, k);
  out.visible = !bounds || inside(out.px, *bounds);
  return out;
}

}  // namespace

LocalContactPoints local_contact_points(double length, double width,
                                        const WheelbaseRatios& ratios) {
  if (!(length > 0) || !(width > 0)) {
    throw NonPositiveDimension("box length/width must be positive, got l=" +
                               std::to_string(length) + " w=" + std::to_string(width));
  }
  const double f = 0.5 * ratios.k_l * length;  // front/rear wheel offset
  const double s = 0.5 * ratios.k_w * width;   // left/right wheel offset
  return {{f, 0, s}, {f, 0, -s}, {-f, 0, -s}, {-f, 0, s}};
}

CameraPoint local_to_camera(const CameraPoint& local, const PoseRT& pose) {
  const double c = std::cos(pose.yaw);
  const double s = std::sin(pose.yaw);
  return {c * local.x - s * local.z + pose.t.x,
          local.y + pose.t.y,
          s * local.x + c * local.z + pose.t.z};
}

ContactPointSet contact_pixel_labels(const ObjectBox3D& box, const WheelbaseRatios& ratios,
                                     const CameraIntrinsics& k,
                                     std::optional<ImageSize> bounds) {
  const LocalContactPoints local = local_contact_points(box.l, box.w, ratios);
  const PoseRT pose{box.yaw, box.bottom_center};

  ContactPointSet set;
  set.category = Category::Car;
  set.points.push_back(project_tagged(ContactTag::LeftFront, local_to_camera(local.lf, pose), k, bounds));
  set.points.push_back(project_tagged(ContactTag::RightFront, local_to_camera(local.rf, pose), k, bounds));
  set.points.push_back(project_tagged(ContactTag::RightRear, local_to_camera(local.rr, pose), k, bounds));
  set.points.push_back(project_tagged(ContactTag::LeftRear, local_to_camera(local.lr, pose), k, bounds));
  if (box.bottom_center.z > 0) set.h2d = k.fy * box.h / box.bottom_center.z;
  return set;
}

ContactPointSet pedestrian_cyclist_labels(const ObjectBox3D& box, Category category,
                                          const CameraIntrinsics& k,
                                          const TwoPointGeometry& geometry,
                                          std::optional<ImageSize> bounds) {
  if (category == Category::Car) {
    throw WrongArity("two-point labels are for pedestrians and cyclists");
  }
  CameraPoint first_local, second_local;
  if (category == Category::Pedestrian) {
    first_local = {0, 0, geometry.pedestrian_foot_offset};    // left foot
    second_local = {0, 0, -geometry.pedestrian_foot_offset};  // right foot
  } else {
    const double off = geometry.cyclist_wheel_ratio * box.l;
    first_local = {off, 0, 0};    // front wheel
    second_local = {-off, 0, 0};  // rear wheel
  }
  const PoseRT pose{box.yaw, box.bottom_center};

  ContactPointSet set;
  set.category = category;
  set.points.push_back(project_tagged(ContactTag::Left, local_to_camera(first_local, pose), k, bounds));
  set.points.push_back(project_tagged(ContactTag::Right, local_to_camera(second_local, pose), k, bounds));
  if (box.bottom_center.z > 0) set.h2d = k.fy * box.h / box.bottom_center.z;
  return set;
}

ImageLine horizon_pseudo_label(std::span<const ObjectBox3D> boxes, const CameraIntrinsics& k,
                               int min_points) {
  if (static_cast<int>(boxes.size()) < min_points) {
    throw DegenerateInput("horizon pseudo label needs at least " + std::to_string(min_points) +
                          " boxes, got " + std::to_string(boxes.size()));
  }
  std::vector<CameraPoint> centers;
  centers.reserve(boxes.size());
  for (const ObjectBox3D& b : boxes) centers.push_back(b.bottom_center);
  return plane_to_horizon(fit_plane_lsq(centers), k);
}

}  // namespace gp3d
