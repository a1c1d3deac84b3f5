#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "gp3d/box_deduction.hpp"
#include "gp3d/ground_plane.hpp"
#include "test_util.hpp"

using namespace gp3d;
using testutil::angle_dist;
using testutil::uniform;

namespace {

const CameraIntrinsics kK{700, 700, 600, 180};

// Forward oracle: wheel contact points of a yaw-rotated car on level
// ground, constructed with explicit rotation arithmetic.
std::array<CameraPoint, 4> flat_wheels(const CameraPoint& t, double yaw, double l, double w,
                                       double kl = 0.7, double kw = 0.9) {
  const double f = 0.5 * kl * l;
  const double s = 0.5 * kw * w;
  const double c = std::cos(yaw);
  const double sn = std::sin(yaw);
  auto rot = [&](double lx, double lz) -> CameraPoint {
    return {c * lx - sn * lz + t.x, t.y, sn * lx + c * lz + t.z};
  };
  return {rot(f, s), rot(f, -s), rot(-f, -s), rot(-f, s)};  // LF, RF, RR, LR
}

ContactPointSet project_wheels(const std::array<CameraPoint, 4>& wheels, double h2d) {
  static constexpr std::array<ContactTag, 4> tags = {
      ContactTag::LeftFront, ContactTag::RightFront, ContactTag::RightRear,
      ContactTag::LeftRear};
  ContactPointSet set;
  set.category = Category::Car;
  for (int i = 0; i < 4; ++i) {
    set.points.push_back({tags[i], project(wheels[i], kK), true});
  }
  set.h2d = h2d;
  return set;
}

}  // namespace

TEST_CASE("flat-ground back-projection matches the closed form exactly") {
  const CameraPoint p = backproject_contact({600, 250}, {0, 180}, kK, 1.65);
  CHECK(p.x == 0);
  CHECK(p.y == doctest::Approx(1.65).epsilon(1e-14));
  CHECK(p.z == kK.fy * 1.65 / (250.0 - kK.cv));
  CHECK(p.z == doctest::Approx(16.5).epsilon(1e-14));
}

TEST_CASE("back-projection lands on the tilted plane") {
  const ImageLine hl{0, 156};
  const CameraPoint p = backproject_contact({600, 250}, hl, kK, 1.65);
  CHECK(p.x == 0);
  CHECK(p.y == doctest::Approx(115.5 / 94.0).epsilon(1e-12));
  CHECK(p.z == doctest::Approx(1155.0 / 94.0).epsilon(1e-12));
  // Plane of that horizon: y = -(24/700) z + 1.65.
  CHECK(std::abs(p.y - (-(24.0 / 700.0) * p.z + 1.65)) < 1e-12);
}

TEST_CASE("pixels at or above the horizon are rejected") {
  CHECK_THROWS_AS(backproject_contact({600, 150}, {0, 180}, kK, 1.65), AboveHorizon);
  CHECK_THROWS_AS(backproject_contact({600, 180}, {0, 180}, kK, 1.65), AboveHorizon);
  CHECK_THROWS_AS(backproject_contact({600, 250}, {0, 180}, kK, -1.0), NonPositiveHeight);
}

TEST_CASE("back-projected points satisfy the plane and reproject to the pixel") {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 500; ++i) {
    const ImageLine hl{uniform(rng, -0.05, 0.05), uniform(rng, 140, 220)};
    const double h = uniform(rng, 1.0, 2.5);
    const GroundPlane pl = horizon_to_plane(hl, kK, h);
    // Sample pixels safely below the horizon.
    const double u = uniform(rng, 0, 1280);
    const double v = hl.k * u + hl.b + uniform(rng, 5, 300);
    const CameraPoint p = backproject_contact({u, v}, hl, kK, h);
    CHECK(std::abs(p.y - pl.y_at(p.x, p.z)) < 1e-9);
    const Pixel re = project(p, kK);
    CHECK(std::abs(re.u - u) < 1e-9);
    CHECK(std::abs(re.v - v) < 1e-9);
  }
}

TEST_CASE("bottom center averages 2 or 4 points and rejects other arities") {
  const std::vector<CameraPoint> square{
      {0, 1.65, 19}, {2, 1.65, 19}, {2, 1.65, 21}, {0, 1.65, 21}};
  const CameraPoint c4 = bottom_center(square);
  CHECK(c4.x == doctest::Approx(1).epsilon(1e-14));
  CHECK(c4.y == doctest::Approx(1.65).epsilon(1e-14));
  CHECK(c4.z == doctest::Approx(20).epsilon(1e-14));

  const std::vector<CameraPoint> feet{{-0.2, 1.65, 8}, {0.2, 1.65, 8}};
  const CameraPoint c2 = bottom_center(feet);
  CHECK(c2.x == doctest::Approx(0).epsilon(1e-14));
  CHECK(c2.z == doctest::Approx(8).epsilon(1e-14));

  CHECK_THROWS_AS(bottom_center(std::vector<CameraPoint>{{0, 0, 1}}), WrongArity);
  CHECK_THROWS_AS(bottom_center(std::vector<CameraPoint>{{0, 0, 1}, {0, 0, 2}, {0, 0, 3}}),
                  WrongArity);

  std::mt19937_64 rng(32);
  for (int i = 0; i < 100; ++i) {
    std::vector<CameraPoint> pts;
    double sx = 0, sy = 0, sz = 0;
    for (int j = 0; j < 4; ++j) {
      pts.push_back({uniform(rng, -10, 10), uniform(rng, 0, 3), uniform(rng, 5, 60)});
      sx += pts.back().x;
      sy += pts.back().y;
      sz += pts.back().z;
    }
    const CameraPoint c = bottom_center(pts);
    CHECK(c.x == doctest::Approx(sx / 4).epsilon(1e-12));
    CHECK(c.y == doctest::Approx(sy / 4).epsilon(1e-12));
    CHECK(c.z == doctest::Approx(sz / 4).epsilon(1e-12));
  }
}

TEST_CASE("dimension derivation inverts the wheelbase ratios") {
  const std::vector<CameraPoint> wheels{
      {1.4, 1.65, 20.72}, {1.4, 1.65, 19.28}, {-1.4, 1.65, 19.28}, {-1.4, 1.65, 20.72}};
  const Dimensions d = derive_dimensions(Category::Car, wheels, 70.0, {}, 16.5, 700.0);
  CHECK(d.l == doctest::Approx(4).epsilon(1e-12));
  CHECK(d.w == doctest::Approx(1.6).epsilon(1e-12));
  CHECK(d.h == doctest::Approx(1.65).epsilon(1e-12));
}

TEST_CASE("dimension derivation is invariant under yaw rotation") {
  std::mt19937_64 rng(33);
  for (int i = 0; i < 100; ++i) {
    const double yaw = uniform(rng, -M_PI, M_PI);
    const auto wheels = flat_wheels({0, 1.65, 30}, yaw, 4.0, 1.6);
    const std::vector<CameraPoint> pts(wheels.begin(), wheels.end());
    const Dimensions d = derive_dimensions(Category::Car, pts, std::nullopt, {}, 30.0, 700.0);
    CHECK(d.l == doctest::Approx(4).epsilon(1e-9));
    CHECK(d.w == doctest::Approx(1.6).epsilon(1e-9));
  }
}

TEST_CASE("dimension derivation validates arity and depth") {
  const std::vector<CameraPoint> two{{0, 0, 5}, {1, 0, 5}};
  CHECK_THROWS_AS(derive_dimensions(Category::Car, two, 50.0, {}, 10.0, 700.0), WrongArity);
  const std::vector<CameraPoint> four(4, CameraPoint{0, 0, 5});
  CHECK_THROWS_AS(derive_dimensions(Category::Pedestrian, four, 50.0, {}, 10.0, 700.0),
                  WrongArity);
  CHECK_THROWS_AS(derive_dimensions(Category::Car, four, 50.0, {}, -1.0, 700.0),
                  NonPositiveDepth);
}

TEST_CASE("two-point categories use the configured average dimensions") {
  const std::vector<CameraPoint> feet{{-0.15, 1.65, 8}, {0.15, 1.65, 8}};
  const Dimensions d = derive_dimensions(Category::Pedestrian, feet, std::nullopt, {}, 8.0, 700.0);
  CHECK(d.l == doctest::Approx(0.8));
  CHECK(d.w == doctest::Approx(0.6));
  CHECK(d.h == doctest::Approx(1.75));
}

TEST_CASE("rotation derivation matches the construction yaw in every quadrant") {
  const auto aligned = flat_wheels({0, 1.65, 30}, 0.0, 4.0, 1.6);
  std::vector<CameraPoint> pts(aligned.begin(), aligned.end());
  CHECK(derive_rotation(pts, bottom_center(pts)) == doctest::Approx(0).epsilon(1e-12));

  for (double deg : {30.0, 150.0, -150.0, -30.0, 90.0, 179.0}) {
    const double yaw = deg * M_PI / 180.0;
    const auto wheels = flat_wheels({2, 1.65, 25}, yaw, 4.0, 1.6);
    const std::vector<CameraPoint> w(wheels.begin(), wheels.end());
    CHECK(angle_dist(derive_rotation(w, bottom_center(w)), yaw) < 1e-9);
  }
}

TEST_CASE("rotation derivation is equivariant under an extra turn") {
  std::mt19937_64 rng(34);
  for (int i = 0; i < 100; ++i) {
    const double yaw = uniform(rng, -M_PI, M_PI);
    const double delta = uniform(rng, -M_PI, M_PI);
    const auto a = flat_wheels({0, 1.65, 40}, yaw, 4.0, 1.6);
    const auto b = flat_wheels({0, 1.65, 40}, wrap_angle(yaw + delta), 4.0, 1.6);
    const std::vector<CameraPoint> pa(a.begin(), a.end());
    const std::vector<CameraPoint> pb(b.begin(), b.end());
    const double ra = derive_rotation(pa, bottom_center(pa));
    const double rb = derive_rotation(pb, bottom_center(pb));
    CHECK(angle_dist(rb, ra + delta) < 1e-9);
  }
}

TEST_CASE("rotation derivation rejects a degenerate front pair") {
  // Front midpoint at the centroid: wheels collapsed along the length axis.
  const std::vector<CameraPoint> pts{
      {0, 1.65, 21}, {0, 1.65, 19}, {0, 1.65, 19}, {0, 1.65, 21}};
  CHECK_THROWS_AS(derive_rotation(pts, bottom_center(pts)), DegenerateFront);
}

TEST_CASE("deduction round trip on level ground recovers the box") {
  const CameraPoint t{2, 1.65, 20};
  const double yaw = 30.0 * M_PI / 180.0;
  const double h2d = kK.fy * 1.5 / t.z;
  const ContactPointSet contacts = project_wheels(flat_wheels(t, yaw, 4.0, 1.6), h2d);

  const ObjectBox3D box = deduce_box(contacts, {0, 180}, kK, 1.65);
  CHECK(box.bottom_center.x == doctest::Approx(t.x).epsilon(1e-9));
  CHECK(box.bottom_center.y == doctest::Approx(t.y).epsilon(1e-9));
  CHECK(box.bottom_center.z == doctest::Approx(t.z).epsilon(1e-9));
  CHECK(box.l == doctest::Approx(4.0).epsilon(1e-9));
  CHECK(box.w == doctest::Approx(1.6).epsilon(1e-9));
  CHECK(box.h == doctest::Approx(1.5).epsilon(1e-9));
  CHECK(angle_dist(box.yaw, yaw) < 1e-9);
}

TEST_CASE("deduction round trip works on a tilted plane with its horizon") {
  // Plane with slopes (0.01, -0.0343) passing through the bottom center.
  const CameraPoint t{2, 1.65, 20};
  const double a = 0.01, b = -0.0343;
  const GroundPlane plane{a, b, t.y - a * t.x - b * t.z};
  const ImageLine hl = plane_to_horizon(plane, kK);

  // Wheels rest on the plane: the rectangle is spanned by unit plane
  // tangents whose bird's-eye directions follow the yaw.
  const double yaw = 30.0 * M_PI / 180.0;
  const double c = std::cos(yaw), s = std::sin(yaw);
  CameraPoint fwd{c, a * c + b * s, s};
  CameraPoint left{-s, -a * s + b * c, c};
  fwd = fwd * (1.0 / fwd.norm());
  left = left * (1.0 / left.norm());
  const double f = 0.5 * 0.7 * 4.0;
  const double sw = 0.5 * 0.9 * 1.6;
  const std::array<CameraPoint, 4> wheels = {t + f * fwd + sw * left, t + f * fwd - sw * left,
                                             t - f * fwd - sw * left, t - f * fwd + sw * left};
  const double h2d = kK.fy * 1.5 / t.z;
  const ContactPointSet contacts = project_wheels(wheels, h2d);

  const ObjectBox3D box = deduce_box(contacts, hl, kK, plane.c);
  CHECK(box.bottom_center.x == doctest::Approx(t.x).epsilon(1e-9));
  CHECK(box.bottom_center.y == doctest::Approx(t.y).epsilon(1e-9));
  CHECK(box.bottom_center.z == doctest::Approx(t.z).epsilon(1e-9));
  CHECK(box.l == doctest::Approx(4.0).epsilon(1e-9));
  CHECK(box.w == doctest::Approx(1.6).epsilon(1e-9));
  CHECK(box.h == doctest::Approx(1.5).epsilon(1e-9));
  CHECK(angle_dist(box.yaw, yaw) < 1e-9);
}

TEST_CASE("deducing tilted-scene pixels with a flat horizon drifts with depth") {
  // The same pixels deduced against the wrong (level) horizon: the depth
  // error grows with the true depth.
  const GroundPlane plane{0.0, std::tan(2.0 * M_PI / 180.0), 1.65};
  const ImageLine flat{0, kK.cv};
  double last_err = -1;
  for (double depth : {10.0, 20.0, 40.0, 60.0}) {
    const CameraPoint wheel{0, plane.y_at(0, depth), depth};
    const Pixel px = project(wheel, kK);
    const CameraPoint est = backproject_contact(px, flat, kK, 1.65);
    const double err = std::abs(est.z - depth);
    CHECK(err > last_err);
    last_err = err;
  }
}

TEST_CASE("mirror relabels keep the heading, front/rear swaps turn it around") {
  // The heading uses the front-pair sum, which is symmetric in its two
  // members, so swapping left and right tags cannot change it.
  const double yaw = 40.0 * M_PI / 180.0;
  const double h2d = 70;
  ContactPointSet contacts = project_wheels(flat_wheels({1, 1.65, 25}, yaw, 4.0, 1.6), h2d);
  const ObjectBox3D base = deduce_box(contacts, {0, 180}, kK, 1.65);

  ContactPointSet mirrored = contacts;
  mirrored.points[0].tag = ContactTag::RightFront;
  mirrored.points[1].tag = ContactTag::LeftFront;
  mirrored.points[2].tag = ContactTag::LeftRear;
  mirrored.points[3].tag = ContactTag::RightRear;
  const ObjectBox3D m = deduce_box(mirrored, {0, 180}, kK, 1.65);
  CHECK(angle_dist(m.yaw, base.yaw) < 1e-12);
  CHECK(m.l == doctest::Approx(base.l).epsilon(1e-12));
  CHECK(m.w == doctest::Approx(base.w).epsilon(1e-12));

  ContactPointSet reversed = contacts;
  reversed.points[0].tag = ContactTag::LeftRear;
  reversed.points[1].tag = ContactTag::RightRear;
  reversed.points[2].tag = ContactTag::RightFront;
  reversed.points[3].tag = ContactTag::LeftFront;
  const ObjectBox3D r = deduce_box(reversed, {0, 180}, kK, 1.65);
  CHECK(angle_dist(r.yaw, base.yaw + M_PI) < 1e-12);
}

TEST_CASE("deduction validates the contact set") {
  ContactPointSet contacts = project_wheels(flat_wheels({0, 1.65, 20}, 0, 4, 1.6), 70);
  contacts.points.pop_back();
  CHECK_THROWS_AS(deduce_box(contacts, {0, 180}, kK, 1.65), WrongArity);

  ContactPointSet dup = project_wheels(flat_wheels({0, 1.65, 20}, 0, 4, 1.6), 70);
  dup.points[3].tag = ContactTag::LeftFront;  // LR missing, LF duplicated
  CHECK_THROWS_AS(deduce_box(dup, {0, 180}, kK, 1.65), WrongArity);

  ContactPointSet above = project_wheels(flat_wheels({0, 1.65, 20}, 0, 4, 1.6), 70);
  above.points[0].px.v = 100;  // above the horizon row
  CHECK_THROWS_AS(deduce_box(above, {0, 180}, kK, 1.65), AboveHorizon);
}

TEST_CASE("attribute bias shifts the deduced attributes additively") {
  const ContactPointSet contacts = project_wheels(flat_wheels({0, 1.65, 20}, 0.2, 4, 1.6), 52.5);
  const ObjectBox3D base = deduce_box(contacts, {0, 180}, kK, 1.65);
  const AttributeBias bias{0.5, 0.1, -0.05, 0.2, 0.03};
  const ObjectBox3D refined = deduce_box(contacts, {0, 180}, kK, 1.65, {}, bias);
  CHECK(refined.bottom_center.z == doctest::Approx(base.bottom_center.z + 0.5).epsilon(1e-12));
  CHECK(refined.l == doctest::Approx(base.l + 0.1).epsilon(1e-12));
  CHECK(refined.w == doctest::Approx(base.w - 0.05).epsilon(1e-12));
  CHECK(refined.h == doctest::Approx(base.h + 0.2).epsilon(1e-12));
  CHECK(refined.yaw == doctest::Approx(base.yaw + 0.03).epsilon(1e-12));
}

TEST_CASE("random flat scenes round-trip through deduction") {
  std::mt19937_64 rng(35);
  for (int i = 0; i < 300; ++i) {
    const double z = uniform(rng, 5, 80);
    const CameraPoint t{uniform(rng, -0.3 * z, 0.3 * z), 1.65, z};
    const double yaw = uniform(rng, -M_PI, M_PI);
    const double l = uniform(rng, 3.5, 4.5);
    const double w = uniform(rng, 1.5, 1.8);
    const double h = uniform(rng, 1.3, 1.7);
    const ContactPointSet contacts =
        project_wheels(flat_wheels(t, yaw, l, w), kK.fy * h / t.z);
    const ObjectBox3D box = deduce_box(contacts, {0, 180}, kK, 1.65);
    CHECK(std::abs(box.bottom_center.x - t.x) < 1e-6);
    CHECK(std::abs(box.bottom_center.z - t.z) < 1e-6);
    CHECK(std::abs(box.l - l) < 1e-6);
    CHECK(std::abs(box.w - w) < 1e-6);
    CHECK(std::abs(box.h - h) < 1e-6);
    CHECK(angle_dist(box.yaw, yaw) < 1e-6);
  }
}
