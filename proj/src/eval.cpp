#include "gp3d/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <random>

#include "gp3d/pseudo_labels.hpp"

namespace gp3d {

namespace {

constexpr double kPi = std::numbers::pi;

int depth_bucket(double depth) {
  if (depth < 20.0) return 0;
  if (depth < 40.0) return 1;
  return 2;
}

std::string fmt9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

using MatchKey = std::pair<std::string, std::string>;

// Pairs rows by (frame, id); unmatched rows on either side are counted.
template <typename Fn>
void for_matches(std::span<const ObjectRecord> pred, std::span<const ObjectRecord> gt,
                 std::int64_t& unmatched_pred, std::int64_t& unmatched_gt, Fn&& fn) {
  std::map<MatchKey, const ObjectRecord*> gt_by_key;
  for (const ObjectRecord& g : gt) gt_by_key[{g.frame, g.id}] = &g;

  std::int64_t matched = 0;
  for (const ObjectRecord& p : pred) {
    const auto it = gt_by_key.find({p.frame, p.id});
    if (it == gt_by_key.end() || it->second == nullptr) {
      ++unmatched_pred;
      continue;
    }
    fn(p, *it->second);
    it->second = nullptr;  // consume
    ++matched;
  }
  unmatched_gt = static_cast<std::int64_t>(gt.size()) - matched;
}

}  // namespace

DepthBucketReport eval_depth_buckets(std::span<const ObjectRecord> pred,
                                     std::span<const ObjectRecord> gt) {
  DepthBucketReport report;
  std::array<double, 3> sums{};
  for_matches(pred, gt, report.unmatched_pred, report.unmatched_gt,
              [&](const ObjectRecord& p, const ObjectRecord& g) {
                const int b = depth_bucket(g.depth);
                sums[b] += std::abs(p.depth - g.depth);
                ++report.count[b];
              });
  std::int64_t total = 0;
  for (int b = 0; b < 3; ++b) {
    total += report.count[b];
    report.mean_abs_error[b] = report.count[b] ? sums[b] / report.count[b] : 0.0;
  }
  if (total == 0) throw EmptyInput("no prediction/ground-truth pairs matched");
  return report;
}

DimErrorReport eval_dim_errors(std::span<const ObjectRecord> pred,
                               std::span<const ObjectRecord> gt) {
  DimErrorReport report;
  double sd = 0, sh = 0, sl = 0, sw = 0;
  for_matches(pred, gt, report.unmatched_pred, report.unmatched_gt,
              [&](const ObjectRecord& p, const ObjectRecord& g) {
                sd += std::abs(p.depth - g.depth);
                sh += std::abs(p.height - g.height);
                sl += std::abs(p.length - g.length);
                sw += std::abs(p.width - g.width);
                ++report.count;
              });
  if (report.count == 0) throw EmptyInput("no prediction/ground-truth pairs matched");
  report.depth = sd / report.count;
  report.height = sh / report.count;
  report.length = sl / report.count;
  report.width = sw / report.count;
  return report;
}

std::vector<TiltSweepRow> tilt_sweep(std::span<const double> pitches_deg,
                                     std::span<const double> depths_m,
                                     const CameraIntrinsics& k, double camera_height) {
  for (double p : pitches_deg) {
    if (std::abs(p) > 10.0) {
      throw Error("tilt sweep pitch must be within +-10 degrees, got " + std::to_string(p));
    }
  }
  const ImageLine flat{0.0, k.cv};
  std::vector<TiltSweepRow> rows;
  rows.reserve(pitches_deg.size() * depths_m.size());
  for (double pitch : pitches_deg) {
    const GroundPlane plane{0.0, std::tan(pitch * kPi / 180.0), camera_height};
    const ImageLine horizon = plane_to_horizon(plane, k);
    for (double depth : depths_m) {
      const CameraPoint truth{0.0, plane.y_at(0.0, depth), depth};
      const Pixel px = project(truth, k);
      const CameraPoint fixed_est = backproject_contact(px, flat, k, camera_height);
      const CameraPoint dyn_est = backproject_contact(px, horizon, k, camera_height);
      rows.push_back({pitch, depth, std::abs(fixed_est.z - truth.z),
                      std::abs(dyn_est.z - truth.z)});
    }
  }
  return rows;
}

std::array<CameraPoint, 4> contact_points_on_plane(const ObjectBox3D& box,
                                                   const GroundPlane& plane,
                                                   const WheelbaseRatios& ratios) {
  const double c = std::cos(box.yaw);
  const double s = std::sin(box.yaw);
  // Unit plane tangents with bird's-eye headings along and across the yaw.
  CameraPoint fwd{c, plane.a * c + plane.b * s, s};
  CameraPoint left{-s, -plane.a * s + plane.b * c, c};
  fwd = fwd * (1.0 / fwd.norm());
  left = left * (1.0 / left.norm());

  const double f = 0.5 * ratios.k_l * box.l;
  const double t = 0.5 * ratios.k_w * box.w;
  const CameraPoint& bc = box.bottom_center;
  return {bc + f * fwd + t * left,    // LF
          bc + f * fwd - t * left,    // RF
          bc - f * fwd - t * left,    // RR
          bc - f * fwd + t * left};   // LR
}

namespace {

// Platform-independent helpers on top of the mt19937_64 stream.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

double gaussian(std::mt19937_64& rng) {
  double u1 = uniform01(rng);
  while (u1 <= 0) u1 = uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

}  // namespace

SynthScene synth_scene(std::uint64_t seed, int n_objects, const GroundPlane& plane,
                       const CameraIntrinsics& k, double noise_px) {
  if (n_objects < 0) throw Error("object count must be non-negative");
  if (std::abs(std::atan(plane.a)) > 10.0 * kPi / 180.0 ||
      std::abs(std::atan(plane.b)) > 10.0 * kPi / 180.0) {
    throw ImplausiblePlane("synthetic plane tilt must stay within +-10 degrees");
  }

  std::mt19937_64 rng(seed);
  SynthScene scene;
  scene.horizon = plane_to_horizon(plane, k);

  static constexpr std::array<ContactTag, 4> tags = {
      ContactTag::LeftFront, ContactTag::RightFront, ContactTag::RightRear,
      ContactTag::LeftRear};

  for (int i = 0; i < n_objects; ++i) {
    ObjectBox3D box;
    const double z = uniform(rng, 5.0, 80.0);
    const double x = uniform(rng, -0.3 * z, 0.3 * z);
    box.bottom_center = {x, plane.y_at(x, z), z};
    box.l = uniform(rng, 3.6, 4.6);
    box.w = uniform(rng, 1.5, 1.8);
    box.h = uniform(rng, 1.3, 1.7);
    box.yaw = wrap_angle(uniform(rng, -kPi, kPi));

    const std::array<CameraPoint, 4> wheels = contact_points_on_plane(box, plane, {});
    ContactPointSet contacts;
    contacts.category = Category::Car;
    for (int w = 0; w < 4; ++w) {
      ContactPixel cp;
      cp.tag = tags[w];
      cp.px = project(wheels[w], k);
      if (noise_px > 0) {
        cp.px.u += noise_px * gaussian(rng);
        cp.px.v += noise_px * gaussian(rng);
      }
      contacts.points.push_back(cp);
    }
    contacts.h2d = k.fy * box.h / box.bottom_center.z;

    scene.boxes.push_back(box);
    scene.contacts.push_back(std::move(contacts));
  }
  return scene;
}

std::vector<ObjectRecord> to_records(std::string_view frame_id,
                                     std::span<const ObjectBox3D> boxes) {
  std::vector<ObjectRecord> out;
  out.reserve(boxes.size());
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    const ObjectBox3D& b = boxes[i];
    out.push_back({std::string(frame_id), std::to_string(i), "Car", b.bottom_center.z, b.h, b.l,
                   b.w, b.bottom_center.x, b.bottom_center.y, b.yaw});
  }
  return out;
}

std::string records_to_csv(std::span<const ObjectRecord> records) {
  std::string out = "frame,id,category,depth,height,length,width,x,y,yaw\n";
  for (const ObjectRecord& r : records) {
    out += r.frame + ',' + r.id + ',' + r.category + ',' + fmt9(r.depth) + ',' + fmt9(r.height) +
           ',' + fmt9(r.length) + ',' + fmt9(r.width) + ',' + fmt9(r.x) + ',' + fmt9(r.y) + ',' +
           fmt9(r.yaw) + '\n';
  }
  return out;
}

namespace {

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.emplace_back(line.substr(start));
      break;
    }
    out.emplace_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  for (std::string& s : out) {
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.pop_back();
  }
  return out;
}

double csv_double(const std::string& tok, int line, int field) {
  try {
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ParseError("expected a number, got '" + tok + "'", line, field);
  }
}

}  // namespace

std::vector<ObjectRecord> records_from_csv(std::string_view text) {
  std::vector<ObjectRecord> out;
  int line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    const std::string_view line = text.substr(start, nl - start);
    start = nl + 1;
    ++line_no;
    if (line.empty() || line == "\r") continue;
    if (line_no == 1) {
      if (!line.starts_with("frame,")) {
        throw ParseError("missing CSV header row", 1, 1);
      }
      continue;
    }
    const auto tok = split_csv_line(line);
    if (tok.size() != 10) {
      throw ParseError("expected 10 CSV columns, got " + std::to_string(tok.size()), line_no,
                       static_cast<int>(tok.size()) + 1);
    }
    ObjectRecord r;
    r.frame = tok[0];
    r.id = tok[1];
    r.category = tok[2];
    r.depth = csv_double(tok[3], line_no, 4);
    r.height = csv_double(tok[4], line_no, 5);
    r.length = csv_double(tok[5], line_no, 6);
    r.width = csv_double(tok[6], line_no, 7);
    r.x = csv_double(tok[7], line_no, 8);
    r.y = csv_double(tok[8], line_no, 9);
    r.yaw = csv_double(tok[9], line_no, 10);
    out.push_back(std::move(r));
  }
  return out;
}

std::string depth_report_to_csv(const DepthBucketReport& report) {
  std::string out = "depth_lo,depth_hi,count,mean_abs_error\n";
  static constexpr const char* lo[3] = {"0", "20", "40"};
  static constexpr const char* hi[3] = {"20", "40", "inf"};
  for (int b = 0; b < 3; ++b) {
    out += std::string(lo[b]) + ',' + hi[b] + ',' + std::to_string(report.count[b]) + ',' +
           fmt9(report.mean_abs_error[b]) + '\n';
  }
  return out;
}

std::string dim_report_to_csv(const DimErrorReport& report) {
  return "count,depth_l1,height_l1,length_l1,width_l1\n" + std::to_string(report.count) + ',' +
         fmt9(report.depth) + ',' + fmt9(report.height) + ',' + fmt9(report.length) + ',' +
         fmt9(report.width) + '\n';
}

std::string tilt_sweep_to_csv(std::span<const TiltSweepRow> rows) {
  std::string out = "pitch_deg,depth_m,fixed_error_m,dynamic_error_m\n";
  for (const TiltSweepRow& r : rows) {
    out += fmt9(r.pitch_deg) + ',' + fmt9(r.depth_m) + ',' + fmt9(r.fixed_error_m) + ',' +
           fmt9(r.dynamic_error_m) + '\n';
  }
  return out;
}

}  // namespace gp3d
