#include "gp3d/edge_mining.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

namespace gp3d {

namespace {

constexpr double kPi = std::numbers::pi;

int clampi(int v, int lo, int hi) { return v < lo ? lo : (v > hi ? hi : v); }

std::vector<double> gaussian_kernel(int ksize, double sigma) {
  const int r = ksize / 2;
  std::vector<double> k(ksize);
  double sum = 0;
  for (int i = 0; i < ksize; ++i) {
    const double d = i - r;
    k[i] = std::exp(-d * d / (2.0 * sigma * sigma));
    sum += k[i];
  }
  for (double& v : k) v /= sum;
  return k;
}

}  // namespace

GrayImage gaussian_blur(const GrayImage& img, int ksize, double sigma) {
  if (img.width < ksize || img.height < ksize) {
    throw ImageTooSmall("blur needs at least " + std::to_string(ksize) + "x" +
                        std::to_string(ksize) + ", got " + std::to_string(img.width) + "x" +
                        std::to_string(img.height));
  }
  const int r = ksize / 2;
  const std::vector<double> k = gaussian_kernel(ksize, sigma);

  // Horizontal pass, replicate border, then vertical pass.
  std::vector<double> tmp(static_cast<std::size_t>(img.width) * img.height);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      double acc = 0;
      for (int i = -r; i <= r; ++i) {
        acc += k[i + r] * img.at(clampi(x + i, 0, img.width - 1), y);
      }
      tmp[static_cast<std::size_t>(y) * img.width + x] = acc;
    }
  }
  GrayImage out(img.width, img.height);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      double acc = 0;
      for (int i = -r; i <= r; ++i) {
        acc += k[i + r] * tmp[static_cast<std::size_t>(clampi(y + i, 0, img.height - 1)) * img.width + x];
      }
      out.at(x, y) = static_cast<std::uint8_t>(clampi(static_cast<int>(std::lround(acc)), 0, 255));
    }
  }
  return out;
}

GrayImage canny(const GrayImage& img, double low, double high) {
  if (img.width < 3 || img.height < 3) {
    throw ImageTooSmall("canny needs at least 3x3, got " + std::to_string(img.width) + "x" +
                        std::to_string(img.height));
  }
  const int w = img.width;
  const int h = img.height;
  const std::size_t n = static_cast<std::size_t>(w) * h;

  // 3x3 Sobel with replicate borders.
  std::vector<double> mag(n, 0.0);
  std::vector<std::uint8_t> dir(n, 0);  // quantized gradient direction: 0, 45, 90, 135
  for (int y = 0; y < h; ++y) {
    const int ym = clampi(y - 1, 0, h - 1);
    const int yp = clampi(y + 1, 0, h - 1);
    for (int x = 0; x < w; ++x) {
      const int xm = clampi(x - 1, 0, w - 1);
      const int xp = clampi(x + 1, 0, w - 1);
      const int gx = (img.at(xp, ym) + 2 * img.at(xp, y) + img.at(xp, yp)) -
                     (img.at(xm, ym) + 2 * img.at(xm, y) + img.at(xm, yp));
      const int gy = (img.at(xm, yp) + 2 * img.at(x, yp) + img.at(xp, yp)) -
                     (img.at(xm, ym) + 2 * img.at(x, ym) + img.at(xp, ym));
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      mag[i] = std::hypot(static_cast<double>(gx), static_cast<double>(gy));
      double ang = std::atan2(static_cast<double>(gy), static_cast<double>(gx)) * 180.0 / kPi;
      if (ang < 0) ang += 180.0;
      if (ang >= 157.5) ang -= 180.0;
      dir[i] = static_cast<std::uint8_t>(((static_cast<int>(ang + 22.5)) / 45) % 4);
    }
  }

  // Non-maximum suppression along the gradient direction. Ties keep the
  // pixel whose forward neighbor is not larger, so a two-wide plateau
  // thins to one pixel.
  auto mag_at = [&](int x, int y) -> double {
    if (x < 0 || x >= w || y < 0 || y >= h) return 0.0;
    return mag[static_cast<std::size_t>(y) * w + x];
  };
  static constexpr int kDx[4] = {1, 1, 0, -1};  // 0, 45, 90, 135 degrees
  static constexpr int kDy[4] = {0, 1, 1, 1};
  std::vector<std::uint8_t> keep(n, 0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      if (mag[i] <= 0) continue;
      const int d = dir[i];
      const double fwd = mag_at(x + kDx[d], y + kDy[d]);
      const double bwd = mag_at(x - kDx[d], y - kDy[d]);
      if (mag[i] > bwd && mag[i] >= fwd) keep[i] = 1;
    }
  }

  // Hysteresis: grow 8-connected from strong pixels over weak ones.
  GrayImage out(w, h, 0);
  std::vector<std::size_t> stack;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      if (keep[i] && mag[i] > high && out.data[i] == 0) {
        out.data[i] = 255;
        stack.push_back(i);
        while (!stack.empty()) {
          const std::size_t j = stack.back();
          stack.pop_back();
          const int jx = static_cast<int>(j % w);
          const int jy = static_cast<int>(j / w);
          for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
              const int nx = jx + dx;
              const int ny = jy + dy;
              if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
              const std::size_t ni = static_cast<std::size_t>(ny) * w + nx;
              if (out.data[ni] == 0 && keep[ni] && mag[ni] > low) {
                out.data[ni] = 255;
                stack.push_back(ni);
              }
            }
          }
        }
      }
    }
  }
  return out;
}

std::vector<LineSegment> hough_lines_p(const GrayImage& edges, double rho, double theta_step,
                                       int threshold, double min_line_length,
                                       double max_line_gap, std::uint32_t seed) {
  const int w = edges.width;
  const int h = edges.height;
  const int numangle = std::max(1, static_cast<int>(std::lround(kPi / theta_step)));
  const int numrho = static_cast<int>(std::lround(((w + h) * 2 + 1) / rho));
  const double irho = 1.0 / rho;

  std::vector<int> accum(static_cast<std::size_t>(numangle) * numrho, 0);
  std::vector<double> tab_sin(numangle), tab_cos(numangle);
  for (int n = 0; n < numangle; ++n) {
    tab_sin[n] = std::sin(n * theta_step) * irho;
    tab_cos[n] = std::cos(n * theta_step) * irho;
  }

  std::vector<std::uint8_t> mask(static_cast<std::size_t>(w) * h, 0);
  struct Pt { int x, y; };
  std::vector<Pt> points;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (edges.at(x, y)) {
        mask[static_cast<std::size_t>(y) * w + x] = 1;
        points.push_back({x, y});
      }
    }
  }

  std::mt19937 rng(seed);
  std::vector<LineSegment> lines;
  const int shift = 16;
  const int gap_limit = static_cast<int>(max_line_gap);

  for (std::size_t count = points.size(); count > 0; --count) {
    const std::size_t idx = rng() % count;
    const Pt pt = points[idx];
    points[idx] = points[count - 1];

    if (!mask[static_cast<std::size_t>(pt.y) * w + pt.x]) continue;

    // Vote across all angles; remember the best bin.
    int max_val = threshold - 1;
    int max_n = 0;
    for (int n = 0; n < numangle; ++n) {
      int r = static_cast<int>(std::lround(pt.x * tab_cos[n] + pt.y * tab_sin[n]));
      r += (numrho - 1) / 2;
      const int val = ++accum[static_cast<std::size_t>(n) * numrho + r];
      if (val > max_val) {
        max_val = val;
        max_n = n;
      }
    }
    if (max_val < threshold) continue;

    // Walk the line of the winning angle in both directions with
    // fixed-point stepping, bridging gaps up to the limit.
    const double a = -tab_sin[max_n] * rho;  // line direction
    const double b = tab_cos[max_n] * rho;
    int x0 = pt.x;
    int y0 = pt.y;
    int dx0, dy0;
    bool xflag;
    if (std::abs(a) > std::abs(b)) {
      xflag = true;
      dx0 = a > 0 ? 1 : -1;
      dy0 = static_cast<int>(std::lround(b * (1 << shift) / std::abs(a)));
      y0 = (y0 << shift) + (1 << (shift - 1));
    } else {
      xflag = false;
      dy0 = b > 0 ? 1 : -1;
      dx0 = static_cast<int>(std::lround(a * (1 << shift) / std::abs(b)));
      x0 = (x0 << shift) + (1 << (shift - 1));
    }

    Pt line_end[2] = {{pt.x, pt.y}, {pt.x, pt.y}};
    for (int k = 0; k < 2; ++k) {
      int gap = 0;
      int x = x0, y = y0;
      int dx = dx0, dy = dy0;
      if (k > 0) {
        dx = -dx;
        dy = -dy;
      }
      for (;; x += dx, y += dy) {
        const int i1 = xflag ? x : (x >> shift);
        const int j1 = xflag ? (y >> shift) : y;
        if (i1 < 0 || i1 >= w || j1 < 0 || j1 >= h) break;
        if (mask[static_cast<std::size_t>(j1) * w + i1]) {
          gap = 0;
          line_end[k] = {i1, j1};
        } else if (++gap > gap_limit) {
          break;
        }
      }
    }

    const double len = std::hypot(static_cast<double>(line_end[1].x - line_end[0].x),
                                  static_cast<double>(line_end[1].y - line_end[0].y));
    const bool good_line = len >= min_line_length;

    // Second walk: release the pixels of this line. Votes are removed only
    // for accepted lines; rejected short runs are just consumed.
    for (int k = 0; k < 2; ++k) {
      int x = x0, y = y0;
      int dx = dx0, dy = dy0;
      if (k > 0) {
        dx = -dx;
        dy = -dy;
      }
      for (;; x += dx, y += dy) {
        const int i1 = xflag ? x : (x >> shift);
        const int j1 = xflag ? (y >> shift) : y;
        if (i1 < 0 || i1 >= w || j1 < 0 || j1 >= h) break;
        std::uint8_t& m = mask[static_cast<std::size_t>(j1) * w + i1];
        if (m) {
          if (good_line) {
            for (int n = 0; n < numangle; ++n) {
              int r = static_cast<int>(std::lround(i1 * tab_cos[n] + j1 * tab_sin[n]));
              r += (numrho - 1) / 2;
              --accum[static_cast<std::size_t>(n) * numrho + r];
            }
          }
          m = 0;
        }
        if (i1 == line_end[k].x && j1 == line_end[k].y) break;
      }
    }

    if (good_line) {
      lines.push_back({{static_cast<double>(line_end[0].x), static_cast<double>(line_end[0].y)},
                       {static_cast<double>(line_end[1].x), static_cast<double>(line_end[1].y)}});
    }
  }
  return lines;
}

double inclination_deg(const LineSegment& seg) {
  double ang = std::atan2(seg.p1.v - seg.p0.v, seg.p1.u - seg.p0.u) * 180.0 / kPi;
  if (ang < 0) ang += 180.0;
  if (ang >= 180.0) ang -= 180.0;
  return ang;
}

std::vector<double> filter_vertical(std::span<const LineSegment> segments) {
  std::vector<double> angles;
  for (const LineSegment& s : segments) {
    const double a = inclination_deg(s);
    if (a > 80.0 && a < 100.0) angles.push_back(a);
  }
  return angles;
}

AngleCluster cluster_angles(std::span<const double> angles_deg, double merge_radius_deg) {
  if (angles_deg.empty()) throw EmptyInput("cluster_angles: no angles");
  std::vector<double> sorted(angles_deg.begin(), angles_deg.end());
  std::sort(sorted.begin(), sorted.end());

  AngleCluster best{0, 0};
  std::size_t run_begin = 0;
  auto flush = [&](std::size_t end) {
    const int size = static_cast<int>(end - run_begin);
    double sum = 0;
    for (std::size_t i = run_begin; i < end; ++i) sum += sorted[i];
    const double centroid = sum / size;
    const bool better =
        size > best.size ||
        (size == best.size && (std::abs(centroid - 90.0) < std::abs(best.centroid - 90.0) ||
                               (std::abs(centroid - 90.0) == std::abs(best.centroid - 90.0) &&
                                centroid < best.centroid)));
    if (better) best = {centroid, size};
  };
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i] - sorted[i - 1] > merge_radius_deg) {
      flush(i);
      run_begin = i;
    }
  }
  flush(sorted.size());
  return best;
}

EdgeMiningResult summarize_vertical_angles(std::span<const double> angles_deg) {
  EdgeMiningResult res;
  res.n_v = static_cast<int>(angles_deg.size());
  if (res.n_v == 0) return res;

  double mean = 0;
  for (double a : angles_deg) mean += a;
  mean /= res.n_v;
  double var = 0;
  for (double a : angles_deg) var += (a - mean) * (a - mean);
  res.s_v = std::sqrt(var / res.n_v);

  const AngleCluster cluster = cluster_angles(angles_deg);
  res.centroid_deg = cluster.centroid;
  if (res.n_v > 3 && res.s_v < 3.0) {
    res.present = true;
    if (std::abs(cluster.centroid - 90.0) < 1e-12) {
      res.vertical = true;
    } else {
      res.k_v = std::tan(cluster.centroid * kPi / 180.0);
    }
  }
  return res;
}

EdgeMiningResult mine_vertical_slope(const GrayImage& img) {
  const GrayImage blurred = gaussian_blur(img);
  const GrayImage edges = canny(blurred);
  const std::vector<LineSegment> segments = hough_lines_p(edges);
  const std::vector<double> angles = filter_vertical(segments);
  return summarize_vertical_angles(angles);
}

ImageLine fuse_horizon(const EdgeMiningResult& mining, const ImageLine& fallback) {
  if (!mining.present) return fallback;
  const double kh = mining.vertical ? 0.0 : -1.0 / mining.k_v;
  return {kh, fallback.b};
}

}  // namespace gp3d
