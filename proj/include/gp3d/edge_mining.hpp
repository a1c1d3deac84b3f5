#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gp3d/ground_plane.hpp"

namespace gp3d {

/// 8-bit grayscale raster, row major.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;

  GrayImage() = default;
  GrayImage(int w, int h, std::uint8_t fill = 0)
      : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {}

  std::uint8_t at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
  std::uint8_t& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
};

/// Finite line segment in image coordinates.
struct LineSegment {
  Pixel p0;
  Pixel p1;
};

/// Outcome of vertical-edge slope mining on one image.
///
/// The mined slope is trusted only when more than 3 vertical segments were
/// found and the standard deviation of their inclination angles is below
/// 3 degrees; otherwise the result is absent and the caller falls back to
/// its own horizon estimate.
struct EdgeMiningResult {
  bool present = false;      ///< gate n_v > 3 and s_v < 3 passed
  bool vertical = false;     ///< centroid is exactly 90 degrees; slope is infinite
  double k_v = 0;            ///< slope tan(centroid), valid when present and not vertical
  double centroid_deg = 0;   ///< largest-cluster centroid angle, valid when n_v > 0
  int n_v = 0;               ///< number of vertical segments found
  double s_v = 0;            ///< population std of inclination angles, degrees
};

/// Separable Gaussian blur with replicate borders. The image must be at
/// least ksize x ksize.
GrayImage gaussian_blur(const GrayImage& img, int ksize = 13, double sigma = 4.0);

/// Canny edge detector: 3x3 Sobel gradients, non-maximum suppression over
/// the four quantized directions, hysteresis on gradient magnitude.
/// Returns a 0/255 edge map of the same size.
GrayImage canny(const GrayImage& img, double low = 50.0, double high = 100.0);

/// Progressive probabilistic Hough transform over a 0/255 edge map.
/// Points are visited in a seeded pseudo-random order, so results are
/// reproducible. Every returned segment has Euclidean length of at least
/// min_line_length; gaps along a segment are bridged up to max_line_gap.
std::vector<LineSegment> hough_lines_p(const GrayImage& edges, double rho = 1.0,
                                       double theta_step = 0.017453292519943295,
                                       int threshold = 5, double min_line_length = 40.0,
                                       double max_line_gap = 10.0, std::uint32_t seed = 0);

/// Inclination angle of a segment, degrees in [0, 180): measured from the
/// u axis with v down, so vertical segments are at 90.
double inclination_deg(const LineSegment& seg);

/// Keeps the inclination angles of near-vertical segments,
/// strictly between 80 and 100 degrees.
std::vector<double> filter_vertical(std::span<const LineSegment> segments);

struct AngleCluster {
  double centroid = 0;  ///< degrees
  int size = 0;
};

/// 1-D single-linkage clustering of angles: sorted angles are split where
/// adjacent values are more than merge_radius_deg apart. Returns the most
/// populous cluster; ties go to the centroid nearest 90 degrees, then to
/// the smaller centroid.
AngleCluster cluster_angles(std::span<const double> angles_deg, double merge_radius_deg = 1.5);

/// Applies the count/spread gate and clustering to a list of vertical-edge
/// inclination angles.
EdgeMiningResult summarize_vertical_angles(std::span<const double> angles_deg);

/// Full mining pipeline: blur, Canny, probabilistic Hough, vertical filter,
/// clustering and the trust gate.
EdgeMiningResult mine_vertical_slope(const GrayImage& img);

/// Combines a mined vertical slope with a horizon line estimated elsewhere.
/// When mining is present the horizon slope becomes -1/k_v (0 for exactly
/// vertical edges); otherwise the fallback slope is kept. The intercept is
/// always taken from the fallback line.
ImageLine fuse_horizon(const EdgeMiningResult& mining, const ImageLine& fallback);

}  // namespace gp3d
