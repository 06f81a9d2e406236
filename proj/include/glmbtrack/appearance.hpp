#pragma once

#include "glmbtrack/box.hpp"
#include "glmbtrack/types.hpp"

#include <cstdint>
#include <vector>

namespace glmb {

/// L1-normalized 8x8x8 HSV color histogram. An all-zero vector is the
/// sentinel for "no imagery available"; similarity checks degrade to 1.0.
struct ColorHistogram {
  static constexpr int kBinsPerChannel = 8;
  static constexpr int kSize = kBinsPerChannel * kBinsPerChannel * kBinsPerChannel;

  std::vector<double> bins;  // size kSize

  ColorHistogram() : bins(kSize, 0.0) {}

  bool is_sentinel() const;
  void normalize();

  /// Histogram with all mass in a single bin (synthetic target signatures).
  static ColorHistogram single_bin(int bin);
};

/// What a track looked like when last confirmed: color plus box size.
struct AppearanceDescriptor {
  ColorHistogram histogram;
  double box_w = 0.0;
  double box_h = 0.0;
};

/// 8-bit RGB region, row-major, 3 bytes per pixel.
struct ImageRegion {
  int width = 0;
  int height = 0;
  const std::uint8_t* rgb = nullptr;
};

/// RGB -> HSV conversion and 8x8x8 binning, L1-normalized.
/// Empty regions give the sentinel histogram.
ColorHistogram hsv_histogram(const ImageRegion& region);

/// sqrt(1 - sum_i sqrt(p_i q_i)) for normalized histograms; in [0, 1].
double bhattacharyya(const ColorHistogram& p, const ColorHistogram& q);

/// Size similarity in (0, 1]: min/max ratio of widths times heights.
double same_size(double wa, double ha, double wb, double hb);
double same_size(const Box& a, const Box& b);

/// Color similarity 1 - bhattacharyya; sentinel histograms give 1.0
/// (the check is skipped in degraded appearance mode).
double same_color(const AppearanceDescriptor& a, const AppearanceDescriptor& b);

/// Blend of Euclidean distance and cosine dissimilarity:
/// sqrt(l1^2 |x-y|^2 + l2^2 (1 - x.y/(|x||y|))).
/// A zero-norm input makes the cosine term 1 (maximal dissimilarity).
double direction_aware_distance(const Vec2& x, const Vec2& y, double lambda1, double lambda2);

}  // namespace glmb
