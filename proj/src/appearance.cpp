#include "glmbtrack/appearance.hpp"

#include <algorithm>
#include <cmath>

namespace glmb {

namespace {

// h in [0, 360), s and v in [0, 1]
void rgb_to_hsv(double r, double g, double b, double& h, double& s, double& v) {
  const double mx = std::max({r, g, b});
  const double mn = std::min({r, g, b});
  const double d = mx - mn;
  v = mx;
  s = mx > 0.0 ? d / mx : 0.0;
  if (d <= 0.0) {
    h = 0.0;
  } else if (mx == r) {
    h = 60.0 * std::fmod((g - b) / d, 6.0);
  } else if (mx == g) {
    h = 60.0 * ((b - r) / d + 2.0);
  } else {
    h = 60.0 * ((r - g) / d + 4.0);
  }
  if (h < 0.0) h += 360.0;
}

int channel_bin(double value, double range) {
  int idx = static_cast<int>(value / range * ColorHistogram::kBinsPerChannel);
  return std::clamp(idx, 0, ColorHistogram::kBinsPerChannel - 1);
}

}  // namespace

bool ColorHistogram::is_sentinel() const {
  for (double b : bins) {
    if (b != 0.0) return false;
  }
  return true;
}

void ColorHistogram::normalize() {
  double total = 0.0;
  for (double b : bins) total += b;
  if (total <= 0.0) return;
  for (double& b : bins) b /= total;
}

ColorHistogram ColorHistogram::single_bin(int bin) {
  ColorHistogram h;
  h.bins[static_cast<std::size_t>(bin) % kSize] = 1.0;
  return h;
}

ColorHistogram hsv_histogram(const ImageRegion& region) {
  ColorHistogram out;
  if (region.width <= 0 || region.height <= 0 || region.rgb == nullptr) {
    return out;  // sentinel
  }
  const std::int64_t n = static_cast<std::int64_t>(region.width) * region.height;
  for (std::int64_t i = 0; i < n; ++i) {
    const std::uint8_t* px = region.rgb + 3 * i;
    double h, s, v;
    rgb_to_hsv(px[0] / 255.0, px[1] / 255.0, px[2] / 255.0, h, s, v);
    const int bin = channel_bin(h, 360.0) * 64 + channel_bin(s, 1.0) * 8 + channel_bin(v, 1.0);
    out.bins[bin] += 1.0;
  }
  out.normalize();
  return out;
}

double bhattacharyya(const ColorHistogram& p, const ColorHistogram& q) {
  double bc = 0.0;
  for (int i = 0; i < ColorHistogram::kSize; ++i) {
    bc += std::sqrt(p.bins[i] * q.bins[i]);
  }
  bc = std::clamp(bc, 0.0, 1.0);
  return std::sqrt(1.0 - bc);
}

double same_size(double wa, double ha, double wb, double hb) {
  const double rw = std::min(wa, wb) / std::max(wa, wb);
  const double rh = std::min(ha, hb) / std::max(ha, hb);
  return rw * rh;
}

double same_size(const Box& a, const Box& b) {
  return same_size(a.width, a.height, b.width, b.height);
}

double same_color(const AppearanceDescriptor& a, const AppearanceDescriptor& b) {
  if (a.histogram.is_sentinel() || b.histogram.is_sentinel()) return 1.0;
  return 1.0 - bhattacharyya(a.histogram, b.histogram);
}

double direction_aware_distance(const Vec2& x, const Vec2& y, double lambda1, double lambda2) {
  const double dist2 = (x - y).squaredNorm();
  const double nx = x.norm();
  const double ny = y.norm();
  double cos_term;
  if (nx <= 0.0 || ny <= 0.0) {
    cos_term = 1.0;
  } else {
    cos_term = std::clamp(1.0 - x.dot(y) / (nx * ny), 0.0, 2.0);
  }
  return std::sqrt(lambda1 * lambda1 * dist2 + lambda2 * lambda2 * cos_term);
}

}  // namespace glmb
