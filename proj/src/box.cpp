#include "glmbtrack/box.hpp"

#include <algorithm>
#include <stdexcept>

namespace glmb {

double intersection_area(const Box& a, const Box& b) {
  const double w = std::min(a.right(), b.right()) - std::max(a.left, b.left);
  const double h = std::min(a.bottom(), b.bottom()) - std::max(a.top, b.top);
  if (w <= 0.0 || h <= 0.0) return 0.0;
  return w * h;
}

double iou(const Box& a, const Box& b) {
  const double inter = intersection_area(a, b);
  const double uni = a.area() + b.area() - inter;
  if (uni <= 0.0) return 0.0;
  return inter / uni;
}

double ioa(const Box& a, const Box& b) {
  if (a.area() <= 0.0) {
    throw std::invalid_argument("ioa: reference box has zero area");
  }
  return intersection_area(a, b) / a.area();
}

Vec4 measurement_from_box(const Box& b) {
  return Vec4(b.cx(), b.cy(), b.width, b.height);
}

Box box_from_measurement(const Vec4& z) {
  return Box::from_center(z(0), z(1), z(2), z(3));
}

Box box_from_state(const Vec6& x) {
  return Box::from_center(x(state::kPx), x(state::kPy), x(state::kW), x(state::kH));
}

}  // namespace glmb
