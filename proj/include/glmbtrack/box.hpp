#pragma once

#include "glmbtrack/types.hpp"

namespace glmb {

/// Axis-aligned bounding box, MOTChallenge convention: top-left corner plus
/// size, all in pixels.
struct Box {
  double left = 0.0;
  double top = 0.0;
  double width = 0.0;
  double height = 0.0;

  double right() const { return left + width; }
  double bottom() const { return top + height; }
  double cx() const { return left + width / 2.0; }
  double cy() const { return top + height / 2.0; }
  double area() const { return width * height; }

  static Box from_center(double cx, double cy, double w, double h) {
    return Box{cx - w / 2.0, cy - h / 2.0, w, h};
  }

  friend bool operator==(const Box&, const Box&) = default;
};

double intersection_area(const Box& a, const Box& b);

/// Intersection over union. Degenerate (zero-area) inputs give 0.
double iou(const Box& a, const Box& b);

/// Intersection over the area of `a` (asymmetric: how much of `a` is
/// covered by `b`). Throws std::invalid_argument when area(a) == 0.
double ioa(const Box& a, const Box& b);

/// Measurement vector (cx, cy, w, h) for a detection box.
Vec4 measurement_from_box(const Box& b);

Box box_from_measurement(const Vec4& z);

/// Box described by a kinematic state (center + size components).
Box box_from_state(const Vec6& x);

}  // namespace glmb
