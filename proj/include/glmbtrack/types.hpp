#pragma once

#include <Eigen/Dense>

#include <compare>
#include <cstdint>

namespace glmb {

using Vec2 = Eigen::Vector2d;
using Vec4 = Eigen::Vector4d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat4 = Eigen::Matrix4d;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using Mat46 = Eigen::Matrix<double, 4, 6>;

/// Kinematic state layout, fixed as [px, py, vx, vy, w, h].
/// px,py is the box center in pixels, vx,vy in pixels/frame.
namespace state {
inline constexpr int kPx = 0;
inline constexpr int kPy = 1;
inline constexpr int kVx = 2;
inline constexpr int kVy = 3;
inline constexpr int kW = 4;
inline constexpr int kH = 5;
inline constexpr int kDim = 6;
inline constexpr int kMeasDim = 4;  // observed: px, py, w, h
}  // namespace state

/// Track identity: the frame the track was born in plus an ordinal within
/// that frame's batch of births. The pair is unique for the whole run and
/// totally ordered (lexicographic).
struct TrackLabel {
  int birth_time = 0;
  int birth_index = 0;

  friend auto operator<=>(const TrackLabel&, const TrackLabel&) = default;
};

}  // namespace glmb
