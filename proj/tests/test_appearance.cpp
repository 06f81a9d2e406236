#include "glmbtrack/appearance.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace glmb;

namespace {

// Solid-color RGB buffer.
std::vector<std::uint8_t> solid(int w, int h, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  std::vector<std::uint8_t> px(static_cast<std::size_t>(w) * h * 3);
  for (std::size_t i = 0; i < px.size(); i += 3) {
    px[i] = r;
    px[i + 1] = g;
    px[i + 2] = b;
  }
  return px;
}

ColorHistogram random_histogram(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ColorHistogram h;
  for (double& b : h.bins) b = u(rng);
  h.normalize();
  return h;
}

}  // namespace

TEST_CASE("hsv_histogram of a uniform region is a single bin") {
  const auto px = solid(8, 8, 255, 0, 0);
  const auto h = hsv_histogram(ImageRegion{8, 8, px.data()});
  int nonzero = 0;
  for (double b : h.bins) {
    if (b > 0.0) {
      ++nonzero;
      CHECK(b == doctest::Approx(1.0));
    }
  }
  CHECK(nonzero == 1);
}

TEST_CASE("hsv_histogram of a half/half region splits into two bins") {
  auto px = solid(8, 8, 255, 0, 0);
  // bottom half green
  for (std::size_t i = px.size() / 2; i < px.size(); i += 3) {
    px[i] = 0;
    px[i + 1] = 255;
  }
  const auto h = hsv_histogram(ImageRegion{8, 8, px.data()});
  std::vector<double> weights;
  for (double b : h.bins) {
    if (b > 0.0) weights.push_back(b);
  }
  REQUIRE(weights.size() == 2);
  CHECK(weights[0] == doctest::Approx(0.5));
  CHECK(weights[1] == doctest::Approx(0.5));
}

TEST_CASE("hsv_histogram is deterministic and empty regions give the sentinel") {
  const auto px = solid(5, 7, 12, 200, 99);
  const auto a = hsv_histogram(ImageRegion{5, 7, px.data()});
  const auto b = hsv_histogram(ImageRegion{5, 7, px.data()});
  CHECK(bhattacharyya(a, b) == doctest::Approx(0.0));
  CHECK(hsv_histogram(ImageRegion{0, 0, nullptr}).is_sentinel());
}

TEST_CASE("bhattacharyya on identical, disjoint and half-overlapping histograms") {
  ColorHistogram p = ColorHistogram::single_bin(3);
  CHECK(bhattacharyya(p, p) == doctest::Approx(0.0));
  CHECK(bhattacharyya(p, ColorHistogram::single_bin(9)) == doctest::Approx(1.0));

  ColorHistogram two;
  two.bins[0] = 0.5;
  two.bins[1] = 0.5;
  ColorHistogram one = ColorHistogram::single_bin(0);
  // sqrt(1 - sqrt(0.5))
  CHECK(bhattacharyya(two, one) == doctest::Approx(0.5411961).epsilon(1e-6));
}

TEST_CASE("bhattacharyya is symmetric, bounded and zero only at equality") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const auto p = random_histogram(rng);
    const auto q = random_histogram(rng);
    const double d = bhattacharyya(p, q);
    CHECK(d == doctest::Approx(bhattacharyya(q, p)));
    CHECK(d >= 0.0);
    CHECK(d <= 1.0);
    CHECK(d > 0.0);  // independent random draws differ
    CHECK(bhattacharyya(p, p) == doctest::Approx(0.0));
  }
}

TEST_CASE("same_size ratio products") {
  CHECK(same_size(10, 20, 10, 20) == doctest::Approx(1.0));
  CHECK(same_size(10, 20, 20, 20) == doctest::Approx(0.5));
  CHECK(same_size(10, 10, 20, 30) == doctest::Approx(1.0 / 6.0));
}

TEST_CASE("same_size is symmetric and scale invariant") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(1.0, 100.0);
  for (int trial = 0; trial < 30; ++trial) {
    const double wa = u(rng), ha = u(rng), wb = u(rng), hb = u(rng);
    CHECK(same_size(wa, ha, wb, hb) == doctest::Approx(same_size(wb, hb, wa, ha)));
    const double c = u(rng) / 10.0;
    CHECK(same_size(c * wa, c * ha, c * wb, c * hb) ==
          doctest::Approx(same_size(wa, ha, wb, hb)));
  }
}

TEST_CASE("same_color complements bhattacharyya and skips sentinels") {
  AppearanceDescriptor a{ColorHistogram::single_bin(4), 10, 20};
  AppearanceDescriptor b{ColorHistogram::single_bin(4), 10, 20};
  CHECK(same_color(a, b) == doctest::Approx(1.0));
  AppearanceDescriptor c{ColorHistogram::single_bin(5), 10, 20};
  CHECK(same_color(a, c) == doctest::Approx(0.0));

  AppearanceDescriptor two{ColorHistogram(), 10, 20};
  two.histogram.bins[0] = 0.5;
  two.histogram.bins[1] = 0.5;
  AppearanceDescriptor one{ColorHistogram::single_bin(0), 10, 20};
  CHECK(same_color(two, one) == doctest::Approx(1.0 - 0.5411961).epsilon(1e-6));

  AppearanceDescriptor sentinel{ColorHistogram(), 10, 20};
  CHECK(same_color(sentinel, a) == doctest::Approx(1.0));
}

TEST_CASE("direction_aware_distance hand cases") {
  CHECK(direction_aware_distance(Vec2(3, 4), Vec2(3, 4), 1.0, 1.0) == doctest::Approx(0.0));
  CHECK(direction_aware_distance(Vec2(1, 0), Vec2(0, 1), 1.0, 1.0) ==
        doctest::Approx(std::sqrt(3.0)));
  CHECK(direction_aware_distance(Vec2(2, 0), Vec2(1, 0), 1.0, 1.0) == doctest::Approx(1.0));
}

TEST_CASE("direction_aware_distance symmetry and parallel reduction") {
  std::mt19937_64 rng(13);
  std::normal_distribution<double> n(0.0, 3.0);
  for (int trial = 0; trial < 30; ++trial) {
    const Vec2 x(n(rng), n(rng));
    const Vec2 y(n(rng), n(rng));
    CHECK(direction_aware_distance(x, y, 0.7, 1.3) ==
          doctest::Approx(direction_aware_distance(y, x, 0.7, 1.3)));
  }
  // same-direction parallel vectors reduce to the scaled Euclidean part
  const Vec2 x(2, 2);
  const Vec2 y(5, 5);
  CHECK(direction_aware_distance(x, y, 0.5, 2.0) == doctest::Approx(0.5 * (x - y).norm()));
}

TEST_CASE("direction_aware_distance zero-norm convention") {
  const Vec2 zero(0, 0);
  const Vec2 y(1, 0);
  CHECK(direction_aware_distance(zero, y, 1.0, 2.0) ==
        doctest::Approx(std::sqrt(1.0 + 4.0)));  // |x-y|^2 = 1, cosine term = 1
}
