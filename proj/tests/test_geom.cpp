#include <doctest.h>

#include <cmath>

#include "geom.hpp"
#include "oracles.hpp"

using namespace cellscape;

TEST_CASE("polygon area and centroid of a unit square") {
  const Polygon sq = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  CHECK(polygon_area(sq) == doctest::Approx(1.0));
  const Vec2 c = polygon_centroid(sq);
  CHECK(c.x == doctest::Approx(0.5));
  CHECK(c.y == doctest::Approx(0.5));
}

TEST_CASE("regular n-gon area approaches the circle") {
  const Polygon p = regular_ngon({10, -5}, 2.0, 720);
  const double expect = 0.5 * 720 * 4.0 * std::sin(2.0 * M_PI / 720);
  CHECK(polygon_area(p) == doctest::Approx(expect).epsilon(1e-12));
  CHECK(polygon_area(p) == doctest::Approx(M_PI * 4.0).epsilon(2e-5));
}

TEST_CASE("half-plane clip splits a square") {
  const Polygon sq = {{0, 0}, {2, 0}, {2, 2}, {0, 2}};
  // Keep x <= 1.
  const Polygon left = clip_halfplane(sq, {1, 0}, {1, 0});
  CHECK(polygon_area(left) == doctest::Approx(2.0));
  // Clip that removes everything.
  const Polygon none = clip_halfplane(sq, {-1, 0}, {1, 0});
  CHECK(none.empty());
  // Clip that keeps everything.
  const Polygon all = clip_halfplane(sq, {5, 0}, {1, 0});
  CHECK(polygon_area(all) == doctest::Approx(4.0));
}

TEST_CASE("point in polygon with winding rule") {
  const Polygon sq = {{0, 0}, {4, 0}, {4, 4}, {0, 4}};
  CHECK(point_in_polygon(sq, {2, 2}));
  CHECK_FALSE(point_in_polygon(sq, {5, 2}));
  CHECK(point_in_polygon(sq, {0, 2}));          // boundary counts inside
  CHECK(point_in_polygon(sq, {4.0005, 2}, 1e-3));  // tolerance widens the edge
  // Concave polygon.
  const Polygon c = {{0, 0}, {4, 0}, {4, 4}, {2, 1}, {0, 4}};
  CHECK(point_in_polygon(c, {1, 1}));
  CHECK_FALSE(point_in_polygon(c, {2, 3}));
}

TEST_CASE("clip then area matches Monte Carlo on random convex cuts") {
  oracles::TestRng rng(11);
  const Polygon sq = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  for (int trial = 0; trial < 10; ++trial) {
    const Vec2 p = {rng.uniform(0.2, 0.8), rng.uniform(0.2, 0.8)};
    const double th = rng.uniform(0, 2 * M_PI);
    const Vec2 n = {std::cos(th), std::sin(th)};
    const Polygon cut = clip_halfplane(sq, p, n);
    int inside = 0;
    const int samples = 200000;
    oracles::TestRng mc(99 + uint64_t(trial));
    for (int i = 0; i < samples; ++i) {
      const Vec2 q = {mc.uniform(), mc.uniform()};
      if (dot(n, q - p) <= 0.0) ++inside;
    }
    CHECK(polygon_area(cut) ==
          doctest::Approx(double(inside) / samples).epsilon(0.02).scale(1.0));
  }
}
