#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "delaunay.hpp"
#include "error.hpp"
#include "oracles.hpp"
#include "raster.hpp"

using namespace cellscape;

namespace {

std::vector<Vec2> random_points(int n, uint64_t seed, double lo = 0.0, double hi = 1000.0) {
  oracles::TestRng rng(seed);
  std::vector<Vec2> pts;
  for (int i = 0; i < n; ++i) pts.push_back({rng.uniform(lo, hi), rng.uniform(lo, hi)});
  return pts;
}

// Brute-force triangle search, independent of the walk locator.
int brute_force_triangle(const Delaunay& tri, Vec2 q, std::array<double, 3>& bary) {
  const auto& pts = tri.points();
  for (int t = 0; t < int(tri.triangles().size()); ++t) {
    const Triangle& tr = tri.triangles()[size_t(t)];
    const Vec2 a = pts[size_t(tr.v[0])], b = pts[size_t(tr.v[1])], c = pts[size_t(tr.v[2])];
    const double area = cross(b - a, c - a);
    if (area == 0.0) continue;
    const double w0 = cross(b - q, c - q) / area;
    const double w1 = cross(c - q, a - q) / area;
    const double w2 = cross(a - q, b - q) / area;
    if (w0 >= -1e-12 && w1 >= -1e-12 && w2 >= -1e-12) {
      bary = {w0, w1, w2};
      return t;
    }
  }
  return -1;
}

}  // namespace

TEST_CASE("delaunay of a square has two triangles and correct adjacency") {
  const std::vector<Vec2> pts = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  const Delaunay tri(pts);
  CHECK(tri.triangles().size() == 2);
  std::array<double, 3> bary;
  CHECK(tri.locate({0.5, 0.5}, bary) >= 0);
  CHECK(tri.locate({1.5, 0.5}, bary) == -1);
}

TEST_CASE("delaunay rejects degenerate input") {
  CHECK_THROWS_AS(Delaunay({{0, 0}, {1, 1}}), input_error);
  CHECK_THROWS_AS(Delaunay({{0, 0}, {1, 1}, {2, 2}, {3, 3}}), input_error);
}

TEST_CASE("walk locator agrees with brute force on random queries") {
  const std::vector<Vec2> pts = random_points(80, 21);
  const Delaunay tri(pts);
  oracles::TestRng rng(77);
  for (int i = 0; i < 500; ++i) {
    const Vec2 q = {rng.uniform(-50, 1050), rng.uniform(-50, 1050)};
    std::array<double, 3> bw, bb;
    const int tw = tri.locate(q, bw);
    const int tb = brute_force_triangle(tri, q, bb);
    if (tb == -1) {
      CHECK(tw == -1);
    } else {
      REQUIRE(tw >= 0);
      // Different triangles are fine on shared edges; interpolated values
      // must agree either way.
      std::vector<double> values;
      for (const Vec2& p : tri.points()) values.push_back(0.3 * p.x - 0.9 * p.y + 4.0);
      double vw = 0;
      CHECK(tri.interpolate(q, values, vw));
      const Triangle& tr = tri.triangles()[size_t(tb)];
      const double vb = bb[0] * values[size_t(tr.v[0])] + bb[1] * values[size_t(tr.v[1])] +
                        bb[2] * values[size_t(tr.v[2])];
      CHECK(vw == doctest::Approx(vb).epsilon(1e-9));
    }
  }
}

TEST_CASE("constant field reproduces the constant everywhere in hull") {
  const std::vector<Vec2> pts = random_points(40, 3);
  const std::vector<double> values(40, 6.25);
  const Raster r = interpolate_grid(pts, values, 25.0);
  int in_hull = 0;
  for (int row = 0; row < r.nrows; ++row)
    for (int col = 0; col < r.ncols; ++col) {
      const double v = r.at(row, col);
      if (v == r.nodata) continue;
      ++in_hull;
      CHECK(v == doctest::Approx(6.25).epsilon(1e-12));
    }
  CHECK(in_hull > 100);
}

TEST_CASE("linear field is reproduced to 1e-9 relative at cell centers") {
  // UTM-scale coordinates to exercise conditioning.
  std::vector<Vec2> pts = random_points(60, 8, 500000.0, 600000.0);
  std::vector<double> values;
  for (const Vec2& p : pts) values.push_back(3.0 * p.x + 2.0 * p.y + 7.0);
  const Raster r = interpolate_grid(pts, values, 2000.0);
  int in_hull = 0;
  for (int row = 0; row < r.nrows; ++row)
    for (int col = 0; col < r.ncols; ++col) {
      const double v = r.at(row, col);
      if (v == r.nodata) continue;
      ++in_hull;
      const Vec2 q = r.cell_center(row, col);
      const double expect = 3.0 * q.x + 2.0 * q.y + 7.0;
      CHECK(v == doctest::Approx(expect).epsilon(1e-9));
    }
  CHECK(in_hull > 200);
}

TEST_CASE("in-hull values are bounded by the input range") {
  const std::vector<Vec2> pts = random_points(50, 12);
  oracles::TestRng rng(13);
  std::vector<double> values;
  for (int i = 0; i < 50; ++i) values.push_back(rng.uniform(-5, 5));
  const Raster r = interpolate_grid(pts, values, 20.0);
  const double lo = *std::min_element(values.begin(), values.end());
  const double hi = *std::max_element(values.begin(), values.end());
  for (double v : r.values) {
    if (v == r.nodata) continue;
    CHECK(v >= lo - 1e-9);
    CHECK(v <= hi + 1e-9);
  }
}

TEST_CASE("raster value at a centroid cell matches brute-force interpolation") {
  const std::vector<Vec2> pts = random_points(50, 4);
  oracles::TestRng rng(6);
  std::vector<double> values;
  for (int i = 0; i < 50; ++i) values.push_back(rng.uniform(0, 100));
  const double cell = 10.0;
  const Raster r = interpolate_grid(pts, values, cell);
  const Delaunay tri(pts);
  for (size_t i = 0; i < pts.size(); ++i) {
    const int col = int((pts[i].x - r.origin_easting) / cell);
    const int row = r.nrows - 1 - int((pts[i].y - r.origin_northing) / cell);
    REQUIRE(row >= 0);
    REQUIRE(col >= 0);
    const Vec2 q = r.cell_center(row, col);
    std::array<double, 3> bary;
    const int t = brute_force_triangle(tri, q, bary);
    if (t < 0) continue;  // centroid cell center may poke outside the hull
    const Triangle& tr = tri.triangles()[size_t(t)];
    const double expect = bary[0] * values[size_t(tr.v[0])] + bary[1] * values[size_t(tr.v[1])] +
                          bary[2] * values[size_t(tr.v[2])];
    CHECK(r.at(row, col) == doctest::Approx(expect).epsilon(1e-9));
  }
}

TEST_CASE("density is volume over area with an exact conservation identity") {
  CHECK(density_values({10.0}, {2.0})[0] == 5.0);
  CHECK(density_values({0.0}, {2.0})[0] == 0.0);
  CHECK_THROWS_AS(density_values({1.0}, {0.0}), input_error);

  oracles::TestRng rng(15);
  std::vector<double> volumes, areas;
  double total = 0.0;
  for (int i = 0; i < 500; ++i) {
    volumes.push_back(std::floor(rng.uniform(0, 1e6)));
    areas.push_back(rng.uniform(0.1, 50.0));
    total += volumes.back();
  }
  const std::vector<double> dens = density_values(volumes, areas);
  double back = 0.0;
  for (size_t i = 0; i < dens.size(); ++i) back += dens[i] * areas[i];
  CHECK(back == doctest::Approx(total).epsilon(1e-9));
}

TEST_CASE("esri ascii writer") {
  SUBCASE("1x1 raster is six header lines plus the value") {
    Raster r;
    r.ncols = 1;
    r.nrows = 1;
    r.origin_easting = 10;
    r.origin_northing = 20;
    r.cell_m = 30;
    r.values = {5.0};
    write_raster_asc(r, "tiny.asc");
    std::ifstream in("tiny.asc");
    std::string line;
    std::vector<std::string> lines;
    while (std::getline(in, line)) lines.push_back(line);
    REQUIRE(lines.size() == 7);
    CHECK(lines[0] == "ncols 1");
    CHECK(lines[1] == "nrows 1");
    CHECK(lines[5] == "NODATA_value -9999");
    CHECK(lines[6] == "5");
    std::remove("tiny.asc");
  }
  SUBCASE("write-parse round trip within format precision") {
    const std::vector<Vec2> pts = random_points(30, 55);
    oracles::TestRng rng(56);
    std::vector<double> values;
    for (int i = 0; i < 30; ++i) values.push_back(rng.uniform(0, 1e4));
    const Raster r = interpolate_grid(pts, values, 50.0);
    write_raster_asc(r, "rt.asc");
    const Raster back = read_raster_asc("rt.asc");
    REQUIRE(back.ncols == r.ncols);
    REQUIRE(back.nrows == r.nrows);
    for (size_t i = 0; i < r.values.size(); ++i) {
      if (r.values[i] == r.nodata)
        CHECK(back.values[i] == back.nodata);  // sentinel token exact
      else
        CHECK(back.values[i] == doctest::Approx(r.values[i]).epsilon(1e-5));
    }
    std::remove("rt.asc");
  }
}
