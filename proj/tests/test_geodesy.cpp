#include <doctest.h>

#include <cmath>

#include "error.hpp"
#include "geodesy.hpp"
#include "oracles.hpp"

using namespace cellscape;

TEST_CASE("central meridian equator point maps to the false easting") {
  const UtmPoint p = latlon_to_utm(0.0, -75.0);
  CHECK(p.easting == doctest::Approx(500000.0).epsilon(1e-12));
  CHECK(std::abs(p.northing) < 1e-9);
}

TEST_CASE("Times Square agrees with the independent projection oracle to 1 cm") {
  // Frozen from a Snyder/USGS-series implementation cross-checked against an
  // independent Krueger-series evaluation (they agree to 0.16 mm here).
  const UtmPoint p = latlon_to_utm(40.7580, -73.9855);
  CHECK(std::abs(p.easting - 585632.974475) < 0.01);
  CHECK(std::abs(p.northing - 4512388.313149) < 0.01);
}

TEST_CASE("more oracle points across and beyond the study disc") {
  const struct {
    double lat, lon, e, n;
  } pts[] = {
      {40.0, -74.5, 542679.945027, 4427876.924560},
      {41.3, -73.2, 650697.521334, 4573623.377113},
      {40.7580, -75.0, 500000.000000, 4511893.331919},
      {37.91, -77.99, 237135.988992, 4200045.794337},
  };
  for (const auto& q : pts) {
    const UtmPoint p = latlon_to_utm(q.lat, q.lon);
    CHECK(std::abs(p.easting - q.e) < 0.01);
    CHECK(std::abs(p.northing - q.n) < 0.01);
  }
}

TEST_CASE("projection round trip is below 1e-9 degrees") {
  oracles::TestRng rng(42);
  for (int i = 0; i < 500; ++i) {
    const double lat = rng.uniform(39.0, 42.5);
    const double lon = rng.uniform(-76.5, -72.5);
    const UtmPoint p = latlon_to_utm(lat, lon);
    double lat2 = 0, lon2 = 0;
    utm_to_latlon(p, lat2, lon2);
    CHECK(std::abs(lat2 - lat) < 1e-9);
    CHECK(std::abs(lon2 - lon) < 1e-9);
  }
}

TEST_CASE("latitude outside the UTM band is rejected") {
  CHECK_THROWS_AS(latlon_to_utm(89.0, -75.0), input_error);
  CHECK_THROWS_AS(latlon_to_utm(-85.0, -75.0), input_error);
}

TEST_CASE("great-circle distance basics") {
  CHECK(great_circle_km(40.0, -74.0, 40.0, -74.0) == 0.0);
  oracles::TestRng rng(7);
  for (int i = 0; i < 100; ++i) {
    const double a1 = rng.uniform(-80, 80), o1 = rng.uniform(-180, 180);
    const double a2 = rng.uniform(-80, 80), o2 = rng.uniform(-180, 180);
    CHECK(great_circle_km(a1, o1, a2, o2) == doctest::Approx(great_circle_km(a2, o2, a1, o1)));
  }
  // Antipodal points: half the sphere circumference.
  CHECK(great_circle_km(0.0, 0.0, 0.0, 180.0) == doctest::Approx(M_PI * 6371.0088).epsilon(1e-12));
  CHECK(great_circle_km(90.0, 0.0, -90.0, 0.0) == doctest::Approx(20015.114442).epsilon(1e-6));
}
