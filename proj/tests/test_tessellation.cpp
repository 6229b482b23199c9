#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "error.hpp"
#include "geodesy.hpp"
#include "oracles.hpp"
#include "tessellation.hpp"
#include "threads.hpp"

using namespace cellscape;

namespace {

const StudyArea kArea{};  // Times Square, 80.5 km

TowerSite tower_at_offset(const std::string& id, double de_m, double dn_m) {
  const Vec2 c = to_vec(latlon_to_utm(kArea.center_lat, kArea.center_lon));
  TowerSite t;
  t.tower_id = id;
  utm_to_latlon({c.x + de_m, c.y + dn_m}, t.lat, t.lon);
  return t;
}

// Deterministic 3-tower fixture used by several tests.
std::vector<TowerSite> three_towers() {
  return {tower_at_offset("A", -15000.0, -8000.0), tower_at_offset("B", 18000.0, -2000.0),
          tower_at_offset("C", 1000.0, 21000.0)};
}

std::vector<AntennaGroup> three_azimuths(const std::vector<TowerSite>& towers) {
  std::vector<AntennaGroup> out;
  for (const TowerSite& t : towers)
    for (double az : {0.0, 120.0, 240.0}) out.push_back({t.tower_id, az});
  return out;
}

}  // namespace

TEST_CASE("single tower with one azimuth owns the whole disc") {
  const std::vector<TowerSite> towers = {tower_at_offset("solo", 0, 0)};
  const std::vector<AntennaGroup> ant = {{"solo", 0.0}};
  const SectorSet set = build_sectors(towers, ant, kArea, 1.0);
  REQUIRE(set.sectors.size() == 1);
  CHECK(set.sectors[0].sector_id == "solo:0");
  const double disc_km2 = polygon_area(set.disc) * 1e-6;
  CHECK(set.sectors[0].area_km2 == doctest::Approx(disc_km2).epsilon(1e-12));
  CHECK(set.sectors[0].area_km2 == doctest::Approx(M_PI * 80.5 * 80.5).epsilon(5e-5));
}

TEST_CASE("two symmetric towers split the disc in half") {
  const std::vector<TowerSite> towers = {tower_at_offset("west", -10000.0, 0.0),
                                         tower_at_offset("east", 10000.0, 0.0)};
  const std::vector<AntennaGroup> ant = {{"west", 0.0}, {"east", 0.0}};
  const SectorSet set = build_sectors(towers, ant, kArea, 1.0);
  REQUIRE(set.sectors.size() == 2);
  CHECK(set.sectors[0].area_km2 ==
        doctest::Approx(set.sectors[1].area_km2).epsilon(1e-6));
  const double disc_km2 = polygon_area(set.disc) * 1e-6;
  CHECK(set.sectors[0].area_km2 + set.sectors[1].area_km2 ==
        doctest::Approx(disc_km2).epsilon(1e-12));
}

TEST_CASE("3-tower 3-azimuth areas match the Monte Carlo nearest-site oracle") {
  const auto towers = three_towers();
  const SectorSet set = build_sectors(towers, three_azimuths(towers), kArea, 1.0);
  REQUIRE(set.sectors.size() == 9);

  // Reconstruct the perturbed sites exactly as the builder does.
  std::vector<Vec2> sites;
  for (const Sector& s : set.sectors) sites.push_back(s.site);

  const Vec2 c = set.center_utm;
  const double R = kArea.radius_km * 1000.0;
  std::vector<int64_t> hits(set.sectors.size(), 0);
  oracles::TestRng rng(20110823);
  const int64_t n_samples = 10000000;
  for (int64_t i = 0; i < n_samples; ++i) {
    // Uniform in the disc via sqrt radius sampling.
    const double r = R * std::sqrt(rng.uniform());
    const double th = rng.uniform(0, 2 * M_PI);
    const Vec2 q = {c.x + r * std::cos(th), c.y + r * std::sin(th)};
    size_t best = 0;
    double bd = dist2(q, sites[0]);
    for (size_t j = 1; j < sites.size(); ++j) {
      const double d = dist2(q, sites[j]);
      if (d < bd) {
        bd = d;
        best = j;
      }
    }
    ++hits[best];
  }
  const double disc_km2 = M_PI * 80.5 * 80.5;  // sampling used the true circle
  for (size_t j = 0; j < set.sectors.size(); ++j) {
    const double mc_area = disc_km2 * double(hits[j]) / double(n_samples);
    CHECK(set.sectors[j].area_km2 == doctest::Approx(mc_area).epsilon(0.005));
  }
}

TEST_CASE("partition: sector areas sum to the clipped disc area") {
  const auto towers = three_towers();
  const SectorSet set = build_sectors(towers, three_azimuths(towers), kArea, 1.0);
  double sum = 0.0;
  for (const Sector& s : set.sectors) sum += s.area_km2;
  const double disc_km2 = polygon_area(set.disc) * 1e-6;
  CHECK(sum == doctest::Approx(disc_km2).epsilon(1e-9));
}

TEST_CASE("pairwise interior overlap is negligible on sampled pairs") {
  const auto towers = three_towers();
  const SectorSet set = build_sectors(towers, three_azimuths(towers), kArea, 1.0);
  for (size_t i = 0; i < set.sectors.size(); ++i)
    for (size_t j = i + 1; j < set.sectors.size(); ++j) {
      // Clip polygon i by all bisector half-planes of polygon j's site; the
      // overlap area of Voronoi cells must vanish.
      Polygon overlap = set.sectors[i].polygon;
      const Vec2 si = set.sectors[i].site, sj = set.sectors[j].site;
      const Vec2 mid = {0.5 * (si.x + sj.x), 0.5 * (si.y + sj.y)};
      overlap = clip_halfplane(overlap, mid, si - sj);  // keep the side closer to j
      CHECK(polygon_area(overlap) * 1e-6 < 1e-9);
    }
}

TEST_CASE("tower-only cells equal the sum of their refined sectors") {
  const auto towers = three_towers();
  const SectorSet refined = build_sectors(towers, three_azimuths(towers), kArea, 1.0);
  const SectorSet base = tower_only_tessellation(towers, kArea);
  REQUIRE(base.sectors.size() == 3);
  std::map<std::string, double> sums;
  for (const Sector& s : refined.sectors) sums[s.tower_id] += s.area_km2;
  for (const Sector& b : base.sectors)
    CHECK(b.area_km2 == doctest::Approx(sums[b.tower_id]).epsilon(0.005));
}

TEST_CASE("refined sectors stay inside their tower-only cell") {
  const auto towers = three_towers();
  const double eps = 1.0;
  const SectorSet refined = build_sectors(towers, three_azimuths(towers), kArea, eps);
  const SectorSet base = tower_only_tessellation(towers, kArea);
  std::map<std::string, const Sector*> base_of;
  for (const Sector& b : base.sectors) base_of[b.tower_id] = &b;
  for (const Sector& s : refined.sectors) {
    const Sector* cell = base_of.at(s.tower_id);
    for (const Vec2& v : s.polygon)
      CHECK(point_in_polygon(cell->polygon, v, 2.0 * eps + 1e-6));
  }
}

TEST_CASE("identical inputs give bit-identical polygons") {
  const auto towers = three_towers();
  const SectorSet a = build_sectors(towers, three_azimuths(towers), kArea, 1.0);
  const SectorSet b = build_sectors(towers, three_azimuths(towers), kArea, 1.0);
  REQUIRE(a.sectors.size() == b.sectors.size());
  for (size_t i = 0; i < a.sectors.size(); ++i) {
    REQUIRE(a.sectors[i].polygon.size() == b.sectors[i].polygon.size());
    for (size_t v = 0; v < a.sectors[i].polygon.size(); ++v) {
      CHECK(a.sectors[i].polygon[v].x == b.sectors[i].polygon[v].x);
      CHECK(a.sectors[i].polygon[v].y == b.sectors[i].polygon[v].y);
    }
  }
}

TEST_CASE("thread count does not change the tessellation") {
  const auto towers = three_towers();
  set_thread_count(1);
  const SectorSet a = build_sectors(towers, three_azimuths(towers), kArea, 1.0);
  set_thread_count(4);
  const SectorSet b = build_sectors(towers, three_azimuths(towers), kArea, 1.0);
  set_thread_count(1);
  for (size_t i = 0; i < a.sectors.size(); ++i)
    for (size_t v = 0; v < a.sectors[i].polygon.size(); ++v) {
      CHECK(a.sectors[i].polygon[v].x == b.sectors[i].polygon[v].x);
      CHECK(a.sectors[i].polygon[v].y == b.sectors[i].polygon[v].y);
    }
}

TEST_CASE("locate_point basics") {
  const auto towers = three_towers();
  const std::vector<AntennaGroup> ant = {{"A", 0.0}, {"B", 0.0}, {"C", 0.0}};
  const SectorSet set = build_sectors(towers, ant, kArea, 1.0);
  for (const TowerSite& t : towers) {
    const int idx = locate_point(set, t.lat, t.lon);
    REQUIRE(idx >= 0);
    CHECK(set.sectors[size_t(idx)].tower_id == t.tower_id);
  }
  CHECK(locate_point(set, 45.0, -75.0) == -1);  // far outside the disc
}

TEST_CASE("locate_point agrees with point-in-polygon away from boundaries") {
  const auto towers = three_towers();
  const SectorSet set = build_sectors(towers, three_azimuths(towers), kArea, 1.0);
  oracles::TestRng rng(314159);
  const Vec2 c = set.center_utm;
  const double R = kArea.radius_km * 1000.0;
  int checked = 0;
  for (int i = 0; i < 1000; ++i) {
    const double r = 0.995 * R * std::sqrt(rng.uniform());
    const double th = rng.uniform(0, 2 * M_PI);
    const Vec2 q = {c.x + r * std::cos(th), c.y + r * std::sin(th)};
    double lat = 0, lon = 0;
    utm_to_latlon({q.x, q.y}, lat, lon);
    const int idx = locate_point(set, lat, lon);
    if (idx < 0) continue;  // 720-gon edge sliver
    // Skip points within ~0.2 m of a cell boundary (1e-6 degrees is about
    // 0.1 m on the ground); agreement is only claimed away from edges.
    if (polygon_boundary_dist(set.sectors[size_t(idx)].polygon, q) < 0.2) continue;
    ++checked;
    CHECK(point_in_polygon(set.sectors[size_t(idx)].polygon, q, 1e-9));
  }
  CHECK(checked > 900);
}

TEST_CASE("input validation") {
  const auto towers = three_towers();
  SUBCASE("unknown tower id") {
    const std::vector<AntennaGroup> ant = {{"A", 0.0}, {"nope", 90.0}};
    CHECK_THROWS_AS(build_sectors(towers, ant, kArea, 1.0), input_error);
  }
  SUBCASE("tower outside the disc is rejected with its id") {
    std::vector<TowerSite> out = towers;
    out.push_back({"faraway", 44.0, -75.0});
    std::vector<AntennaGroup> ant = three_azimuths(towers);
    ant.push_back({"faraway", 0.0});
    try {
      build_sectors(out, ant, kArea, 1.0);
      FAIL("expected input_error");
    } catch (const input_error& e) {
      CHECK(std::string(e.what()).find("faraway") != std::string::npos);
    }
  }
  SUBCASE("oversize epsilon") {
    CHECK_THROWS_AS(build_sectors(towers, three_azimuths(towers), kArea, 20000.0), input_error);
  }
  SUBCASE("nonpositive epsilon") {
    CHECK_THROWS_AS(build_sectors(towers, three_azimuths(towers), kArea, 0.0), input_error);
  }
}

TEST_CASE("azimuth groups closer than one degree merge") {
  const std::vector<TowerSite> towers = {tower_at_offset("solo", 0, 0)};
  const std::vector<AntennaGroup> ant = {
      {"solo", 10.0}, {"solo", 10.4}, {"solo", 200.0}, {"solo", 359.9}, {"solo", 0.3}};
  const SectorSet set = build_sectors(towers, ant, kArea, 1.0);
  // 10.0+10.4 merge; 359.9+0.3 merge across the wrap; 200 stays.
  CHECK(set.sectors.size() == 3);
}

TEST_CASE("sectors CSV round trip preserves ids, areas, and polygons") {
  const auto towers = three_towers();
  const SectorSet set = build_sectors(towers, three_azimuths(towers), kArea, 1.0);
  const std::string dir = "tess_io_test";
  std::remove((dir + "_sectors.csv").c_str());
  write_sectors_csv(set, dir + "_sectors.csv", dir + "_wkt.csv");
  const SectorSet back = load_sectors_csv(dir + "_sectors.csv", dir + "_wkt.csv", kArea);
  REQUIRE(back.sectors.size() == set.sectors.size());
  for (size_t i = 0; i < set.sectors.size(); ++i) {
    CHECK(back.sectors[i].sector_id == set.sectors[i].sector_id);
    CHECK(back.sectors[i].area_km2 == doctest::Approx(set.sectors[i].area_km2).epsilon(1e-9));
    CHECK(back.sectors[i].polygon.size() == set.sectors[i].polygon.size());
    CHECK(polygon_area(back.sectors[i].polygon) ==
          doctest::Approx(polygon_area(set.sectors[i].polygon)).epsilon(1e-6));
  }
  std::remove((dir + "_sectors.csv").c_str());
  std::remove((dir + "_wkt.csv").c_str());
}
