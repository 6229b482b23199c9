#include <doctest.h>

#include <algorithm>

#include "oracles.hpp"
#include "tessellation.hpp"
#include "timegrid.hpp"
#include "tsmap.hpp"

using namespace cellscape;

namespace {

SectorSet lat_sectors(const std::vector<double>& lats) {
  SectorSet set;
  set.area = StudyArea{};
  set.center_utm = to_vec(latlon_to_utm(set.area.center_lat, set.area.center_lon));
  set.disc = regular_ngon(set.center_utm, set.area.radius_km * 1000.0, kDiscVertices);
  for (size_t i = 0; i < lats.size(); ++i) {
    Sector s;
    s.sector_id = "s" + std::to_string(i);
    s.tower_id = s.sector_id;
    s.centroid_lat = lats[i];
    s.centroid_lon = -74.0;
    s.centroid_utm = to_vec(latlon_to_utm(s.centroid_lat, s.centroid_lon));
    s.area_km2 = 1.0;
    set.sectors.push_back(std::move(s));
  }
  return set;
}

}  // namespace

TEST_CASE("timegrid civil conversions") {
  CHECK(days_from_civil(1970, 1, 1) == 0);
  CHECK(days_from_civil(2011, 8, 23) - days_from_civil(2011, 1, 1) + 1 == 235);  // quake jd
  CHECK(days_from_civil(2011, 8, 28) - days_from_civil(2011, 1, 1) + 1 == 240);  // landfall jd
  const CivilMinute q{2011, 8, 23, 13, 51};
  CHECK(weekday(q) == 1);  // Tuesday
  CHECK(weekday(CivilMinute{2011, 8, 27, 0, 0}) == 5);  // pre-landfall Saturday
  CHECK(format_civil_minute(civil_from_minute_index(minute_index(q))) == "2011-08-23 13:51");
  CHECK(day_of_year(CivilMinute{2012, 1, 31, 0, 0}, 2011) == 396);
  CHECK_THROWS(parse_civil_minute("2011-13-01 00:00"));
  CHECK_THROWS(parse_civil_minute("2011-02-29 00:00"));
  CHECK_THROWS(parse_civil_minute("garbage"));
}

TEST_CASE("time-space map orders columns by latitude and keeps dims") {
  const SectorSet set = lat_sectors({40.9, 40.1, 40.5});
  VolumeTensor t = make_tensor(Channel::calls, Resolution::day, CivilMinute{2011, 2, 1, 0, 0},
                               set.ids(), 4);
  for (int64_t s = 0; s < 3; ++s)
    for (int64_t d = 0; d < 4; ++d) t.at(s, d) = 10 * (s + 1) + d;
  const TimeSpaceMap m = time_space_map(t, set);
  CHECK(m.n_days == 4);
  CHECK(m.n_sectors == 3);
  // Columns must be s1 (40.1), s2 (40.5), s0 (40.9).
  CHECK(m.sector_ids == std::vector<std::string>{"s1", "s2", "s0"});
  CHECK(m.at(0, 0) == 20.0);
  CHECK(m.at(2, 2) == 12.0);
  CHECK(m.jd[0] == 32);  // Feb 1
  // Applying the ordering twice is idempotent: the column ids are already
  // latitude-sorted.
  std::vector<std::string> once = m.sector_ids;
  std::vector<std::string> again = once;
  std::stable_sort(again.begin(), again.end(), [&](const std::string& a, const std::string& b) {
    const int ia = set.find(a), ib = set.find(b);
    return set.sectors[size_t(ia)].centroid_lat < set.sectors[size_t(ib)].centroid_lat;
  });
  CHECK(once == again);
}

TEST_CASE("constant map displays uniformly with the clip at the constant") {
  const SectorSet set = lat_sectors({40.2, 40.4, 40.6});
  VolumeTensor t = make_tensor(Channel::calls, Resolution::day, CivilMinute{2011, 2, 1, 0, 0},
                               set.ids(), 5);
  for (auto& v : t.counts) v = 17;
  const TimeSpaceMap m = time_space_map(t, set);
  const auto disp = tsmap_display(m);
  for (double v : disp) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("display transform clips the top tail into [0,1]") {
  const SectorSet set = lat_sectors({40.2, 40.4, 40.6, 40.8});
  VolumeTensor t = make_tensor(Channel::calls, Resolution::day, CivilMinute{2011, 2, 1, 0, 0},
                               set.ids(), 100);
  oracles::TestRng rng(2);
  for (auto& v : t.counts) v = int64_t(rng.uniform() * 1000.0);
  t.at(0, 5) = 1000000;  // extreme cell saturates
  const TimeSpaceMap m = time_space_map(t, set);
  const auto disp = tsmap_display(m);
  double top = 0.0;
  for (double v : disp) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
    top = std::max(top, v);
  }
  CHECK(top == 1.0);
}
