#include "tessellation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <set>
#include <unordered_map>

#include "csvio.hpp"
#include "error.hpp"
#include "threads.hpp"

namespace cellscape {

int SectorSet::find(const std::string& sector_id) const {
  for (size_t i = 0; i < sectors.size(); ++i)
    if (sectors[i].sector_id == sector_id) return int(i);
  return -1;
}

std::vector<std::string> SectorSet::ids() const {
  std::vector<std::string> out;
  out.reserve(sectors.size());
  for (const Sector& s : sectors) out.push_back(s.sector_id);
  return out;
}

namespace {

std::string format_azimuth(double az) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", az);
  return buf;
}

struct Site {
  Vec2 pos;
  std::string sector_id;
  std::string tower_id;
  double azimuth_deg;
};

// Voronoi cell of site i: clip the disc by the bisector half-plane of every
// other site, nearest first, stopping once no further site can cut the cell.
Polygon voronoi_cell(const std::vector<Site>& sites, size_t i, const Polygon& disc) {
  const Vec2 si = sites[i].pos;
  std::vector<std::pair<double, size_t>> order;
  order.reserve(sites.size() - 1);
  for (size_t j = 0; j < sites.size(); ++j)
    if (j != i) order.push_back({dist2(si, sites[j].pos), j});
  std::sort(order.begin(), order.end());

  Polygon cell = disc;
  double max_r2 = 0.0;
  for (const Vec2& v : cell) max_r2 = std::max(max_r2, dist2(si, v));
  for (const auto& [d2, j] : order) {
    // A site farther than twice the cell's outermost vertex cannot cut it.
    if (d2 > 4.0 * max_r2) break;
    const Vec2 sj = sites[j].pos;
    const Vec2 mid = {0.5 * (si.x + sj.x), 0.5 * (si.y + sj.y)};
    const Vec2 n = sj - si;
    cell = clip_halfplane(cell, mid, n);
    if (cell.empty()) break;
    max_r2 = 0.0;
    for (const Vec2& v : cell) max_r2 = std::max(max_r2, dist2(si, v));
  }
  return cell;
}

SectorSet tessellate(const std::vector<Site>& sites, const StudyArea& area) {
  SectorSet set;
  set.area = area;
  set.center_utm = to_vec(latlon_to_utm(area.center_lat, area.center_lon));
  set.disc = regular_ngon(set.center_utm, area.radius_km * 1000.0, kDiscVertices);
  set.sectors.resize(sites.size());

  parallel_chunks(int64_t(sites.size()), [&](int64_t b, int64_t e) {
    for (int64_t i = b; i < e; ++i) {
      const Site& site = sites[size_t(i)];
      Sector s;
      s.sector_id = site.sector_id;
      s.tower_id = site.tower_id;
      s.azimuth_deg = site.azimuth_deg;
      s.site = site.pos;
      s.polygon = voronoi_cell(sites, size_t(i), set.disc);
      require_internal(!s.polygon.empty(), "empty Voronoi cell for " + s.sector_id);
      s.area_km2 = polygon_area(s.polygon) * 1e-6;
      require_internal(s.area_km2 > 0.0, "non-positive cell area for " + s.sector_id);
      s.centroid_utm = polygon_centroid(s.polygon);
      utm_to_latlon({s.centroid_utm.x, s.centroid_utm.y}, s.centroid_lat, s.centroid_lon);
      set.sectors[size_t(i)] = std::move(s);
    }
  });
  return set;
}

std::unordered_map<std::string, Vec2> project_towers(const std::vector<TowerSite>& towers,
                                                     const SectorSet& probe) {
  std::unordered_map<std::string, Vec2> utm;
  utm.reserve(towers.size());
  std::string outside;
  for (const TowerSite& t : towers) {
    require_input(t.lat >= -90.0 && t.lat <= 90.0, "tower " + t.tower_id + ": bad latitude");
    require_input(t.lon >= -180.0 && t.lon <= 180.0, "tower " + t.tower_id + ": bad longitude");
    const Vec2 p = to_vec(latlon_to_utm(t.lat, t.lon));
    if (!utm.emplace(t.tower_id, p).second)
      throw input_error("duplicate tower_id: " + t.tower_id);
    if (!point_in_polygon(probe.disc, p))
      outside += (outside.empty() ? "" : ", ") + t.tower_id;
  }
  require_input(outside.empty(), "towers outside the study disc: " + outside);
  return utm;
}

void check_site_spacing(const std::vector<Site>& sites, double epsilon_m) {
  if (sites.size() < 2) return;
  // Same-tower sites sit ~epsilon apart on purpose; the perturbation only
  // needs to stay well below the spacing between different towers.
  double min_all = std::numeric_limits<double>::infinity();
  double min_cross = std::numeric_limits<double>::infinity();
  size_t a = 0, b = 0, ca = 0, cb = 0;
  for (size_t i = 0; i < sites.size(); ++i)
    for (size_t j = i + 1; j < sites.size(); ++j) {
      const double d2 = dist2(sites[i].pos, sites[j].pos);
      if (d2 < min_all) {
        min_all = d2;
        a = i;
        b = j;
      }
      if (sites[i].tower_id != sites[j].tower_id && d2 < min_cross) {
        min_cross = d2;
        ca = i;
        cb = j;
      }
    }
  require_internal(min_all > 0.0,
                   "duplicate perturbed sites: " + sites[a].sector_id + " and " + sites[b].sector_id);
  if (min_cross < std::numeric_limits<double>::infinity())
    require_input(epsilon_m < 0.5 * std::sqrt(min_cross),
                  "epsilon_m too large for tower spacing (min inter-tower site distance " +
                      std::to_string(std::sqrt(min_cross)) + " m between " + sites[ca].sector_id +
                      " and " + sites[cb].sector_id + ")");
}

// Groups azimuths per tower, merging directions closer than 1 degree
// (circularly): the perturbation cannot separate them robustly.
std::map<std::string, std::vector<double>> group_azimuths(
    const std::vector<AntennaGroup>& antennas) {
  std::map<std::string, std::set<double>> raw;
  for (const AntennaGroup& a : antennas) {
    require_input(a.azimuth_deg >= 0.0 && a.azimuth_deg < 360.0,
                  "azimuth out of [0, 360) for tower " + a.tower_id);
    raw[a.tower_id].insert(a.azimuth_deg);
  }
  std::map<std::string, std::vector<double>> grouped;
  for (auto& [tower, azs] : raw) {
    std::vector<double> sorted(azs.begin(), azs.end());
    std::vector<std::vector<double>> clusters;
    for (double az : sorted) {
      if (!clusters.empty() && az - clusters.back().back() < kAzimuthMergeDeg)
        clusters.back().push_back(az);
      else
        clusters.push_back({az});
    }
    // Wrap-around: 359.x and 0.x are the same direction cluster.
    if (clusters.size() > 1 && clusters.front().front() + 360.0 - clusters.back().back() <
                                   kAzimuthMergeDeg) {
      for (double az : clusters.back()) clusters.front().push_back(az - 360.0);
      clusters.pop_back();
    }
    std::vector<double>& out = grouped[tower];
    for (const auto& c : clusters) {
      double mean = 0.0;
      for (double az : c) mean += az;
      mean /= double(c.size());
      if (mean < 0.0) mean += 360.0;
      out.push_back(mean);
    }
    std::sort(out.begin(), out.end());
  }
  return grouped;
}

}  // namespace

SectorSet build_sectors(const std::vector<TowerSite>& towers,
                        const std::vector<AntennaGroup>& antennas, const StudyArea& area,
                        double epsilon_m) {
  require_input(area.radius_km > 0.0, "study radius must be positive");
  require_input(epsilon_m > 0.0, "epsilon_m must be positive");
  require_input(!towers.empty(), "no towers given");
  require_input(!antennas.empty(), "no antennas given");

  SectorSet probe;
  probe.center_utm = to_vec(latlon_to_utm(area.center_lat, area.center_lon));
  probe.disc = regular_ngon(probe.center_utm, area.radius_km * 1000.0, kDiscVertices);
  const auto tower_utm = project_towers(towers, probe);

  const auto grouped = group_azimuths(antennas);
  for (const auto& [tower_id, azs] : grouped) {
    (void)azs;
    require_input(tower_utm.count(tower_id) != 0, "antenna references unknown tower_id: " + tower_id);
  }

  std::vector<Site> sites;
  for (const auto& [tower_id, azs] : grouped) {
    const Vec2 base = tower_utm.at(tower_id);
    for (double az : azs) {
      const double rad = az * M_PI / 180.0;
      Site s;
      // Azimuth is clockwise from north: east component sin, north component cos.
      s.pos = {base.x + epsilon_m * std::sin(rad), base.y + epsilon_m * std::cos(rad)};
      s.tower_id = tower_id;
      s.azimuth_deg = az;
      s.sector_id = tower_id + ":" + format_azimuth(az);
      sites.push_back(std::move(s));
    }
  }
  check_site_spacing(sites, epsilon_m);
  return tessellate(sites, area);
}

SectorSet tower_only_tessellation(const std::vector<TowerSite>& towers, const StudyArea& area) {
  require_input(area.radius_km > 0.0, "study radius must be positive");
  require_input(!towers.empty(), "no towers given");
  SectorSet probe;
  probe.center_utm = to_vec(latlon_to_utm(area.center_lat, area.center_lon));
  probe.disc = regular_ngon(probe.center_utm, area.radius_km * 1000.0, kDiscVertices);
  const auto tower_utm = project_towers(towers, probe);

  std::vector<Site> sites;
  sites.reserve(towers.size());
  std::vector<TowerSite> sorted = towers;
  std::sort(sorted.begin(), sorted.end(),
            [](const TowerSite& a, const TowerSite& b) { return a.tower_id < b.tower_id; });
  for (const TowerSite& t : sorted) {
    Site s;
    s.pos = tower_utm.at(t.tower_id);
    s.tower_id = t.tower_id;
    s.azimuth_deg = -1.0;
    s.sector_id = t.tower_id;
    sites.push_back(std::move(s));
  }
  check_site_spacing(sites, 0.0);
  return tessellate(sites, area);
}

int locate_point(const SectorSet& set, double lat, double lon) {
  require_input(lat >= -90.0 && lat <= 90.0, "bad latitude");
  require_input(lon >= -180.0 && lon <= 180.0, "bad longitude");
  const Vec2 p = to_vec(latlon_to_utm(lat, lon));
  if (!point_in_polygon(set.disc, p)) return -1;
  if (!set.exact_sites) {
    // Reloaded sets carry centroids, not generator sites: fall back to the
    // equivalent point-in-cell test.
    for (size_t i = 0; i < set.sectors.size(); ++i)
      if (point_in_polygon(set.sectors[i].polygon, p, 1e-9)) return int(i);
    return -1;
  }
  int best = -1;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < set.sectors.size(); ++i) {
    const double d2 = dist2(p, set.sectors[i].site);
    if (d2 < best_d2 ||
        (d2 == best_d2 && best >= 0 && set.sectors[i].sector_id < set.sectors[size_t(best)].sector_id)) {
      best_d2 = d2;
      best = int(i);
    }
  }
  return best;
}

std::vector<TowerSite> load_towers_csv(const std::string& path) {
  std::vector<TowerSite> out;
  for_each_csv_row(path, "tower_id,lat,lon", [&](size_t ln, const auto& f) {
    require_input(f.size() == 3, path + ":" + std::to_string(ln) + ": want 3 fields");
    out.push_back({std::string(f[0]), parse_f64(f[1], path, ln), parse_f64(f[2], path, ln)});
  });
  return out;
}

std::vector<AntennaGroup> load_antennas_csv(const std::string& path) {
  std::vector<AntennaGroup> out;
  for_each_csv_row(path, "tower_id,azimuth_deg", [&](size_t ln, const auto& f) {
    require_input(f.size() == 2, path + ":" + std::to_string(ln) + ": want 2 fields");
    out.push_back({std::string(f[0]), parse_f64(f[1], path, ln)});
  });
  return out;
}

void write_towers_csv(const std::string& path, const std::vector<TowerSite>& towers) {
  AtomicWriter w(path);
  w.append("tower_id,lat,lon\n");
  for (const TowerSite& t : towers)
    w.appendf("%s,%.12g,%.12g\n", t.tower_id.c_str(), t.lat, t.lon);
  w.commit();
}

void write_antennas_csv(const std::string& path, const std::vector<AntennaGroup>& antennas) {
  AtomicWriter w(path);
  w.append("tower_id,azimuth_deg\n");
  for (const AntennaGroup& a : antennas)
    w.appendf("%s,%.12g\n", a.tower_id.c_str(), a.azimuth_deg);
  w.commit();
}

void write_sectors_csv(const SectorSet& set, const std::string& csv_path,
                       const std::string& wkt_path) {
  AtomicWriter w(csv_path);
  w.append("sector_id,tower_id,azimuth_deg,centroid_lat,centroid_lon,area_km2\n");
  for (const Sector& s : set.sectors)
    w.appendf("%s,%s,%.12g,%.12g,%.12g,%.12g\n", s.sector_id.c_str(), s.tower_id.c_str(),
              s.azimuth_deg, s.centroid_lat, s.centroid_lon, s.area_km2);
  w.commit();

  AtomicWriter wk(wkt_path);
  wk.append("sector_id,wkt\n");
  for (const Sector& s : set.sectors) {
    wk.appendf("%s,POLYGON ((", s.sector_id.c_str());
    for (size_t i = 0; i <= s.polygon.size(); ++i) {
      const Vec2& v = s.polygon[i % s.polygon.size()];
      wk.appendf("%s%.3f %.3f", i == 0 ? "" : ", ", v.x, v.y);
    }
    wk.append("))\n");
  }
  wk.commit();
}

namespace {

Polygon parse_wkt_polygon(const std::string& wkt, const std::string& path, size_t ln) {
  const std::string prefix = "POLYGON ((";
  require_input(wkt.rfind(prefix, 0) == 0 && wkt.size() > prefix.size() + 2 &&
                    wkt.substr(wkt.size() - 2) == "))",
                path + ":" + std::to_string(ln) + ": malformed WKT polygon");
  const std::string body = wkt.substr(prefix.size(), wkt.size() - prefix.size() - 2);
  Polygon poly;
  size_t start = 0;
  while (start < body.size()) {
    size_t end = body.find(", ", start);
    if (end == std::string::npos) end = body.size();
    const std::string pair = body.substr(start, end - start);
    const size_t sp = pair.find(' ');
    require_input(sp != std::string::npos, path + ":" + std::to_string(ln) + ": malformed WKT pair");
    poly.push_back({parse_f64(pair.substr(0, sp), path, ln), parse_f64(pair.substr(sp + 1), path, ln)});
    start = end + 2;
  }
  require_input(poly.size() >= 4, path + ":" + std::to_string(ln) + ": degenerate WKT polygon");
  poly.pop_back();  // drop the closing vertex
  return poly;
}

}  // namespace

SectorSet load_sectors_csv(const std::string& csv_path, const std::string& wkt_path,
                           const StudyArea& area) {
  SectorSet set;
  set.area = area;
  set.center_utm = to_vec(latlon_to_utm(area.center_lat, area.center_lon));
  set.disc = regular_ngon(set.center_utm, area.radius_km * 1000.0, kDiscVertices);

  std::unordered_map<std::string, size_t> index;
  for_each_csv_row(csv_path, "sector_id,tower_id,azimuth_deg,centroid_lat,centroid_lon,area_km2",
                   [&](size_t ln, const auto& f) {
                     require_input(f.size() == 6, csv_path + ":" + std::to_string(ln) + ": want 6 fields");
                     Sector s;
                     s.sector_id = std::string(f[0]);
                     s.tower_id = std::string(f[1]);
                     s.azimuth_deg = parse_f64(f[2], csv_path, ln);
                     s.centroid_lat = parse_f64(f[3], csv_path, ln);
                     s.centroid_lon = parse_f64(f[4], csv_path, ln);
                     s.area_km2 = parse_f64(f[5], csv_path, ln);
                     s.centroid_utm = to_vec(latlon_to_utm(s.centroid_lat, s.centroid_lon));
                     require_input(index.emplace(s.sector_id, set.sectors.size()).second,
                                   csv_path + ":" + std::to_string(ln) + ": duplicate sector_id " +
                                       s.sector_id);
                     set.sectors.push_back(std::move(s));
                   });
  for_each_id_payload_row(wkt_path, "sector_id,wkt", [&](size_t ln, std::string_view id,
                                                         std::string_view wkt) {
    const auto it = index.find(std::string(id));
    require_input(it != index.end(),
                  wkt_path + ":" + std::to_string(ln) + ": unknown sector_id " + std::string(id));
    Sector& s = set.sectors[it->second];
    s.polygon = parse_wkt_polygon(std::string(wkt), wkt_path, ln);
    s.site = s.centroid_utm;  // generator sites are not persisted
  });
  set.exact_sites = false;
  for (const Sector& s : set.sectors)
    require_input(!s.polygon.empty(), "sector " + s.sector_id + " missing WKT polygon");
  return set;
}

}  // namespace cellscape
