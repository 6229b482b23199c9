#pragma once

#include <string>
#include <vector>

#include "geodesy.hpp"
#include "geom.hpp"

namespace cellscape {

struct TowerSite {
  std::string tower_id;
  double lat = 0.0;
  double lon = 0.0;
};

struct AntennaGroup {
  std::string tower_id;
  double azimuth_deg = 0.0;  // clockwise from north, [0, 360)
};

struct StudyArea {
  double center_lat = 40.7580;   // Times Square
  double center_lon = -73.9855;
  double radius_km = 80.5;       // 50 miles
};

struct Sector {
  std::string sector_id;  // "<tower_id>:<azimuth>" or bare tower_id for tower-only cells
  std::string tower_id;
  double azimuth_deg = -1.0;  // < 0 for tower-only cells
  Polygon polygon;            // UTM meters, CCW
  Vec2 site;                  // perturbed generator site, UTM meters
  Vec2 centroid_utm;
  double centroid_lat = 0.0;
  double centroid_lon = 0.0;
  double area_km2 = 0.0;
};

struct SectorSet {
  StudyArea area;
  Vec2 center_utm;
  Polygon disc;  // study disc approximated by a 720-gon
  std::vector<Sector> sectors;
  bool exact_sites = true;  // false after reloading from CSV (sites not persisted)

  int find(const std::string& sector_id) const;  // -1 if absent
  std::vector<std::string> ids() const;
};

constexpr int kDiscVertices = 720;
constexpr double kDefaultEpsilonM = 1.0;
// Antenna groups on one tower closer than this merge into one sector.
constexpr double kAzimuthMergeDeg = 1.0;

// Voronoi partition of the study disc over tower sites perturbed epsilon
// meters toward each antenna azimuth. One sector per (tower, azimuth) group.
SectorSet build_sectors(const std::vector<TowerSite>& towers,
                        const std::vector<AntennaGroup>& antennas, const StudyArea& area,
                        double epsilon_m = kDefaultEpsilonM);

// Granularity baseline: one Voronoi cell per tower, azimuths ignored.
SectorSet tower_only_tessellation(const std::vector<TowerSite>& towers, const StudyArea& area);

// Sector index containing the point (nearest perturbed site), -1 outside the disc.
int locate_point(const SectorSet& set, double lat, double lon);

// CSV I/O (towers: tower_id,lat,lon; antennas: tower_id,azimuth_deg).
std::vector<TowerSite> load_towers_csv(const std::string& path);
std::vector<AntennaGroup> load_antennas_csv(const std::string& path);
void write_towers_csv(const std::string& path, const std::vector<TowerSite>& towers);
void write_antennas_csv(const std::string& path, const std::vector<AntennaGroup>& antennas);

// Sector table plus WKT polygon sidecar.
void write_sectors_csv(const SectorSet& set, const std::string& csv_path,
                       const std::string& wkt_path);
SectorSet load_sectors_csv(const std::string& csv_path, const std::string& wkt_path,
                           const StudyArea& area);

}  // namespace cellscape
