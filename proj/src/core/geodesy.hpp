#pragma once

#include "geom.hpp"

namespace cellscape {

// All projected coordinates in this library live in UTM zone 18N on the
// WGS84 datum (central meridian 75W, k0 = 0.9996, false easting 500 km).
struct UtmPoint {
  double easting = 0.0;   // meters
  double northing = 0.0;  // meters
};

constexpr double kUtmCentralMeridianDeg = -75.0;
constexpr double kEarthMeanRadiusKm = 6371.0088;

// Gauss-Krueger series to 6th order in the third flattening; round-trip
// error is far below a millimeter anywhere in the study area.
UtmPoint latlon_to_utm(double lat_deg, double lon_deg);
void utm_to_latlon(const UtmPoint& p, double& lat_deg, double& lon_deg);

inline Vec2 to_vec(const UtmPoint& p) { return {p.easting, p.northing}; }

// Haversine distance on the mean-radius sphere.
double great_circle_km(double lat1, double lon1, double lat2, double lon2);

}  // namespace cellscape
