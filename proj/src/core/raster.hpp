#pragma once

#include <string>
#include <vector>

#include "geom.hpp"

namespace cellscape {

// Regular grid in UTM meters. Values are stored row-major with row 0 at the
// top (northernmost), matching the ESRI ASCII writing order.
struct Raster {
  double origin_easting = 0.0;   // lower-left corner
  double origin_northing = 0.0;
  double cell_m = 30.0;
  int ncols = 0;
  int nrows = 0;
  double nodata = -9999.0;
  std::vector<double> values;

  double& at(int row, int col) { return values[size_t(row) * size_t(ncols) + size_t(col)]; }
  double at(int row, int col) const { return values[size_t(row) * size_t(ncols) + size_t(col)]; }
  Vec2 cell_center(int row, int col) const {
    return {origin_easting + (double(col) + 0.5) * cell_m,
            origin_northing + (double(nrows - 1 - row) + 0.5) * cell_m};
  }
};

struct GridExtent {
  double min_e = 0.0, min_n = 0.0, max_e = 0.0, max_n = 0.0;
  bool valid() const { return max_e > min_e && max_n > min_n; }
};

// Scattered-data gridding: Delaunay triangulation of the centroids with
// barycentric-linear interpolation inside the convex hull, nodata outside.
// Default extent is the centroid bounding box padded by one cell.
Raster interpolate_grid(const std::vector<Vec2>& centroids, const std::vector<double>& values,
                        double cell_m, const GridExtent* extent = nullptr);

// Volume per km2 for each sector; throws if any area is missing or zero.
std::vector<double> density_values(const std::vector<double>& volumes,
                                   const std::vector<double>& areas_km2);

void write_raster_asc(const Raster& r, const std::string& path);
Raster read_raster_asc(const std::string& path);

}  // namespace cellscape
