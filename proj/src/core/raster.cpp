#include "raster.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>

#include "csvio.hpp"
#include "delaunay.hpp"
#include "error.hpp"

namespace cellscape {

Raster interpolate_grid(const std::vector<Vec2>& centroids, const std::vector<double>& values,
                        double cell_m, const GridExtent* extent) {
  require_input(centroids.size() == values.size(), "centroid/value count mismatch");
  require_input(centroids.size() >= 3, "interpolation needs at least 3 centroids");
  require_input(cell_m > 0.0, "cell size must be positive");
  for (double v : values) require_input(std::isfinite(v), "non-finite interpolation value");

  const Delaunay tri(centroids);

  GridExtent ex;
  if (extent != nullptr) {
    ex = *extent;
    require_input(ex.valid(), "invalid grid extent");
  } else {
    ex.min_e = ex.max_e = centroids[0].x;
    ex.min_n = ex.max_n = centroids[0].y;
    for (const Vec2& c : centroids) {
      ex.min_e = std::min(ex.min_e, c.x);
      ex.max_e = std::max(ex.max_e, c.x);
      ex.min_n = std::min(ex.min_n, c.y);
      ex.max_n = std::max(ex.max_n, c.y);
    }
    ex.min_e -= cell_m;
    ex.min_n -= cell_m;
    ex.max_e += cell_m;
    ex.max_n += cell_m;
  }

  Raster r;
  r.cell_m = cell_m;
  r.origin_easting = ex.min_e;
  r.origin_northing = ex.min_n;
  r.ncols = int(std::ceil((ex.max_e - ex.min_e) / cell_m));
  r.nrows = int(std::ceil((ex.max_n - ex.min_n) / cell_m));
  require_input(r.ncols > 0 && r.nrows > 0, "empty grid extent");
  r.values.assign(size_t(r.ncols) * size_t(r.nrows), r.nodata);

  for (int row = 0; row < r.nrows; ++row) {
    int hint = 0;
    for (int col = 0; col < r.ncols; ++col) {
      std::array<double, 3> bary;
      const Vec2 q = r.cell_center(row, col);
      const int t = tri.locate(q, bary, hint);
      if (t < 0) continue;
      hint = t;
      const Triangle& tr = tri.triangles()[size_t(t)];
      r.at(row, col) = bary[0] * values[size_t(tr.v[0])] + bary[1] * values[size_t(tr.v[1])] +
                       bary[2] * values[size_t(tr.v[2])];
    }
  }
  return r;
}

std::vector<double> density_values(const std::vector<double>& volumes,
                                   const std::vector<double>& areas_km2) {
  require_input(volumes.size() == areas_km2.size(), "volume/area count mismatch");
  std::vector<double> out(volumes.size());
  for (size_t i = 0; i < volumes.size(); ++i) {
    require_input(areas_km2[i] > 0.0, "sector area missing or non-positive");
    out[i] = volumes[i] / areas_km2[i];
  }
  return out;
}

void write_raster_asc(const Raster& r, const std::string& path) {
  require_input(r.ncols > 0 && r.nrows > 0, "empty raster");
  AtomicWriter w(path);
  w.appendf("ncols %d\n", r.ncols);
  w.appendf("nrows %d\n", r.nrows);
  w.appendf("xllcorner %.10g\n", r.origin_easting);
  w.appendf("yllcorner %.10g\n", r.origin_northing);
  w.appendf("cellsize %.10g\n", r.cell_m);
  w.appendf("NODATA_value %.6g\n", r.nodata);
  for (int row = 0; row < r.nrows; ++row) {
    for (int col = 0; col < r.ncols; ++col)
      w.appendf("%s%.6g", col == 0 ? "" : " ", r.at(row, col));
    w.append("\n");
  }
  w.commit();
}

Raster read_raster_asc(const std::string& path) {
  std::ifstream in(path);
  require_input(bool(in), "cannot open " + path);
  Raster r;
  std::string key;
  auto header = [&](const char* want) {
    double v = 0;
    in >> key >> v;
    require_input(bool(in) && key == want, path + ": bad header, expected " + want);
    return v;
  };
  r.ncols = int(header("ncols"));
  r.nrows = int(header("nrows"));
  r.origin_easting = header("xllcorner");
  r.origin_northing = header("yllcorner");
  r.cell_m = header("cellsize");
  r.nodata = header("NODATA_value");
  require_input(r.ncols > 0 && r.nrows > 0, path + ": empty raster");
  r.values.assign(size_t(r.ncols) * size_t(r.nrows), r.nodata);
  for (double& v : r.values) {
    in >> v;
    require_input(bool(in), path + ": truncated raster body");
  }
  return r;
}

}  // namespace cellscape
