#pragma once

#include <string>
#include <vector>

#include "tessellation.hpp"
#include "volumes.hpp"

namespace cellscape {

// Daily volume as a function of time (day rows) and space (columns ordered
// by sector centroid latitude, ties by sector_id).
struct TimeSpaceMap {
  std::vector<int64_t> jd;              // day-of-year labels
  std::vector<int> order;               // column -> sector index in the source tensor
  std::vector<std::string> sector_ids;  // latitude order
  int64_t n_days = 0;
  int64_t n_sectors = 0;
  std::vector<double> values;  // [day * n_sectors + col]
  double saturation_q = 0.98;

  double at(int64_t day, int64_t col) const { return values[size_t(day * n_sectors + col)]; }
};

TimeSpaceMap time_space_map(const VolumeTensor& daily, const SectorSet& sectors,
                            double saturation_q = 0.98);

// Display companion: clip at the saturation quantile, then log10(v + 1)
// scaled to [0, 1]. Kept apart from the data matrix so numeric outputs stay
// physical.
std::vector<double> tsmap_display(const TimeSpaceMap& m);

void write_tsmap_csv(const std::string& path, const TimeSpaceMap& m);

}  // namespace cellscape
