#include "tsmap.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "csvio.hpp"
#include "error.hpp"

namespace cellscape {

TimeSpaceMap time_space_map(const VolumeTensor& daily, const SectorSet& sectors,
                            double saturation_q) {
  require_input(daily.resolution == Resolution::day, "time-space map wants a daily tensor");
  require_input(daily.n_bins > 0 && daily.n_sectors() > 0, "empty tensor");
  require_input(int64_t(sectors.sectors.size()) == daily.n_sectors(),
                "sector set does not match the tensor");
  require_input(saturation_q > 0.0 && saturation_q <= 1.0, "saturation quantile out of (0, 1]");

  TimeSpaceMap m;
  m.saturation_q = saturation_q;
  m.n_days = daily.n_bins;
  m.n_sectors = daily.n_sectors();
  m.order.resize(size_t(m.n_sectors));
  std::iota(m.order.begin(), m.order.end(), 0);
  std::sort(m.order.begin(), m.order.end(), [&](int a, int b) {
    const Sector& sa = sectors.sectors[size_t(a)];
    const Sector& sb = sectors.sectors[size_t(b)];
    if (sa.centroid_lat != sb.centroid_lat) return sa.centroid_lat < sb.centroid_lat;
    return sa.sector_id < sb.sector_id;
  });
  for (int idx : m.order) m.sector_ids.push_back(daily.sector_ids[size_t(idx)]);
  for (int64_t d = 0; d < m.n_days; ++d) m.jd.push_back(day_of_year(daily.bin_time(d), daily.t0.year));

  m.values.resize(size_t(m.n_days) * size_t(m.n_sectors));
  for (int64_t d = 0; d < m.n_days; ++d)
    for (int64_t c = 0; c < m.n_sectors; ++c)
      m.values[size_t(d * m.n_sectors + c)] = double(daily.at(m.order[size_t(c)], d));
  return m;
}

std::vector<double> tsmap_display(const TimeSpaceMap& m) {
  std::vector<double> sorted(m.values);
  std::sort(sorted.begin(), sorted.end());
  const double h = m.saturation_q * double(sorted.size() - 1);
  const size_t lo = size_t(std::floor(h));
  const size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double clip = sorted[lo] + (h - double(lo)) * (sorted[hi] - sorted[lo]);

  std::vector<double> out(m.values.size(), 0.0);
  if (clip <= 0.0) return out;  // all-zero map
  const double denom = std::log10(clip + 1.0);
  for (size_t i = 0; i < out.size(); ++i)
    out[i] = std::log10(std::min(m.values[i], clip) + 1.0) / denom;
  return out;
}

void write_tsmap_csv(const std::string& path, const TimeSpaceMap& m) {
  AtomicWriter w(path);
  w.append("jd");
  for (const std::string& id : m.sector_ids) w.appendf(",%s", id.c_str());
  w.append("\n");
  for (int64_t d = 0; d < m.n_days; ++d) {
    w.appendf("%lld", (long long)m.jd[size_t(d)]);
    for (int64_t c = 0; c < m.n_sectors; ++c) w.appendf(",%.10g", m.at(d, c));
    w.append("\n");
  }
  w.commit();
}

}  // namespace cellscape
