#pragma once

#include <string>
#include <vector>

#include "tessellation.hpp"
#include "volumes.hpp"

namespace cellscape {

struct QuakeScenario {
  CivilMinute onset;  // first minute of the disturbance (13:51 for the paper's event)
  double epicenter_lat = 0.0;
  double epicenter_lon = 0.0;
};

// Distance-binned quantile envelopes of per-sector anomaly ratios.
struct ResponseProfile {
  double bin_km = 25.0;
  std::vector<double> center_km;
  std::vector<double> q10, q50, q90;
  std::vector<int64_t> n;  // sectors per bin; 0 = masked
};

// Buckets sectors by great-circle distance from the epicenter into
// equal-width bins and takes per-bin quantiles of the anomaly at `bin`.
ResponseProfile quake_profile(const AnomalyField& a, int64_t bin, const SectorSet& sectors,
                              double epi_lat, double epi_lon, double bin_km = 25.0);
void write_profile_csv(const std::string& path, const ResponseProfile& p);

enum class ResponseLabel { low, normal, high };
// high: ratio > mu + sigma; low: ratio < mu - sigma; undefined cells are
// labelled normal (the mask travels with the anomaly field).
std::vector<ResponseLabel> classify_response(const AnomalyField& a, int64_t bin);
void write_classify_csv(const std::string& path, const AnomalyField& a, int64_t bin,
                        const std::vector<ResponseLabel>& labels);

struct QuakeTiming {
  bool onset_found = false;
  int64_t onset_bin = -1;
  int64_t peak_bin = -1;
  bool recovery_found = false;
  int64_t recovery_bin = -1;
  bool tau_found = false;
  double decay_tau_bins = 0.0;
  double pre_mean = 0.0;
  double pre_sigma = 0.0;
};

// Onset: first bin in [scan_start, scan_start + scan_bins) with mu above
// pre_mean + nsigma * pre_sigma, where the pre-window is the pre_bins bins
// before scan_start. Peak: argmax mu over the scan. Recovery: first
// post-peak bin back inside pre_mean + 2 * pre_sigma. Decay: least squares
// of log(mu - 1) over the post-peak non-increasing run.
QuakeTiming quake_timing(const SpatialStats& stats, int64_t scan_start, int64_t pre_bins,
                         int64_t scan_bins, double onset_nsigma = 5.0);
void write_timing_csv(const std::string& path, const QuakeTiming& calls, const QuakeTiming& texts,
                      const SpatialStats& ref);

struct Zone {
  std::string zone_id;
  std::vector<Vec2> ring;  // lon/lat degrees (WKT x y order), closed implicitly
};
std::vector<Zone> load_zones_csv(const std::string& path);
void write_zones_csv(const std::string& path, const std::vector<Zone>& zones);

// Membership by sector centroid point-in-polygon (boundary counts inside).
std::vector<int> zone_members(const Zone& zone, const SectorSet& sectors);

struct ZoneSeries {
  std::string zone_id;
  bool empty = false;
  std::vector<int> members;
  int64_t n_bins = 0;
  std::vector<int64_t> calls, texts;
  std::vector<double> call_anom, text_anom;
  std::vector<uint8_t> call_def, text_def;
};

// Per-zone sums of both channels plus anomaly ratios at the given lag.
std::vector<ZoneSeries> zone_series(const VolumeTensor& calls, const VolumeTensor& texts,
                                    const SectorSet& sectors, const std::vector<Zone>& zones,
                                    int64_t lag_bins = 0);
void write_zone_series_csv(const std::string& path, const std::vector<ZoneSeries>& zs,
                           const VolumeTensor& ref);

struct Divergence {
  bool found = false;
  int64_t onset_bin = -1;
  double call_slope = 0.0;
  double text_slope = 0.0;
};

// First bin in the window where the call anomaly drops below 1 - theta while
// the text anomaly holds at or above 1 - theta/2; slopes fit over the
// following 6 bins.
Divergence divergence_detect(const ZoneSeries& zs, int64_t win_start, int64_t win_len,
                             double theta = 0.3);
void write_divergence_csv(const std::string& path, const std::vector<ZoneSeries>& zs,
                          const std::vector<Divergence>& det, const VolumeTensor& ref);

}  // namespace cellscape
