#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "timegrid.hpp"

namespace cellscape {

enum class Channel { calls, texts };
enum class Resolution { minute, hour, day };

const char* channel_name(Channel c);
const char* resolution_name(Resolution r);
Channel parse_channel(const std::string& s);
Resolution parse_resolution(const std::string& s);
int64_t bin_minutes(Resolution r);

// Dense sectors x bins matrix of non-negative counts for one channel.
// Bins are contiguous minutes/hours/days of local civil time from t0.
struct VolumeTensor {
  Channel channel = Channel::calls;
  Resolution resolution = Resolution::minute;
  CivilMinute t0;
  std::vector<std::string> sector_ids;
  int64_t n_bins = 0;
  std::vector<int64_t> counts;  // [sector * n_bins + bin]

  int64_t n_sectors() const { return int64_t(sector_ids.size()); }
  int64_t& at(int64_t s, int64_t b) { return counts[size_t(s * n_bins + b)]; }
  int64_t at(int64_t s, int64_t b) const { return counts[size_t(s * n_bins + b)]; }
  // Civil timestamp of a bin start.
  CivilMinute bin_time(int64_t b) const;
  // Bin index of a civil timestamp; throws input_error outside the span or misaligned.
  int64_t bin_of(const CivilMinute& c) const;
  int64_t total() const;
};

VolumeTensor make_tensor(Channel ch, Resolution res, const CivilMinute& t0,
                         std::vector<std::string> sector_ids, int64_t n_bins);

struct ChannelPair {
  VolumeTensor calls;
  VolumeTensor texts;
};

// CSV rows `timestamp,sector_id,calls,texts`, timestamps at bin starts.
// Missing (sector, bin) pairs are zero; duplicate rows accumulate.
ChannelPair load_volumes(const std::string& path, const std::vector<std::string>& sector_ids,
                         const CivilMinute& t0, int64_t n_bins,
                         Resolution res = Resolution::minute);
void write_volumes_csv(const std::string& path, const VolumeTensor& calls,
                       const VolumeTensor& texts, bool skip_zero_rows = true);

struct ResampleResult {
  VolumeTensor tensor;
  int64_t dropped_bins = 0;  // trailing source bins not covering a whole target bin
};
ResampleResult resample(const VolumeTensor& t, Resolution to);

// Ratio of each bin to the bin one lag earlier. 0/0 counts as "no change"
// (ratio 1, defined); k/0 is undefined and masked; the first lag_bins
// columns are undefined.
struct AnomalyField {
  Resolution resolution = Resolution::minute;
  CivilMinute t0;
  int64_t lag_bins = 0;
  std::vector<std::string> sector_ids;
  int64_t n_bins = 0;
  std::vector<double> ratios;
  std::vector<uint8_t> defined;

  int64_t n_sectors() const { return int64_t(sector_ids.size()); }
  double ratio(int64_t s, int64_t b) const { return ratios[size_t(s * n_bins + b)]; }
  bool is_defined(int64_t s, int64_t b) const { return defined[size_t(s * n_bins + b)] != 0; }
};

// lag_bins == 0 picks one week at the tensor resolution.
AnomalyField anomaly(const VolumeTensor& t, int64_t lag_bins = 0);
void write_anomaly_csv(const std::string& path, const AnomalyField& a);

// Population mean and standard deviation across sectors per bin. For anomaly
// fields only defined cells contribute; bins with no defined cell are masked.
struct SpatialStats {
  Resolution resolution = Resolution::minute;
  CivilMinute t0;
  int64_t n_bins = 0;
  std::vector<double> mu;
  std::vector<double> sigma;
  std::vector<int64_t> n_defined;
  std::vector<uint8_t> defined;
};

SpatialStats minute_stats(const VolumeTensor& t);
SpatialStats minute_stats(const AnomalyField& a);
void write_stats_csv(const std::string& path, const SpatialStats& s);

struct TracePoint {
  int sector = -1;
  int64_t volume = 0;
};
// Per-bin argmax sector; ties go to the lexicographically smaller sector_id.
std::vector<TracePoint> max_sector_trace(const VolumeTensor& t);
void write_trace_csv(const std::string& path, const VolumeTensor& t,
                     const std::vector<TracePoint>& trace);

struct ScalingFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r = 0.0;
  int64_t n_used = 0;
  int64_t n_excluded = 0;
};
// Least squares of log10(y) on log10(x) over strictly positive pairs.
ScalingFit scaling_fit(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace cellscape
