#include "volumes.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "csvio.hpp"
#include "error.hpp"

namespace cellscape {

const char* channel_name(Channel c) { return c == Channel::calls ? "calls" : "texts"; }

const char* resolution_name(Resolution r) {
  switch (r) {
    case Resolution::minute: return "minute";
    case Resolution::hour: return "hour";
    default: return "day";
  }
}

Channel parse_channel(const std::string& s) {
  if (s == "calls") return Channel::calls;
  if (s == "texts") return Channel::texts;
  throw input_error("unknown channel '" + s + "' (want calls|texts)");
}

Resolution parse_resolution(const std::string& s) {
  if (s == "minute") return Resolution::minute;
  if (s == "hour") return Resolution::hour;
  if (s == "day") return Resolution::day;
  throw input_error("unknown resolution '" + s + "' (want minute|hour|day)");
}

int64_t bin_minutes(Resolution r) {
  switch (r) {
    case Resolution::minute: return 1;
    case Resolution::hour: return 60;
    default: return 1440;
  }
}

CivilMinute VolumeTensor::bin_time(int64_t b) const {
  return civil_from_minute_index(minute_index(t0) + b * bin_minutes(resolution));
}

int64_t VolumeTensor::bin_of(const CivilMinute& c) const {
  const int64_t rel = minute_index(c) - minute_index(t0);
  const int64_t bm = bin_minutes(resolution);
  require_input(rel >= 0 && rel < n_bins * bm,
                "timestamp " + format_civil_minute(c) + " outside the tensor span");
  require_input(rel % bm == 0, "timestamp " + format_civil_minute(c) +
                                   " not aligned to the " + resolution_name(resolution) + " grid");
  return rel / bm;
}

int64_t VolumeTensor::total() const {
  int64_t s = 0;
  for (int64_t v : counts) s += v;
  return s;
}

VolumeTensor make_tensor(Channel ch, Resolution res, const CivilMinute& t0,
                         std::vector<std::string> sector_ids, int64_t n_bins) {
  require_input(n_bins > 0, "tensor needs at least one bin");
  require_input(!sector_ids.empty(), "tensor needs at least one sector");
  VolumeTensor t;
  t.channel = ch;
  t.resolution = res;
  t.t0 = t0;
  t.sector_ids = std::move(sector_ids);
  t.n_bins = n_bins;
  t.counts.assign(size_t(t.n_sectors() * n_bins), 0);
  return t;
}

ChannelPair load_volumes(const std::string& path, const std::vector<std::string>& sector_ids,
                         const CivilMinute& t0, int64_t n_bins, Resolution res) {
  ChannelPair out{make_tensor(Channel::calls, res, t0, sector_ids, n_bins),
                  make_tensor(Channel::texts, res, t0, sector_ids, n_bins)};
  std::unordered_map<std::string_view, int64_t> index;
  index.reserve(sector_ids.size());
  for (size_t i = 0; i < sector_ids.size(); ++i) {
    require_input(index.emplace(out.calls.sector_ids[i], int64_t(i)).second,
                  "duplicate sector_id " + sector_ids[i]);
  }
  const int64_t t0_min = minute_index(t0);
  const int64_t bm = bin_minutes(res);
  std::vector<std::string> unknown;

  for_each_csv_row(path, "timestamp,sector_id,calls,texts", [&](size_t ln, const auto& f) {
    require_input(f.size() == 4, path + ":" + std::to_string(ln) + ": want 4 fields");
    const CivilMinute ts = parse_civil_minute(std::string(f[0]));
    const auto it = index.find(f[1]);
    if (it == index.end()) {
      if (unknown.size() < 20) unknown.push_back(std::string(f[1]));
      return;
    }
    const int64_t rel = minute_index(ts) - t0_min;
    require_input(rel >= 0 && rel < n_bins * bm,
                  path + ":" + std::to_string(ln) + ": timestamp outside the load window");
    require_input(rel % bm == 0, path + ":" + std::to_string(ln) +
                                     ": timestamp not aligned to the bin grid");
    const int64_t b = rel / bm;
    const int64_t calls = parse_i64(f[2], path, ln);
    const int64_t texts = parse_i64(f[3], path, ln);
    require_input(calls >= 0 && texts >= 0, path + ":" + std::to_string(ln) + ": negative count");
    out.calls.at(it->second, b) += calls;
    out.texts.at(it->second, b) += texts;
  });

  if (!unknown.empty()) {
    std::string msg = path + ": unknown sector_id(s):";
    for (const std::string& s : unknown) msg += " " + s;
    throw input_error(msg);
  }
  return out;
}

void write_volumes_csv(const std::string& path, const VolumeTensor& calls,
                       const VolumeTensor& texts, bool skip_zero_rows) {
  require_input(calls.sector_ids == texts.sector_ids && calls.n_bins == texts.n_bins &&
                    calls.resolution == texts.resolution,
                "call/text tensors misaligned");
  AtomicWriter w(path);
  w.append("timestamp,sector_id,calls,texts\n");
  for (int64_t b = 0; b < calls.n_bins; ++b) {
    const std::string ts = format_civil_minute(calls.bin_time(b));
    for (int64_t s = 0; s < calls.n_sectors(); ++s) {
      const int64_t c = calls.at(s, b), t = texts.at(s, b);
      if (skip_zero_rows && c == 0 && t == 0) continue;
      w.appendf("%s,%s,%lld,%lld\n", ts.c_str(), calls.sector_ids[size_t(s)].c_str(),
                (long long)c, (long long)t);
    }
  }
  w.commit();
}

ResampleResult resample(const VolumeTensor& t, Resolution to) {
  require_input(bin_minutes(to) > bin_minutes(t.resolution),
                "resample target must be coarser than the source");
  const int64_t ratio = bin_minutes(to) / bin_minutes(t.resolution);
  const int64_t out_bins = t.n_bins / ratio;
  require_input(out_bins > 0, "tensor shorter than one target bin");

  ResampleResult res;
  res.dropped_bins = t.n_bins - out_bins * ratio;
  res.tensor = make_tensor(t.channel, to, t.t0, t.sector_ids, out_bins);
  for (int64_t s = 0; s < t.n_sectors(); ++s) {
    for (int64_t ob = 0; ob < out_bins; ++ob) {
      int64_t acc = 0;
      const int64_t base = ob * ratio;
      for (int64_t k = 0; k < ratio; ++k) acc += t.at(s, base + k);
      res.tensor.at(s, ob) = acc;
    }
  }
  return res;
}

AnomalyField anomaly(const VolumeTensor& t, int64_t lag_bins) {
  if (lag_bins == 0) lag_bins = 7LL * 1440 / bin_minutes(t.resolution);
  require_input(lag_bins >= 1, "lag must be at least one bin");
  require_input(lag_bins < t.n_bins, "lag covers the whole tensor span");

  AnomalyField a;
  a.resolution = t.resolution;
  a.t0 = t.t0;
  a.lag_bins = lag_bins;
  a.sector_ids = t.sector_ids;
  a.n_bins = t.n_bins;
  a.ratios.assign(t.counts.size(), 0.0);
  a.defined.assign(t.counts.size(), 0);

  for (int64_t s = 0; s < t.n_sectors(); ++s) {
    for (int64_t b = lag_bins; b < t.n_bins; ++b) {
      const int64_t num = t.at(s, b);
      const int64_t den = t.at(s, b - lag_bins);
      const size_t idx = size_t(s * t.n_bins + b);
      if (den > 0) {
        a.ratios[idx] = double(num) / double(den);
        a.defined[idx] = 1;
      } else if (num == 0) {
        a.ratios[idx] = 1.0;  // no activity then, none now: no change
        a.defined[idx] = 1;
      }
    }
  }
  return a;
}

void write_anomaly_csv(const std::string& path, const AnomalyField& a) {
  AtomicWriter w(path);
  w.append("sector_id,bin,ratio,defined\n");
  for (int64_t s = 0; s < a.n_sectors(); ++s)
    for (int64_t b = 0; b < a.n_bins; ++b) {
      if (a.is_defined(s, b))
        w.appendf("%s,%lld,%.10g,1\n", a.sector_ids[size_t(s)].c_str(), (long long)b,
                  a.ratio(s, b));
      else
        w.appendf("%s,%lld,NA,0\n", a.sector_ids[size_t(s)].c_str(), (long long)b);
    }
  w.commit();
}

namespace {

SpatialStats stats_shell(Resolution res, const CivilMinute& t0, int64_t n_bins) {
  SpatialStats st;
  st.resolution = res;
  st.t0 = t0;
  st.n_bins = n_bins;
  st.mu.assign(size_t(n_bins), 0.0);
  st.sigma.assign(size_t(n_bins), 0.0);
  st.n_defined.assign(size_t(n_bins), 0);
  st.defined.assign(size_t(n_bins), 0);
  return st;
}

}  // namespace

SpatialStats minute_stats(const VolumeTensor& t) {
  require_input(t.n_sectors() >= 2, "spatial statistics need at least 2 sectors");
  SpatialStats st = stats_shell(t.resolution, t.t0, t.n_bins);
  const int64_t n = t.n_sectors();
  for (int64_t b = 0; b < t.n_bins; ++b) {
    double sum = 0.0;
    for (int64_t s = 0; s < n; ++s) sum += double(t.at(s, b));
    const double mu = sum / double(n);
    double ss = 0.0;
    for (int64_t s = 0; s < n; ++s) {
      const double d = double(t.at(s, b)) - mu;
      ss += d * d;
    }
    st.mu[size_t(b)] = mu;
    st.sigma[size_t(b)] = std::sqrt(ss / double(n));
    st.n_defined[size_t(b)] = n;
    st.defined[size_t(b)] = 1;
  }
  return st;
}

SpatialStats minute_stats(const AnomalyField& a) {
  require_input(a.n_sectors() >= 2, "spatial statistics need at least 2 sectors");
  SpatialStats st = stats_shell(a.resolution, a.t0, a.n_bins);
  for (int64_t b = 0; b < a.n_bins; ++b) {
    double sum = 0.0;
    int64_t n = 0;
    for (int64_t s = 0; s < a.n_sectors(); ++s) {
      if (!a.is_defined(s, b)) continue;
      sum += a.ratio(s, b);
      ++n;
    }
    if (n == 0) continue;  // stays masked
    const double mu = sum / double(n);
    double ss = 0.0;
    for (int64_t s = 0; s < a.n_sectors(); ++s) {
      if (!a.is_defined(s, b)) continue;
      const double d = a.ratio(s, b) - mu;
      ss += d * d;
    }
    st.mu[size_t(b)] = mu;
    st.sigma[size_t(b)] = std::sqrt(ss / double(n));
    st.n_defined[size_t(b)] = n;
    st.defined[size_t(b)] = 1;
  }
  return st;
}

void write_stats_csv(const std::string& path, const SpatialStats& s) {
  AtomicWriter w(path);
  w.append("bin,timestamp,mu,sigma,n\n");
  const int64_t bm = bin_minutes(s.resolution);
  const int64_t t0_min = minute_index(s.t0);
  for (int64_t b = 0; b < s.n_bins; ++b) {
    const std::string ts = format_civil_minute(civil_from_minute_index(t0_min + b * bm));
    if (s.defined[size_t(b)] != 0)
      w.appendf("%lld,%s,%.10g,%.10g,%lld\n", (long long)b, ts.c_str(), s.mu[size_t(b)],
                s.sigma[size_t(b)], (long long)s.n_defined[size_t(b)]);
    else
      w.appendf("%lld,%s,NA,NA,0\n", (long long)b, ts.c_str());
  }
  w.commit();
}

std::vector<TracePoint> max_sector_trace(const VolumeTensor& t) {
  require_input(t.n_sectors() >= 1 && t.n_bins >= 1, "empty tensor");
  std::vector<TracePoint> out(size_t(t.n_bins));
  for (int64_t b = 0; b < t.n_bins; ++b) {
    int best = 0;
    int64_t best_v = t.at(0, b);
    for (int64_t s = 1; s < t.n_sectors(); ++s) {
      const int64_t v = t.at(s, b);
      if (v > best_v ||
          (v == best_v && t.sector_ids[size_t(s)] < t.sector_ids[size_t(best)])) {
        best_v = v;
        best = int(s);
      }
    }
    out[size_t(b)] = {best, best_v};
  }
  return out;
}

void write_trace_csv(const std::string& path, const VolumeTensor& t,
                     const std::vector<TracePoint>& trace) {
  AtomicWriter w(path);
  w.append("bin,timestamp,sector_id,volume\n");
  for (int64_t b = 0; b < int64_t(trace.size()); ++b) {
    const TracePoint& p = trace[size_t(b)];
    w.appendf("%lld,%s,%s,%lld\n", (long long)b, format_civil_minute(t.bin_time(b)).c_str(),
              t.sector_ids[size_t(p.sector)].c_str(), (long long)p.volume);
  }
  w.commit();
}

ScalingFit scaling_fit(const std::vector<double>& x, const std::vector<double>& y) {
  require_input(x.size() == y.size(), "x/y length mismatch");
  ScalingFit fit;
  std::vector<double> lx, ly;
  for (size_t i = 0; i < x.size(); ++i) {
    if (x[i] > 0.0 && y[i] > 0.0 && std::isfinite(x[i]) && std::isfinite(y[i])) {
      lx.push_back(std::log10(x[i]));
      ly.push_back(std::log10(y[i]));
    } else {
      ++fit.n_excluded;
    }
  }
  fit.n_used = int64_t(lx.size());
  require_input(fit.n_used >= 3, "scaling fit needs at least 3 strictly positive points");
  const double n = double(fit.n_used);
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (size_t i = 0; i < lx.size(); ++i) {
    const double dx = lx[i] - mx, dy = ly[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  require_input(sxx > 0.0, "scaling fit needs varying x");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r = syy > 0.0 ? sxy / std::sqrt(sxx * syy) : 0.0;
  return fit;
}

}  // namespace cellscape
