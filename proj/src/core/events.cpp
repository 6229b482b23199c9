#include "events.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "csvio.hpp"
#include "error.hpp"
#include "geodesy.hpp"

namespace cellscape {

namespace {

double quantile(std::vector<double>& sorted_vals, double q) {
  // Linear interpolation between order statistics (type 7).
  const size_t n = sorted_vals.size();
  if (n == 1) return sorted_vals[0];
  const double h = q * double(n - 1);
  const size_t lo = size_t(std::floor(h));
  const size_t hi = std::min(lo + 1, n - 1);
  const double frac = h - double(lo);
  return sorted_vals[lo] + frac * (sorted_vals[hi] - sorted_vals[lo]);
}

}  // namespace

ResponseProfile quake_profile(const AnomalyField& a, int64_t bin, const SectorSet& sectors,
                              double epi_lat, double epi_lon, double bin_km) {
  require_input(bin >= 0 && bin < a.n_bins, "anomaly bin out of range");
  require_input(bin_km > 0.0, "distance bin width must be positive");
  require_input(int64_t(sectors.sectors.size()) == a.n_sectors(),
                "sector set does not match the anomaly field");

  std::vector<double> d(size_t(a.n_sectors()));
  double dmax = 0.0;
  int64_t n_def = 0;
  for (int64_t s = 0; s < a.n_sectors(); ++s) {
    const Sector& sec = sectors.sectors[size_t(s)];
    d[size_t(s)] = great_circle_km(sec.centroid_lat, sec.centroid_lon, epi_lat, epi_lon);
    if (a.is_defined(s, bin)) {
      dmax = std::max(dmax, d[size_t(s)]);
      ++n_def;
    }
  }
  require_input(n_def >= 10, "profile needs at least 10 sectors with defined anomalies");

  const int64_t n_bins = int64_t(std::floor(dmax / bin_km)) + 1;
  std::vector<std::vector<double>> buckets(static_cast<size_t>(n_bins));
  for (int64_t s = 0; s < a.n_sectors(); ++s) {
    if (!a.is_defined(s, bin)) continue;
    buckets[size_t(int64_t(d[size_t(s)] / bin_km))].push_back(a.ratio(s, bin));
  }

  ResponseProfile p;
  p.bin_km = bin_km;
  for (int64_t b = 0; b < n_bins; ++b) {
    auto& vals = buckets[size_t(b)];
    p.center_km.push_back((double(b) + 0.5) * bin_km);
    p.n.push_back(int64_t(vals.size()));
    if (vals.empty()) {
      p.q10.push_back(0.0);
      p.q50.push_back(0.0);
      p.q90.push_back(0.0);
      continue;
    }
    std::sort(vals.begin(), vals.end());
    p.q10.push_back(quantile(vals, 0.10));
    p.q50.push_back(quantile(vals, 0.50));
    p.q90.push_back(quantile(vals, 0.90));
  }
  return p;
}

void write_profile_csv(const std::string& path, const ResponseProfile& p) {
  AtomicWriter w(path);
  w.append("bin_km,q10,q50,q90,n\n");
  for (size_t i = 0; i < p.center_km.size(); ++i) {
    if (p.n[i] == 0)
      w.appendf("%.10g,NA,NA,NA,0\n", p.center_km[i]);
    else
      w.appendf("%.10g,%.10g,%.10g,%.10g,%lld\n", p.center_km[i], p.q10[i], p.q50[i], p.q90[i],
                (long long)p.n[i]);
  }
  w.commit();
}

std::vector<ResponseLabel> classify_response(const AnomalyField& a, int64_t bin) {
  require_input(bin >= 0 && bin < a.n_bins, "anomaly bin out of range");
  double sum = 0.0;
  int64_t n = 0;
  for (int64_t s = 0; s < a.n_sectors(); ++s) {
    if (!a.is_defined(s, bin)) continue;
    sum += a.ratio(s, bin);
    ++n;
  }
  require_input(n > 0, "no defined anomalies at the requested bin");
  const double mu = sum / double(n);
  double ss = 0.0;
  for (int64_t s = 0; s < a.n_sectors(); ++s) {
    if (!a.is_defined(s, bin)) continue;
    const double dd = a.ratio(s, bin) - mu;
    ss += dd * dd;
  }
  const double sigma = std::sqrt(ss / double(n));

  std::vector<ResponseLabel> labels(size_t(a.n_sectors()), ResponseLabel::normal);
  if (sigma == 0.0) return labels;  // a flat field has no tails
  for (int64_t s = 0; s < a.n_sectors(); ++s) {
    if (!a.is_defined(s, bin)) continue;
    const double r = a.ratio(s, bin);
    if (r > mu + sigma)
      labels[size_t(s)] = ResponseLabel::high;
    else if (r < mu - sigma)
      labels[size_t(s)] = ResponseLabel::low;
  }
  return labels;
}

void write_classify_csv(const std::string& path, const AnomalyField& a, int64_t bin,
                        const std::vector<ResponseLabel>& labels) {
  static const char* names[] = {"low", "normal", "high"};
  AtomicWriter w(path);
  w.append("sector_id,ratio,label,defined\n");
  for (int64_t s = 0; s < a.n_sectors(); ++s) {
    if (a.is_defined(s, bin))
      w.appendf("%s,%.10g,%s,1\n", a.sector_ids[size_t(s)].c_str(), a.ratio(s, bin),
                names[int(labels[size_t(s)])]);
    else
      w.appendf("%s,NA,normal,0\n", a.sector_ids[size_t(s)].c_str());
  }
  w.commit();
}

QuakeTiming quake_timing(const SpatialStats& stats, int64_t scan_start, int64_t pre_bins,
                         int64_t scan_bins, double onset_nsigma) {
  require_input(pre_bins >= 2, "pre-window needs at least 2 bins");
  require_input(scan_start - pre_bins >= 0, "pre-window extends before the series");
  require_input(scan_start + scan_bins <= stats.n_bins, "scan window extends past the series");

  QuakeTiming out;
  double sum = 0.0;
  int64_t n = 0;
  for (int64_t b = scan_start - pre_bins; b < scan_start; ++b) {
    if (stats.defined[size_t(b)] == 0) continue;
    sum += stats.mu[size_t(b)];
    ++n;
  }
  require_input(n >= 2, "pre-window has fewer than 2 defined bins");
  out.pre_mean = sum / double(n);
  double ss = 0.0;
  for (int64_t b = scan_start - pre_bins; b < scan_start; ++b) {
    if (stats.defined[size_t(b)] == 0) continue;
    const double d = stats.mu[size_t(b)] - out.pre_mean;
    ss += d * d;
  }
  out.pre_sigma = std::sqrt(ss / double(n));

  const double onset_thresh = out.pre_mean + onset_nsigma * out.pre_sigma;
  for (int64_t b = scan_start; b < scan_start + scan_bins; ++b) {
    if (stats.defined[size_t(b)] == 0) continue;
    if (stats.mu[size_t(b)] > onset_thresh) {
      out.onset_found = true;
      out.onset_bin = b;
      break;
    }
  }
  if (!out.onset_found) return out;

  double peak_mu = -std::numeric_limits<double>::infinity();
  for (int64_t b = out.onset_bin; b < scan_start + scan_bins; ++b) {
    if (stats.defined[size_t(b)] == 0) continue;
    if (stats.mu[size_t(b)] > peak_mu) {
      peak_mu = stats.mu[size_t(b)];
      out.peak_bin = b;
    }
  }

  const double recovery_thresh = out.pre_mean + 2.0 * out.pre_sigma;
  for (int64_t b = out.peak_bin + 1; b < stats.n_bins; ++b) {
    if (stats.defined[size_t(b)] == 0) continue;
    if (stats.mu[size_t(b)] <= recovery_thresh) {
      out.recovery_found = true;
      out.recovery_bin = b;
      break;
    }
  }

  // Decay fit over the maximal post-peak non-increasing run with mu > 1.
  std::vector<double> ts, ys;
  double prev = peak_mu;
  for (int64_t b = out.peak_bin; b < stats.n_bins; ++b) {
    if (stats.defined[size_t(b)] == 0) break;
    const double mu = stats.mu[size_t(b)];
    if (mu > prev * (1.0 + 1e-12) || mu <= 1.0) break;
    ts.push_back(double(b - out.peak_bin));
    ys.push_back(std::log(mu - 1.0));
    prev = mu;
  }
  if (ts.size() >= 3) {
    const double nn = double(ts.size());
    double mt = 0.0, my = 0.0;
    for (size_t i = 0; i < ts.size(); ++i) {
      mt += ts[i];
      my += ys[i];
    }
    mt /= nn;
    my /= nn;
    double stt = 0.0, sty = 0.0;
    for (size_t i = 0; i < ts.size(); ++i) {
      stt += (ts[i] - mt) * (ts[i] - mt);
      sty += (ts[i] - mt) * (ys[i] - my);
    }
    const double slope = sty / stt;
    if (slope < 0.0) {
      out.tau_found = true;
      out.decay_tau_bins = -1.0 / slope;
    }
  }
  return out;
}

namespace {

void timing_row(AtomicWriter& w, const char* channel, const QuakeTiming& t,
                const SpatialStats& ref) {
  auto stamp = [&](int64_t b) {
    return format_civil_minute(
        civil_from_minute_index(minute_index(ref.t0) + b * bin_minutes(ref.resolution)));
  };
  w.appendf("%s,", channel);
  if (t.onset_found)
    w.appendf("%lld,%s,", (long long)t.onset_bin, stamp(t.onset_bin).c_str());
  else
    w.append("NA,NA,");
  if (t.onset_found)
    w.appendf("%lld,%s,", (long long)t.peak_bin, stamp(t.peak_bin).c_str());
  else
    w.append("NA,NA,");
  if (t.recovery_found)
    w.appendf("%lld,%s,", (long long)t.recovery_bin, stamp(t.recovery_bin).c_str());
  else
    w.append("NA,NA,");
  if (t.tau_found)
    w.appendf("%.10g,", t.decay_tau_bins);
  else
    w.append("NA,");
  w.appendf("%.10g,%.10g\n", t.pre_mean, t.pre_sigma);
}

}  // namespace

void write_timing_csv(const std::string& path, const QuakeTiming& calls, const QuakeTiming& texts,
                      const SpatialStats& ref) {
  AtomicWriter w(path);
  w.append(
      "channel,onset_bin,onset_time,peak_bin,peak_time,recovery_bin,recovery_time,decay_tau_bins,"
      "pre_mean,pre_sigma\n");
  timing_row(w, "calls", calls, ref);
  timing_row(w, "texts", texts, ref);
  w.commit();
}

std::vector<Zone> load_zones_csv(const std::string& path) {
  std::vector<Zone> zones;
  for_each_id_payload_row(path, "zone_id,wkt", [&](size_t ln, std::string_view id,
                                                   std::string_view payload) {
    Zone z;
    z.zone_id = std::string(id);
    const std::string wkt(payload);
    const std::string prefix = "POLYGON ((";
    require_input(wkt.rfind(prefix, 0) == 0 && wkt.size() > prefix.size() + 2 &&
                      wkt.substr(wkt.size() - 2) == "))",
                  path + ":" + std::to_string(ln) + ": malformed WKT polygon");
    const std::string body = wkt.substr(prefix.size(), wkt.size() - prefix.size() - 2);
    size_t start = 0;
    while (start < body.size()) {
      size_t end = body.find(", ", start);
      if (end == std::string::npos) end = body.size();
      const std::string pair = body.substr(start, end - start);
      const size_t sp = pair.find(' ');
      require_input(sp != std::string::npos,
                    path + ":" + std::to_string(ln) + ": malformed WKT pair");
      z.ring.push_back(
          {parse_f64(pair.substr(0, sp), path, ln), parse_f64(pair.substr(sp + 1), path, ln)});
      start = end + 2;
    }
    require_input(z.ring.size() >= 4, path + ":" + std::to_string(ln) + ": degenerate polygon");
    z.ring.pop_back();  // closing vertex
    zones.push_back(std::move(z));
  });
  return zones;
}

void write_zones_csv(const std::string& path, const std::vector<Zone>& zones) {
  AtomicWriter w(path);
  w.append("zone_id,wkt\n");
  for (const Zone& z : zones) {
    w.appendf("%s,POLYGON ((", z.zone_id.c_str());
    for (size_t i = 0; i <= z.ring.size(); ++i) {
      const Vec2& v = z.ring[i % z.ring.size()];
      w.appendf("%s%.7f %.7f", i == 0 ? "" : ", ", v.x, v.y);
    }
    w.append("))\n");
  }
  w.commit();
}

std::vector<int> zone_members(const Zone& zone, const SectorSet& sectors) {
  std::vector<int> out;
  for (size_t s = 0; s < sectors.sectors.size(); ++s) {
    const Sector& sec = sectors.sectors[s];
    // WKT x = lon, y = lat.
    if (point_in_polygon(zone.ring, {sec.centroid_lon, sec.centroid_lat}, 1e-12))
      out.push_back(int(s));
  }
  return out;
}

std::vector<ZoneSeries> zone_series(const VolumeTensor& calls, const VolumeTensor& texts,
                                    const SectorSet& sectors, const std::vector<Zone>& zones,
                                    int64_t lag_bins) {
  require_input(calls.sector_ids == texts.sector_ids && calls.n_bins == texts.n_bins,
                "call/text tensors misaligned");
  require_input(int64_t(sectors.sectors.size()) == calls.n_sectors(),
                "sector set does not match the tensors");
  if (lag_bins == 0) lag_bins = 7LL * 1440 / bin_minutes(calls.resolution);
  require_input(lag_bins >= 1 && lag_bins < calls.n_bins, "bad zone anomaly lag");

  std::vector<ZoneSeries> out;
  for (const Zone& z : zones) {
    ZoneSeries zs;
    zs.zone_id = z.zone_id;
    zs.members = zone_members(z, sectors);
    zs.empty = zs.members.empty();
    zs.n_bins = calls.n_bins;
    zs.calls.assign(size_t(calls.n_bins), 0);
    zs.texts.assign(size_t(calls.n_bins), 0);
    for (int s : zs.members)
      for (int64_t b = 0; b < calls.n_bins; ++b) {
        zs.calls[size_t(b)] += calls.at(s, b);
        zs.texts[size_t(b)] += texts.at(s, b);
      }
    zs.call_anom.assign(size_t(calls.n_bins), 0.0);
    zs.text_anom.assign(size_t(calls.n_bins), 0.0);
    zs.call_def.assign(size_t(calls.n_bins), 0);
    zs.text_def.assign(size_t(calls.n_bins), 0);
    auto ratio = [&](const std::vector<int64_t>& v, int64_t b, double& r, uint8_t& def) {
      const int64_t num = v[size_t(b)], den = v[size_t(b - lag_bins)];
      if (den > 0) {
        r = double(num) / double(den);
        def = 1;
      } else if (num == 0) {
        r = 1.0;
        def = 1;
      }
    };
    for (int64_t b = lag_bins; b < calls.n_bins; ++b) {
      ratio(zs.calls, b, zs.call_anom[size_t(b)], zs.call_def[size_t(b)]);
      ratio(zs.texts, b, zs.text_anom[size_t(b)], zs.text_def[size_t(b)]);
    }
    out.push_back(std::move(zs));
  }
  return out;
}

void write_zone_series_csv(const std::string& path, const std::vector<ZoneSeries>& zs,
                           const VolumeTensor& ref) {
  AtomicWriter w(path);
  w.append("zone_id,bin,timestamp,calls,texts,call_anom,text_anom\n");
  for (const ZoneSeries& z : zs) {
    for (int64_t b = 0; b < z.n_bins; ++b) {
      w.appendf("%s,%lld,%s,%lld,%lld,", z.zone_id.c_str(), (long long)b,
                format_civil_minute(ref.bin_time(b)).c_str(), (long long)z.calls[size_t(b)],
                (long long)z.texts[size_t(b)]);
      if (z.call_def[size_t(b)] != 0)
        w.appendf("%.10g,", z.call_anom[size_t(b)]);
      else
        w.append("NA,");
      if (z.text_def[size_t(b)] != 0)
        w.appendf("%.10g\n", z.text_anom[size_t(b)]);
      else
        w.append("NA\n");
    }
  }
  w.commit();
}

Divergence divergence_detect(const ZoneSeries& zs, int64_t win_start, int64_t win_len,
                             double theta) {
  require_input(win_len >= 12, "divergence window needs at least 12 bins");
  require_input(win_start >= 0 && win_start + win_len <= zs.n_bins, "window out of range");
  require_input(theta > 0.0 && theta < 1.0, "theta must be in (0, 1)");

  Divergence d;
  const double call_thresh = 1.0 - theta;
  const double text_floor = 1.0 - 0.5 * theta;
  for (int64_t b = win_start; b < win_start + win_len; ++b) {
    if (zs.call_def[size_t(b)] == 0 || zs.text_def[size_t(b)] == 0) continue;
    if (zs.call_anom[size_t(b)] < call_thresh && zs.text_anom[size_t(b)] >= text_floor) {
      d.found = true;
      d.onset_bin = b;
      break;
    }
  }
  if (!d.found) return d;

  auto fit_slope = [&](const std::vector<double>& v, const std::vector<uint8_t>& def) {
    double mt = 0.0, mv = 0.0;
    int64_t n = 0;
    const int64_t end = std::min(zs.n_bins, d.onset_bin + 6);
    for (int64_t b = d.onset_bin; b < end; ++b) {
      if (def[size_t(b)] == 0) continue;
      mt += double(b);
      mv += v[size_t(b)];
      ++n;
    }
    if (n < 2) return 0.0;
    mt /= double(n);
    mv /= double(n);
    double stt = 0.0, stv = 0.0;
    for (int64_t b = d.onset_bin; b < end; ++b) {
      if (def[size_t(b)] == 0) continue;
      stt += (double(b) - mt) * (double(b) - mt);
      stv += (double(b) - mt) * (v[size_t(b)] - mv);
    }
    return stt > 0.0 ? stv / stt : 0.0;
  };
  d.call_slope = fit_slope(zs.call_anom, zs.call_def);
  d.text_slope = fit_slope(zs.text_anom, zs.text_def);
  return d;
}

void write_divergence_csv(const std::string& path, const std::vector<ZoneSeries>& zs,
                          const std::vector<Divergence>& det, const VolumeTensor& ref) {
  require_input(zs.size() == det.size(), "zone/detection count mismatch");
  AtomicWriter w(path);
  w.append("zone_id,onset_bin,onset_time,call_slope,text_slope\n");
  for (size_t i = 0; i < zs.size(); ++i) {
    if (det[i].found)
      w.appendf("%s,%lld,%s,%.10g,%.10g\n", zs[i].zone_id.c_str(), (long long)det[i].onset_bin,
                format_civil_minute(ref.bin_time(det[i].onset_bin)).c_str(), det[i].call_slope,
                det[i].text_slope);
    else
      w.appendf("%s,NA,NA,NA,NA\n", zs[i].zone_id.c_str());
  }
  w.commit();
}

}  // namespace cellscape
