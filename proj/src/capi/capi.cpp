#include "cellscape.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "config.hpp"
#include "correlation.hpp"
#include "error.hpp"
#include "events.hpp"
#include "geodesy.hpp"
#include "raster.hpp"
#include "spectral.hpp"
#include "synthgen.hpp"
#include "tessellation.hpp"
#include "threads.hpp"
#include "tsmap.hpp"
#include "volumes.hpp"

using namespace cellscape;

namespace {

thread_local std::string g_last_error;

cs_status fail(cs_status code, const char* what) {
  g_last_error = what;
  return code;
}

template <typename Fn>
cs_status guarded(Fn&& fn) {
  try {
    fn();
    return CS_OK;
  } catch (const input_error& e) {
    return fail(CS_ERR_INPUT, e.what());
  } catch (const internal_error& e) {
    return fail(CS_ERR_INTERNAL, e.what());
  } catch (const std::exception& e) {
    return fail(CS_ERR_INTERNAL, e.what());
  }
}

cs_status copy_string(const std::string& s, char* buf, size_t buflen) {
  if (buf == nullptr || buflen == 0) return fail(CS_ERR_INPUT, "null/empty output buffer");
  if (s.size() + 1 > buflen) return fail(CS_ERR_INPUT, "output buffer too small");
  std::memcpy(buf, s.c_str(), s.size() + 1);
  return CS_OK;
}

}  // namespace

struct cs_config {
  RunConfig cfg;
};
struct cs_sectors {
  SectorSet set;
};
struct cs_tensor {
  VolumeTensor t;
};
struct cs_anomaly {
  AnomalyField a;
};
struct cs_stats {
  SpatialStats s;
};
struct cs_spectrum {
  Spectrum s;
};
struct cs_cross {
  CrossSpectrum c;
};
struct cs_corr {
  CorrMatrix c;
};
struct cs_raster {
  Raster r;
};
struct cs_zones {
  std::vector<Zone> zones;
};
struct cs_zone_series {
  std::vector<ZoneSeries> zs;
};
struct cs_synth {
  GeneratorSpec spec;
};

extern "C" {

const char* cs_version(void) { return "0.1.0"; }

const char* cs_last_error(void) { return g_last_error.c_str(); }

void cs_set_threads(int n) { set_thread_count(n); }

/* ---- geodesy ---- */

cs_status cs_latlon_to_utm(double lat, double lon, double* easting, double* northing) {
  return guarded([&] {
    const UtmPoint p = latlon_to_utm(lat, lon);
    *easting = p.easting;
    *northing = p.northing;
  });
}

cs_status cs_utm_to_latlon(double easting, double northing, double* lat, double* lon) {
  return guarded([&] { utm_to_latlon({easting, northing}, *lat, *lon); });
}

double cs_great_circle_km(double lat1, double lon1, double lat2, double lon2) {
  return great_circle_km(lat1, lon1, lat2, lon2);
}

/* ---- configuration ---- */

cs_status cs_config_load(const char* path, cs_config** out) {
  return guarded([&] { *out = new cs_config{RunConfig::load(path)}; });
}

void cs_config_free(cs_config* cfg) { delete cfg; }

int cs_config_has(const cs_config* cfg, const char* key) { return cfg->cfg.has(key) ? 1 : 0; }

cs_status cs_config_get_string(const cs_config* cfg, const char* key, char* buf, size_t buflen) {
  std::string v;
  const cs_status st = guarded([&] { v = cfg->cfg.get_string(key); });
  if (st != CS_OK) return st;
  return copy_string(v, buf, buflen);
}

cs_status cs_config_get_double(const cs_config* cfg, const char* key, double* out) {
  return guarded([&] { *out = cfg->cfg.get_double(key); });
}

cs_status cs_config_get_int(const cs_config* cfg, const char* key, int64_t* out) {
  return guarded([&] { *out = cfg->cfg.get_int(key); });
}

cs_status cs_config_get_bool(const cs_config* cfg, const char* key, int* out) {
  return guarded([&] { *out = cfg->cfg.get_bool(key) ? 1 : 0; });
}

/* ---- sectors ---- */

cs_status cs_sectors_build(const char* towers_csv, const char* antennas_csv, double center_lat,
                           double center_lon, double radius_km, double epsilon_m,
                           cs_sectors** out) {
  return guarded([&] {
    const StudyArea area{center_lat, center_lon, radius_km};
    *out = new cs_sectors{build_sectors(load_towers_csv(towers_csv),
                                        load_antennas_csv(antennas_csv), area, epsilon_m)};
  });
}

cs_status cs_sectors_build_tower_only(const char* towers_csv, double center_lat,
                                      double center_lon, double radius_km, cs_sectors** out) {
  return guarded([&] {
    const StudyArea area{center_lat, center_lon, radius_km};
    *out = new cs_sectors{tower_only_tessellation(load_towers_csv(towers_csv), area)};
  });
}

cs_status cs_sectors_load(const char* sectors_csv, const char* wkt_csv, double center_lat,
                          double center_lon, double radius_km, cs_sectors** out) {
  return guarded([&] {
    const StudyArea area{center_lat, center_lon, radius_km};
    *out = new cs_sectors{load_sectors_csv(sectors_csv, wkt_csv, area)};
  });
}

cs_status cs_sectors_write(const cs_sectors* s, const char* sectors_csv, const char* wkt_csv) {
  return guarded([&] { write_sectors_csv(s->set, sectors_csv, wkt_csv); });
}

void cs_sectors_free(cs_sectors* s) { delete s; }

int64_t cs_sectors_count(const cs_sectors* s) { return int64_t(s->set.sectors.size()); }

cs_status cs_sectors_id(const cs_sectors* s, int64_t index, char* buf, size_t buflen) {
  if (index < 0 || index >= cs_sectors_count(s)) return fail(CS_ERR_INPUT, "sector index out of range");
  return copy_string(s->set.sectors[size_t(index)].sector_id, buf, buflen);
}

cs_status cs_sectors_area_km2(const cs_sectors* s, int64_t index, double* out) {
  if (index < 0 || index >= cs_sectors_count(s)) return fail(CS_ERR_INPUT, "sector index out of range");
  *out = s->set.sectors[size_t(index)].area_km2;
  return CS_OK;
}

cs_status cs_sectors_centroid(const cs_sectors* s, int64_t index, double* lat, double* lon) {
  if (index < 0 || index >= cs_sectors_count(s)) return fail(CS_ERR_INPUT, "sector index out of range");
  *lat = s->set.sectors[size_t(index)].centroid_lat;
  *lon = s->set.sectors[size_t(index)].centroid_lon;
  return CS_OK;
}

cs_status cs_sectors_locate(const cs_sectors* s, double lat, double lon, int64_t* index) {
  return guarded([&] { *index = locate_point(s->set, lat, lon); });
}

/* ---- tensors ---- */

cs_status cs_tensor_load(const char* volumes_csv, const cs_sectors* sectors, const char* start,
                         int64_t days, const char* resolution, cs_tensor** calls,
                         cs_tensor** texts) {
  return guarded([&] {
    const Resolution res = parse_resolution(resolution);
    const CivilMinute t0 = parse_civil_date(start);
    require_input(days >= 1, "load window must cover at least one day");
    const int64_t n_bins = days * 1440 / bin_minutes(res);
    ChannelPair pair = load_volumes(volumes_csv, sectors->set.ids(), t0, n_bins, res);
    *calls = new cs_tensor{std::move(pair.calls)};
    *texts = new cs_tensor{std::move(pair.texts)};
  });
}

cs_status cs_tensor_write(const char* path, const cs_tensor* calls, const cs_tensor* texts) {
  return guarded([&] { write_volumes_csv(path, calls->t, texts->t); });
}

void cs_tensor_free(cs_tensor* t) { delete t; }

int64_t cs_tensor_bins(const cs_tensor* t) { return t->t.n_bins; }

int64_t cs_tensor_sectors(const cs_tensor* t) { return t->t.n_sectors(); }

cs_status cs_tensor_count(const cs_tensor* t, int64_t sector, int64_t bin, int64_t* out) {
  if (sector < 0 || sector >= t->t.n_sectors() || bin < 0 || bin >= t->t.n_bins)
    return fail(CS_ERR_INPUT, "tensor index out of range");
  *out = t->t.at(sector, bin);
  return CS_OK;
}

cs_status cs_tensor_resample(const cs_tensor* t, const char* to, cs_tensor** out,
                             int64_t* dropped_bins) {
  return guarded([&] {
    ResampleResult r = resample(t->t, parse_resolution(to));
    if (dropped_bins != nullptr) *dropped_bins = r.dropped_bins;
    *out = new cs_tensor{std::move(r.tensor)};
  });
}

cs_status cs_tensor_bin_of(const cs_tensor* t, const char* timestamp, int64_t* bin) {
  return guarded([&] { *bin = t->t.bin_of(parse_civil_minute(timestamp)); });
}

cs_status cs_tensor_spatial_mean(const cs_tensor* t, double* out) {
  return guarded([&] {
    for (int64_t b = 0; b < t->t.n_bins; ++b) {
      double sum = 0.0;
      for (int64_t s = 0; s < t->t.n_sectors(); ++s) sum += double(t->t.at(s, b));
      out[b] = sum / double(t->t.n_sectors());
    }
  });
}

/* ---- anomaly & stats ---- */

cs_status cs_anomaly_compute(const cs_tensor* t, int64_t lag_bins, cs_anomaly** out) {
  return guarded([&] { *out = new cs_anomaly{anomaly(t->t, lag_bins)}; });
}

cs_status cs_anomaly_write(const cs_anomaly* a, const char* path) {
  return guarded([&] { write_anomaly_csv(path, a->a); });
}

void cs_anomaly_free(cs_anomaly* a) { delete a; }

cs_status cs_anomaly_ratio(const cs_anomaly* a, int64_t sector, int64_t bin, double* ratio,
                           int* defined) {
  if (sector < 0 || sector >= a->a.n_sectors() || bin < 0 || bin >= a->a.n_bins)
    return fail(CS_ERR_INPUT, "anomaly index out of range");
  *defined = a->a.is_defined(sector, bin) ? 1 : 0;
  *ratio = *defined != 0 ? a->a.ratio(sector, bin) : 0.0;
  return CS_OK;
}

cs_status cs_stats_of_tensor(const cs_tensor* t, cs_stats** out) {
  return guarded([&] { *out = new cs_stats{minute_stats(t->t)}; });
}

cs_status cs_stats_of_anomaly(const cs_anomaly* a, cs_stats** out) {
  return guarded([&] { *out = new cs_stats{minute_stats(a->a)}; });
}

cs_status cs_stats_write(const cs_stats* s, const char* path) {
  return guarded([&] { write_stats_csv(path, s->s); });
}

void cs_stats_free(cs_stats* s) { delete s; }

int64_t cs_stats_bins(const cs_stats* s) { return s->s.n_bins; }

cs_status cs_stats_at(const cs_stats* s, int64_t bin, double* mu, double* sigma, int* defined) {
  if (bin < 0 || bin >= s->s.n_bins) return fail(CS_ERR_INPUT, "stats bin out of range");
  *defined = s->s.defined[size_t(bin)] != 0 ? 1 : 0;
  *mu = *defined != 0 ? s->s.mu[size_t(bin)] : 0.0;
  *sigma = *defined != 0 ? s->s.sigma[size_t(bin)] : 0.0;
  return CS_OK;
}

cs_status cs_max_trace_write(const cs_tensor* t, const char* path) {
  return guarded([&] { write_trace_csv(path, t->t, max_sector_trace(t->t)); });
}

cs_status cs_scaling_fit(const double* x, const double* y, int64_t n, double* slope,
                         double* intercept, double* r, int64_t* n_used) {
  return guarded([&] {
    const ScalingFit fit = scaling_fit(std::vector<double>(x, x + n), std::vector<double>(y, y + n));
    *slope = fit.slope;
    *intercept = fit.intercept;
    *r = fit.r;
    if (n_used != nullptr) *n_used = fit.n_used;
  });
}

/* ---- spectral ---- */

cs_status cs_psd(const double* series, int64_t n, int nw, int k, int adaptive, int detrend,
                 cs_spectrum** out) {
  return guarded([&] {
    SpectralConfig cfg;
    cfg.nw = nw;
    cfg.k = k;
    cfg.adaptive = adaptive != 0;
    cfg.detrend = detrend != 0;
    *out = new cs_spectrum{multitaper_psd(std::vector<double>(series, series + n), cfg)};
  });
}

void cs_spectrum_free(cs_spectrum* s) { delete s; }

int64_t cs_spectrum_bins(const cs_spectrum* s) { return int64_t(s->s.freqs.size()); }

cs_status cs_spectrum_at(const cs_spectrum* s, int64_t bin, double* freq, double* psd) {
  if (bin < 0 || bin >= cs_spectrum_bins(s)) return fail(CS_ERR_INPUT, "spectrum bin out of range");
  *freq = s->s.freqs[size_t(bin)];
  *psd = s->s.psd[size_t(bin)];
  return CS_OK;
}

cs_status cs_spectrum_write(const cs_spectrum* s, const char* path) {
  return guarded([&] { write_spectrum_csv(path, s->s); });
}

cs_status cs_cross_spectrum(const double* x, const double* y, int64_t n, int nw, int k,
                            int detrend, cs_cross** out) {
  return guarded([&] {
    SpectralConfig cfg;
    cfg.nw = nw;
    cfg.k = k;
    cfg.detrend = detrend != 0;
    *out = new cs_cross{multitaper_cross(std::vector<double>(x, x + n),
                                         std::vector<double>(y, y + n), cfg)};
  });
}

void cs_cross_free(cs_cross* c) { delete c; }

int64_t cs_cross_bins(const cs_cross* c) { return int64_t(c->c.freqs.size()); }

cs_status cs_cross_at(const cs_cross* c, int64_t bin, double* freq, double* coherency,
                      double* phase) {
  if (bin < 0 || bin >= cs_cross_bins(c)) return fail(CS_ERR_INPUT, "cross bin out of range");
  *freq = c->c.freqs[size_t(bin)];
  *coherency = c->c.coherency[size_t(bin)];
  *phase = c->c.phase[size_t(bin)];
  return CS_OK;
}

cs_status cs_cross_write(const cs_cross* c, const char* path) {
  return guarded([&] { write_cross_csv(path, c->c); });
}

cs_status cs_dpss(int n, int nw, int k, double* tapers, double* lambda) {
  return guarded([&] {
    const DpssTapers d = dpss_tapers(n, nw, k);
    std::memcpy(tapers, d.tapers.data(), d.tapers.size() * sizeof(double));
    std::memcpy(lambda, d.lambda.data(), d.lambda.size() * sizeof(double));
  });
}

/* ---- correlation ---- */

cs_status cs_corr_compute(const cs_tensor* t, const char* transform, cs_corr** out) {
  return guarded([&] {
    *out = new cs_corr{spatial_corr_matrix(t->t, parse_corr_transform(transform))};
  });
}

void cs_corr_free(cs_corr* c) { delete c; }

int64_t cs_corr_bins(const cs_corr* c) { return c->c.n_bins; }

cs_status cs_corr_at(const cs_corr* c, int64_t i, int64_t j, double* value, int* defined) {
  if (i < 0 || i >= c->c.n_bins || j < 0 || j >= c->c.n_bins)
    return fail(CS_ERR_INPUT, "correlation index out of range");
  const bool masked = c->c.masked(i, j);
  *defined = masked ? 0 : 1;
  *value = masked ? 0.0 : c->c.at(i, j);
  return CS_OK;
}

cs_status cs_corr_disruption(const cs_corr* c, int64_t bin, double* score, int* defined) {
  return guarded([&] {
    const double d = disruption_score(c->c, bin);
    *defined = std::isnan(d) ? 0 : 1;
    *score = std::isnan(d) ? 0.0 : d;
  });
}

cs_status cs_corr_write(const cs_corr* c, const char* path) {
  return guarded([&] { write_corr_csv(path, c->c); });
}

cs_status cs_corr_write_disruption(const cs_corr* c, const char* path) {
  return guarded([&] { write_disruption_csv(path, c->c); });
}

/* ---- gridding ---- */

cs_status cs_density_raster(const cs_tensor* t, const cs_sectors* s, int64_t bin_start,
                            int64_t bin_count, const char* stat, double cell_m, cs_raster** out) {
  return guarded([&] {
    require_input(bin_start >= 0 && bin_count >= 1 && bin_start + bin_count <= t->t.n_bins,
                  "bin window out of range");
    require_input(int64_t(s->set.sectors.size()) == t->t.n_sectors(),
                  "sector set does not match the tensor");
    const std::string st(stat);
    std::vector<double> agg(size_t(t->t.n_sectors()), 0.0);
    for (int64_t sec = 0; sec < t->t.n_sectors(); ++sec) {
      double acc = 0.0;
      for (int64_t b = bin_start; b < bin_start + bin_count; ++b) {
        const double v = double(t->t.at(sec, b));
        if (st == "max")
          acc = std::max(acc, v);
        else
          acc += v;
      }
      if (st == "mean") acc /= double(bin_count);
      else require_input(st == "max" || st == "sum", "unknown stat '" + st + "' (want mean|max|sum)");
      agg[size_t(sec)] = acc;
    }
    std::vector<double> areas, values;
    std::vector<Vec2> centroids;
    for (int64_t sec = 0; sec < t->t.n_sectors(); ++sec) {
      areas.push_back(s->set.sectors[size_t(sec)].area_km2);
      centroids.push_back(s->set.sectors[size_t(sec)].centroid_utm);
    }
    values = density_values(agg, areas);
    *out = new cs_raster{interpolate_grid(centroids, values, cell_m)};
  });
}

void cs_raster_free(cs_raster* r) { delete r; }

cs_status cs_raster_dims(const cs_raster* r, int* ncols, int* nrows) {
  *ncols = r->r.ncols;
  *nrows = r->r.nrows;
  return CS_OK;
}

cs_status cs_raster_value(const cs_raster* r, int row, int col, double* out) {
  if (row < 0 || row >= r->r.nrows || col < 0 || col >= r->r.ncols)
    return fail(CS_ERR_INPUT, "raster index out of range");
  *out = r->r.at(row, col);
  return CS_OK;
}

cs_status cs_raster_write_asc(const cs_raster* r, const char* path) {
  return guarded([&] { write_raster_asc(r->r, path); });
}

cs_status cs_tsmap_write(const cs_tensor* daily, const cs_sectors* s, double saturation_q,
                         const char* path) {
  return guarded([&] { write_tsmap_csv(path, time_space_map(daily->t, s->set, saturation_q)); });
}

/* ---- events ---- */

cs_status cs_quake_timing_scan(const cs_stats* stats, int64_t scan_start, int64_t pre_bins,
                               int64_t scan_bins, double onset_nsigma, cs_quake_timing* out) {
  return guarded([&] {
    const QuakeTiming t = quake_timing(stats->s, scan_start, pre_bins, scan_bins, onset_nsigma);
    out->onset_found = t.onset_found ? 1 : 0;
    out->onset_bin = t.onset_bin;
    out->peak_bin = t.peak_bin;
    out->recovery_found = t.recovery_found ? 1 : 0;
    out->recovery_bin = t.recovery_bin;
    out->tau_found = t.tau_found ? 1 : 0;
    out->decay_tau_bins = t.decay_tau_bins;
    out->pre_mean = t.pre_mean;
    out->pre_sigma = t.pre_sigma;
  });
}

cs_status cs_quake_timing_write(const char* path, const cs_quake_timing* calls,
                                const cs_quake_timing* texts, const cs_stats* ref) {
  return guarded([&] {
    auto convert = [](const cs_quake_timing* t) {
      QuakeTiming q;
      q.onset_found = t->onset_found != 0;
      q.onset_bin = t->onset_bin;
      q.peak_bin = t->peak_bin;
      q.recovery_found = t->recovery_found != 0;
      q.recovery_bin = t->recovery_bin;
      q.tau_found = t->tau_found != 0;
      q.decay_tau_bins = t->decay_tau_bins;
      q.pre_mean = t->pre_mean;
      q.pre_sigma = t->pre_sigma;
      return q;
    };
    write_timing_csv(path, convert(calls), convert(texts), ref->s);
  });
}

cs_status cs_quake_profile_write(const cs_anomaly* a, int64_t bin, const cs_sectors* s,
                                 double epicenter_lat, double epicenter_lon, double bin_km,
                                 const char* path) {
  return guarded([&] {
    write_profile_csv(path, quake_profile(a->a, bin, s->set, epicenter_lat, epicenter_lon, bin_km));
  });
}

cs_status cs_classify_write(const cs_anomaly* a, int64_t bin, const char* path) {
  return guarded([&] { write_classify_csv(path, a->a, bin, classify_response(a->a, bin)); });
}

cs_status cs_zones_load(const char* path, cs_zones** out) {
  return guarded([&] { *out = new cs_zones{load_zones_csv(path)}; });
}

void cs_zones_free(cs_zones* z) { delete z; }

int64_t cs_zones_count(const cs_zones* z) { return int64_t(z->zones.size()); }

cs_status cs_zones_id(const cs_zones* z, int64_t index, char* buf, size_t buflen) {
  if (index < 0 || index >= cs_zones_count(z)) return fail(CS_ERR_INPUT, "zone index out of range");
  return copy_string(z->zones[size_t(index)].zone_id, buf, buflen);
}

cs_status cs_zone_series_compute(const cs_tensor* calls, const cs_tensor* texts,
                                 const cs_sectors* s, const cs_zones* z, int64_t lag_bins,
                                 cs_zone_series** out) {
  return guarded([&] {
    *out = new cs_zone_series{zone_series(calls->t, texts->t, s->set, z->zones, lag_bins)};
  });
}

void cs_zone_series_free(cs_zone_series* zs) { delete zs; }

cs_status cs_zone_series_write(const cs_zone_series* zs, const cs_tensor* ref, const char* path) {
  return guarded([&] { write_zone_series_csv(path, zs->zs, ref->t); });
}

cs_status cs_zone_anomaly(const cs_zone_series* zs, int64_t zone, int64_t bin, double* call_anom,
                          int* call_defined, double* text_anom, int* text_defined) {
  if (zone < 0 || zone >= int64_t(zs->zs.size())) return fail(CS_ERR_INPUT, "zone index out of range");
  const ZoneSeries& z = zs->zs[size_t(zone)];
  if (bin < 0 || bin >= z.n_bins) return fail(CS_ERR_INPUT, "zone bin out of range");
  *call_defined = z.call_def[size_t(bin)] != 0 ? 1 : 0;
  *text_defined = z.text_def[size_t(bin)] != 0 ? 1 : 0;
  *call_anom = *call_defined != 0 ? z.call_anom[size_t(bin)] : 0.0;
  *text_anom = *text_defined != 0 ? z.text_anom[size_t(bin)] : 0.0;
  return CS_OK;
}

cs_status cs_divergence_detect(const cs_zone_series* zs, int64_t zone, int64_t win_start,
                               int64_t win_len, double theta, cs_divergence* out) {
  return guarded([&] {
    require_input(zone >= 0 && zone < int64_t(zs->zs.size()), "zone index out of range");
    const Divergence d = divergence_detect(zs->zs[size_t(zone)], win_start, win_len, theta);
    out->found = d.found ? 1 : 0;
    out->onset_bin = d.onset_bin;
    out->call_slope = d.call_slope;
    out->text_slope = d.text_slope;
  });
}

cs_status cs_divergence_write(const cs_zone_series* zs, const cs_tensor* ref, int64_t win_start,
                              int64_t win_len, double theta, const char* path) {
  return guarded([&] {
    std::vector<Divergence> det;
    det.reserve(zs->zs.size());
    for (const ZoneSeries& z : zs->zs) det.push_back(divergence_detect(z, win_start, win_len, theta));
    write_divergence_csv(path, zs->zs, det, ref->t);
  });
}

/* ---- synthetic generator ---- */

cs_status cs_synth_create(const cs_config* cfg, cs_synth** out) {
  return guarded([&] { *out = new cs_synth{generator_spec_from_config(cfg->cfg)}; });
}

void cs_synth_free(cs_synth* s) { delete s; }

cs_status cs_synth_set_seed(cs_synth* s, uint64_t seed) {
  s->spec.seed = seed;
  return CS_OK;
}

cs_status cs_synth_set_deterministic(cs_synth* s, int deterministic) {
  s->spec.deterministic = deterministic != 0;
  return CS_OK;
}

cs_status cs_synth_run(const cs_synth* s, const char* outdir) {
  return guarded([&] { synth_write_all(s->spec, outdir); });
}

} /* extern "C" */
