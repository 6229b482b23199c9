/* cellscape: sectorized spatiotemporal activity analysis.
 *
 * C interface over the C++ core. All functions returning cs_status set a
 * thread-local message retrievable with cs_last_error() on failure. Handles
 * are opaque; every cs_*_free accepts NULL.
 */
#ifndef CELLSCAPE_H
#define CELLSCAPE_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cs_status {
  CS_OK = 0,
  CS_ERR_INPUT = 1,   /* bad files, coordinates, configuration */
  CS_ERR_INTERNAL = 2 /* broken invariant inside the library */
} cs_status;

const char* cs_version(void);
const char* cs_last_error(void);
/* Worker count for parallel sections; results are identical for any value. */
void cs_set_threads(int n);

/* ---- geodesy ---- */

cs_status cs_latlon_to_utm(double lat, double lon, double* easting, double* northing);
cs_status cs_utm_to_latlon(double easting, double northing, double* lat, double* lon);
double cs_great_circle_km(double lat1, double lon1, double lat2, double lon2);

/* ---- configuration ---- */

typedef struct cs_config cs_config;
cs_status cs_config_load(const char* path, cs_config** out);
void cs_config_free(cs_config* cfg);
int cs_config_has(const cs_config* cfg, const char* key);
cs_status cs_config_get_string(const cs_config* cfg, const char* key, char* buf, size_t buflen);
cs_status cs_config_get_double(const cs_config* cfg, const char* key, double* out);
cs_status cs_config_get_int(const cs_config* cfg, const char* key, int64_t* out);
cs_status cs_config_get_bool(const cs_config* cfg, const char* key, int* out);

/* ---- sectors (tessellation) ---- */

typedef struct cs_sectors cs_sectors;

cs_status cs_sectors_build(const char* towers_csv, const char* antennas_csv, double center_lat,
                           double center_lon, double radius_km, double epsilon_m,
                           cs_sectors** out);
cs_status cs_sectors_build_tower_only(const char* towers_csv, double center_lat,
                                      double center_lon, double radius_km, cs_sectors** out);
cs_status cs_sectors_load(const char* sectors_csv, const char* wkt_csv, double center_lat,
                          double center_lon, double radius_km, cs_sectors** out);
cs_status cs_sectors_write(const cs_sectors* s, const char* sectors_csv, const char* wkt_csv);
void cs_sectors_free(cs_sectors* s);

int64_t cs_sectors_count(const cs_sectors* s);
cs_status cs_sectors_id(const cs_sectors* s, int64_t index, char* buf, size_t buflen);
cs_status cs_sectors_area_km2(const cs_sectors* s, int64_t index, double* out);
cs_status cs_sectors_centroid(const cs_sectors* s, int64_t index, double* lat, double* lon);
/* Sector containing the point; -1 outside the study disc. */
cs_status cs_sectors_locate(const cs_sectors* s, double lat, double lon, int64_t* index);

/* ---- volume tensors ---- */

typedef struct cs_tensor cs_tensor;

/* Loads both channels from `timestamp,sector_id,calls,texts` rows covering
 * [start, start + days) at the given resolution ("minute"|"hour"|"day"). */
cs_status cs_tensor_load(const char* volumes_csv, const cs_sectors* sectors, const char* start,
                         int64_t days, const char* resolution, cs_tensor** calls,
                         cs_tensor** texts);
cs_status cs_tensor_write(const char* path, const cs_tensor* calls, const cs_tensor* texts);
void cs_tensor_free(cs_tensor* t);

int64_t cs_tensor_bins(const cs_tensor* t);
int64_t cs_tensor_sectors(const cs_tensor* t);
cs_status cs_tensor_count(const cs_tensor* t, int64_t sector, int64_t bin, int64_t* out);
cs_status cs_tensor_resample(const cs_tensor* t, const char* to, cs_tensor** out,
                             int64_t* dropped_bins);
/* Bin index of a "YYYY-MM-DD hh:mm" timestamp within the tensor. */
cs_status cs_tensor_bin_of(const cs_tensor* t, const char* timestamp, int64_t* bin);
/* Mean across sectors for every bin; out must hold cs_tensor_bins values. */
cs_status cs_tensor_spatial_mean(const cs_tensor* t, double* out);

/* ---- anomaly fields & spatial statistics ---- */

typedef struct cs_anomaly cs_anomaly;
typedef struct cs_stats cs_stats;

/* lag_bins = 0 uses one week at the tensor resolution. */
cs_status cs_anomaly_compute(const cs_tensor* t, int64_t lag_bins, cs_anomaly** out);
cs_status cs_anomaly_write(const cs_anomaly* a, const char* path);
void cs_anomaly_free(cs_anomaly* a);
cs_status cs_anomaly_ratio(const cs_anomaly* a, int64_t sector, int64_t bin, double* ratio,
                           int* defined);

cs_status cs_stats_of_tensor(const cs_tensor* t, cs_stats** out);
cs_status cs_stats_of_anomaly(const cs_anomaly* a, cs_stats** out);
cs_status cs_stats_write(const cs_stats* s, const char* path);
void cs_stats_free(cs_stats* s);
int64_t cs_stats_bins(const cs_stats* s);
cs_status cs_stats_at(const cs_stats* s, int64_t bin, double* mu, double* sigma, int* defined);

cs_status cs_max_trace_write(const cs_tensor* t, const char* path);

/* Log-log least squares of y on x over strictly positive pairs. */
cs_status cs_scaling_fit(const double* x, const double* y, int64_t n, double* slope,
                         double* intercept, double* r, int64_t* n_used);

/* ---- spectral analysis ---- */

typedef struct cs_spectrum cs_spectrum;
typedef struct cs_cross cs_cross;

cs_status cs_psd(const double* series, int64_t n, int nw, int k, int adaptive, int detrend,
                 cs_spectrum** out);
void cs_spectrum_free(cs_spectrum* s);
int64_t cs_spectrum_bins(const cs_spectrum* s);
cs_status cs_spectrum_at(const cs_spectrum* s, int64_t bin, double* freq, double* psd);
cs_status cs_spectrum_write(const cs_spectrum* s, const char* path);

cs_status cs_cross_spectrum(const double* x, const double* y, int64_t n, int nw, int k,
                            int detrend, cs_cross** out);
void cs_cross_free(cs_cross* c);
int64_t cs_cross_bins(const cs_cross* c);
cs_status cs_cross_at(const cs_cross* c, int64_t bin, double* freq, double* coherency,
                      double* phase);
cs_status cs_cross_write(const cs_cross* c, const char* path);

/* DPSS tapers: fills tapers[k*n] row-major and lambda[k]. */
cs_status cs_dpss(int n, int nw, int k, double* tapers, double* lambda);

/* ---- spatial correlation ---- */

typedef struct cs_corr cs_corr;

cs_status cs_corr_compute(const cs_tensor* t, const char* transform, cs_corr** out);
void cs_corr_free(cs_corr* c);
int64_t cs_corr_bins(const cs_corr* c);
/* masked entries report defined = 0 and value 0. */
cs_status cs_corr_at(const cs_corr* c, int64_t i, int64_t j, double* value, int* defined);
cs_status cs_corr_disruption(const cs_corr* c, int64_t bin, double* score, int* defined);
cs_status cs_corr_write(const cs_corr* c, const char* path);
cs_status cs_corr_write_disruption(const cs_corr* c, const char* path);

/* ---- gridding ---- */

typedef struct cs_raster cs_raster;

/* Density (per-km2) surface of a per-bin statistic ("mean"|"max"|"sum")
 * over [bin_start, bin_start + bin_count), gridded at cell_m meters. */
cs_status cs_density_raster(const cs_tensor* t, const cs_sectors* s, int64_t bin_start,
                            int64_t bin_count, const char* stat, double cell_m, cs_raster** out);
void cs_raster_free(cs_raster* r);
cs_status cs_raster_dims(const cs_raster* r, int* ncols, int* nrows);
cs_status cs_raster_value(const cs_raster* r, int row, int col, double* out);
cs_status cs_raster_write_asc(const cs_raster* r, const char* path);

/* Daily time-space map (rows = days, columns = sectors by latitude). */
cs_status cs_tsmap_write(const cs_tensor* daily, const cs_sectors* s, double saturation_q,
                         const char* path);

/* ---- event analytics ---- */

typedef struct cs_zones cs_zones;
typedef struct cs_zone_series cs_zone_series;

typedef struct cs_quake_timing {
  int onset_found;
  int64_t onset_bin;
  int64_t peak_bin;
  int recovery_found;
  int64_t recovery_bin;
  int tau_found;
  double decay_tau_bins;
  double pre_mean;
  double pre_sigma;
} cs_quake_timing;

cs_status cs_quake_timing_scan(const cs_stats* stats, int64_t scan_start, int64_t pre_bins,
                               int64_t scan_bins, double onset_nsigma, cs_quake_timing* out);
cs_status cs_quake_timing_write(const char* path, const cs_quake_timing* calls,
                                const cs_quake_timing* texts, const cs_stats* ref);

cs_status cs_quake_profile_write(const cs_anomaly* a, int64_t bin, const cs_sectors* s,
                                 double epicenter_lat, double epicenter_lon, double bin_km,
                                 const char* path);
cs_status cs_classify_write(const cs_anomaly* a, int64_t bin, const char* path);

cs_status cs_zones_load(const char* path, cs_zones** out);
void cs_zones_free(cs_zones* z);
int64_t cs_zones_count(const cs_zones* z);
cs_status cs_zones_id(const cs_zones* z, int64_t index, char* buf, size_t buflen);

cs_status cs_zone_series_compute(const cs_tensor* calls, const cs_tensor* texts,
                                 const cs_sectors* s, const cs_zones* z, int64_t lag_bins,
                                 cs_zone_series** out);
void cs_zone_series_free(cs_zone_series* zs);
cs_status cs_zone_series_write(const cs_zone_series* zs, const cs_tensor* ref, const char* path);
cs_status cs_zone_anomaly(const cs_zone_series* zs, int64_t zone, int64_t bin, double* call_anom,
                          int* call_defined, double* text_anom, int* text_defined);

typedef struct cs_divergence {
  int found;
  int64_t onset_bin;
  double call_slope;
  double text_slope;
} cs_divergence;

cs_status cs_divergence_detect(const cs_zone_series* zs, int64_t zone, int64_t win_start,
                               int64_t win_len, double theta, cs_divergence* out);
cs_status cs_divergence_write(const cs_zone_series* zs, const cs_tensor* ref, int64_t win_start,
                              int64_t win_len, double theta, const char* path);

/* ---- synthetic data generator ---- */

typedef struct cs_synth cs_synth;

/* Builds a generator from the synth_* keys of a config. */
cs_status cs_synth_create(const cs_config* cfg, cs_synth** out);
void cs_synth_free(cs_synth* s);
cs_status cs_synth_set_seed(cs_synth* s, uint64_t seed);
cs_status cs_synth_set_deterministic(cs_synth* s, int deterministic);
/* Generates and writes towers/antennas/sectors/volumes/zones/density/truth
 * CSVs under outdir. */
cs_status cs_synth_run(const cs_synth* s, const char* outdir);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* CELLSCAPE_H */
