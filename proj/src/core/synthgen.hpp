#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "config.hpp"
#include "events.hpp"
#include "tessellation.hpp"
#include "volumes.hpp"

namespace cellscape {

// Impulsive event: multiplicative surge on every sector, amplitude affine in
// epicentral distance, with a lognormal high-response tail near the study
// center and a far-field cutoff. Calls peak attack_call minutes after onset
// and decay with tau_call; texts follow later and slower at text_scale of
// the call amplitude.
struct QuakeInject {
  bool enabled = true;
  CivilMinute onset{2011, 8, 23, 13, 51};
  double epicenter_lat = 37.910;
  double epicenter_lon = -77.990;
  double a_near = 3.0, d_near_km = 100.0;
  double a_far = 1.5, d_far_km = 600.0;
  double attack_call_min = 10.0, tau_call_min = 25.0;
  double attack_text_min = 30.0, tau_text_min = 45.0;
  double text_scale = 0.4;
  double highresp_frac = 0.32;
  double highresp_mean = 8.5;
  double highresp_sigma_ln = 0.6;
  double highresp_cap = 20.0;
  double d_cut_km = 530.0;
  double hr_radius_km = 35.0;

  double amplitude_at(double d_km) const;  // the affine a(d), clamped
};

// Forecast event: per-zone call suppression starting 13:00/14:00 on the day
// before landfall, held until recovery_hour on the landfall day, with a text
// surge through the pre-landfall afternoon.
struct StormInject {
  bool enabled = true;
  CivilMinute landfall{2011, 8, 28, 9, 0};
  double depth_min = 0.55;
  double depth_step = 0.05;
  double text_surge = 1.30;
  int recovery_hour = 10;
  int ramp_min = 30;
};

struct GeneratorSpec {
  uint64_t seed = 20110823;
  int n_towers = 200;
  int azimuths_per_tower = 3;
  StudyArea area;
  double epsilon_m = kDefaultEpsilonM;
  double dex_center = 3.3;   // log10 density at the study center
  double dex_edge = -1.2;    // log10 density at the rim
  double dex_sigma = 0.3;    // lognormal scatter, dex
  double gamma = 1.0;        // rate ~ density^gamma
  double base_call_rate = 0.004;
  double text_ratio = 2.0;   // weekday daytime text/call volume ratio
  CivilMinute t0{2011, 2, 1, 0, 0};
  int span_days = 365;
  Resolution resolution = Resolution::minute;
  bool deterministic = false;
  int n_coastal_zones = 4;
  int n_control_zones = 2;
  bool anomalous_zone = false;  // pre-storm call surge in the first coastal zone
  QuakeInject quake;
  StormInject storm;
};

GeneratorSpec generator_spec_from_config(const RunConfig& cfg);

struct SynthLayout {
  std::vector<TowerSite> towers;
  std::vector<AntennaGroup> antennas;
  SectorSet sectors;
  std::vector<double> density;          // covariate per sector
  std::vector<double> epi_distance_km;  // per sector, from the quake epicenter
  std::vector<double> call_peak_factor; // quake multiplier at the call peak
  std::vector<double> text_peak_factor;
  std::vector<Zone> zones;              // coastal then control
  std::vector<int> coastal_zone_of;     // per sector, -1 = not coastal
  int n_coastal = 0;
};

SynthLayout gen_layout(const GeneratorSpec& spec);

// Expected per-minute rate for one sector/channel, event factors included.
double synth_rate(const GeneratorSpec& spec, const SynthLayout& layout, int64_t sector,
                  int64_t abs_minute, Channel ch);

struct SynthCounts {
  VolumeTensor calls;
  VolumeTensor texts;
};

// Poisson draws keyed by (seed, channel, sector, bin-start minute), or the
// rounded expected rates in deterministic mode.
SynthCounts gen_counts(const GeneratorSpec& spec, const SynthLayout& layout);

struct ZoneTruth {
  std::string zone_id;
  bool coastal = false;
  int64_t start_rel_min = -1;     // suppression start, minutes from t0
  int64_t recovery_rel_min = -1;
  double depth = 0.0;
  double surge = 1.0;
};

struct GroundTruth {
  bool quake = false;
  int64_t quake_onset_rel_min = -1;
  std::string quake_onset_time;
  double call_peak_offset_min = 0.0;
  double text_peak_offset_min = 0.0;
  double tau_call_min = 0.0;
  double tau_text_min = 0.0;
  std::vector<std::string> sector_ids;
  std::vector<double> call_peak_factor;
  std::vector<double> text_peak_factor;
  std::vector<ZoneTruth> zones;
  bool events_overlap = false;
};

GroundTruth ground_truth(const GeneratorSpec& spec, const SynthLayout& layout);
void write_ground_truth_csv(const std::string& path, const GroundTruth& gt);
GroundTruth load_ground_truth_csv(const std::string& path);

// Generates everything and writes towers/antennas/sectors/volumes/zones/
// density/truth CSVs under outdir.
void synth_write_all(const GeneratorSpec& spec, const std::string& outdir);

}  // namespace cellscape
