#include "synthgen.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>

#include "csvio.hpp"
#include "error.hpp"
#include "geodesy.hpp"
#include "rng.hpp"
#include "threads.hpp"

namespace cellscape {

namespace {

// Key-domain tags so independent draws never share a stream.
constexpr uint64_t kTagTower = 0x746f776572ull;
constexpr uint64_t kTagAzimuth = 0x617a696d7574ull;
constexpr uint64_t kTagDensity = 0x64656e73ull;
constexpr uint64_t kTagHighResp = 0x68696768ull;
constexpr uint64_t kTagCounts[2] = {0x63616c6c73ull, 0x7465787473ull};

constexpr double kProfileFloor = 0.05;

// Weekly weights, Monday..Sunday. Weekday entries match between channels so
// the calibrated daytime ratio carries through exactly.
constexpr double kWeekCall[7] = {1.00, 1.01, 1.02, 1.03, 1.06, 0.82, 0.72};
constexpr double kWeekText[7] = {1.00, 1.01, 1.02, 1.03, 1.06, 0.95, 0.88};

double smoothstep01(double v) {
  if (v <= 0.0) return 0.0;
  if (v >= 1.0) return 1.0;
  return v * v * (3.0 - 2.0 * v);
}

// Two-harmonic daily shape; the second harmonic supplies the half-day
// spectral line and the morning shoulder.
double daily_shape(double hours, double t1, double a1, double t2, double a2) {
  const double v = 1.0 + a1 * std::cos(2.0 * M_PI * (hours - t1) / 24.0) +
                   a2 * std::cos(2.0 * M_PI * (hours - t2) / 12.0);
  return std::max(v, kProfileFloor);
}

struct ProfileTables {
  // [daytype][minute-of-day]; daytype 0 = weekday, 1 = weekend.
  std::array<std::vector<double>, 2> call{std::vector<double>(1440), std::vector<double>(1440)};
  std::array<std::vector<double>, 2> text{std::vector<double>(1440), std::vector<double>(1440)};
  std::array<std::array<double, 24>, 2> call_hour{};
  std::array<std::array<double, 24>, 2> text_hour{};
  double text_base_scale = 1.0;
};

ProfileTables build_profiles(double text_ratio) {
  ProfileTables pt;
  for (int m = 0; m < 1440; ++m) {
    const double h = double(m) / 60.0;
    pt.call[0][size_t(m)] = daily_shape(h, 17.5, 0.75, 11.0, 0.28);
    pt.call[1][size_t(m)] = daily_shape(h, 13.5, 0.70, 10.5, 0.18);
  }
  // Texts repeat the call shape four hours later; the daily phase lag between
  // the channels is exactly four hours by construction.
  for (int dt = 0; dt < 2; ++dt)
    for (int m = 0; m < 1440; ++m)
      pt.text[size_t(dt)][size_t(m)] = pt.call[size_t(dt)][size_t((m - 240 + 1440) % 1440)];

  for (int dt = 0; dt < 2; ++dt)
    for (int hr = 0; hr < 24; ++hr) {
      double cs = 0.0, ts = 0.0;
      for (int m = hr * 60; m < (hr + 1) * 60; ++m) {
        cs += pt.call[size_t(dt)][size_t(m)];
        ts += pt.text[size_t(dt)][size_t(m)];
      }
      pt.call_hour[size_t(dt)][size_t(hr)] = cs;
      pt.text_hour[size_t(dt)][size_t(hr)] = ts;
    }

  // Scale text rates so the weekday 09:00-17:00 volume ratio equals the
  // target exactly in expectation.
  double call_day = 0.0, text_day = 0.0;
  for (int m = 9 * 60; m < 17 * 60; ++m) {
    call_day += pt.call[0][size_t(m)];
    text_day += pt.text[0][size_t(m)];
  }
  pt.text_base_scale = text_ratio * call_day / text_day;
  return pt;
}

const ProfileTables& profiles(double text_ratio) {
  static std::mutex mu;
  static std::map<double, ProfileTables> cache;
  std::lock_guard<std::mutex> lk(mu);
  auto it = cache.find(text_ratio);
  if (it == cache.end()) it = cache.emplace(text_ratio, build_profiles(text_ratio)).first;
  return it->second;
}

}  // namespace

double QuakeInject::amplitude_at(double d_km) const {
  const double t = (d_km - d_near_km) / (d_far_km - d_near_km);
  const double a = a_near + (a_far - a_near) * t;
  const double lo = std::min(a_near, a_far), hi = std::max(a_near, a_far);
  return std::clamp(a, lo, hi);
}

GeneratorSpec generator_spec_from_config(const RunConfig& cfg) {
  GeneratorSpec s;
  s.seed = uint64_t(cfg.get_int("seed"));
  s.n_towers = int(cfg.get_int("synth_n_towers"));
  s.azimuths_per_tower = int(cfg.get_int("synth_azimuths"));
  s.area.center_lat = cfg.get_double("center_lat");
  s.area.center_lon = cfg.get_double("center_lon");
  s.area.radius_km = cfg.get_double("radius_km");
  s.epsilon_m = cfg.get_double("epsilon_m");
  s.dex_center = cfg.get_double("synth_dex_center");
  s.dex_edge = cfg.get_double("synth_dex_edge");
  s.dex_sigma = cfg.get_double("synth_dex_sigma");
  s.gamma = cfg.get_double("synth_gamma");
  s.base_call_rate = cfg.get_double("synth_base_call_rate");
  s.text_ratio = cfg.get_double("synth_text_ratio");
  s.t0 = parse_civil_date(cfg.get_string("start"));
  s.span_days = int(cfg.get_int("days"));
  s.resolution = parse_resolution(cfg.get_string("synth_resolution"));
  s.deterministic = cfg.get_bool("synth_deterministic");
  s.n_coastal_zones = int(cfg.get_int("synth_coastal_zones"));
  s.n_control_zones = int(cfg.get_int("synth_control_zones"));
  s.anomalous_zone = cfg.get_bool("synth_anomalous_zone");

  s.quake.enabled = cfg.get_bool("synth_quake");
  s.quake.onset = parse_civil_minute(cfg.get_string("synth_quake_onset"));
  s.quake.epicenter_lat = cfg.get_double("synth_quake_epicenter_lat");
  s.quake.epicenter_lon = cfg.get_double("synth_quake_epicenter_lon");
  s.quake.a_near = cfg.get_double("synth_quake_a_near");
  s.quake.d_near_km = cfg.get_double("synth_quake_d_near_km");
  s.quake.a_far = cfg.get_double("synth_quake_a_far");
  s.quake.d_far_km = cfg.get_double("synth_quake_d_far_km");
  s.quake.attack_call_min = cfg.get_double("synth_quake_attack_call_min");
  s.quake.tau_call_min = cfg.get_double("synth_quake_tau_call_min");
  s.quake.attack_text_min = cfg.get_double("synth_quake_attack_text_min");
  s.quake.tau_text_min = cfg.get_double("synth_quake_tau_text_min");
  s.quake.text_scale = cfg.get_double("synth_quake_text_scale");
  s.quake.highresp_frac = cfg.get_double("synth_quake_highresp_frac");
  s.quake.highresp_mean = cfg.get_double("synth_quake_highresp_mean");
  s.quake.highresp_sigma_ln = cfg.get_double("synth_quake_highresp_sigma");
  s.quake.highresp_cap = cfg.get_double("synth_quake_highresp_cap");
  s.quake.d_cut_km = cfg.get_double("synth_quake_dcut_km");
  s.quake.hr_radius_km = cfg.get_double("synth_quake_hr_radius_km");

  s.storm.enabled = cfg.get_bool("synth_storm");
  s.storm.landfall = parse_civil_minute(cfg.get_string("synth_storm_landfall"));
  s.storm.depth_min = cfg.get_double("synth_storm_depth_min");
  s.storm.depth_step = cfg.get_double("synth_storm_depth_step");
  s.storm.text_surge = cfg.get_double("synth_storm_surge");
  s.storm.recovery_hour = int(cfg.get_int("synth_storm_recovery_hour"));
  s.storm.ramp_min = int(cfg.get_int("synth_storm_ramp_min"));
  return s;
}

namespace {

std::string tower_name(int i) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "T%04d", i + 1);
  return buf;
}

std::vector<Zone> make_zones(const GeneratorSpec& spec) {
  const double lat0 = spec.area.center_lat, lon0 = spec.area.center_lon;
  const double dlat_r = spec.area.radius_km / 110.574;
  const double dlon_r = spec.area.radius_km / (111.320 * std::cos(lat0 * M_PI / 180.0));

  std::vector<Zone> zones;
  auto box = [](const std::string& id, double lat_a, double lat_b, double lon_a, double lon_b) {
    Zone z;
    z.zone_id = id;
    z.ring = {{lon_a, lat_a}, {lon_b, lat_a}, {lon_b, lat_b}, {lon_a, lat_b}};
    return z;
  };
  // Coastal band along the southern rim, split longitudinally.
  const double c_lat0 = lat0 - 0.60 * dlat_r, c_lat1 = lat0 - 0.25 * dlat_r;
  const double c_lon0 = lon0 - 0.55 * dlon_r, c_lon1 = lon0 + 0.55 * dlon_r;
  for (int i = 0; i < spec.n_coastal_zones; ++i) {
    const double a = c_lon0 + (c_lon1 - c_lon0) * double(i) / double(spec.n_coastal_zones);
    const double b = c_lon0 + (c_lon1 - c_lon0) * double(i + 1) / double(spec.n_coastal_zones);
    zones.push_back(box("coastal_" + std::to_string(i + 1), c_lat0, c_lat1, a, b));
  }
  // Inland control band to the north.
  const double n_lat0 = lat0 + 0.35 * dlat_r, n_lat1 = lat0 + 0.60 * dlat_r;
  const double n_lon0 = lon0 - 0.45 * dlon_r, n_lon1 = lon0 + 0.45 * dlon_r;
  for (int i = 0; i < spec.n_control_zones; ++i) {
    const double a = n_lon0 + (n_lon1 - n_lon0) * double(i) / double(spec.n_control_zones);
    const double b = n_lon0 + (n_lon1 - n_lon0) * double(i + 1) / double(spec.n_control_zones);
    zones.push_back(box("control_" + std::to_string(i + 1), n_lat0, n_lat1, a, b));
  }
  return zones;
}

}  // namespace

SynthLayout gen_layout(const GeneratorSpec& spec) {
  require_input(spec.n_towers >= 1, "need at least one tower");
  require_input(spec.azimuths_per_tower >= 1 && spec.azimuths_per_tower <= 12,
                "azimuths per tower out of [1, 12]");
  require_input(spec.span_days >= 1, "span must be at least one day");

  SynthLayout lay;
  const Vec2 center = to_vec(latlon_to_utm(spec.area.center_lat, spec.area.center_lon));
  const double r_max = 0.97 * spec.area.radius_km * 1000.0;
  const double min_sep = 400.0;

  for (int i = 0; i < spec.n_towers; ++i) {
    KeyedRng rng(mix_key(spec.seed, kTagTower, uint64_t(i)));
    Vec2 pos;
    for (int tries = 0; tries < 200; ++tries) {
      // Center-weighted radial placement: denser towers where density peaks.
      const double r = r_max * std::pow(rng.next_unit(), 0.65);
      const double th = 2.0 * M_PI * rng.next_unit();
      pos = {center.x + r * std::cos(th), center.y + r * std::sin(th)};
      bool ok = true;
      for (const TowerSite& t : lay.towers) {
        const Vec2 q = to_vec(latlon_to_utm(t.lat, t.lon));
        if (dist2(pos, q) < min_sep * min_sep) {
          ok = false;
          break;
        }
      }
      if (ok) break;
    }
    TowerSite t;
    t.tower_id = tower_name(i);
    utm_to_latlon({pos.x, pos.y}, t.lat, t.lon);
    lay.towers.push_back(std::move(t));

    KeyedRng az_rng(mix_key(spec.seed, kTagAzimuth, uint64_t(i)));
    const double step = 360.0 / double(spec.azimuths_per_tower);
    const double psi = step * az_rng.next_unit();
    for (int k = 0; k < spec.azimuths_per_tower; ++k) {
      double az = psi + step * double(k);
      if (az >= 360.0) az -= 360.0;
      lay.antennas.push_back({lay.towers.back().tower_id, az});
    }
  }

  lay.sectors = build_sectors(lay.towers, lay.antennas, spec.area, spec.epsilon_m);
  const int64_t S = int64_t(lay.sectors.sectors.size());

  lay.density.resize(size_t(S));
  lay.epi_distance_km.resize(size_t(S));
  lay.call_peak_factor.assign(size_t(S), 1.0);
  lay.text_peak_factor.assign(size_t(S), 1.0);
  const double r_m = spec.area.radius_km * 1000.0;
  for (int64_t s = 0; s < S; ++s) {
    const Sector& sec = lay.sectors.sectors[size_t(s)];
    const double rc = std::min(1.0, dist(sec.centroid_utm, center) / r_m);
    const double mu_dex = spec.dex_center - (spec.dex_center - spec.dex_edge) * std::pow(rc, 1.2);
    KeyedRng rng(mix_key(spec.seed, kTagDensity, uint64_t(s)));
    lay.density[size_t(s)] = std::pow(10.0, mu_dex + spec.dex_sigma * rng.next_normal());
    lay.epi_distance_km[size_t(s)] = great_circle_km(
        sec.centroid_lat, sec.centroid_lon, spec.quake.epicenter_lat, spec.quake.epicenter_lon);
  }

  if (spec.quake.enabled) {
    const double mu_ln = std::log(spec.quake.highresp_mean) -
                         0.5 * spec.quake.highresp_sigma_ln * spec.quake.highresp_sigma_ln;
    for (int64_t s = 0; s < S; ++s) {
      const Sector& sec = lay.sectors.sectors[size_t(s)];
      const double d = lay.epi_distance_km[size_t(s)];
      double m = 1.0;
      const bool eligible = d < spec.quake.d_cut_km &&
                            dist(sec.centroid_utm, center) < spec.quake.hr_radius_km * 1000.0;
      if (eligible) {
        KeyedRng rng(mix_key(spec.seed, kTagHighResp, uint64_t(s)));
        if (rng.next_unit() < spec.quake.highresp_frac) {
          m = std::clamp(std::exp(mu_ln + spec.quake.highresp_sigma_ln * rng.next_normal()), 1.0,
                         spec.quake.highresp_cap);
        }
      }
      const double mc = spec.quake.amplitude_at(d) * m;
      lay.call_peak_factor[size_t(s)] = mc;
      lay.text_peak_factor[size_t(s)] = 1.0 + spec.quake.text_scale * (mc - 1.0);
    }
  }

  lay.zones = make_zones(spec);
  lay.n_coastal = spec.n_coastal_zones;
  lay.coastal_zone_of.assign(size_t(S), -1);
  for (int z = 0; z < lay.n_coastal; ++z) {
    for (int s : zone_members(lay.zones[size_t(z)], lay.sectors))
      if (lay.coastal_zone_of[size_t(s)] < 0) lay.coastal_zone_of[size_t(s)] = z;
  }
  return lay;
}

namespace {

struct EventClock {
  // All times in absolute minutes (minute_index).
  bool quake = false;
  int64_t q_onset = 0;
  double q_attack[2] = {0, 0}, q_tau[2] = {0, 0};
  int64_t q_end[2] = {0, 0};  // envelope below 1e-4 afterwards

  bool storm = false;
  int64_t s_start0 = 0;  // per zone: s_start0 + 60 * (zone % 2)
  int64_t s_recovery = 0;
  int64_t s_text_end = 0;  // surge ends 20:00 pre-landfall day
  int64_t s_end = 0;       // recovery + 120 min ramp
  int ramp_min = 30;

  bool anomalous = false;
  int64_t a_start = 0, a_end = 0;
};

EventClock make_clock(const GeneratorSpec& spec) {
  EventClock ck;
  ck.quake = spec.quake.enabled;
  if (ck.quake) {
    ck.q_onset = minute_index(spec.quake.onset);
    ck.q_attack[0] = spec.quake.attack_call_min;
    ck.q_attack[1] = spec.quake.attack_text_min;
    ck.q_tau[0] = spec.quake.tau_call_min;
    ck.q_tau[1] = spec.quake.tau_text_min;
    for (int c = 0; c < 2; ++c)
      ck.q_end[c] = ck.q_onset + int64_t(std::ceil(ck.q_attack[c] + 9.3 * ck.q_tau[c]));
  }
  ck.storm = spec.storm.enabled;
  if (ck.storm) {
    CivilMinute pre = spec.storm.landfall;
    const int64_t pre_day = days_from_civil(pre.year, pre.month, pre.day) - 1;
    ck.s_start0 = pre_day * 1440 + 13 * 60;
    ck.s_text_end = pre_day * 1440 + 20 * 60;
    const int64_t landfall_day = pre_day + 1;
    ck.s_recovery = landfall_day * 1440 + int64_t(spec.storm.recovery_hour) * 60;
    ck.s_end = ck.s_recovery + 120;
    ck.ramp_min = spec.storm.ramp_min;
  }
  ck.anomalous = spec.anomalous_zone && ck.storm;
  if (ck.anomalous) {
    ck.a_start = ck.s_start0 - 4 * 1440;  // surge through the preceding days
    ck.a_end = ck.s_start0 - 1440;
  }
  return ck;
}

double quake_envelope(double u_min, double attack, double tau) {
  if (u_min <= 0.0) return 0.0;
  if (u_min <= attack) return smoothstep01(u_min / attack);
  return std::exp(-(u_min - attack) / tau);
}

// Multiplicative event factor at minute midpoint t for sector s, channel c.
double event_factor(const GeneratorSpec& spec, const SynthLayout& lay, const EventClock& ck,
                    int64_t s, int64_t abs_min, int ch) {
  double f = 1.0;
  const double t = double(abs_min) + 0.5;
  if (ck.quake && abs_min >= ck.q_onset && abs_min < ck.q_end[ch]) {
    const double peak = ch == 0 ? lay.call_peak_factor[size_t(s)] : lay.text_peak_factor[size_t(s)];
    f *= 1.0 + (peak - 1.0) * quake_envelope(t - double(ck.q_onset), ck.q_attack[ch], ck.q_tau[ch]);
  }
  const int zone = lay.coastal_zone_of[size_t(s)];
  if (ck.storm && zone >= 0) {
    const double start = double(ck.s_start0 + 60 * (zone % 2));
    const double depth = spec.storm.depth_min + spec.storm.depth_step * double(zone % 4);
    if (ch == 0) {
      if (t >= start && t < double(ck.s_recovery)) {
        f *= 1.0 - depth * smoothstep01((t - start) / double(ck.ramp_min));
      } else if (t >= double(ck.s_recovery) && t < double(ck.s_end)) {
        f *= 1.0 - depth * (1.0 - smoothstep01((t - double(ck.s_recovery)) / 120.0));
      }
    } else {
      const double end = double(ck.s_text_end);
      if (t >= start && t < end) {
        const double rise = smoothstep01((t - start) / double(ck.ramp_min));
        const double fall = 1.0 - smoothstep01((t - (end - double(ck.ramp_min))) / double(ck.ramp_min));
        f *= 1.0 + (spec.storm.text_surge - 1.0) * std::min(rise, fall);
      }
    }
  }
  if (ck.anomalous && zone == 0 && ch == 0 && abs_min >= ck.a_start && abs_min < ck.a_end)
    f *= 1.35;
  return f;
}

bool event_overlaps(const SynthLayout& lay, const EventClock& ck, int64_t s, int64_t bin_start,
                    int64_t bin_end) {
  if (ck.quake && bin_start < std::max(ck.q_end[0], ck.q_end[1]) && bin_end > ck.q_onset)
    return true;
  const int zone = lay.coastal_zone_of[size_t(s)];
  if (ck.storm && zone >= 0) {
    const int64_t start = ck.s_start0 + 60 * (zone % 2);
    if (bin_start < ck.s_end && bin_end > start) return true;
  }
  if (ck.anomalous && zone == 0 && bin_start < ck.a_end && bin_end > ck.a_start) return true;
  return false;
}

}  // namespace

double synth_rate(const GeneratorSpec& spec, const SynthLayout& layout, int64_t sector,
                  int64_t abs_minute, Channel ch) {
  const ProfileTables& pt = profiles(spec.text_ratio);
  const EventClock ck = make_clock(spec);
  const CivilMinute cm = civil_from_minute_index(abs_minute);
  const int dt = is_weekend(weekday(cm)) ? 1 : 0;
  const int mod = cm.hour * 60 + cm.minute;
  const int c = ch == Channel::calls ? 0 : 1;
  const Sector& sec = layout.sectors.sectors[size_t(sector)];
  const double base = spec.base_call_rate *
                      std::pow(layout.density[size_t(sector)], spec.gamma) * sec.area_km2 *
                      (c == 0 ? 1.0 : pt.text_base_scale);
  const double w = c == 0 ? kWeekCall[weekday(cm)] : kWeekText[weekday(cm)];
  const double p = c == 0 ? pt.call[size_t(dt)][size_t(mod)] : pt.text[size_t(dt)][size_t(mod)];
  return base * w * p * event_factor(spec, layout, ck, sector, abs_minute, c);
}

SynthCounts gen_counts(const GeneratorSpec& spec, const SynthLayout& layout) {
  const ProfileTables& pt = profiles(spec.text_ratio);
  const EventClock ck = make_clock(spec);
  require_input(spec.resolution != Resolution::day, "generation resolution is minute or hour");
  const int64_t bm = bin_minutes(spec.resolution);
  const int64_t n_bins = int64_t(spec.span_days) * 1440 / bm;
  const int64_t t0_abs = minute_index(spec.t0);
  const int64_t span_min = int64_t(spec.span_days) * 1440;

  if (ck.quake) {
    require_input(ck.q_onset >= t0_abs && ck.q_onset < t0_abs + span_min,
                  "quake onset falls outside the generation span");
  }
  if (ck.storm) {
    require_input(ck.s_start0 >= t0_abs && ck.s_end <= t0_abs + span_min,
                  "storm window falls outside the generation span");
  }

  const std::vector<std::string> ids = layout.sectors.ids();
  SynthCounts out{make_tensor(Channel::calls, spec.resolution, spec.t0, ids, n_bins),
                  make_tensor(Channel::texts, spec.resolution, spec.t0, ids, n_bins)};
  const int64_t S = out.calls.n_sectors();

  // Per-bin profile-times-week weights, identical for every sector outside
  // event windows.
  std::vector<double> wp_call(static_cast<size_t>(n_bins)), wp_text(static_cast<size_t>(n_bins));
  std::vector<uint8_t> daytype(static_cast<size_t>(n_bins));
  for (int64_t b = 0; b < n_bins; ++b) {
    const int64_t abs0 = t0_abs + b * bm;
    const CivilMinute cm = civil_from_minute_index(abs0);
    const int wd = weekday(cm);
    const int dt = is_weekend(wd) ? 1 : 0;
    daytype[size_t(b)] = uint8_t(dt);
    if (bm == 1) {
      const int mod = cm.hour * 60 + cm.minute;
      wp_call[size_t(b)] = kWeekCall[wd] * pt.call[size_t(dt)][size_t(mod)];
      wp_text[size_t(b)] = kWeekText[wd] * pt.text[size_t(dt)][size_t(mod)];
    } else {
      wp_call[size_t(b)] = kWeekCall[wd] * pt.call_hour[size_t(dt)][size_t(cm.hour)];
      wp_text[size_t(b)] = kWeekText[wd] * pt.text_hour[size_t(dt)][size_t(cm.hour)];
    }
  }

  parallel_chunks(S, [&](int64_t s_begin, int64_t s_end) {
    for (int64_t s = s_begin; s < s_end; ++s) {
      const Sector& sec = layout.sectors.sectors[size_t(s)];
      const double rho_g = std::pow(layout.density[size_t(s)], spec.gamma) * sec.area_km2;
      const double base_call = spec.base_call_rate * rho_g;
      const double base_text = base_call * pt.text_base_scale;
      for (int64_t b = 0; b < n_bins; ++b) {
        const int64_t abs0 = t0_abs + b * bm;
        double lam_c, lam_t;
        if (!event_overlaps(layout, ck, s, abs0, abs0 + bm)) {
          lam_c = base_call * wp_call[size_t(b)];
          lam_t = base_text * wp_text[size_t(b)];
        } else {
          lam_c = 0.0;
          lam_t = 0.0;
          const int dt = daytype[size_t(b)];
          const CivilMinute cm0 = civil_from_minute_index(abs0);
          const int wd = weekday(cm0);
          const int mod0 = cm0.hour * 60 + cm0.minute;
          for (int64_t k = 0; k < bm; ++k) {
            const int mod = int((mod0 + k) % 1440);
            const int64_t am = abs0 + k;
            lam_c += pt.call[size_t(dt)][size_t(mod)] * event_factor(spec, layout, ck, s, am, 0);
            lam_t += pt.text[size_t(dt)][size_t(mod)] * event_factor(spec, layout, ck, s, am, 1);
          }
          lam_c *= base_call * kWeekCall[wd];
          lam_t *= base_text * kWeekText[wd];
        }
        require_input(lam_c <= 1e9 && lam_t <= 1e9, "rate overflow: check generator magnitudes");
        if (spec.deterministic) {
          out.calls.at(s, b) = std::llround(lam_c);
          out.texts.at(s, b) = std::llround(lam_t);
        } else {
          KeyedRng rc(mix_key(spec.seed, kTagCounts[0], uint64_t(s), uint64_t(abs0)));
          KeyedRng rt(mix_key(spec.seed, kTagCounts[1], uint64_t(s), uint64_t(abs0)));
          out.calls.at(s, b) = rc.next_poisson(lam_c);
          out.texts.at(s, b) = rt.next_poisson(lam_t);
        }
      }
    }
  });
  return out;
}

GroundTruth ground_truth(const GeneratorSpec& spec, const SynthLayout& layout) {
  const EventClock ck = make_clock(spec);
  const int64_t t0_abs = minute_index(spec.t0);
  GroundTruth gt;
  gt.quake = spec.quake.enabled;
  if (gt.quake) {
    gt.quake_onset_rel_min = ck.q_onset - t0_abs;
    gt.quake_onset_time = format_civil_minute(spec.quake.onset);
    gt.call_peak_offset_min = spec.quake.attack_call_min;
    gt.text_peak_offset_min = spec.quake.attack_text_min;
    gt.tau_call_min = spec.quake.tau_call_min;
    gt.tau_text_min = spec.quake.tau_text_min;
    gt.sector_ids = layout.sectors.ids();
    gt.call_peak_factor = layout.call_peak_factor;
    gt.text_peak_factor = layout.text_peak_factor;
  }
  if (spec.storm.enabled) {
    for (size_t z = 0; z < layout.zones.size(); ++z) {
      ZoneTruth zt;
      zt.zone_id = layout.zones[z].zone_id;
      zt.coastal = int(z) < layout.n_coastal;
      if (zt.coastal) {
        zt.start_rel_min = ck.s_start0 + 60 * (int64_t(z) % 2) - t0_abs;
        zt.recovery_rel_min = ck.s_recovery - t0_abs;
        zt.depth = spec.storm.depth_min + spec.storm.depth_step * double(z % 4);
        zt.surge = spec.storm.text_surge;
      }
      gt.zones.push_back(std::move(zt));
    }
  }
  if (spec.quake.enabled && spec.storm.enabled)
    gt.events_overlap = ck.q_onset < ck.s_end && std::max(ck.q_end[0], ck.q_end[1]) > ck.s_start0;
  return gt;
}

void write_ground_truth_csv(const std::string& path, const GroundTruth& gt) {
  AtomicWriter w(path);
  w.append("kind,id,field,value\n");
  auto scalar = [&](const char* field, const std::string& v) {
    w.appendf("scalar,-,%s,%s\n", field, v.c_str());
  };
  scalar("quake", gt.quake ? "1" : "0");
  if (gt.quake) {
    scalar("quake_onset_rel_min", std::to_string(gt.quake_onset_rel_min));
    scalar("quake_onset_time", gt.quake_onset_time);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", gt.call_peak_offset_min);
    scalar("call_peak_offset_min", buf);
    std::snprintf(buf, sizeof(buf), "%.10g", gt.text_peak_offset_min);
    scalar("text_peak_offset_min", buf);
    std::snprintf(buf, sizeof(buf), "%.10g", gt.tau_call_min);
    scalar("tau_call_min", buf);
    std::snprintf(buf, sizeof(buf), "%.10g", gt.tau_text_min);
    scalar("tau_text_min", buf);
    for (size_t s = 0; s < gt.sector_ids.size(); ++s) {
      w.appendf("sector,%s,call_peak_factor,%.10g\n", gt.sector_ids[s].c_str(),
                gt.call_peak_factor[s]);
      w.appendf("sector,%s,text_peak_factor,%.10g\n", gt.sector_ids[s].c_str(),
                gt.text_peak_factor[s]);
    }
  }
  scalar("events_overlap", gt.events_overlap ? "1" : "0");
  for (const ZoneTruth& z : gt.zones) {
    w.appendf("zone,%s,coastal,%d\n", z.zone_id.c_str(), z.coastal ? 1 : 0);
    if (z.coastal) {
      w.appendf("zone,%s,start_rel_min,%lld\n", z.zone_id.c_str(), (long long)z.start_rel_min);
      w.appendf("zone,%s,recovery_rel_min,%lld\n", z.zone_id.c_str(),
                (long long)z.recovery_rel_min);
      w.appendf("zone,%s,depth,%.10g\n", z.zone_id.c_str(), z.depth);
      w.appendf("zone,%s,surge,%.10g\n", z.zone_id.c_str(), z.surge);
    }
  }
  w.commit();
}

GroundTruth load_ground_truth_csv(const std::string& path) {
  GroundTruth gt;
  std::map<std::string, size_t> zone_index;
  std::map<std::string, size_t> sector_index;
  for_each_csv_row(path, "kind,id,field,value", [&](size_t ln, const auto& f) {
    require_input(f.size() == 4, path + ":" + std::to_string(ln) + ": want 4 fields");
    const std::string kind(f[0]), id(f[1]), field(f[2]), value(f[3]);
    if (kind == "scalar") {
      if (field == "quake") gt.quake = value == "1";
      else if (field == "quake_onset_rel_min") gt.quake_onset_rel_min = parse_i64(value, path, ln);
      else if (field == "quake_onset_time") gt.quake_onset_time = value;
      else if (field == "call_peak_offset_min") gt.call_peak_offset_min = parse_f64(value, path, ln);
      else if (field == "text_peak_offset_min") gt.text_peak_offset_min = parse_f64(value, path, ln);
      else if (field == "tau_call_min") gt.tau_call_min = parse_f64(value, path, ln);
      else if (field == "tau_text_min") gt.tau_text_min = parse_f64(value, path, ln);
      else if (field == "events_overlap") gt.events_overlap = value == "1";
    } else if (kind == "sector") {
      auto it = sector_index.find(id);
      if (it == sector_index.end()) {
        it = sector_index.emplace(id, gt.sector_ids.size()).first;
        gt.sector_ids.push_back(id);
        gt.call_peak_factor.push_back(1.0);
        gt.text_peak_factor.push_back(1.0);
      }
      if (field == "call_peak_factor") gt.call_peak_factor[it->second] = parse_f64(value, path, ln);
      if (field == "text_peak_factor") gt.text_peak_factor[it->second] = parse_f64(value, path, ln);
    } else if (kind == "zone") {
      auto it = zone_index.find(id);
      if (it == zone_index.end()) {
        it = zone_index.emplace(id, gt.zones.size()).first;
        gt.zones.push_back({id, false, -1, -1, 0.0, 1.0});
      }
      ZoneTruth& z = gt.zones[it->second];
      if (field == "coastal") z.coastal = value == "1";
      if (field == "start_rel_min") z.start_rel_min = parse_i64(value, path, ln);
      if (field == "recovery_rel_min") z.recovery_rel_min = parse_i64(value, path, ln);
      if (field == "depth") z.depth = parse_f64(value, path, ln);
      if (field == "surge") z.surge = parse_f64(value, path, ln);
    }
  });
  return gt;
}

void synth_write_all(const GeneratorSpec& spec, const std::string& outdir) {
  const SynthLayout lay = gen_layout(spec);
  const SynthCounts counts = gen_counts(spec, lay);

  write_towers_csv(outdir + "/towers.csv", lay.towers);
  write_antennas_csv(outdir + "/antennas.csv", lay.antennas);
  write_sectors_csv(lay.sectors, outdir + "/sectors.csv", outdir + "/sectors_wkt.csv");
  write_volumes_csv(outdir + "/volumes.csv", counts.calls, counts.texts);
  write_zones_csv(outdir + "/zones.csv", lay.zones);
  write_ground_truth_csv(outdir + "/truth.csv", ground_truth(spec, lay));

  AtomicWriter w(outdir + "/density.csv");
  w.append("sector_id,density,area_km2\n");
  for (size_t s = 0; s < lay.sectors.sectors.size(); ++s)
    w.appendf("%s,%.10g,%.10g\n", lay.sectors.sectors[s].sector_id.c_str(), lay.density[s],
              lay.sectors.sectors[s].area_km2);
  w.commit();
}

}  // namespace cellscape
