#include "config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "error.hpp"
#include "timegrid.hpp"

namespace cellscape {

namespace {

enum class KeyType { str, integer, real, boolean, date, datetime, choice };

struct KeySpec {
  const char* key;
  KeyType type;
  const char* default_value;  // nullptr = required, "" = optional unset
  const char* choices;        // '|'-separated for KeyType::choice
};

const KeySpec kSchema[] = {
    {"outdir", KeyType::str, nullptr, nullptr},
    {"towers", KeyType::str, "", nullptr},
    {"antennas", KeyType::str, "", nullptr},
    {"volumes", KeyType::str, "", nullptr},
    {"zones", KeyType::str, "", nullptr},
    {"sectors", KeyType::str, "", nullptr},
    {"sectors_wkt", KeyType::str, "", nullptr},
    {"truth", KeyType::str, "", nullptr},
    {"center_lat", KeyType::real, "40.7580", nullptr},
    {"center_lon", KeyType::real, "-73.9855", nullptr},
    {"radius_km", KeyType::real, "80.5", nullptr},
    {"epsilon_m", KeyType::real, "1.0", nullptr},
    {"start", KeyType::date, "2011-02-01", nullptr},
    {"days", KeyType::integer, "365", nullptr},
    {"resolution", KeyType::choice, "minute", "minute|hour|day"},
    {"aggregate_to", KeyType::choice, "hour", "hour|day"},
    {"lag_bins", KeyType::integer, "0", nullptr},
    {"threads", KeyType::integer, "1", nullptr},
    {"seed", KeyType::integer, "20110823", nullptr},
    {"verbose", KeyType::boolean, "false", nullptr},
    {"corr_resolution", KeyType::choice, "day", "minute|hour|day"},
    {"corr_transform", KeyType::choice, "none", "none|log10p1"},
    {"nw", KeyType::integer, "4", nullptr},
    {"k", KeyType::integer, "0", nullptr},
    {"adaptive", KeyType::boolean, "true", nullptr},
    {"detrend", KeyType::boolean, "true", nullptr},
    {"epicenter_lat", KeyType::real, "", nullptr},
    {"epicenter_lon", KeyType::real, "", nullptr},
    {"quake_onset", KeyType::datetime, "2011-08-23 13:51", nullptr},
    {"pre_window_min", KeyType::integer, "180", nullptr},
    {"scan_window_min", KeyType::integer, "180", nullptr},
    {"onset_nsigma", KeyType::real, "5.0", nullptr},
    {"profile_bin_km", KeyType::real, "25.0", nullptr},
    {"theta", KeyType::real, "0.3", nullptr},
    {"diverge_start", KeyType::datetime, "2011-08-27 06:00", nullptr},
    {"diverge_hours", KeyType::integer, "18", nullptr},
    {"grid_cell_m", KeyType::real, "30.0", nullptr},
    {"grid_channel", KeyType::choice, "calls", "calls|texts"},
    {"grid_stat", KeyType::choice, "mean", "mean|max|sum"},
    {"tsmap_saturation_q", KeyType::real, "0.98", nullptr},
    {"stats_source", KeyType::choice, "anomaly", "anomaly|volumes"},
    {"synth_n_towers", KeyType::integer, "200", nullptr},
    {"synth_azimuths", KeyType::integer, "3", nullptr},
    {"synth_deterministic", KeyType::boolean, "false", nullptr},
    {"synth_resolution", KeyType::choice, "minute", "minute|hour"},
    {"synth_dex_center", KeyType::real, "3.3", nullptr},
    {"synth_dex_edge", KeyType::real, "-1.2", nullptr},
    {"synth_dex_sigma", KeyType::real, "0.3", nullptr},
    {"synth_gamma", KeyType::real, "1.0", nullptr},
    {"synth_base_call_rate", KeyType::real, "0.004", nullptr},
    {"synth_text_ratio", KeyType::real, "2.0", nullptr},
    {"synth_coastal_zones", KeyType::integer, "4", nullptr},
    {"synth_control_zones", KeyType::integer, "2", nullptr},
    {"synth_quake", KeyType::boolean, "true", nullptr},
    {"synth_quake_onset", KeyType::datetime, "2011-08-23 13:51", nullptr},
    {"synth_quake_epicenter_lat", KeyType::real, "37.910", nullptr},
    {"synth_quake_epicenter_lon", KeyType::real, "-77.990", nullptr},
    {"synth_quake_a_near", KeyType::real, "3.0", nullptr},
    {"synth_quake_d_near_km", KeyType::real, "100.0", nullptr},
    {"synth_quake_a_far", KeyType::real, "1.5", nullptr},
    {"synth_quake_d_far_km", KeyType::real, "600.0", nullptr},
    {"synth_quake_attack_call_min", KeyType::real, "10.0", nullptr},
    {"synth_quake_tau_call_min", KeyType::real, "25.0", nullptr},
    {"synth_quake_attack_text_min", KeyType::real, "30.0", nullptr},
    {"synth_quake_tau_text_min", KeyType::real, "45.0", nullptr},
    {"synth_quake_text_scale", KeyType::real, "0.4", nullptr},
    {"synth_quake_highresp_frac", KeyType::real, "0.32", nullptr},
    {"synth_quake_highresp_mean", KeyType::real, "8.5", nullptr},
    {"synth_quake_highresp_sigma", KeyType::real, "0.6", nullptr},
    {"synth_quake_highresp_cap", KeyType::real, "20.0", nullptr},
    {"synth_quake_dcut_km", KeyType::real, "530.0", nullptr},
    {"synth_quake_hr_radius_km", KeyType::real, "35.0", nullptr},
    {"synth_storm", KeyType::boolean, "true", nullptr},
    {"synth_storm_landfall", KeyType::datetime, "2011-08-28 09:00", nullptr},
    {"synth_storm_depth_min", KeyType::real, "0.55", nullptr},
    {"synth_storm_depth_step", KeyType::real, "0.05", nullptr},
    {"synth_storm_surge", KeyType::real, "1.30", nullptr},
    {"synth_storm_recovery_hour", KeyType::integer, "10", nullptr},
    {"synth_storm_ramp_min", KeyType::integer, "30", nullptr},
    {"synth_anomalous_zone", KeyType::boolean, "false", nullptr},
};

const KeySpec* find_spec(const std::string& key) {
  for (const KeySpec& s : kSchema)
    if (key == s.key) return &s;
  return nullptr;
}

bool choice_ok(const std::string& value, const char* choices) {
  std::string c(choices);
  size_t start = 0;
  while (start <= c.size()) {
    size_t end = c.find('|', start);
    if (end == std::string::npos) end = c.size();
    if (value == c.substr(start, end - start)) return true;
    start = end + 1;
  }
  return false;
}

void validate_value(const KeySpec& spec, const std::string& value, const std::string& where) {
  switch (spec.type) {
    case KeyType::str:
      return;
    case KeyType::integer: {
      int64_t v = 0;
      auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
      require_input(ec == std::errc() && p == value.data() + value.size(),
                    where + ": key '" + spec.key + "' wants an integer, got '" + value + "'");
      return;
    }
    case KeyType::real: {
      double v = 0;
      auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
      require_input(ec == std::errc() && p == value.data() + value.size(),
                    where + ": key '" + spec.key + "' wants a number, got '" + value + "'");
      return;
    }
    case KeyType::boolean:
      require_input(value == "true" || value == "false" || value == "1" || value == "0",
                    where + ": key '" + spec.key + "' wants true|false, got '" + value + "'");
      return;
    case KeyType::date:
      parse_civil_date(value);
      return;
    case KeyType::datetime:
      parse_civil_minute(value);
      return;
    case KeyType::choice:
      require_input(choice_ok(value, spec.choices), where + ": key '" + spec.key + "' wants one of " +
                                                        spec.choices + ", got '" + value + "'");
      return;
  }
}

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

}  // namespace

const std::vector<std::string>& RunConfig::known_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const KeySpec& s : kSchema) k.push_back(s.key);
    return k;
  }();
  return keys;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  require_input(bool(in), "cannot open config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

RunConfig RunConfig::parse(const std::string& text, const std::string& origin) {
  RunConfig cfg;
  cfg.origin_ = origin;
  std::map<std::string, size_t> seen_at;  // key -> line
  std::istringstream in(text);
  std::string line;
  size_t ln = 0;
  while (std::getline(in, line)) {
    ++ln;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    require_input(eq != std::string::npos,
                  origin + ":" + std::to_string(ln) + ": expected key=value, got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    require_input(!key.empty(), origin + ":" + std::to_string(ln) + ": empty key");
    const KeySpec* spec = find_spec(key);
    require_input(spec != nullptr, origin + ":" + std::to_string(ln) + ": unknown key '" + key + "'");
    const auto prev = seen_at.find(key);
    require_input(prev == seen_at.end(),
                  origin + ": duplicate key '" + key + "' at lines " +
                      (prev == seen_at.end() ? "" : std::to_string(prev->second)) + " and " +
                      std::to_string(ln));
    seen_at[key] = ln;
    validate_value(*spec, value, origin + ":" + std::to_string(ln));
    cfg.values_[key] = value;
  }

  // Defaults, then the required check.
  std::string missing;
  for (const KeySpec& s : kSchema) {
    if (cfg.values_.count(s.key) != 0) continue;
    if (s.default_value == nullptr)
      missing += std::string(missing.empty() ? "" : ", ") + s.key;
    else if (*s.default_value != '\0')
      cfg.values_[s.key] = s.default_value;
  }
  require_input(missing.empty(), origin + ": missing required key(s): " + missing);
  return cfg;
}

bool RunConfig::has(const std::string& key) const { return values_.count(key) != 0; }

const std::string& RunConfig::raw(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) {
    require_input(find_spec(key) != nullptr, "unknown config key '" + key + "'");
    throw input_error(origin_ + ": key '" + key + "' is not set");
  }
  return it->second;
}

std::string RunConfig::get_string(const std::string& key) const { return raw(key); }

double RunConfig::get_double(const std::string& key) const {
  const std::string& v = raw(key);
  double out = 0;
  std::from_chars(v.data(), v.data() + v.size(), out);
  return out;
}

int64_t RunConfig::get_int(const std::string& key) const {
  const std::string& v = raw(key);
  int64_t out = 0;
  std::from_chars(v.data(), v.data() + v.size(), out);
  return out;
}

bool RunConfig::get_bool(const std::string& key) const {
  const std::string& v = raw(key);
  return v == "true" || v == "1";
}

void RunConfig::require_keys(const std::vector<std::string>& keys) const {
  std::string missing;
  for (const std::string& k : keys)
    if (!has(k)) missing += std::string(missing.empty() ? "" : ", ") + k;
  require_input(missing.empty(), origin_ + ": missing required key(s): " + missing);
}

}  // namespace cellscape
