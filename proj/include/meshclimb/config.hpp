#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "meshclimb/biomech.hpp"
#include "meshclimb/calibration.hpp"
#include "meshclimb/locomotion.hpp"

namespace meshclimb {

/// Everything a preset run depends on.
struct Config {
  SimParams sim;
  TrialConfig trial;
  bool target_phase_explicit = false;

  std::vector<std::uint64_t> seeds;  // empty: the preset's own list

  double clawcompare_no_load_speed = calibrated::kMeshCompareNoLoadSpeed;  // rev/s
  int drift_cycles = 7;
  double drift_offset_jitter = 5.0;  // deg
  std::vector<double> sweep_inclines{10.0, 30.0, 50.0, 60.0};
  double sweep_duration = 15.0;      // s
  double sweep_mesh_incline = 30.0;  // deg
  double fig4_resolution = 1.0;      // deg

  biomech::SwingDetectConfig swing;
  biomech::SpikeConfig spikes;
  biomech::SynthSpec synth;
  std::vector<double> synth_inclines{30.0, 45.0, 60.0, 75.0};
  double synth_ratio_slope = -0.004;  // per deg
  double synth_reference_incline = 30.0;
  double synth_target_r = 0.88;
  bool synth_write_traces = false;
  std::string trace_mocap_csv;
  std::string trace_emg_csv;

  double fit_a = 40.0;   // mm/s
  double fit_b = 10.0;   // mm/s
  double fit_c = 2.0;    // 1/s
  int fit_pairs = 25;
  double fit_interval_min = 0.0;  // s
  double fit_interval_max = 0.6;  // s
  double fit_noise = 0.05;        // relative

  Config();

  /// Resolves derived values (gait target from gait kind, unless set).
  void finalize();
  void validate() const;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, const std::string& what);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

class UnknownKey : public std::runtime_error {
 public:
  UnknownKey(const std::string& key, int line);
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

class RangeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ConfigKey {
  std::string name;
  std::string unit;
  std::string description;
  std::function<void(Config&, const std::string&)> set;  // throws on bad value
  std::function<std::string(const Config&)> get;
};

/// Every accepted key, in echo order.
const std::vector<ConfigKey>& config_keys();

/// Sets one key from its text value. Throws UnknownKey, RangeError, or
/// std::invalid_argument for values that do not parse.
void apply_setting(Config& cfg, const std::string& key, const std::string& value);

/// `key = value` lines; `#` starts a comment; blank lines are ignored.
/// Applies the settings on top of `base`, then validates.
Config parse_config(std::string_view text, Config base = {});

/// All effective values in the parse_config format, one key per line.
std::string echo_config(const Config& cfg);

/// Markdown table of keys, units, defaults and descriptions.
std::string config_reference();

std::string format_number(double v);

}  // namespace meshclimb
