#include "meshclimb/config.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace meshclimb {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double parse_double(const std::string& text) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end || !std::isfinite(v))
    throw std::invalid_argument("'" + text + "' is not a number");
  return v;
}

long long parse_integer(const std::string& text) {
  long long v = 0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end) throw std::invalid_argument("'" + text + "' is not an integer");
  return v;
}

bool parse_bool(const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw std::invalid_argument("'" + text + "' is not a boolean");
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw std::invalid_argument("empty list element in '" + text + "'");
    items.push_back(item);
  }
  return items;
}

struct Range {
  double lo = -HUGE_VAL;
  double hi = HUGE_VAL;
  bool lo_open = false;
  bool hi_open = false;

  bool contains(double v) const {
    return (lo_open ? v > lo : v >= lo) && (hi_open ? v < hi : v <= hi);
  }
  std::string text() const {
    std::string s = lo_open || !std::isfinite(lo) ? "(" : "[";
    s += std::isfinite(lo) ? format_number(lo) : "-inf";
    s += ", ";
    s += std::isfinite(hi) ? format_number(hi) : "inf";
    s += hi_open || !std::isfinite(hi) ? ")" : "]";
    return s;
  }
};

const Range kAny{};
const Range kPositive{0.0, HUGE_VAL, true, false};
const Range kNonNegative{0.0, HUGE_VAL, false, false};
const Range kUnit{0.0, 1.0, false, false};
const Range kIncline{0.0, 90.0, false, true};

void check_range(const std::string& name, double v, const Range& r) {
  if (!r.contains(v))
    throw RangeError(name + " = " + format_number(v) + " outside " + r.text());
}

template <class Ref>
ConfigKey real(std::string name, std::string unit, Range range, std::string description, Ref ref) {
  return {name, std::move(unit), std::move(description),
          [=](Config& c, const std::string& text) {
            const double v = parse_double(text);
            check_range(name, v, range);
            ref(c) = v;
          },
          [=](const Config& c) { return format_number(ref(const_cast<Config&>(c))); }};
}

template <class Ref>
ConfigKey integer(std::string name, std::string unit, Range range, std::string description,
                  Ref ref) {
  return {name, std::move(unit), std::move(description),
          [=](Config& c, const std::string& text) {
            const auto v = parse_integer(text);
            check_range(name, static_cast<double>(v), range);
            ref(c) = static_cast<std::remove_reference_t<decltype(ref(c))>>(v);
          },
          [=](const Config& c) { return std::to_string(ref(const_cast<Config&>(c))); }};
}

template <class Ref>
ConfigKey boolean(std::string name, std::string description, Ref ref) {
  return {name, "", std::move(description),
          [=](Config& c, const std::string& text) { ref(c) = parse_bool(text); },
          [=](const Config& c) { return std::string(ref(const_cast<Config&>(c)) ? "true" : "false"); }};
}

template <class Ref>
ConfigKey text(std::string name, std::string description, Ref ref) {
  return {name, "", std::move(description),
          [=](Config& c, const std::string& value) { ref(c) = value; },
          [=](const Config& c) { return ref(const_cast<Config&>(c)); }};
}

template <class Ref>
ConfigKey real_list(std::string name, std::string unit, Range range, std::string description,
                    Ref ref) {
  return {name, std::move(unit), std::move(description),
          [=](Config& c, const std::string& value) {
            std::vector<double> out;
            for (const auto& item : split_list(value)) {
              const double v = parse_double(item);
              check_range(name, v, range);
              out.push_back(v);
            }
            if (out.empty()) throw RangeError(name + " needs at least one value");
            ref(c) = std::move(out);
          },
          [=](const Config& c) {
            std::string s;
            for (double v : ref(const_cast<Config&>(c))) s += (s.empty() ? "" : ",") + format_number(v);
            return s;
          }};
}

std::vector<ConfigKey> claw_keys(ClawVariant variant) {
  const std::string p = "claw." + to_string(variant) + ".";
  const auto spec = [variant](Config& c) -> ClawSpec& { return c.sim.claw(variant); };
  return {
      real(p + "bend_max", "deg", kNonNegative, "tarsus bend at full cable pull",
           [=](Config& c) -> double& { return spec(c).bend_max; }),
      real(p + "open_min", "deg", kAny, "claw opening with a slack cable",
           [=](Config& c) -> double& { return spec(c).open_min; }),
      real(p + "open_max", "deg", kAny, "claw opening at full cable pull",
           [=](Config& c) -> double& { return spec(c).open_max; }),
      real(p + "open_threshold_pull", "mm", kNonNegative, "cable pull at which the claw starts to open",
           [=](Config& c) -> double& { return spec(c).open_threshold_pull; }),
      real(p + "max_pull", "mm", kPositive, "cable pull that saturates bend and opening",
           [=](Config& c) -> double& { return spec(c).max_pull; }),
      real(p + "stiffness", "N/mm", kPositive, "tangential stiffness of the engaged claw",
           [=](Config& c) -> double& { return spec(c).stiffness; }),
      real(p + "max_deflection", "mm", kNonNegative, "cap on compliant tip deflection",
           [=](Config& c) -> double& { return spec(c).max_deflection; }),
      real(p + "fixed_bend", "deg", kAny, "bend of an immobile claw",
           [=](Config& c) -> double& { return spec(c).fixed_bend; }),
      real(p + "fixed_open", "deg", kAny, "opening of an immobile or unexpandable claw",
           [=](Config& c) -> double& { return spec(c).fixed_open; }),
      real(p + "p_snagfree", "", kUnit, "probability that a release attempt clears the wire",
           [=](Config& c) -> double& { return spec(c).p_snagfree; }),
  };
}

std::vector<ConfigKey> build_keys() {
  std::vector<ConfigKey> k;
  const auto add = [&](ConfigKey key) { k.push_back(std::move(key)); };

  add(real("linkage.crank_len", "mm", kPositive, "four-bar input crank",
           [](Config& c) -> double& { return c.sim.linkage.crank_len; }));
  add(real("linkage.coupler_len", "mm", kPositive, "four-bar coupler",
           [](Config& c) -> double& { return c.sim.linkage.coupler_len; }));
  add(real("linkage.rocker_len", "mm", kPositive, "four-bar rocker",
           [](Config& c) -> double& { return c.sim.linkage.rocker_len; }));
  add(real("linkage.ground_len", "mm", kPositive, "four-bar ground link",
           [](Config& c) -> double& { return c.sim.linkage.ground_len; }));
  add(real("linkage.cam_len", "mm", kPositive, "cam link length",
           [](Config& c) -> double& { return c.sim.linkage.cam_len; }));
  add(real("linkage.cam_eccentricity", "mm", kNonNegative, "cam eccentricity; peak cable pull is twice this",
           [](Config& c) -> double& { return c.sim.linkage.cam_eccentricity; }));
  add(real("linkage.cam_crank_offset", "deg", kAny, "cam mounting angle relative to the crank (calibrated)",
           [](Config& c) -> double& { return c.sim.linkage.cam_crank_offset; }));
  add(real("linkage.tarsus_len", "mm", kPositive, "tarsus segment",
           [](Config& c) -> double& { return c.sim.linkage.tarsus_len; }));
  add(real("linkage.claw_len", "mm", kPositive, "claw hook segment",
           [](Config& c) -> double& { return c.sim.linkage.claw_len; }));

  for (auto v : {ClawVariant::expandable, ClawVariant::unexpandable, ClawVariant::soft_immobile,
                 ClawVariant::rigid_immobile})
    for (auto& key : claw_keys(v)) add(std::move(key));

  add(real("mesh.cell_pitch", "mm", kPositive, "wire spacing of the square mesh",
           [](Config& c) -> double& { return c.sim.mesh.cell_pitch; }));
  add(real("mesh.wire_radius", "mm", kNonNegative, "wire radius",
           [](Config& c) -> double& { return c.sim.mesh.wire_radius; }));
  add(real("mesh.capture_radius", "mm", kNonNegative, "largest tip-to-wire distance that still hooks (calibrated)",
           [](Config& c) -> double& { return c.sim.mesh.capture_radius; }));
  add(real("engage.open_threshold", "deg", kAny, "minimum claw opening to hook a wire",
           [](Config& c) -> double& { return c.sim.rules.engage_open_threshold; }));
  add(real("engage.release_threshold", "deg", kAny, "opening at or below which the claw slides off",
           [](Config& c) -> double& { return c.sim.rules.release_open_threshold; }));
  add(real("contact.noise_sigma", "mm", kNonNegative, "s.d. of the touchdown point on each in-plane axis",
           [](Config& c) -> double& { return c.sim.noise_sigma; }));
  add(real("contact.depth", "mm", kPositive, "tip travel below first contact",
           [](Config& c) -> double& { return c.sim.contact_depth; }));

  add(real("motor.no_load_speed", "rev/s", kPositive, "motor shaft speed at 5 V, no load (calibrated)",
           [](Config& c) -> double& { return c.sim.motor.no_load_speed; }));
  add(real("motor.time_constant", "s", kPositive, "first-order motor time constant",
           [](Config& c) -> double& { return c.sim.motor.time_constant; }));
  add(real("motor.gear_ratio", "", kPositive, "gearbox reduction",
           [](Config& c) -> double& { return c.sim.motor.gear_ratio; }));
  add(real("motor.mismatch_factor", "", kPositive, "right motor speed relative to the left",
           [](Config& c) -> double& { return c.sim.motor.mismatch_factor; }));
  add(integer("motor.encoder_counts", "counts/rev", Range{1.0, 1e6}, "encoder counts per motor revolution",
              [](Config& c) -> int& { return c.sim.motor.encoder_counts; }));
  add(real("pid.kp", "V/deg", kNonNegative, "proportional gain",
           [](Config& c) -> double& { return c.sim.pid.kp; }));
  add(real("pid.ki", "V/(deg*s)", kNonNegative, "integral gain",
           [](Config& c) -> double& { return c.sim.pid.ki; }));
  add(real("pid.kd", "V*s/deg", kNonNegative, "derivative gain",
           [](Config& c) -> double& { return c.sim.pid.kd; }));
  add(real("pid.integral_clamp", "deg*s", kNonNegative, "anti-windup bound on the integral",
           [](Config& c) -> double& { return c.sim.pid.integral_clamp; }));
  add(real("pid.v_min", "V", kAny, "lowest motor command",
           [](Config& c) -> double& { return c.sim.pid.v_min; }));
  add(real("pid.v_max", "V", kAny, "highest motor command",
           [](Config& c) -> double& { return c.sim.pid.v_max; }));
  add(real("pid.nominal_voltage", "V", kAny, "operating point the correction is split around",
           [](Config& c) -> double& { return c.sim.pid.nominal_voltage; }));
  add(real("timing.plant_dt", "s", kPositive, "motor plant step",
           [](Config& c) -> double& { return c.sim.timing.plant_dt; }));
  add(real("timing.control_dt", "s", kPositive, "controller period",
           [](Config& c) -> double& { return c.sim.timing.control_dt; }));
  add(real("gait.start_phase_jitter", "deg", kNonNegative, "uniform +/- jitter on the right leg's start angle",
           [](Config& c) -> double& { return c.sim.start_phase_jitter; }));

  add(real("body.mass", "kg", kPositive, "robot mass",
           [](Config& c) -> double& { return c.sim.body.mass; }));
  add(real("body.length", "mm", kPositive, "body length",
           [](Config& c) -> double& { return c.sim.body.body_length; }));
  add(real("body.width", "mm", kPositive, "body width",
           [](Config& c) -> double& { return c.sim.body.body_width; }));
  add(integer("body.support_legs", "", Range{0.0, 6.0}, "tibial-spur rear supports",
              [](Config& c) -> int& { return c.sim.body.support_legs; }));
  add(real("body.gravity", "m/s^2", kPositive, "gravitational acceleration",
           [](Config& c) -> double& { return c.sim.body.gravity; }));

  add(real("trial.incline", "deg", kIncline, "incline of the climbing surface",
           [](Config& c) -> double& { return c.trial.incline; }));
  add({"trial.surface", "", "mesh or flat",
       [](Config& c, const std::string& v) { c.trial.surface = surface_from_string(v); },
       [](const Config& c) { return to_string(c.trial.surface); }});
  add({"trial.claw", "", "expandable, unexpandable, soft_immobile or rigid_immobile",
       [](Config& c, const std::string& v) { c.trial.claw_variant = claw_variant_from_string(v); },
       [](const Config& c) { return to_string(c.trial.claw_variant); }});
  add({"trial.gait", "", "tripod or gallop",
       [](Config& c, const std::string& v) { c.trial.gait.gait = gait_from_string(v); },
       [](const Config& c) { return to_string(c.trial.gait.gait); }});
  add({"gait.target_phase_diff", "deg", "commanded left-minus-right phase; defaults to 180 (tripod) or 0 (gallop)",
       [](Config& c, const std::string& v) {
         const double d = parse_double(v);
         check_range("gait.target_phase_diff", d, Range{-360.0, 360.0});
         c.trial.gait.target_phase_diff = d;
         c.target_phase_explicit = true;
       },
       [](const Config& c) { return format_number(c.trial.gait.target_phase_diff); }});
  add({"trial.control_mode", "", "open_loop or closed_loop",
       [](Config& c, const std::string& v) { c.trial.control_mode = control_mode_from_string(v); },
       [](const Config& c) { return to_string(c.trial.control_mode); }});
  add(integer("trial.step_budget", "steps", Range{0.0, 1e6}, "steps per trial; 0 runs for trial.duration",
              [](Config& c) -> int& { return c.trial.step_budget; }));
  add(real("trial.duration", "s", kNonNegative, "time limit; 0 runs to the step budget",
           [](Config& c) -> double& { return c.trial.duration; }));

  add({"run.seeds", "", "comma-separated seeds; empty uses the preset's list",
       [](Config& c, const std::string& v) {
         c.seeds.clear();
         if (trim(v).empty()) return;
         for (const auto& item : split_list(v)) {
           const auto s = parse_integer(item);
           if (s < 0) throw RangeError("run.seeds must be non-negative");
           c.seeds.push_back(static_cast<std::uint64_t>(s));
         }
       },
       [](const Config& c) {
         std::string s;
         for (auto seed : c.seeds) s += (s.empty() ? "" : ",") + std::to_string(seed);
         return s;
       }});

  add(real("clawcompare.no_load_speed", "rev/s", kPositive, "motor speed for the claw comparison (calibrated)",
           [](Config& c) -> double& { return c.clawcompare_no_load_speed; }));
  add(integer("drift.cycles", "cycles", Range{1.0, 1e4}, "leg cycles before the phase change is read",
              [](Config& c) -> int& { return c.drift_cycles; }));
  add(real("drift.offset_jitter", "deg", kNonNegative, "uniform +/- spread of the initial phase error per seed",
           [](Config& c) -> double& { return c.drift_offset_jitter; }));
  add(real_list("sweep.inclines", "deg", kIncline, "inclines of the gait-speed sweep",
                [](Config& c) -> std::vector<double>& { return c.sweep_inclines; }));
  add(real("sweep.duration", "s", kPositive, "averaging period per sweep trial",
           [](Config& c) -> double& { return c.sweep_duration; }));
  add(real("sweep.mesh_incline", "deg", kIncline, "incline of the extra mesh rows of the sweep",
           [](Config& c) -> double& { return c.sweep_mesh_incline; }));
  add(real("clawcycle.resolution", "deg", Range{0.0, 90.0, true, false}, "crank step of the claw-cycle table",
           [](Config& c) -> double& { return c.fig4_resolution; }));

  add({"swing.vertical_axis", "", "x, y or z",
       [](Config& c, const std::string& v) {
         if (v == "x") c.swing.vertical_axis = 0;
         else if (v == "y") c.swing.vertical_axis = 1;
         else if (v == "z") c.swing.vertical_axis = 2;
         else throw biomech::NoVerticalAxis("swing.vertical_axis must be x, y or z, got '" + v + "'");
       },
       [](const Config& c) { return std::string(1, "xyz"[c.swing.vertical_axis]); }});
  add(real("swing.start_velocity", "mm/s", kAny, "vertical velocity that opens a swing",
           [](Config& c) -> double& { return c.swing.start_velocity; }));
  add(real("swing.end_velocity", "mm/s", kAny, "vertical velocity that closes a swing",
           [](Config& c) -> double& { return c.swing.end_velocity; }));
  add(integer("swing.smoothing_window", "samples", Range{1.0, 1001.0}, "centred moving-average width (odd)",
              [](Config& c) -> int& { return c.swing.smoothing_window; }));
  add(real("swing.min_duration", "s", kNonNegative, "shortest accepted swing",
           [](Config& c) -> double& { return c.swing.min_duration; }));
  add(real("spikes.threshold", "", kPositive, "detection level in MAD-based noise s.d.",
           [](Config& c) -> double& { return c.spikes.threshold; }));
  add(real("spikes.refractory", "s", kNonNegative, "dead time after a spike",
           [](Config& c) -> double& { return c.spikes.refractory; }));

  add(integer("synth.steps", "steps", Range{0.0, 1e6}, "swings per synthetic trace",
              [](Config& c) -> int& { return c.synth.steps; }));
  add(real("synth.sample_rate_mocap", "Hz", kPositive, "motion-capture rate",
           [](Config& c) -> double& { return c.synth.sample_rate_mocap; }));
  add(real("synth.sample_rate_emg", "Hz", kPositive, "EMG rate",
           [](Config& c) -> double& { return c.synth.sample_rate_emg; }));
  add(real("synth.sync_offset", "s", kAny, "EMG clock offset",
           [](Config& c) -> double& { return c.synth.sync_offset; }));
  add(real("synth.lead_in", "s", kPositive, "rest before the first swing",
           [](Config& c) -> double& { return c.synth.lead_in; }));
  add(real("synth.stance_time", "s", kNonNegative, "rest between swings",
           [](Config& c) -> double& { return c.synth.stance_time; }));
  add(real("synth.peak_velocity", "mm/s", kPositive, "plateau vertical velocity of a swing",
           [](Config& c) -> double& { return c.synth.peak_velocity; }));
  add(real("synth.ramp_up", "s", kPositive, "acceleration phase of a swing",
           [](Config& c) -> double& { return c.synth.ramp_up; }));
  add(real("synth.ramp_down", "s", kPositive, "deceleration phase of a swing",
           [](Config& c) -> double& { return c.synth.ramp_down; }));
  add(real("synth.plateau_mean", "s", kNonNegative, "mean constant-velocity phase",
           [](Config& c) -> double& { return c.synth.plateau_mean; }));
  add(real("synth.plateau_sd", "s", kNonNegative, "s.d. of the constant-velocity phase",
           [](Config& c) -> double& { return c.synth.plateau_sd; }));
  add(real("synth.forward_per_mm_lift", "", kAny, "forward travel per mm of lift",
           [](Config& c) -> double& { return c.synth.forward_per_mm_lift; }));
  add(real("synth.moment_ratio", "", kUnit, "first-spike moment over swing time at the reference incline",
           [](Config& c) -> double& { return c.synth.moment_ratio; }));
  add(real("synth.moment_ratio_sd", "", kNonNegative, "moment-ratio jitter when synth.target_r is 0",
           [](Config& c) -> double& { return c.synth.moment_ratio_sd; }));
  add(integer("synth.spikes_per_burst", "spikes", Range{1.0, 1000.0}, "spikes in each burst",
              [](Config& c) -> int& { return c.synth.spikes_per_burst; }));
  add(real("synth.spike_interval", "s", kNonNegative, "spacing of spikes in a burst",
           [](Config& c) -> double& { return c.synth.spike_interval; }));
  add(real("synth.spike_amplitude", "V", kPositive, "spike height",
           [](Config& c) -> double& { return c.synth.spike_amplitude; }));
  add(real("synth.noise_sd", "V", kNonNegative, "EMG background noise s.d.",
           [](Config& c) -> double& { return c.synth.noise_sd; }));
  add(real_list("synth.inclines", "deg", Range{0.0, 180.0}, "inclines of the synthetic EMG sweep",
                [](Config& c) -> std::vector<double>& { return c.synth_inclines; }));
  add(real("synth.ratio_slope", "1/deg", kAny, "change of moment ratio per degree of incline",
           [](Config& c) -> double& { return c.synth_ratio_slope; }));
  add(real("synth.reference_incline", "deg", kAny, "incline at which synth.moment_ratio applies",
           [](Config& c) -> double& { return c.synth_reference_incline; }));
  add(real("synth.target_r", "", kUnit, "planted swing-time/EMG-moment correlation; 0 uses synth.moment_ratio_sd",
           [](Config& c) -> double& { return c.synth_target_r; }));
  add(boolean("synth.write_traces", "also write the synthetic mocap and EMG traces",
              [](Config& c) -> bool& { return c.synth_write_traces; }));
  add(text("traces.mocap_csv", "recorded mocap trace to analyse instead of synthetic data",
           [](Config& c) -> std::string& { return c.trace_mocap_csv; }));
  add(text("traces.emg_csv", "recorded EMG trace paired with traces.mocap_csv",
           [](Config& c) -> std::string& { return c.trace_emg_csv; }));

  add(real("fit.a", "mm/s", kAny, "generator velocity at zero swing interval",
           [](Config& c) -> double& { return c.fit_a; }));
  add(real("fit.b", "mm/s", kPositive, "generator tangent scale",
           [](Config& c) -> double& { return c.fit_b; }));
  add(real("fit.c", "1/s", kPositive, "generator tangent rate",
           [](Config& c) -> double& { return c.fit_c; }));
  add(integer("fit.pairs", "pairs", Range{4.0, 1e6}, "samples per generated data set",
              [](Config& c) -> int& { return c.fit_pairs; }));
  add(real("fit.interval_min", "s", kNonNegative, "shortest generated swing interval",
           [](Config& c) -> double& { return c.fit_interval_min; }));
  add(real("fit.interval_max", "s", kPositive, "longest generated swing interval",
           [](Config& c) -> double& { return c.fit_interval_max; }));
  add(real("fit.noise", "", kNonNegative, "relative velocity noise",
           [](Config& c) -> double& { return c.fit_noise; }));
  return k;
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ec == std::errc{} ? ptr : buf);
}

Config::Config() {
  synth.steps = 342;
  synth.plateau_mean = 0.20;
  synth.plateau_sd = 0.05;
  synth.noise_sd = 0.05;
}

void Config::finalize() {
  if (!target_phase_explicit) trial.gait = GaitCommand::for_gait(trial.gait.gait);
}

void Config::validate() const {
  try {
    sim.validate();
    trial.validate();
  } catch (const std::invalid_argument& e) {
    throw RangeError(e.what());
  }
  if (!(swing.start_velocity > swing.end_velocity))
    throw RangeError("swing.start_velocity must exceed swing.end_velocity");
  if (swing.smoothing_window % 2 == 0) throw RangeError("swing.smoothing_window must be odd");
  if (!(fit_interval_max > fit_interval_min)) throw RangeError("fit.interval_max must exceed fit.interval_min");
  if (!(fit_c * fit_interval_max < 1.5707963267948966))
    throw RangeError("fit.c * fit.interval_max must stay below pi/2");
  if (synth.lead_in <= std::abs(synth.sync_offset))
    throw RangeError("synth.lead_in must exceed |synth.sync_offset|");
  if (trace_mocap_csv.empty() != trace_emg_csv.empty())
    throw RangeError("traces.mocap_csv and traces.emg_csv must be given together");
}

ParseError::ParseError(int line, int column, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                         ": " + what),
      line_(line),
      column_(column) {}

UnknownKey::UnknownKey(const std::string& key, int line)
    : std::runtime_error((line > 0 ? "line " + std::to_string(line) + ": " : std::string()) +
                         "unknown key '" + key + "'"),
      key_(key) {}

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = build_keys();
  return keys;
}

void apply_setting(Config& cfg, const std::string& key, const std::string& value) {
  for (const auto& k : config_keys()) {
    if (k.name != key) continue;
    try {
      k.set(cfg, value);
    } catch (const RangeError&) {
      throw;
    } catch (const biomech::NoVerticalAxis&) {
      throw;
    } catch (const std::exception& e) {
      throw std::invalid_argument(key + ": " + e.what());
    }
    return;
  }
  throw UnknownKey(key, 0);
}

Config parse_config(std::string_view text, Config base) {
  Config cfg = std::move(base);
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (trim(line).empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ParseError(line_no, static_cast<int>(line.size()) + 1, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ParseError(line_no, 1, "missing key before '='");
    const auto bad = key.find_first_of(" \t");
    if (bad != std::string::npos)
      throw ParseError(line_no, static_cast<int>(line.find(key) + bad) + 1, "whitespace inside key");
    const std::string value = trim(line.substr(eq + 1));
    const auto value_col = static_cast<int>(line.find_first_not_of(" \t", eq + 1)) + 1;

    try {
      apply_setting(cfg, key, value);
    } catch (const UnknownKey&) {
      throw UnknownKey(key, line_no);
    } catch (const RangeError& e) {
      throw RangeError("line " + std::to_string(line_no) + ": " + e.what());
    } catch (const biomech::NoVerticalAxis&) {
      throw;
    } catch (const std::invalid_argument& e) {
      throw ParseError(line_no, value_col > 0 ? value_col : static_cast<int>(eq) + 2, e.what());
    }
  }
  cfg.finalize();
  cfg.validate();
  return cfg;
}

std::string echo_config(const Config& cfg) {
  std::string out;
  for (const auto& k : config_keys()) {
    out += k.name + " = " + k.get(cfg);
    if (!k.unit.empty()) out += "  # " + k.unit;
    out += '\n';
  }
  return out;
}

std::string config_reference() {
  const Config defaults;
  std::string out = "| key | unit | default | description |\n|---|---|---|---|\n";
  for (const auto& k : config_keys()) {
    std::string def = k.get(defaults);
    if (def.empty()) def = "(empty)";
    out += "| `" + k.name + "` | " + (k.unit.empty() ? "-" : k.unit) + " | `" + def + "` | " +
           k.description + " |\n";
  }
  return out;
}

}  // namespace meshclimb
