#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace meshclimb::biomech {

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

/// Uniformly sampled motion-capture and EMG recordings. EMG sample j sits at
/// emg_start + j / sample_rate_emg + sync_offset on the motion-capture clock.
struct TraceSet {
  double sample_rate_mocap = 500.0;  // Hz
  double sample_rate_emg = 1000.0;   // Hz
  double mocap_start = 0.0;          // s
  double emg_start = 0.0;            // s, EMG clock
  double sync_offset = 0.0;          // s
  std::vector<Point3> tarsus_positions;  // mm
  std::vector<double> emg;               // V

  double mocap_time(std::size_t i) const {
    return mocap_start + static_cast<double>(i) / sample_rate_mocap;
  }
  double emg_time(std::size_t j) const {
    return emg_start + static_cast<double>(j) / sample_rate_emg + sync_offset;
  }
};

struct SwingWindow {
  double start = 0.0;  // s
  double end = 0.0;    // s
  double swing_time() const { return end - start; }
};

struct EmgMetrics {
  double emg_time = 0.0;    // s, first to last spike of the burst
  double emg_moment = 0.0;  // s, first spike after window start
  double time_ratio = 0.0;
  double moment_ratio = 0.0;
  int spikes = 0;
};

struct GaitCycleMetrics {
  double swing_interval = 0.0;    // s
  double cycle_time = 0.0;        // s
  double average_velocity = 0.0;  // mm/s
};

class TooShort : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};
class NoVerticalAxis : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};
class DegenerateVariance : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};
class FitDiverged : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SwingDetectConfig {
  int vertical_axis = 2;            // 0 x, 1 y, 2 z
  double start_velocity = 40.0;     // mm/s
  double end_velocity = 10.0;       // mm/s
  int smoothing_window = 5;         // samples, centred moving average
  double min_duration = 0.040;      // s
};

/// Vertical velocity by central differences, smoothed with a centred moving
/// average (shrinking at the ends).
std::vector<double> vertical_velocity(const TraceSet& trace, const SwingDetectConfig& cfg);

/// A window opens where the smoothed vertical velocity rises through
/// start_velocity and closes where it next falls through end_velocity.
/// Crossing times are linearly interpolated between samples; a window still
/// open at the end of the trace is dropped.
std::vector<SwingWindow> detect_swing_windows(const TraceSet& trace,
                                              const SwingDetectConfig& cfg = {});

struct SpikeConfig {
  double threshold = 5.0;     // multiples of the MAD noise estimate
  double refractory = 0.005;  // s
};

/// Local maxima above threshold * (MAD / 0.6745), with refractory
/// suppression. Times are on the motion-capture clock.
std::vector<double> extract_spikes(std::span<const double> emg, double sample_rate, double t0,
                                   const SpikeConfig& cfg = {});
std::vector<double> extract_spikes(const TraceSet& trace, const SpikeConfig& cfg = {});

/// One entry per window; empty where the window holds no spike.
std::vector<std::optional<EmgMetrics>> emg_metrics(const std::vector<SwingWindow>& windows,
                                                   const std::vector<double>& spikes);

struct PearsonResult {
  double r = 0.0;
  double t = 0.0;  // t statistic with n - 2 degrees of freedom
  double p = 0.0;  // two-sided, Student-t approximation
  std::size_t n = 0;
};

PearsonResult pearson(std::span<const double> xs, std::span<const double> ys);

/// v = a - b * tan(c * dt), b > 0, c > 0, c * max(dt) < pi/2.
struct TangentFit {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double rmse = 0.0;

  double operator()(double dt) const;
};

struct IntervalVelocity {
  double interval = 0.0;  // s
  double velocity = 0.0;  // mm/s
};

/// Bounded least squares. The model is linear in (a, b) for fixed c, so c is
/// searched over a grid with golden-section refinement of every local minimum,
/// and the best candidate is polished with Gauss-Newton on all three
/// parameters. Throws FitDiverged when the data do not decrease or the fit
/// fails to produce finite parameters.
TangentFit fit_velocity_vs_interval(const std::vector<IntervalVelocity>& pairs);

/// Right-swing start to following left-swing start, per cycle opened by a
/// right swing; velocity from the forward coordinate of `body`.
std::vector<GaitCycleMetrics> gait_cycle_metrics(const std::vector<SwingWindow>& right,
                                                 const std::vector<SwingWindow>& left,
                                                 const TraceSet& body, int forward_axis = 0);

/// Synthetic climbing trace with known swing windows and EMG spikes.
struct SynthSpec {
  int steps = 10;
  double sample_rate_mocap = 500.0;
  double sample_rate_emg = 1000.0;
  double sync_offset = 0.0;          // s
  double lead_in = 0.3;              // s of rest before the first swing
  double stance_time = 0.4;          // s between swings
  double peak_velocity = 100.0;      // mm/s, vertical
  double ramp_up = 0.05;             // s
  double ramp_down = 0.15;           // s
  double plateau_mean = 0.12;        // s
  double plateau_sd = 0.0;           // s
  double forward_per_mm_lift = 1.5;  // forward travel per mm of lift
  double moment_ratio = 0.60;
  double moment_ratio_sd = 0.0;
  int spikes_per_burst = 4;
  double spike_interval = 0.012;     // s
  double spike_amplitude = 1.0;      // V
  double noise_sd = 0.0;             // V
};

struct SynthResult {
  TraceSet trace;
  std::vector<SwingWindow> windows;  // analytic threshold crossings
  std::vector<double> spikes;        // on the motion-capture clock
  std::vector<EmgMetrics> metrics;   // from the two above
};

SynthResult synth_generate(const SynthSpec& spec, std::uint64_t seed);

/// Moment-ratio jitter that makes corr(swing_time, emg_moment) equal
/// target_r for normally distributed swing times.
double ratio_sd_for_correlation(double target_r, double ratio_mean, double swing_mean,
                                double swing_sd);

/// Trace files: `t_s,x_mm,y_mm,z_mm` and `t_s,emg_v`, each preceded by a
/// `# sync_offset_s=<value>` line.
void write_mocap_csv(std::ostream& out, const TraceSet& trace);
void write_emg_csv(std::ostream& out, const TraceSet& trace);
TraceSet read_trace_csv(std::istream& mocap, std::istream& emg);

}  // namespace meshclimb::biomech
