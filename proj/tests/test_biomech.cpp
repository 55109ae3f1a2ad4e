#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "doctest.h"
#include "meshclimb/biomech.hpp"
#include "meshclimb/rng.hpp"
#include "meshclimb/units.hpp"

using namespace meshclimb;
using namespace meshclimb::biomech;

namespace {

// Vertical velocity v(t) = peak * sin(pi t / period) on [0, period], at rest elsewhere.
TraceSet half_sine_trace(double peak, double period, double rest, double rate) {
  TraceSet tr;
  tr.sample_rate_mocap = rate;
  const auto n = static_cast<std::size_t>((2.0 * rest + period) * rate) + 1;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / rate - rest;
    const double tau = std::clamp(t, 0.0, period);
    const double z = peak * period / kPi * (1.0 - std::cos(kPi * tau / period));
    tr.tarsus_positions.push_back({0.0, 0.0, z});
  }
  tr.mocap_start = -rest;
  return tr;
}

// Student-t survival for three degrees of freedom, in closed form.
double two_sided_p_dof3(double t) {
  const double a = std::abs(t) / std::sqrt(3.0);
  const double cdf = 0.5 + (a / (1.0 + a * a) + std::atan(a)) / kPi;
  return 2.0 * (1.0 - cdf);
}

std::vector<IntervalVelocity> tangent_samples(double a, double b, double c, int n, double lo,
                                              double hi) {
  std::vector<IntervalVelocity> pairs;
  for (int i = 0; i < n; ++i) {
    const double dt = lo + (hi - lo) * i / (n - 1);
    pairs.push_back({dt, a - b * std::tan(c * dt)});
  }
  return pairs;
}

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

TEST_CASE("half-sine swing gives one window between the analytic crossings") {
  const double period = 0.4;
  const auto tr = half_sine_trace(100.0, period, 0.2, 500.0);
  const auto w = detect_swing_windows(tr);
  REQUIRE(w.size() == 1);
  const double up = period / kPi * std::asin(0.40);
  const double down = period - period / kPi * std::asin(0.10);
  CHECK(std::abs(w[0].start - up) < 5e-4);
  CHECK(std::abs(w[0].end - down) < 5e-4);
}

TEST_CASE("swing detection rejects short windows and bad inputs") {
  auto tr = half_sine_trace(100.0, 0.04, 0.1, 500.0);
  CHECK(detect_swing_windows(tr).empty());
  SwingDetectConfig cfg;
  cfg.min_duration = 0.0;
  CHECK(detect_swing_windows(tr, cfg).size() == 1);

  cfg.vertical_axis = 3;
  CHECK_THROWS_AS(detect_swing_windows(tr, cfg), NoVerticalAxis);
  cfg.vertical_axis = -1;
  CHECK_THROWS_AS(detect_swing_windows(tr, cfg), NoVerticalAxis);

  TraceSet tiny;
  tiny.tarsus_positions = {{0, 0, 0}, {0, 0, 1}};
  CHECK_THROWS_AS(detect_swing_windows(tiny), TooShort);

  auto flat = half_sine_trace(0.0, 0.3, 0.1, 500.0);
  CHECK(detect_swing_windows(flat).empty());

  // Lift along y is invisible on the z axis.
  auto sideways = half_sine_trace(100.0, 0.4, 0.2, 500.0);
  for (auto& p : sideways.tarsus_positions) std::swap(p.y, p.z);
  CHECK(detect_swing_windows(sideways).empty());
  cfg = {};
  cfg.vertical_axis = 1;
  CHECK(detect_swing_windows(sideways, cfg).size() == 1);
}

TEST_CASE("windows shift with the clock") {
  auto tr = half_sine_trace(100.0, 0.4, 0.2, 500.0);
  const auto base = detect_swing_windows(tr);
  tr.mocap_start += 12.5;
  const auto moved = detect_swing_windows(tr);
  REQUIRE(base.size() == moved.size());
  for (std::size_t i = 0; i < base.size(); ++i) {
    CHECK(std::abs(moved[i].start - base[i].start - 12.5) < 1e-9);
    CHECK(std::abs(moved[i].end - base[i].end - 12.5) < 1e-9);
  }
}

TEST_CASE("impulse train at SNR 10 is recovered exactly") {
  Rng rng(11);
  const double rate = 1000.0;
  std::vector<double> emg(1200);
  for (auto& x : emg) x = rng.normal();
  std::vector<std::size_t> truth;
  for (std::size_t i = 100; truth.size() < 10; i += 97) {
    emg[i] += 10.0;
    truth.push_back(i);
  }
  const auto spikes = extract_spikes(emg, rate, 0.0);
  REQUIRE(spikes.size() == truth.size());
  for (std::size_t k = 0; k < truth.size(); ++k)
    CHECK(std::abs(spikes[k] - static_cast<double>(truth[k]) / rate) <= 1.0 / rate);
}

TEST_CASE("refractory period merges close impulses") {
  std::vector<double> emg(200, 0.0);
  emg[50] = 1.0;
  emg[52] = 1.0;
  emg[150] = 1.0;
  const auto spikes = extract_spikes(emg, 1000.0, 0.0);
  REQUIRE(spikes.size() == 2);
  CHECK(spikes[0] == doctest::Approx(0.050));
  CHECK(spikes[1] == doctest::Approx(0.150));

  SpikeConfig none;
  none.refractory = 0.0;
  CHECK(extract_spikes(emg, 1000.0, 0.0, none).size() == 3);
  CHECK(extract_spikes(std::vector<double>(500, 0.0), 1000.0, 0.0).empty());
}

TEST_CASE("spikes land on the aligned clock") {
  TraceSet tr;
  tr.sample_rate_emg = 1000.0;
  tr.emg.assign(100, 0.0);
  tr.emg[40] = 2.0;
  tr.sync_offset = 0.25;
  const auto spikes = extract_spikes(tr);
  REQUIRE(spikes.size() == 1);
  CHECK(spikes[0] == doctest::Approx(0.290));
}

TEST_CASE("emg metrics example") {
  const auto m = emg_metrics({{0.0, 0.5}, {1.0, 1.5}}, {0.33, 0.30, 0.36, 2.0});
  REQUIRE(m.size() == 2);
  REQUIRE(m[0].has_value());
  CHECK(m[0]->moment_ratio == doctest::Approx(0.60));
  CHECK(m[0]->emg_moment == doctest::Approx(0.30));
  CHECK(m[0]->emg_time == doctest::Approx(0.06));
  CHECK(m[0]->time_ratio == doctest::Approx(0.12));
  CHECK(m[0]->spikes == 3);
  CHECK_FALSE(m[1].has_value());
}

TEST_CASE("pearson against closed forms") {
  const std::vector<double> x{1, 2, 3, 4, 5};
  const std::vector<double> y{2, 4, 5, 4, 5};
  const auto res = pearson(x, y);
  CHECK(res.r == doctest::Approx(std::sqrt(0.6)));
  CHECK(res.n == 5);
  CHECK(res.t == doctest::Approx(std::sqrt(0.6) * std::sqrt(3.0 / 0.4)));
  CHECK(res.p == doctest::Approx(two_sided_p_dof3(res.t)).epsilon(1e-9));

  const std::vector<double> line{3, 5, 7, 9, 11};
  CHECK(pearson(x, line).r == doctest::Approx(1.0));
  CHECK(pearson(x, line).p == doctest::Approx(0.0));
  const std::vector<double> down{10, 8, 6, 4, 2};
  CHECK(pearson(x, down).r == doctest::Approx(-1.0));

  std::vector<double> xs, ys;
  for (double v : x) xs.push_back(-7.0 + 3.5 * v);
  for (double v : y) ys.push_back(100.0 + 0.25 * v);
  CHECK(pearson(xs, ys).r == doctest::Approx(res.r).epsilon(1e-12));

  CHECK_THROWS_AS(pearson(x, std::vector<double>(5, 1.0)), DegenerateVariance);
  CHECK_THROWS_AS(pearson(std::vector<double>{1, 2}, std::vector<double>{1, 2}),
                  std::invalid_argument);
}

TEST_CASE("synthetic pipeline reproduces ground truth") {
  SynthSpec spec;
  spec.steps = 40;
  spec.plateau_sd = 0.04;
  spec.moment_ratio_sd = 0.08;
  spec.sync_offset = 0.0137;
  const auto synth = synth_generate(spec, 5);
  const auto windows = detect_swing_windows(synth.trace);
  REQUIRE(windows.size() == synth.windows.size());
  for (std::size_t i = 0; i < windows.size(); ++i) {
    CHECK(std::abs(windows[i].start - synth.windows[i].start) < 1e-9);
    CHECK(std::abs(windows[i].end - synth.windows[i].end) < 1e-9);
  }
  const auto spikes = extract_spikes(synth.trace);
  REQUIRE(spikes.size() == synth.spikes.size());
  for (std::size_t i = 0; i < spikes.size(); ++i) CHECK(std::abs(spikes[i] - synth.spikes[i]) < 1e-12);

  const auto metrics = emg_metrics(windows, spikes);
  REQUIRE(metrics.size() == synth.metrics.size());
  for (std::size_t i = 0; i < metrics.size(); ++i) {
    REQUIRE(metrics[i].has_value());
    CHECK(std::abs(metrics[i]->moment_ratio - synth.metrics[i].moment_ratio) < 1e-6);
    CHECK(metrics[i]->moment_ratio >= 0.0);
    CHECK(metrics[i]->moment_ratio <= 1.0);
    CHECK(metrics[i]->time_ratio <= 1.0);
  }
}

TEST_CASE("zero steps give a flat trace") {
  SynthSpec spec;
  spec.steps = 0;
  const auto synth = synth_generate(spec, 1);
  CHECK(synth.windows.empty());
  CHECK(synth.spikes.empty());
  CHECK(detect_swing_windows(synth.trace).empty());
  CHECK(extract_spikes(synth.trace).empty());
}

TEST_CASE("two lifts separated by rest give two ordered windows") {
  SynthSpec spec;
  spec.steps = 2;
  const auto w = detect_swing_windows(synth_generate(spec, 1).trace);
  REQUIRE(w.size() == 2);
  CHECK(w[0].end < w[1].start);
}

TEST_CASE("noiseless ratios are recovered exactly") {
  SynthSpec spec;
  spec.steps = 10;
  const auto synth = synth_generate(spec, 4);
  const auto m = emg_metrics(detect_swing_windows(synth.trace), extract_spikes(synth.trace));
  REQUIRE(m.size() == 10);
  for (std::size_t i = 0; i < m.size(); ++i) {
    REQUIRE(m[i].has_value());
    CHECK(std::abs(m[i]->moment_ratio - synth.metrics[i].moment_ratio) < 1e-9);
    CHECK(std::abs(m[i]->moment_ratio - 0.60) < 1.0 / spec.sample_rate_emg / 0.2);
  }
}

TEST_CASE("noisy EMG keeps the mean moment ratio") {
  SynthSpec spec;
  spec.steps = 300;
  spec.plateau_sd = 0.03;
  spec.moment_ratio_sd = 0.10;
  spec.noise_sd = 0.1;
  const auto synth = synth_generate(spec, 21);
  const auto metrics = emg_metrics(detect_swing_windows(synth.trace), extract_spikes(synth.trace));
  std::vector<double> ratios;
  for (const auto& m : metrics)
    if (m) ratios.push_back(m->moment_ratio);
  CHECK(ratios.size() == 300);
  CHECK(std::abs(mean_of(ratios) - 0.60) < 0.02);
}

TEST_CASE("swing time and EMG moment correlate as configured") {
  SynthSpec spec;
  spec.steps = 342;
  spec.plateau_mean = 0.20;
  spec.plateau_sd = 0.05;
  const double swing_mean = 0.6 * spec.ramp_up + spec.plateau_mean + 0.9 * spec.ramp_down;
  spec.moment_ratio_sd = ratio_sd_for_correlation(0.88, 0.60, swing_mean, spec.plateau_sd);
  const auto synth = synth_generate(spec, 342);
  const auto windows = detect_swing_windows(synth.trace);
  const auto metrics = emg_metrics(windows, extract_spikes(synth.trace));
  std::vector<double> swing, moment;
  for (std::size_t i = 0; i < windows.size(); ++i) {
    if (!metrics[i]) continue;
    swing.push_back(windows[i].swing_time());
    moment.push_back(metrics[i]->emg_moment);
  }
  REQUIRE(swing.size() == 342);
  const auto res = pearson(swing, moment);
  CHECK(std::abs(res.r - 0.88) < 0.03);
  CHECK(res.p < 1e-6);
}

TEST_CASE("tangent fit round-trips noiseless data") {
  const auto pairs = tangent_samples(40.0, 10.0, 2.0, 25, 0.0, 0.6);
  const auto fit = fit_velocity_vs_interval(pairs);
  CHECK(fit.a == doctest::Approx(40.0).epsilon(1e-6));
  CHECK(fit.b == doctest::Approx(10.0).epsilon(1e-6));
  CHECK(fit.c == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(fit.rmse < 1e-6);
  CHECK(fit(0.0) == doctest::Approx(fit.a));
  CHECK(fit(0.3) == doctest::Approx(40.0 - 10.0 * std::tan(0.6)));
}

TEST_CASE("tangent fit tolerates 5 percent noise") {
  double sum_a = 0.0, sum_b = 0.0, sum_c = 0.0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    Rng rng(seed);
    auto pairs = tangent_samples(40.0, 10.0, 2.0, 25, 0.0, 0.6);
    double noise_ss = 0.0;
    for (auto& p : pairs) {
      const double e = 0.05 * p.velocity * rng.normal();
      p.velocity += e;
      noise_ss += e * e;
    }
    const auto fit = fit_velocity_vs_interval(pairs);
    CHECK(fit.rmse <= std::sqrt(noise_ss / static_cast<double>(pairs.size())));
    sum_a += fit.a;
    sum_b += fit.b;
    sum_c += fit.c;
  }
  CHECK(std::abs(sum_a / 100.0 / 40.0 - 1.0) < 0.10);
  CHECK(std::abs(sum_b / 100.0 / 10.0 - 1.0) < 0.10);
  CHECK(std::abs(sum_c / 100.0 / 2.0 - 1.0) < 0.10);
}

TEST_CASE("tangent fit ignores input order") {
  Rng rng(3);
  auto pairs = tangent_samples(20.0, 2.0, 2.5, 30, 0.0, 0.55);
  for (auto& p : pairs) p.velocity += 0.2 * rng.normal();
  const auto fit = fit_velocity_vs_interval(pairs);
  std::reverse(pairs.begin(), pairs.end());
  std::rotate(pairs.begin(), pairs.begin() + 7, pairs.end());
  const auto again = fit_velocity_vs_interval(pairs);
  CHECK(again.a == doctest::Approx(fit.a).epsilon(1e-6));
  CHECK(again.b == doctest::Approx(fit.b).epsilon(1e-6));
  CHECK(again.c == doctest::Approx(fit.c).epsilon(1e-6));
}

TEST_CASE("tangent fit reports failure instead of clamping") {
  auto rising = tangent_samples(10.0, -2.0, 2.0, 10, 0.05, 0.5);
  CHECK_THROWS_AS(fit_velocity_vs_interval(rising), FitDiverged);
  std::vector<IntervalVelocity> straight;
  for (int i = 0; i < 10; ++i) straight.push_back({0.05 * i, 20.0 - 10.0 * 0.05 * i});
  CHECK_THROWS_AS(fit_velocity_vs_interval(straight), FitDiverged);
  CHECK_THROWS_AS(fit_velocity_vs_interval({{0.1, 1}, {0.2, 1}, {0.3, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(fit_velocity_vs_interval({{0.1, 1}, {0.1, 2}, {0.1, 3}, {0.1, 4}}),
                  DegenerateVariance);
}

TEST_CASE("moment ratio trend follows the generator") {
  std::vector<double> means;
  for (double incline : {30.0, 60.0, 90.0}) {
    SynthSpec spec;
    spec.steps = 60;
    spec.plateau_sd = 0.03;
    spec.moment_ratio = 0.60 - 0.004 * (incline - 30.0);
    spec.moment_ratio_sd = 0.05;
    const auto synth = synth_generate(spec, static_cast<std::uint64_t>(incline));
    const auto metrics =
        emg_metrics(detect_swing_windows(synth.trace), extract_spikes(synth.trace));
    std::vector<double> r;
    for (const auto& m : metrics)
      if (m) r.push_back(m->moment_ratio);
    means.push_back(mean_of(r));
  }
  CHECK(means[0] > means[1]);
  CHECK(means[1] > means[2]);
}

TEST_CASE("gait cycle metrics") {
  TraceSet body;
  body.sample_rate_mocap = 100.0;
  for (int i = 0; i <= 400; ++i) body.tarsus_positions.push_back({0.1 * i, 0.0, 0.0});
  const std::vector<SwingWindow> right{{0.0, 0.2}, {1.0, 1.2}, {2.5, 2.7}};
  const std::vector<SwingWindow> left{{0.4, 0.6}, {1.3, 1.5}};
  const auto m = gait_cycle_metrics(right, left, body);
  REQUIRE(m.size() == 2);
  CHECK(m[0].swing_interval == doctest::Approx(0.4));
  CHECK(m[0].cycle_time == doctest::Approx(1.0));
  CHECK(m[0].average_velocity == doctest::Approx(10.0));
  CHECK(m[1].swing_interval == doctest::Approx(0.3));
  CHECK(m[1].cycle_time == doctest::Approx(1.5));
  for (const auto& c : m) {
    CHECK(c.swing_interval >= 0.0);
    CHECK(c.swing_interval <= c.cycle_time);
  }
}

TEST_CASE("trace csv round trip") {
  SynthSpec spec;
  spec.steps = 5;
  spec.sync_offset = -0.021;
  spec.noise_sd = 0.05;
  const auto synth = synth_generate(spec, 9);
  std::stringstream mocap, emg;
  write_mocap_csv(mocap, synth.trace);
  write_emg_csv(emg, synth.trace);
  const auto back = read_trace_csv(mocap, emg);
  CHECK(back.sample_rate_mocap == doctest::Approx(500.0));
  CHECK(back.sample_rate_emg == doctest::Approx(1000.0));
  CHECK(back.sync_offset == doctest::Approx(-0.021));
  REQUIRE(back.tarsus_positions.size() == synth.trace.tarsus_positions.size());
  REQUIRE(back.emg.size() == synth.trace.emg.size());
  const auto w0 = detect_swing_windows(synth.trace);
  const auto w1 = detect_swing_windows(back);
  REQUIRE(w0.size() == w1.size());
  for (std::size_t i = 0; i < w0.size(); ++i) CHECK(std::abs(w0[i].start - w1[i].start) < 1e-6);
  CHECK(extract_spikes(back) == extract_spikes(synth.trace));

  std::stringstream bad_m("t_s,x_mm,y_mm\n0,0,0\n"), bad_e("t_s,emg_v\n0,0\n0.001,0\n");
  CHECK_THROWS(read_trace_csv(bad_m, bad_e));
}
