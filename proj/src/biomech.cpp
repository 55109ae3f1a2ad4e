#include "meshclimb/biomech.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include <boost/math/distributions/students_t.hpp>

#include "meshclimb/rng.hpp"
#include "meshclimb/units.hpp"

namespace meshclimb::biomech {

namespace {

double coordinate(const Point3& p, int axis) {
  switch (axis) {
    case 0: return p.x;
    case 1: return p.y;
    default: return p.z;
  }
}

double median(std::vector<double> values) {
  const std::size_t n = values.size();
  const auto mid = values.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(values.begin(), mid, values.end());
  const double upper = *mid;
  if (n % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), mid);
  return 0.5 * (lower + upper);
}

double crossing_time(double t0, double t1, double v0, double v1, double level) {
  return t0 + (level - v0) / (v1 - v0) * (t1 - t0);
}

}  // namespace

std::vector<double> vertical_velocity(const TraceSet& trace, const SwingDetectConfig& cfg) {
  if (cfg.vertical_axis < 0 || cfg.vertical_axis > 2)
    throw NoVerticalAxis("vertical axis must be 0 (x), 1 (y) or 2 (z)");
  if (cfg.smoothing_window < 1 || cfg.smoothing_window % 2 == 0)
    throw std::invalid_argument("smoothing window must be a positive odd sample count");
  const auto& pos = trace.tarsus_positions;
  const std::size_t n = pos.size();
  if (n < std::max<std::size_t>(3, static_cast<std::size_t>(cfg.smoothing_window)))
    throw TooShort("trace has " + std::to_string(n) + " samples");
  if (!(trace.sample_rate_mocap > 0.0)) throw std::invalid_argument("mocap sample rate must be positive");

  const double rate = trace.sample_rate_mocap;
  std::vector<double> raw(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i == 0) {
      raw[i] = (coordinate(pos[1], cfg.vertical_axis) - coordinate(pos[0], cfg.vertical_axis)) * rate;
    } else if (i + 1 == n) {
      raw[i] = (coordinate(pos[i], cfg.vertical_axis) - coordinate(pos[i - 1], cfg.vertical_axis)) *
               rate;
    } else {
      raw[i] = (coordinate(pos[i + 1], cfg.vertical_axis) -
                coordinate(pos[i - 1], cfg.vertical_axis)) *
               rate * 0.5;
    }
  }

  const std::ptrdiff_t half = cfg.smoothing_window / 2;
  const auto sn = static_cast<std::ptrdiff_t>(n);
  std::vector<double> smooth(n);
  for (std::ptrdiff_t i = 0; i < sn; ++i) {
    const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, i - half);
    const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(sn - 1, i + half);
    double sum = 0.0;
    for (std::ptrdiff_t k = lo; k <= hi; ++k) sum += raw[static_cast<std::size_t>(k)];
    smooth[static_cast<std::size_t>(i)] = sum / static_cast<double>(hi - lo + 1);
  }
  return smooth;
}

std::vector<SwingWindow> detect_swing_windows(const TraceSet& trace, const SwingDetectConfig& cfg) {
  if (!(cfg.start_velocity > cfg.end_velocity))
    throw std::invalid_argument("swing start velocity must exceed end velocity");
  const auto v = vertical_velocity(trace, cfg);

  std::vector<SwingWindow> windows;
  bool open = false;
  double start = 0.0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    const double t0 = trace.mocap_time(i - 1);
    const double t1 = trace.mocap_time(i);
    if (!open) {
      if (v[i - 1] <= cfg.start_velocity && v[i] > cfg.start_velocity) {
        start = crossing_time(t0, t1, v[i - 1], v[i], cfg.start_velocity);
        open = true;
      }
    } else if (v[i - 1] >= cfg.end_velocity && v[i] < cfg.end_velocity) {
      const double end = crossing_time(t0, t1, v[i - 1], v[i], cfg.end_velocity);
      open = false;
      if (end - start >= cfg.min_duration) windows.push_back({start, end});
    }
  }
  return windows;
}

namespace {

std::vector<std::size_t> spike_indices(std::span<const double> emg, double sample_rate,
                                       const SpikeConfig& cfg) {
  if (!(sample_rate > 0.0)) throw std::invalid_argument("EMG sample rate must be positive");
  if (!(cfg.threshold > 0.0) || cfg.refractory < 0.0)
    throw std::invalid_argument("spike threshold must be positive and refractory non-negative");
  if (emg.size() < 3) throw TooShort("EMG has " + std::to_string(emg.size()) + " samples");

  std::vector<double> values(emg.begin(), emg.end());
  const double centre = median(values);
  for (auto& x : values) x = std::abs(x - centre);
  const double sigma = median(std::move(values)) / 0.6745;
  const double level = cfg.threshold * sigma;
  const double refractory_samples = cfg.refractory * sample_rate;

  std::vector<std::size_t> picks;
  for (std::size_t i = 1; i + 1 < emg.size(); ++i) {
    const double x = emg[i];
    if (x <= level || x < emg[i - 1] || x <= emg[i + 1]) continue;
    if (!picks.empty() && static_cast<double>(i - picks.back()) < refractory_samples - 1e-9)
      continue;
    picks.push_back(i);
  }
  return picks;
}

}  // namespace

std::vector<double> extract_spikes(std::span<const double> emg, double sample_rate, double t0,
                                   const SpikeConfig& cfg) {
  std::vector<double> spikes;
  for (const auto i : spike_indices(emg, sample_rate, cfg))
    spikes.push_back(t0 + static_cast<double>(i) / sample_rate);
  return spikes;
}

std::vector<double> extract_spikes(const TraceSet& trace, const SpikeConfig& cfg) {
  std::vector<double> spikes;
  for (const auto i : spike_indices(trace.emg, trace.sample_rate_emg, cfg))
    spikes.push_back(trace.emg_time(i));
  return spikes;
}

std::vector<std::optional<EmgMetrics>> emg_metrics(const std::vector<SwingWindow>& windows,
                                                   const std::vector<double>& spikes) {
  std::vector<double> sorted = spikes;
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::optional<EmgMetrics>> out;
  out.reserve(windows.size());
  for (const auto& w : windows) {
    const auto lo = std::lower_bound(sorted.begin(), sorted.end(), w.start);
    const auto hi = std::upper_bound(lo, sorted.end(), w.end);
    if (lo == hi) {
      out.emplace_back(std::nullopt);
      continue;
    }
    EmgMetrics m;
    m.spikes = static_cast<int>(hi - lo);
    m.emg_moment = *lo - w.start;
    m.emg_time = *(hi - 1) - *lo;
    const double swing = w.swing_time();
    m.time_ratio = swing > 0.0 ? m.emg_time / swing : 0.0;
    m.moment_ratio = swing > 0.0 ? m.emg_moment / swing : 0.0;
    out.emplace_back(m);
  }
  return out;
}

PearsonResult pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw std::invalid_argument("pearson needs paired samples");
  const std::size_t n = xs.size();
  if (n < 3) throw std::invalid_argument("pearson needs at least 3 pairs");
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(n);
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / static_cast<double>(n);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx <= 0.0 || syy <= 0.0) throw DegenerateVariance("pearson input has zero variance");

  PearsonResult res;
  res.n = n;
  res.r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  const double dof = static_cast<double>(n - 2);
  const double one_minus = 1.0 - res.r * res.r;
  if (one_minus <= 0.0) {
    res.t = std::copysign(std::numeric_limits<double>::infinity(), res.r);
    res.p = 0.0;
    return res;
  }
  res.t = res.r * std::sqrt(dof / one_minus);
  const boost::math::students_t dist(dof);
  res.p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(res.t)));
  return res;
}

double TangentFit::operator()(double dt) const { return a - b * std::tan(c * dt); }

namespace {

struct Profile {
  double rss = 0.0;
  double a = 0.0;
  double b = 0.0;
};

Profile profile_at(const std::vector<IntervalVelocity>& pairs, double c) {
  const double n = static_cast<double>(pairs.size());
  double mg = 0.0, mv = 0.0;
  for (const auto& p : pairs) {
    mg += std::tan(c * p.interval);
    mv += p.velocity;
  }
  mg /= n;
  mv /= n;
  double sgg = 0.0, sgv = 0.0;
  for (const auto& p : pairs) {
    const double dg = std::tan(c * p.interval) - mg;
    sgg += dg * dg;
    sgv += dg * (p.velocity - mv);
  }
  Profile prof;
  prof.b = sgg > 0.0 ? std::max(0.0, -sgv / sgg) : 0.0;
  prof.a = mv + prof.b * mg;
  for (const auto& p : pairs) {
    const double r = p.velocity - (prof.a - prof.b * std::tan(c * p.interval));
    prof.rss += r * r;
  }
  return prof;
}

double golden_min(const std::vector<IntervalVelocity>& pairs, double lo, double hi) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - invphi * (hi - lo);
  double x2 = lo + invphi * (hi - lo);
  double f1 = profile_at(pairs, x1).rss;
  double f2 = profile_at(pairs, x2).rss;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - invphi * (hi - lo);
      f1 = profile_at(pairs, x1).rss;
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + invphi * (hi - lo);
      f2 = profile_at(pairs, x2).rss;
    }
  }
  return f1 < f2 ? x1 : x2;
}

double rss_of(const std::vector<IntervalVelocity>& pairs, double a, double b, double c) {
  double rss = 0.0;
  for (const auto& p : pairs) {
    const double r = p.velocity - (a - b * std::tan(c * p.interval));
    rss += r * r;
  }
  return rss;
}

bool solve3(double m[3][3], double rhs[3], double out[3]) {
  double aug[3][4];
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) aug[i][j] = m[i][j];
    aug[i][3] = rhs[i];
  }
  for (int col = 0; col < 3; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::abs(aug[r][col]) > std::abs(aug[pivot][col])) pivot = r;
    if (std::abs(aug[pivot][col]) < 1e-300) return false;
    std::swap(aug[col], aug[pivot]);
    for (int r = 0; r < 3; ++r) {
      if (r == col) continue;
      const double f = aug[r][col] / aug[col][col];
      for (int k = col; k < 4; ++k) aug[r][k] -= f * aug[col][k];
    }
  }
  for (int i = 0; i < 3; ++i) out[i] = aug[i][3] / aug[i][i];
  return true;
}

}  // namespace

TangentFit fit_velocity_vs_interval(const std::vector<IntervalVelocity>& pairs) {
  if (pairs.size() < 4) throw std::invalid_argument("tangent fit needs at least 4 pairs");
  double max_dt = 0.0;
  double min_dt = std::numeric_limits<double>::infinity();
  for (const auto& p : pairs) {
    if (!std::isfinite(p.interval) || !std::isfinite(p.velocity) || p.interval < 0.0)
      throw std::invalid_argument("tangent fit needs finite, non-negative intervals");
    max_dt = std::max(max_dt, p.interval);
    min_dt = std::min(min_dt, p.interval);
  }
  if (!(max_dt > min_dt)) throw DegenerateVariance("all swing intervals are equal");

  const double c_max = 0.5 * kPi / max_dt;
  const double c_lo = 1e-6 * c_max;
  const double c_hi = (1.0 - 1e-9) * c_max;
  constexpr int kGrid = 400;
  std::vector<double> grid(kGrid + 2);
  std::vector<double> rss(kGrid + 2);
  grid.front() = c_lo;
  grid.back() = c_hi;
  for (int k = 1; k <= kGrid; ++k) grid[k] = c_max * (k - 0.5) / kGrid;
  for (std::size_t k = 0; k < grid.size(); ++k) rss[k] = profile_at(pairs, grid[k]).rss;

  double best_c = grid[0];
  double best_rss = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const bool left_ok = k == 0 || rss[k] <= rss[k - 1];
    const bool right_ok = k + 1 == grid.size() || rss[k] <= rss[k + 1];
    if (!left_ok || !right_ok) continue;
    const double lo = grid[k == 0 ? 0 : k - 1];
    const double hi = grid[k + 1 == grid.size() ? k : k + 1];
    const double c = golden_min(pairs, lo, hi);
    const double r = profile_at(pairs, c).rss;
    if (r < best_rss) {
      best_rss = r;
      best_c = c;
    }
  }

  const double bound_tol = 1e-6 * c_max;
  Profile prof = profile_at(pairs, best_c);
  if (!(prof.b > 0.0)) throw FitDiverged("velocity does not decrease with swing interval");
  if (best_c <= c_lo + bound_tol || best_c >= c_hi - bound_tol)
    throw FitDiverged("tangent rate converged to the edge of its admissible range");

  double a = prof.a, b = prof.b, c = best_c;
  double current = rss_of(pairs, a, b, c);
  for (int it = 0; it < 50; ++it) {
    double jtj[3][3] = {};
    double jtr[3] = {};
    for (const auto& p : pairs) {
      const double tn = std::tan(c * p.interval);
      const double r = p.velocity - (a - b * tn);
      const double jac[3] = {-1.0, tn, b * p.interval * (1.0 + tn * tn)};
      for (int i = 0; i < 3; ++i) {
        jtr[i] -= jac[i] * r;
        for (int j = 0; j < 3; ++j) jtj[i][j] += jac[i] * jac[j];
      }
    }
    double step[3];
    if (!solve3(jtj, jtr, step)) break;
    double scale = 1.0;
    bool improved = false;
    for (int half = 0; half < 30; ++half, scale *= 0.5) {
      const double na = a + scale * step[0];
      const double nb = b + scale * step[1];
      const double nc = c + scale * step[2];
      if (!(nc > c_lo && nc < c_hi && nb > 0.0)) continue;
      const double trial = rss_of(pairs, na, nb, nc);
      if (trial <= current) {
        improved = trial < current;
        a = na;
        b = nb;
        c = nc;
        current = trial;
        break;
      }
    }
    if (!improved) break;
  }

  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c) || !std::isfinite(current))
    throw FitDiverged("tangent fit produced non-finite parameters");
  TangentFit fit{a, b, c, std::sqrt(current / static_cast<double>(pairs.size()))};
  return fit;
}

std::vector<GaitCycleMetrics> gait_cycle_metrics(const std::vector<SwingWindow>& right,
                                                 const std::vector<SwingWindow>& left,
                                                 const TraceSet& body, int forward_axis) {
  if (forward_axis < 0 || forward_axis > 2)
    throw std::invalid_argument("forward axis must be 0, 1 or 2");
  if (body.tarsus_positions.size() < 2) throw TooShort("body trace needs at least 2 samples");

  const auto position_at = [&](double t) {
    const auto& pos = body.tarsus_positions;
    const double u = (t - body.mocap_start) * body.sample_rate_mocap;
    const double last = static_cast<double>(pos.size() - 1);
    const double clamped = std::clamp(u, 0.0, last);
    const auto i = std::min(static_cast<std::size_t>(clamped), pos.size() - 2);
    const double frac = clamped - static_cast<double>(i);
    return (1.0 - frac) * coordinate(pos[i], forward_axis) +
           frac * coordinate(pos[i + 1], forward_axis);
  };

  std::vector<GaitCycleMetrics> out;
  for (std::size_t k = 0; k + 1 < right.size(); ++k) {
    const double begin = right[k].start;
    const double end = right[k + 1].start;
    const auto next_left = std::find_if(left.begin(), left.end(),
                                        [&](const SwingWindow& w) { return w.start >= begin; });
    if (next_left == left.end() || next_left->start > end) continue;
    GaitCycleMetrics m;
    m.cycle_time = end - begin;
    m.swing_interval = next_left->start - begin;
    m.average_velocity = (position_at(end) - position_at(begin)) / m.cycle_time;
    out.push_back(m);
  }
  return out;
}

double ratio_sd_for_correlation(double target_r, double ratio_mean, double swing_mean,
                                double swing_sd) {
  if (!(target_r > 0.0 && target_r <= 1.0)) throw std::invalid_argument("target r must be in (0, 1]");
  const double second_moment = swing_mean * swing_mean + swing_sd * swing_sd;
  return ratio_mean * swing_sd * std::sqrt(1.0 / (target_r * target_r) - 1.0) /
         std::sqrt(second_moment);
}

SynthResult synth_generate(const SynthSpec& spec, std::uint64_t seed) {
  const SwingDetectConfig detect;
  if (spec.steps < 0 || !(spec.sample_rate_mocap > 0.0) || !(spec.sample_rate_emg > 0.0))
    throw std::invalid_argument("synthetic trace needs a step count >= 0 and positive sample rates");
  if (!(spec.peak_velocity > detect.start_velocity) || !(spec.ramp_up > 0.0) ||
      !(spec.ramp_down > 0.0) || spec.plateau_mean < 0.0 || spec.stance_time < 0.0)
    throw std::invalid_argument("synthetic swing profile must clear the detection thresholds");
  if (spec.lead_in <= std::abs(spec.sync_offset))
    throw std::invalid_argument("lead-in must exceed the sync offset");
  if (spec.spikes_per_burst < 1 || spec.spike_interval < 0.0)
    throw std::invalid_argument("bursts need at least one spike");

  Rng rng(seed);
  Rng timing = rng.split();
  Rng burst = rng.split();
  Rng noise = rng.split();

  const double vp = spec.peak_velocity;
  const double ru = spec.ramp_up;
  const double rd = spec.ramp_down;
  struct Swing {
    double begin;
    double plateau;
  };
  std::vector<Swing> swings;
  SynthResult res;
  double t = spec.lead_in;
  for (int k = 0; k < spec.steps; ++k) {
    const double plateau = std::max(0.0, timing.normal(spec.plateau_mean, spec.plateau_sd));
    swings.push_back({t, plateau});
    res.windows.push_back({t + ru * detect.start_velocity / vp,
                           t + ru + plateau + rd * (1.0 - detect.end_velocity / vp)});
    t += ru + plateau + rd + spec.stance_time;
  }
  const double duration = spec.steps == 0 ? t + spec.stance_time : t;

  const auto lift = [&](double time, const Swing& s) {
    const double tau = time - s.begin;
    if (tau <= 0.0) return 0.0;
    if (tau < ru) return vp * tau * tau / (2.0 * ru);
    if (tau < ru + s.plateau) return vp * ru / 2.0 + vp * (tau - ru);
    const double full = vp * (ru / 2.0 + s.plateau + rd / 2.0);
    if (tau < ru + s.plateau + rd) {
      const double d = tau - ru - s.plateau;
      return vp * ru / 2.0 + vp * s.plateau + vp * (d - d * d / (2.0 * rd));
    }
    return full;
  };

  TraceSet& trace = res.trace;
  trace.sample_rate_mocap = spec.sample_rate_mocap;
  trace.sample_rate_emg = spec.sample_rate_emg;
  trace.sync_offset = spec.sync_offset;
  const auto n_mocap = static_cast<std::size_t>(std::ceil(duration * spec.sample_rate_mocap)) + 1;
  trace.tarsus_positions.resize(n_mocap);
  for (std::size_t i = 0; i < n_mocap; ++i) {
    const double ti = trace.mocap_time(i);
    double z = 0.0;
    for (const auto& s : swings) {
      if (ti <= s.begin) break;
      z += lift(ti, s);
    }
    trace.tarsus_positions[i] = {spec.forward_per_mm_lift * z, 0.0, z};
  }

  const auto n_emg = static_cast<std::size_t>(std::ceil(duration * spec.sample_rate_emg)) + 1;
  trace.emg.assign(n_emg, 0.0);
  if (spec.noise_sd > 0.0)
    for (auto& x : trace.emg) x = noise.normal(0.0, spec.noise_sd);

  const double burst_span = (spec.spikes_per_burst - 1) * spec.spike_interval;
  for (const auto& w : res.windows) {
    const double swing = w.swing_time();
    const double ratio_cap = std::max(0.0, (swing - burst_span) / swing - 1e-3);
    const double ratio =
        std::clamp(burst.normal(spec.moment_ratio, spec.moment_ratio_sd), 1e-3, ratio_cap);
    const double first = w.start + ratio * swing;
    for (int s = 0; s < spec.spikes_per_burst; ++s) {
      const double ts = first + s * spec.spike_interval;
      const double emg_clock = ts - spec.sync_offset;
      auto j = static_cast<std::size_t>(std::llround(emg_clock * spec.sample_rate_emg));
      double tq = trace.emg_time(j);
      if (tq < w.start) tq = trace.emg_time(++j);
      if (tq > w.end) tq = trace.emg_time(--j);
      if (j >= n_emg) continue;
      trace.emg[j] += spec.spike_amplitude;
      res.spikes.push_back(tq);
    }
  }
  std::sort(res.spikes.begin(), res.spikes.end());
  for (const auto& m : emg_metrics(res.windows, res.spikes))
    if (m) res.metrics.push_back(*m);
  return res;
}

void write_mocap_csv(std::ostream& out, const TraceSet& trace) {
  char line[160];
  std::snprintf(line, sizeof line, "# sync_offset_s=%.9f\n", trace.sync_offset);
  out << line << "t_s,x_mm,y_mm,z_mm\n";
  for (std::size_t i = 0; i < trace.tarsus_positions.size(); ++i) {
    const auto& p = trace.tarsus_positions[i];
    std::snprintf(line, sizeof line, "%.9f,%.9f,%.9f,%.9f\n", trace.mocap_time(i), p.x, p.y, p.z);
    out << line;
  }
}

void write_emg_csv(std::ostream& out, const TraceSet& trace) {
  char line[96];
  std::snprintf(line, sizeof line, "# sync_offset_s=%.9f\n", trace.sync_offset);
  out << line << "t_s,emg_v\n";
  for (std::size_t j = 0; j < trace.emg.size(); ++j) {
    const double t = trace.emg_start + static_cast<double>(j) / trace.sample_rate_emg;
    std::snprintf(line, sizeof line, "%.9f,%.12g\n", t, trace.emg[j]);
    out << line;
  }
}

namespace {

struct Table {
  std::optional<double> sync_offset;
  std::vector<std::vector<double>> rows;
};

Table read_table(std::istream& in, const std::string& expected_header, std::size_t columns) {
  Table table;
  std::string line;
  bool header_seen = false;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find("sync_offset_s=");
      if (eq != std::string::npos)
        table.sync_offset = std::stod(line.substr(eq + std::string("sync_offset_s=").size()));
      continue;
    }
    if (!header_seen) {
      if (line != expected_header)
        throw std::invalid_argument("line " + std::to_string(line_no) + ": expected header '" +
                                    expected_header + "'");
      header_seen = true;
      continue;
    }
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      std::size_t used = 0;
      double value = 0.0;
      try {
        value = std::stod(cell, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0) throw std::invalid_argument("line " + std::to_string(line_no) + ": bad number");
      row.push_back(value);
    }
    if (row.size() != columns)
      throw std::invalid_argument("line " + std::to_string(line_no) + ": expected " +
                                  std::to_string(columns) + " columns");
    table.rows.push_back(std::move(row));
  }
  if (!header_seen) throw std::invalid_argument("missing header '" + expected_header + "'");
  return table;
}

double uniform_rate(const Table& table, const char* what) {
  const auto& rows = table.rows;
  if (rows.size() < 2) throw TooShort(std::string(what) + " needs at least 2 samples");
  const double t0 = rows.front()[0];
  const double span = rows.back()[0] - t0;
  if (!(span > 0.0)) throw std::invalid_argument(std::string(what) + " time must increase");
  const double rate = static_cast<double>(rows.size() - 1) / span;
  const double tol = 1e-3 / rate;
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (std::abs(rows[i][0] - (t0 + static_cast<double>(i) / rate)) > tol)
      throw std::invalid_argument(std::string(what) + " is not uniformly sampled");
  return rate;
}

}  // namespace

TraceSet read_trace_csv(std::istream& mocap, std::istream& emg) {
  const Table m = read_table(mocap, "t_s,x_mm,y_mm,z_mm", 4);
  const Table e = read_table(emg, "t_s,emg_v", 2);
  TraceSet trace;
  trace.sample_rate_mocap = uniform_rate(m, "motion capture");
  trace.sample_rate_emg = uniform_rate(e, "EMG");
  trace.mocap_start = m.rows.front()[0];
  trace.emg_start = e.rows.front()[0];
  trace.sync_offset = e.sync_offset.value_or(m.sync_offset.value_or(0.0));
  for (const auto& r : m.rows) trace.tarsus_positions.push_back({r[1], r[2], r[3]});
  for (const auto& r : e.rows) trace.emg.push_back(r[1]);
  return trace;
}

}  // namespace meshclimb::biomech
