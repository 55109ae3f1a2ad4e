#include "meshclimb/presets.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "meshclimb/biomech.hpp"
#include "meshclimb/calibrate.hpp"
#include "meshclimb/rng.hpp"

#ifndef MESHCLIMB_VERSION
#define MESHCLIMB_VERSION "0.0.0"
#endif

namespace meshclimb {

namespace fs = std::filesystem;

namespace {

std::vector<std::uint64_t> seed_range(std::uint64_t first, std::uint64_t last) {
  std::vector<std::uint64_t> s;
  for (auto i = first; i <= last; ++i) s.push_back(i);
  return s;
}

std::string fixed(double v, int precision = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  std::string s = buf;
  if (s.find_first_not_of("-0.") == std::string::npos && s[0] == '-') s.erase(0, 1);
  return s;
}

std::string general(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string join(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) line += ',';
    line += cells[i];
  }
  return line + '\n';
}

class Output {
 public:
  Output(const RunOptions& opt, RunReport& report) : opt_(opt), report_(report) {}

  void write(const fs::path& relative, const std::string& content) {
    const fs::path path = opt_.out_dir / relative;
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create " + path.parent_path().string() + ": " + ec.message());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << content;
    out.close();
    if (!out) throw IoError("failed writing " + path.string());
    report_.files.push_back(path);
  }

  void log(const std::string& line) const {
    if (opt_.log) *opt_.log << line << '\n';
  }

 private:
  const RunOptions& opt_;
  RunReport& report_;
};

std::string stem(const std::string& preset, double angle, const std::string& gait,
                 std::uint64_t seed) {
  return preset + "_" + format_number(angle) + "_" + gait + "_" + std::to_string(seed);
}

void write_trial(Output& out, const fs::path& dir, const std::string& name,
                 const TrialRecord& rec) {
  std::string steps =
      "step_idx,left_engaged_flag,right_engaged_flag,stroke_mm,displacement_mm,stuck_flag\n";
  for (const auto& s : rec.steps)
    steps += join({std::to_string(s.step), s.left_engaged ? "1" : "0", s.right_engaged ? "1" : "0",
                   fixed(s.stroke), fixed(s.displacement), s.stuck ? "1" : "0"});
  out.write(dir / (name + ".csv"), steps);

  std::string events = "t_s,leg,event,node_i_idx,node_j_idx\n";
  for (const auto& e : rec.events)
    events += join({fixed(e.t), e.leg, e.event, e.node ? std::to_string(e.node->i) : "",
                    e.node ? std::to_string(e.node->j) : ""});
  out.write(dir / (name + ".events.csv"), events);

  std::string ticks = "t_s,left_phase_deg,right_phase_deg,phase_diff_deg,v_left_V,v_right_V,body_mm\n";
  for (const auto& t : rec.ticks)
    ticks += join({fixed(t.t), fixed(t.left_phase), fixed(t.right_phase), fixed(t.phase_diff),
                   fixed(t.v_left), fixed(t.v_right), fixed(t.body)});
  out.write(dir / (name + ".ticks.csv"), ticks);
}

constexpr ClawVariant kVariants[] = {ClawVariant::expandable, ClawVariant::unexpandable,
                                     ClawVariant::soft_immobile, ClawVariant::rigid_immobile};

int count_arcs(const std::vector<double>& values, double target, double tol) {
  const std::size_t n = values.size();
  int arcs = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const bool here = std::abs(values[i] - target) <= tol;
    const bool before = std::abs(values[(i + n - 1) % n] - target) <= tol;
    if (here && !before) ++arcs;
  }
  if (arcs == 0 && n > 0 && std::abs(values[0] - target) <= tol) arcs = 1;
  return arcs;
}

void run_clawcycle(const Config& cfg, Output& out, RunReport& report) {
  const std::string preset = "fig4_clawcycle";
  std::string summary =
      "variant,grashof,open_min_deg,open_max_deg,open_min_arcs_count,open_max_arcs_count,"
      "bend_max_deg,touchdown_crank_deg,liftoff_crank_deg,kinematic_stroke_mm,"
      "open_at_touchdown_deg,open_at_liftoff_deg\n";
  const auto grashof = to_string(classify_grashof(cfg.sim.linkage));
  const int samples = static_cast<int>(std::llround(360.0 / cfg.fig4_resolution));
  for (const auto variant : kVariants) {
    const ClawSpec& spec = cfg.sim.claw(variant);
    std::string table =
        "crank_deg,coupler_deg,rocker_deg,cable_pull_mm,bend_deg,open_deg,tip_x_mm,tip_y_mm\n";
    std::vector<double> opens;
    double bend_max = -HUGE_VAL;
    for (int k = 0; k < samples; ++k) {
      const double crank = k * 360.0 / samples;
      const ClosurePose pose = solve_closure(cfg.sim.linkage, crank, Branch::open);
      const double pull = cam_cable_pull(cfg.sim.linkage, crank);
      const LegTip tip = leg_tip(cfg.sim.linkage, spec, crank);
      opens.push_back(tip.claw.open);
      bend_max = std::max(bend_max, tip.claw.bend);
      table += join({fixed(crank, 4), fixed(pose.coupler_angle), fixed(pose.rocker_angle),
                     fixed(pull), fixed(tip.claw.bend), fixed(tip.claw.open), fixed(tip.x),
                     fixed(tip.y)});
    }
    out.write(preset + "_" + to_string(variant) + ".csv", table);
    ++report.trials;

    const double lo = *std::min_element(opens.begin(), opens.end());
    const double hi = *std::max_element(opens.begin(), opens.end());
    const LegOrbit orbit = analyze_leg_orbit(cfg.sim.linkage, spec, cfg.sim.contact_depth);
    summary += join({to_string(variant), grashof, fixed(lo), fixed(hi),
                     std::to_string(count_arcs(opens, lo, 0.5)),
                     std::to_string(count_arcs(opens, hi, 0.5)), fixed(bend_max),
                     fixed(orbit.touchdown_angle), fixed(orbit.liftoff_angle),
                     fixed(orbit.kinematic_stroke), fixed(orbit.open_at_touchdown),
                     fixed(orbit.open_at_liftoff)});
  }
  out.write(preset + "_summary.csv", summary);
}

void run_clawcompare(const Config& cfg, const std::vector<std::uint64_t>& seeds, int jobs,
                     Output& out, RunReport& report) {
  const std::string preset = "fig8_clawcompare";
  SimParams params = cfg.sim;
  params.motor.no_load_speed = cfg.clawcompare_no_load_speed;

  std::vector<TrialConfig> configs;
  for (const auto variant : kVariants) {
    for (const auto seed : seeds) {
      TrialConfig t = cfg.trial;
      t.claw_variant = variant;
      t.seed = seed;
      configs.push_back(t);
    }
  }
  out.log("running " + std::to_string(configs.size()) + " claw-comparison trials");
  const auto records = run_trials(configs, params, jobs);
  report.trials += static_cast<int>(records.size());

  std::string summary =
      "variant,trials_count,steps_completed_count,steps_recorded_count,success_rate_unitless,"
      "stuck_trials_count,velocity_mean_mm_s,velocity_sd_mm_s\n";
  const std::string gait = to_string(cfg.trial.gait.gait);
  std::size_t index = 0;
  for (const auto variant : kVariants) {
    std::vector<TrialRecord> group(records.begin() + static_cast<std::ptrdiff_t>(index),
                                   records.begin() + static_cast<std::ptrdiff_t>(index + seeds.size()));
    index += seeds.size();
    int completed = 0, recorded = 0, stuck = 0;
    std::vector<double> velocity;
    for (const auto& r : group) {
      write_trial(out, to_string(variant), stem(preset, cfg.trial.incline, gait, r.config.seed), r);
      completed += r.summary.steps_completed;
      recorded += r.summary.steps_recorded;
      stuck += r.summary.stuck ? 1 : 0;
      velocity.push_back(r.summary.average_velocity);
    }
    const MeanSd v = mean_sd(velocity);
    summary += join({to_string(variant), std::to_string(group.size()), std::to_string(completed),
                     std::to_string(recorded), fixed(success_rate(group)), std::to_string(stuck),
                     fixed(v.mean), fixed(v.sd)});
  }
  out.write(preset + "_summary.csv", summary);
}

void run_phasedrift(const Config& cfg, const std::vector<std::uint64_t>& seeds, Output& out,
                    RunReport& report) {
  const std::string preset = "fig9_phasedrift";
  MotorPlant left = cfg.sim.motor;
  left.mismatch_factor = 1.0;
  const MotorPlant& right = cfg.sim.motor;
  const std::string gait = to_string(cfg.trial.gait.gait);

  std::string changes =
      "seed_idx,mode,initial_offset_deg,initial_diff_deg,final_diff_deg,phase_change_deg\n";
  std::string summary =
      "mode,trials_count,abs_change_mean_deg,abs_change_sd_deg,abs_change_max_deg,"
      "final_diff_mean_deg\n";
  for (const auto mode : {ControlMode::open_loop, ControlMode::closed_loop}) {
    std::vector<double> abs_change, final_diff;
    for (const auto seed : seeds) {
      Rng rng(seed);
      const double offset = rng.uniform(-cfg.drift_offset_jitter, cfg.drift_offset_jitter);
      const PhaseDriftRun run = run_phase_drift(left, right, cfg.sim.pid, cfg.trial.gait, mode,
                                                cfg.sim.timing, offset, cfg.drift_cycles);
      ++report.trials;
      std::string log = "t_s,left_phase_deg,right_phase_deg,phase_diff_deg,v_left_V,v_right_V\n";
      for (const auto& row : run.log)
        log += join({fixed(row.t), fixed(row.left_phase), fixed(row.right_phase), fixed(row.diff),
                     fixed(row.v_left), fixed(row.v_right)});
      out.write(fs::path(to_string(mode)) / (stem(preset, cfg.trial.incline, gait, seed) + ".csv"),
                log);
      changes += join({std::to_string(seed), to_string(mode), fixed(offset), fixed(run.initial_diff),
                       fixed(run.final_diff), fixed(run.change)});
      abs_change.push_back(std::abs(run.change));
      final_diff.push_back(run.final_diff);
    }
    const MeanSd c = mean_sd(abs_change);
    summary += join({to_string(mode), std::to_string(seeds.size()), fixed(c.mean), fixed(c.sd),
                     fixed(*std::max_element(abs_change.begin(), abs_change.end())),
                     fixed(mean_sd(final_diff).mean)});
  }
  out.write(preset + "_changes.csv", changes);
  out.write(preset + "_summary.csv", summary);
}

void run_gaitspeed(const Config& cfg, const std::vector<std::uint64_t>& seeds, int jobs,
                   Output& out, RunReport& report) {
  const std::string preset = "fig10_gaitspeed";
  struct Cell {
    Surface surface;
    double incline;
    GaitKind gait;
  };
  std::vector<Cell> cells;
  for (const double incline : cfg.sweep_inclines)
    for (const auto gait : {GaitKind::gallop, GaitKind::tripod})
      cells.push_back({Surface::flat, incline, gait});
  for (const auto gait : {GaitKind::gallop, GaitKind::tripod})
    cells.push_back({Surface::mesh, cfg.sweep_mesh_incline, gait});

  std::vector<TrialConfig> configs;
  for (const auto& cell : cells) {
    for (const auto seed : seeds) {
      TrialConfig t = cfg.trial;
      t.surface = cell.surface;
      t.incline = cell.incline;
      t.gait = GaitCommand::for_gait(cell.gait);
      t.step_budget = 0;
      t.duration = cfg.sweep_duration;
      t.seed = seed;
      configs.push_back(t);
    }
  }
  out.log("running " + std::to_string(configs.size()) + " gait-speed trials");
  const auto records = run_trials(configs, cfg.sim, jobs);
  report.trials += static_cast<int>(records.size());

  std::string summary =
      "surface,incline_deg,gait,trials_count,velocity_mean_mm_s,velocity_sd_mm_s,"
      "success_rate_unitless\n";
  std::size_t index = 0;
  for (const auto& cell : cells) {
    std::vector<TrialRecord> group;
    std::vector<double> velocity;
    for (std::size_t k = 0; k < seeds.size(); ++k, ++index) {
      const auto& r = records[index];
      write_trial(out, to_string(cell.surface),
                  stem(preset, cell.incline, to_string(cell.gait), r.config.seed), r);
      velocity.push_back(r.summary.average_velocity);
      group.push_back(r);
    }
    const MeanSd v = mean_sd(velocity);
    summary += join({to_string(cell.surface), format_number(cell.incline), to_string(cell.gait),
                     std::to_string(seeds.size()), fixed(v.mean), fixed(v.sd),
                     fixed(success_rate(group))});
  }
  out.write(preset + "_summary.csv", summary);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void run_emg_pipeline(const Config& cfg, const std::vector<std::uint64_t>& seeds, Output& out,
                      RunReport& report) {
  const std::string preset = "fig6_emg_pipeline";
  const bool recorded = !cfg.trace_mocap_csv.empty();

  std::string summary =
      "incline_deg,seed_idx,windows_count,bursts_count,generator_ratio_unitless,"
      "swing_time_mean_s,swing_time_sd_s,emg_moment_mean_s,emg_time_mean_s,"
      "moment_ratio_mean_unitless,moment_ratio_sd_unitless,time_ratio_mean_unitless,"
      "pearson_r_unitless,p_value_unitless\n";
  std::string text;
  std::vector<double> per_incline_ratio;

  const std::vector<double> inclines =
      recorded ? std::vector<double>{cfg.synth_reference_incline} : cfg.synth_inclines;
  const std::vector<std::uint64_t> run_seeds = recorded ? std::vector<std::uint64_t>{0} : seeds;

  for (std::size_t ii = 0; ii < inclines.size(); ++ii) {
    const double incline = inclines[ii];
    biomech::SynthSpec spec = cfg.synth;
    spec.moment_ratio =
        cfg.synth.moment_ratio + cfg.synth_ratio_slope * (incline - cfg.synth_reference_incline);
    if (cfg.synth_target_r > 0.0) {
      const double swing_mean = 0.6 * spec.ramp_up + spec.plateau_mean +
                                (1.0 - cfg.swing.end_velocity / spec.peak_velocity) * spec.ramp_down;
      spec.moment_ratio_sd = biomech::ratio_sd_for_correlation(cfg.synth_target_r, spec.moment_ratio,
                                                               swing_mean, spec.plateau_sd);
    }
    std::vector<double> seed_ratios;
    for (const auto seed : run_seeds) {
      biomech::TraceSet trace;
      if (recorded) {
        std::istringstream mocap(read_file(cfg.trace_mocap_csv));
        std::istringstream emg(read_file(cfg.trace_emg_csv));
        trace = biomech::read_trace_csv(mocap, emg);
      } else {
        const std::uint64_t synth_seed = seed * 1000003ULL + ii;
        trace = biomech::synth_generate(spec, synth_seed).trace;
      }
      const std::string name = stem(preset, incline, "beetle", seed);
      if (!recorded && cfg.synth_write_traces) {
        std::ostringstream m, e;
        biomech::write_mocap_csv(m, trace);
        biomech::write_emg_csv(e, trace);
        out.write("traces/" + name + ".mocap.csv", m.str());
        out.write("traces/" + name + ".emg.csv", e.str());
      }
      const auto windows = biomech::detect_swing_windows(trace, cfg.swing);
      const auto spikes = biomech::extract_spikes(trace, cfg.spikes);
      const auto metrics = biomech::emg_metrics(windows, spikes);
      ++report.trials;

      std::string table =
          "window_idx,start_s,end_s,swing_time_s,spikes_count,emg_moment_s,emg_time_s,"
          "moment_ratio_unitless,time_ratio_unitless\n";
      std::vector<double> swing, moment, emg_time, ratio, time_ratio;
      for (std::size_t w = 0; w < windows.size(); ++w) {
        const auto& m = metrics[w];
        table += join({std::to_string(w + 1), fixed(windows[w].start), fixed(windows[w].end),
                       fixed(windows[w].swing_time()), m ? std::to_string(m->spikes) : "0",
                       m ? fixed(m->emg_moment) : "", m ? fixed(m->emg_time) : "",
                       m ? fixed(m->moment_ratio) : "", m ? fixed(m->time_ratio) : ""});
        if (!m) continue;
        swing.push_back(windows[w].swing_time());
        moment.push_back(m->emg_moment);
        emg_time.push_back(m->emg_time);
        ratio.push_back(m->moment_ratio);
        time_ratio.push_back(m->time_ratio);
      }
      out.write(name + ".csv", table);

      std::string r_cell, p_cell;
      if (swing.size() >= 3) {
        try {
          const auto pr = biomech::pearson(swing, moment);
          r_cell = fixed(pr.r);
          p_cell = general(pr.p);
        } catch (const biomech::DegenerateVariance&) {
        }
      }
      const MeanSd sw = swing.empty() ? MeanSd{} : mean_sd(swing);
      const MeanSd ra = ratio.empty() ? MeanSd{} : mean_sd(ratio);
      summary += join({format_number(incline), std::to_string(seed), std::to_string(windows.size()),
                       std::to_string(ratio.size()), recorded ? "" : fixed(spec.moment_ratio),
                       fixed(sw.mean), fixed(sw.sd),
                       moment.empty() ? "" : fixed(mean_sd(moment).mean),
                       emg_time.empty() ? "" : fixed(mean_sd(emg_time).mean), fixed(ra.mean),
                       fixed(ra.sd), time_ratio.empty() ? "" : fixed(mean_sd(time_ratio).mean),
                       r_cell, p_cell});
      if (!ratio.empty()) seed_ratios.push_back(ra.mean);
    }
    const double mean_ratio = seed_ratios.empty() ? 0.0 : mean_sd(seed_ratios).mean;
    per_incline_ratio.push_back(mean_ratio);
    text += "incline " + format_number(incline) + " deg: mean moment ratio " + fixed(mean_ratio, 4) +
            "\n";
  }
  bool decreasing = per_incline_ratio.size() > 1;
  for (std::size_t i = 1; i < per_incline_ratio.size(); ++i)
    decreasing = decreasing && per_incline_ratio[i] < per_incline_ratio[i - 1];
  text += std::string("moment ratio decreases with incline: ") + (decreasing ? "yes" : "no") + "\n";
  out.write(preset + "_summary.csv", summary);
  out.write(preset + "_summary.txt", text);
}

void run_tangent_fit(const Config& cfg, const std::vector<std::uint64_t>& seeds, Output& out,
                     RunReport& report) {
  const std::string preset = "fig7_tangent_fit";
  std::string summary = "seed_idx,status,a_mm_s,b_mm_s,c_1_s,rmse_mm_s\n";
  std::string text;
  std::vector<double> as, bs, cs;
  for (const auto seed : seeds) {
    Rng rng(seed);
    std::vector<biomech::IntervalVelocity> pairs;
    for (int i = 0; i < cfg.fit_pairs; ++i) {
      const double dt = cfg.fit_interval_min +
                        (cfg.fit_interval_max - cfg.fit_interval_min) * i / (cfg.fit_pairs - 1);
      const double v = cfg.fit_a - cfg.fit_b * std::tan(cfg.fit_c * dt);
      pairs.push_back({dt, v * (1.0 + cfg.fit_noise * rng.normal())});
    }
    ++report.trials;
    std::string table = "swing_interval_s,velocity_mm_s,fitted_velocity_mm_s\n";
    try {
      const auto fit = biomech::fit_velocity_vs_interval(pairs);
      for (const auto& p : pairs)
        table += join({fixed(p.interval), fixed(p.velocity), fixed(fit(p.interval))});
      summary += join({std::to_string(seed), "ok", fixed(fit.a), fixed(fit.b), fixed(fit.c),
                       fixed(fit.rmse)});
      as.push_back(fit.a);
      bs.push_back(fit.b);
      cs.push_back(fit.c);
    } catch (const biomech::FitDiverged& e) {
      for (const auto& p : pairs) table += join({fixed(p.interval), fixed(p.velocity), ""});
      summary += join({std::to_string(seed), "diverged", "", "", "", ""});
      text += "seed " + std::to_string(seed) + ": " + e.what() + "\n";
    }
    out.write(stem(preset, cfg.synth_reference_incline, "beetle", seed) + ".csv", table);
  }
  text += "generator a=" + format_number(cfg.fit_a) + " b=" + format_number(cfg.fit_b) +
          " c=" + format_number(cfg.fit_c) + "\n";
  if (!as.empty())
    text += "fitted mean a=" + fixed(mean_sd(as).mean, 4) + " b=" + fixed(mean_sd(bs).mean, 4) +
            " c=" + fixed(mean_sd(cs).mean, 4) + " over " + std::to_string(as.size()) + " fits\n";
  out.write(preset + "_summary.csv", summary);
  out.write(preset + "_summary.txt", text);
}

void run_calibrate(const Config& cfg, const std::vector<std::uint64_t>& seeds, int jobs,
                   Output& out, RunReport& report) {
  const CalibrationResult res = calibrate(cfg.sim, CalibrationTargets{}, seeds, jobs,
                                          [&](const std::string& line) { out.log(line); });
  report.trials += static_cast<int>(seeds.size());

  std::string frozen = "# fitted values; the remaining keys keep their defaults\n";
  frozen += "linkage.cam_crank_offset = " + format_number(res.cam_crank_offset) + "\n";
  frozen += "motor.no_load_speed = " + format_number(res.no_load_speed) + "\n";
  frozen += "clawcompare.no_load_speed = " + format_number(res.mesh_compare_no_load_speed) + "\n";
  frozen += "mesh.capture_radius = " + format_number(res.capture_radius) + "\n";
  frozen += "claw.expandable.stiffness = " + format_number(res.stiffness_expandable) + "\n";
  frozen += "claw.unexpandable.stiffness = " + format_number(res.stiffness_unexpandable) + "\n";
  frozen += "claw.soft_immobile.stiffness = " + format_number(res.stiffness_soft) + "\n";
  frozen += "claw.unexpandable.p_snagfree = " + format_number(res.snagfree_unexpandable) + "\n";
  frozen += "claw.soft_immobile.p_snagfree = " + format_number(res.snagfree_soft) + "\n";
  out.write("calibrated.cfg", frozen);

  std::string log;
  for (const auto& line : res.log) log += line + "\n";
  out.write("calibrate_log.txt", log);

  out.write("calibrate_summary.csv",
            "cam_crank_offset_deg,no_load_speed_rev_s,clawcompare_no_load_speed_rev_s,"
            "capture_radius_mm,stiffness_expandable_N_mm,stiffness_unexpandable_N_mm,"
            "stiffness_soft_N_mm,p_snagfree_unexpandable_unitless,p_snagfree_soft_unitless\n" +
                join({fixed(res.cam_crank_offset), fixed(res.no_load_speed),
                      fixed(res.mesh_compare_no_load_speed), fixed(res.capture_radius),
                      fixed(res.stiffness_expandable), fixed(res.stiffness_unexpandable),
                      fixed(res.stiffness_soft), fixed(res.snagfree_unexpandable),
                      fixed(res.snagfree_soft)}));
}

}  // namespace

std::string tool_version() { return MESHCLIMB_VERSION; }

const std::vector<PresetInfo>& presets() {
  static const std::vector<PresetInfo> list = {
      {"fig4_clawcycle", "claw bend/opening and tip path over one crank revolution, per claw", {}, {0}},
      {"fig8_clawcompare",
       "9-step mesh trials at 30 deg for the four claws: success rate and velocity",
       {{"trial.surface", "mesh"},
        {"trial.incline", "30"},
        {"trial.gait", "tripod"},
        {"trial.control_mode", "closed_loop"},
        {"trial.step_budget", "9"},
        {"trial.duration", "0"}},
       seed_range(1, 9)},
      {"fig9_phasedrift",
       "phase change after 7 leg cycles with a 5% slower right motor, open vs closed loop",
       {{"motor.mismatch_factor", "0.95"}, {"trial.gait", "tripod"}, {"trial.incline", "30"}},
       seed_range(1, 5)},
      {"fig10_gaitspeed",
       "15 s velocity per gait over the incline sweep, plus mesh rows",
       {{"trial.surface", "flat"},
        {"trial.control_mode", "closed_loop"},
        {"trial.step_budget", "0"},
        {"trial.duration", "15"}},
       seed_range(1, 5)},
      {"fig6_emg_pipeline",
       "swing windows, EMG spikes and moment ratios on synthetic or recorded traces", {},
       seed_range(1, 5)},
      {"fig7_tangent_fit", "tangent fit of cycle velocity against swing interval", {},
       seed_range(1, 5)},
      {"calibrate", "refit the calibrated constants and write calibrated.cfg", {},
       seed_range(1001, 1200)},
  };
  return list;
}

const PresetInfo& find_preset(const std::string& name) {
  for (const auto& p : presets())
    if (p.name == name) return p;
  std::string known;
  for (const auto& p : presets()) known += (known.empty() ? "" : ", ") + p.name;
  throw std::invalid_argument("unknown preset '" + name + "' (known: " + known + ")");
}

Config preset_config(const std::string& name) {
  Config cfg;
  for (const auto& [key, value] : find_preset(name).overrides) apply_setting(cfg, key, value);
  return cfg;
}

RunReport run_preset(const std::string& name, const Config& cfg_in, const RunOptions& opt) {
  const PresetInfo& info = find_preset(name);
  Config cfg = cfg_in;
  cfg.finalize();
  cfg.validate();
  if (cfg.seeds.empty()) cfg.seeds = info.default_seeds;
  if (opt.jobs < 1) throw std::invalid_argument("jobs must be >= 1");

  RunReport report;
  report.seeds = cfg.seeds;
  Output out(opt, report);
  out.log(name + ": " + std::to_string(cfg.seeds.size()) + " seed(s) -> " + opt.out_dir.string());

  if (name == "fig4_clawcycle") run_clawcycle(cfg, out, report);
  else if (name == "fig8_clawcompare") run_clawcompare(cfg, cfg.seeds, opt.jobs, out, report);
  else if (name == "fig9_phasedrift") run_phasedrift(cfg, cfg.seeds, out, report);
  else if (name == "fig10_gaitspeed") run_gaitspeed(cfg, cfg.seeds, opt.jobs, out, report);
  else if (name == "fig6_emg_pipeline") run_emg_pipeline(cfg, cfg.seeds, out, report);
  else if (name == "fig7_tangent_fit") run_tangent_fit(cfg, cfg.seeds, out, report);
  else if (name == "calibrate") run_calibrate(cfg, cfg.seeds, opt.jobs, out, report);

  std::string manifest = "# tool: meshclimb " + tool_version() + "\n";
  manifest += "# preset: " + name + "\n";
  if (!opt.created.empty()) manifest += "# created: " + opt.created + "\n";
  manifest += "# files: " + std::to_string(report.files.size()) + "\n";
  manifest += "# rerun: meshclimb " + name + " --config <this file>\n";
  manifest += echo_config(cfg);
  out.write("manifest.txt", manifest);
  return report;
}

}  // namespace meshclimb
