#include "meshclimb/calibrate.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "meshclimb/units.hpp"

namespace meshclimb {

TrialConfig incline_sweep_trial(double incline, GaitKind gait, std::uint64_t seed) {
  TrialConfig c;
  c.incline = incline;
  c.surface = Surface::flat;
  c.claw_variant = ClawVariant::expandable;
  c.gait = GaitCommand::for_gait(gait);
  c.control_mode = ControlMode::closed_loop;
  c.step_budget = 0;
  c.duration = 15.0;
  c.seed = seed;
  return c;
}

TrialConfig claw_compare_trial(ClawVariant variant, std::uint64_t seed) {
  TrialConfig c;
  c.incline = 30.0;
  c.surface = Surface::mesh;
  c.claw_variant = variant;
  c.gait = GaitCommand::for_gait(GaitKind::tripod);
  c.control_mode = ControlMode::closed_loop;
  c.step_budget = 9;
  c.seed = seed;
  return c;
}

double fit_cam_offset(const LinkageParams& linkage, const ClawSpec& spec, double contact_depth,
                      const EngageRules& rules) {
  double best = std::nan("");
  double best_margin = -1e300;
  for (int k = 0; k < 720; ++k) {
    LinkageParams p = linkage;
    p.cam_crank_offset = k * 0.5;
    LegOrbit orbit;
    try {
      orbit = analyze_leg_orbit(p, spec, contact_depth, 0.25);
    } catch (const ConfigInvalid&) {
      continue;
    }
    const double peak = p.cam_crank_offset + 180.0;
    const double descent = leg_tip(p, spec, peak + 0.5).y - leg_tip(p, spec, peak - 0.5).y;
    if (descent >= 0.0) continue;
    const double margin = std::min(orbit.open_at_touchdown - rules.engage_open_threshold,
                                   rules.release_open_threshold - orbit.open_at_liftoff);
    if (margin > best_margin) {
      best_margin = margin;
      best = p.cam_crank_offset;
    }
  }
  if (std::isnan(best)) throw std::runtime_error("no cam offset puts the opening peak on the downstroke");
  return best;
}

namespace {

struct MeshStats {
  double success = 0.0;
  double velocity = 0.0;
};

MeshStats mesh_stats(const SimParams& p, ClawVariant v, const std::vector<std::uint64_t>& seeds,
                     int jobs) {
  std::vector<TrialConfig> cfgs;
  for (auto s : seeds) cfgs.push_back(claw_compare_trial(v, s));
  const auto recs = run_trials(cfgs, p, jobs);
  std::vector<double> vel;
  for (const auto& r : recs) vel.push_back(r.summary.average_velocity);
  return {success_rate(recs), mean_sd(vel).mean};
}

double sweep_velocity(const SimParams& p, double incline, GaitKind g,
                      const std::vector<std::uint64_t>& seeds, int jobs) {
  std::vector<TrialConfig> cfgs;
  for (auto s : seeds) cfgs.push_back(incline_sweep_trial(incline, g, s));
  const auto recs = run_trials(cfgs, p, jobs);
  std::vector<double> vel;
  for (const auto& r : recs) vel.push_back(r.summary.average_velocity);
  return mean_sd(vel).mean;
}

// Bisection on a monotone (possibly piecewise-constant) response.
template <typename F>
double bisect(F&& f, double lo, double hi, double target, bool increasing, int iters) {
  for (int i = 0; i < iters; ++i) {
    const double mid = 0.5 * (lo + hi);
    const bool above = f(mid) > target;
    if (above == increasing) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c);
  return buf;
}

}  // namespace

void apply_calibration(const CalibrationResult& r, SimParams& p) {
  p.linkage.cam_crank_offset = r.cam_crank_offset;
  p.motor.no_load_speed = r.no_load_speed;
  p.expandable.stiffness = r.stiffness_expandable;
  p.unexpandable.stiffness = r.stiffness_unexpandable;
  p.soft_immobile.stiffness = r.stiffness_soft;
  p.mesh.capture_radius = r.capture_radius;
  p.unexpandable.p_snagfree = r.snagfree_unexpandable;
  p.soft_immobile.p_snagfree = r.snagfree_soft;
}

CalibrationResult calibrate(const SimParams& base, const CalibrationTargets& t,
                            const std::vector<std::uint64_t>& seeds, int jobs,
                            const std::function<void(const std::string&)>& progress) {
  CalibrationResult r;
  auto note = [&](const std::string& line) {
    r.log.push_back(line);
    if (progress) progress(line);
  };
  SimParams p = base;

  // 1. Cam phasing from the claw-tip geometry alone.
  p.linkage.cam_crank_offset =
      fit_cam_offset(p.linkage, p.expandable, p.contact_depth, p.rules);
  r.cam_crank_offset = p.linkage.cam_crank_offset;
  note(fmt("cam_crank_offset = %.1f deg", r.cam_crank_offset));

  // 2. Motor speed and expandable stiffness from the two incline anchors.
  // Velocity follows N*(s - (c/K)*L) for motor speed N, claw stiffness K and
  // leg load L; s and c are read off the current simulation, then (N, K) are
  // solved for the targets and the loop repeats until the simulation agrees.
  const std::vector<std::uint64_t> sweep_seeds(
      seeds.begin(), seeds.begin() + static_cast<long>(std::min<std::size_t>(5, seeds.size())));
  const double weight = p.body.mass * p.body.gravity;
  const double lg = weight * std::sin(deg_to_rad(60.0)) / 2.0;
  const double lt = weight * std::sin(deg_to_rad(50.0));
  for (int it = 0; it < 6; ++it) {
    const double n = p.motor.no_load_speed;
    const double vg = sweep_velocity(p, 60.0, GaitKind::gallop, sweep_seeds, jobs);
    const double vt = sweep_velocity(p, 50.0, GaitKind::tripod, sweep_seeds, jobs);
    const double c_over_k = (vg - vt) / (n * (lt - lg));
    const double c = c_over_k * p.expandable.stiffness;
    const double s = vg / n + c_over_k * lg;
    const double n_kappa = (t.gallop_60_velocity - t.tripod_50_velocity) / (lt - lg);
    const double n_new = (t.gallop_60_velocity + n_kappa * lg) / s;
    const double k_new = c / (n_kappa / n_new);
    note(fmt("sweep iteration: gallop60 %.4f tripod50 %.4f mm/s", vg, vt) +
         fmt(" -> no_load_speed %.5f rev/s, stiffness %.6f N/mm", n_new, k_new));
    p.motor.no_load_speed = n_new;
    p.expandable.stiffness = k_new;
  }
  r.no_load_speed = p.motor.no_load_speed;
  r.stiffness_expandable = p.expandable.stiffness;

  // 3. Placement capture radius from the expandable success rate.
  SimParams mesh = p;
  mesh.mesh.capture_radius = bisect(
      [&](double c) {
        SimParams q = mesh;
        q.mesh.capture_radius = c;
        return mesh_stats(q, ClawVariant::expandable, seeds, jobs).success;
      },
      0.3, 0.5 * p.mesh.cell_pitch, t.expandable_success, true, 14);
  r.capture_radius = mesh.mesh.capture_radius;
  note(fmt("capture_radius = %.4f mm", r.capture_radius));

  // 4. Motor speed of the claw-comparison runs from the expandable velocity.
  for (int it = 0; it < 4; ++it) {
    const double v = mesh_stats(mesh, ClawVariant::expandable, seeds, jobs).velocity;
    mesh.motor.no_load_speed *= t.expandable_velocity / v;
    note(fmt("claw-compare speed: v %.3f mm/s -> no_load_speed %.4f rev/s", v,
             mesh.motor.no_load_speed));
  }
  r.mesh_compare_no_load_speed = mesh.motor.no_load_speed;

  // 5. Snag probabilities and stiffnesses of the non-expandable claws.
  auto fit_claw = [&](ClawVariant v, double success, double velocity, double& snagfree,
                      double& stiffness) {
    for (int round = 0; round < 3; ++round) {
      mesh.claw(v).p_snagfree = bisect(
          [&](double ps) {
            SimParams q = mesh;
            q.claw(v).p_snagfree = ps;
            return mesh_stats(q, v, seeds, jobs).success;
          },
          0.0, 1.0, success, true, 14);
      mesh.claw(v).stiffness = bisect(
          [&](double k) {
            SimParams q = mesh;
            q.claw(v).stiffness = k;
            return mesh_stats(q, v, seeds, jobs).velocity;
          },
          0.005, 2.0, velocity, true, 18);
    }
    snagfree = mesh.claw(v).p_snagfree;
    stiffness = mesh.claw(v).stiffness;
    note(to_string(v) + fmt(": p_snagfree %.4f, stiffness %.5f N/mm", snagfree, stiffness));
  };
  fit_claw(ClawVariant::unexpandable, t.unexpandable_success, t.unexpandable_velocity,
           r.snagfree_unexpandable, r.stiffness_unexpandable);
  fit_claw(ClawVariant::soft_immobile, t.soft_success, t.soft_velocity, r.snagfree_soft,
           r.stiffness_soft);
  return r;
}

}  // namespace meshclimb
