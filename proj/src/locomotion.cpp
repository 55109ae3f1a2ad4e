#include "meshclimb/locomotion.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "meshclimb/calibration.hpp"
#include "meshclimb/rng.hpp"
#include "meshclimb/units.hpp"

namespace meshclimb {

void RobotBody::validate() const {
  if (!(mass > 0.0)) throw std::invalid_argument("body mass must be positive");
  if (!(gravity > 0.0)) throw std::invalid_argument("gravity must be positive");
  if (!(body_length > 0.0) || !(body_width > 0.0)) {
    throw std::invalid_argument("body dimensions must be positive");
  }
  if (support_legs < 0) throw std::invalid_argument("support_legs must be >= 0");
}

std::string to_string(Surface s) { return s == Surface::mesh ? "mesh" : "flat"; }

Surface surface_from_string(const std::string& s) {
  if (s == "mesh") return Surface::mesh;
  if (s == "flat") return Surface::flat;
  throw std::invalid_argument("unknown surface '" + s + "'");
}

SimParams::SimParams() {
  mesh.capture_radius = calibrated::kCaptureRadius;
  motor.no_load_speed = calibrated::kNoLoadSpeed;
}

const ClawSpec& SimParams::claw(ClawVariant v) const {
  switch (v) {
    case ClawVariant::expandable: return expandable;
    case ClawVariant::unexpandable: return unexpandable;
    case ClawVariant::soft_immobile: return soft_immobile;
    case ClawVariant::rigid_immobile: return rigid_immobile;
  }
  return expandable;
}

ClawSpec& SimParams::claw(ClawVariant v) {
  return const_cast<ClawSpec&>(static_cast<const SimParams&>(*this).claw(v));
}

void SimParams::validate() const {
  linkage.validate();
  for (const ClawSpec* s : {&expandable, &unexpandable, &soft_immobile, &rigid_immobile}) {
    s->validate();
  }
  mesh.validate();
  motor.validate();
  pid.validate();
  body.validate();
  if (!(noise_sigma >= 0.0)) throw std::invalid_argument("noise_sigma must be >= 0");
  if (!(contact_depth > 0.0)) throw std::invalid_argument("contact_depth must be positive");
  if (!(start_phase_jitter >= 0.0)) throw std::invalid_argument("start_phase_jitter must be >= 0");
  if (classify_grashof(linkage) != GrashofClass::crank_rocker &&
      classify_grashof(linkage) != GrashofClass::double_crank) {
    throw std::invalid_argument("linkage crank cannot complete a revolution (" +
                                to_string(classify_grashof(linkage)) + ")");
  }
}

void TrialConfig::validate() const {
  if (!(incline >= 0.0 && incline < 90.0)) throw ConfigInvalid("incline must lie in [0, 90) deg");
  if (step_budget < 0) throw ConfigInvalid("step_budget must be >= 0");
  if (duration < 0.0) throw ConfigInvalid("duration must be >= 0");
  if (step_budget == 0 && duration == 0.0) {
    throw ConfigInvalid("a trial needs a step budget or a duration");
  }
}

LegTip leg_tip(const LinkageParams& linkage, const ClawSpec& spec, double crank_deg) {
  const ClosurePose pose = solve_closure(linkage, crank_deg, Branch::open);
  const ClawAngles claw = claw_angles(spec, cam_cable_pull(linkage, crank_deg));
  const TipPose tip = tip_pose(linkage, pose, claw);
  return {-tip.x, -tip.y, claw};
}

LegOrbit analyze_leg_orbit(const LinkageParams& linkage, const ClawSpec& spec,
                           double contact_depth, double resolution_deg) {
  const int n = static_cast<int>(std::lround(360.0 / resolution_deg));
  std::vector<LegTip> tips(static_cast<std::size_t>(n));
  double min_y = 1e300;
  for (int k = 0; k < n; ++k) {
    tips[static_cast<std::size_t>(k)] = leg_tip(linkage, spec, k * resolution_deg);
    min_y = std::min(min_y, tips[static_cast<std::size_t>(k)].y);
  }

  LegOrbit orbit;
  orbit.plane_y = min_y + contact_depth;
  auto inside = [&](int k) { return tips[static_cast<std::size_t>((k % n + n) % n)].y <= orbit.plane_y; };

  int touchdowns = 0;
  int td = -1;
  int lo = -1;
  for (int k = 0; k < n; ++k) {
    if (inside(k) && !inside(k - 1)) {
      ++touchdowns;
      td = k;
    }
    if (!inside(k) && inside(k - 1)) lo = k;
  }
  if (touchdowns != 1) {
    throw ConfigInvalid("claw tip must enter the contact band exactly once per revolution");
  }

  orbit.touchdown_angle = td * resolution_deg;
  orbit.liftoff_angle = lo * resolution_deg;
  orbit.stance_arc = wrap_deg360(orbit.liftoff_angle - orbit.touchdown_angle);
  double push = 0.0;
  for (int k = td; k != lo; k = (k + 1) % n) {
    const int next = (k + 1) % n;
    push -= tips[static_cast<std::size_t>(next)].x - tips[static_cast<std::size_t>(k)].x;
  }
  orbit.kinematic_stroke = push;
  orbit.open_at_touchdown = tips[static_cast<std::size_t>(td)].claw.open;
  orbit.open_at_liftoff = tips[static_cast<std::size_t>(lo)].claw.open;
  return orbit;
}

double stroke_per_step(const RobotBody& body, double incline_deg, int n_supporting,
                       const ClawSpec& spec, double kinematic_stroke) {
  if (n_supporting != 1 && n_supporting != 2) {
    throw std::invalid_argument("n_supporting must be 1 (tripod) or 2 (gallop)");
  }
  const double load = body.mass * body.gravity * std::sin(deg_to_rad(incline_deg)) / n_supporting;
  return std::max(0.0, kinematic_stroke - tip_deflection(spec, load));
}

namespace {

enum class LegMode { airborne, unloaded, engaged, missed };

struct LegState {
  const char* name = "left";
  double lateral = 0.0;  // mm, in-plane offset across the incline
  LegMode mode = LegMode::airborne;
  EngagementState engagement;
  double slack = 0.0;   // compliance still to be taken up, mm
  bool supported = false;
  bool engaged_this_step = false;
  double push_this_step = 0.0;
  LegTip prev;
  bool prev_inside = false;
  Rng rng{0};
};

}  // namespace

TrialRecord simulate_climb(const TrialConfig& cfg, const SimParams& params) {
  cfg.validate();
  params.validate();

  TrialRecord rec;
  rec.config = cfg;
  rec.summary.step_budget = cfg.step_budget;

  const ClawSpec& spec = params.claw(cfg.claw_variant);
  const LegOrbit orbit = analyze_leg_orbit(params.linkage, spec, params.contact_depth);
  const bool on_mesh = cfg.surface == Surface::mesh;
  const int n_supporting = cfg.gait.gait == GaitKind::gallop ? 2 : 1;
  const double load =
      params.body.mass * params.body.gravity * std::sin(deg_to_rad(cfg.incline)) / n_supporting;
  const double deflection = tip_deflection(spec, load);

  Rng rng(cfg.seed);
  // Hand placement of the robot relative to the wire grid.
  const double grid_x = rng.uniform(0.0, params.mesh.cell_pitch);
  const double grid_y = rng.uniform(0.0, params.mesh.cell_pitch);
  const double jitter = rng.uniform(-params.start_phase_jitter, params.start_phase_jitter);

  MotorPlant left_plant = params.motor;
  left_plant.mismatch_factor = 1.0;
  TwoLegDrive drive(left_plant, params.motor, params.pid, cfg.gait, cfg.control_mode,
                    params.timing);
  const double start_left = orbit.liftoff_angle;
  drive.set_leg_angles(start_left, start_left - cfg.gait.target_phase_diff + jitter);

  LegState legs[2];
  legs[0].name = "left";
  legs[1].name = "right";
  legs[0].lateral = -params.body.body_width / 2.0;
  legs[1].lateral = params.body.body_width / 2.0;
  legs[0].rng = rng.split();
  legs[1].rng = rng.split();
  const double angles[2] = {drive.left_angle(), drive.right_angle()};
  for (int i = 0; i < 2; ++i) {
    legs[i].prev = leg_tip(params.linkage, spec, angles[i]);
    legs[i].prev_inside = legs[i].prev.y <= orbit.plane_y;
    legs[i].mode = legs[i].prev_inside ? LegMode::unloaded : LegMode::airborne;
  }

  const double dt = params.timing.plant_dt;
  const std::int64_t log_every =
      std::max<std::int64_t>(1, std::llround(params.timing.control_dt / dt));
  const std::int64_t max_ticks =
      cfg.duration > 0.0 ? static_cast<std::int64_t>(std::llround(cfg.duration / dt))
                         : std::numeric_limits<std::int64_t>::max();

  double body = 0.0;
  double step_start_body = 0.0;
  int step = 1;
  bool stuck = false;

  auto log_tick = [&]() {
    const EncoderState le = drive.left_encoder();
    const EncoderState re = drive.right_encoder();
    rec.ticks.push_back({drive.time(), leg_phase_deg(le), leg_phase_deg(re),
                         phase_difference(le, re), drive.voltages().left, drive.voltages().right,
                         body});
  };
  auto close_step = [&](bool stuck_step) {
    StepRow row;
    row.step = step;
    row.left_engaged = legs[0].engaged_this_step;
    row.right_engaged = legs[1].engaged_this_step;
    row.stroke = std::max(legs[0].push_this_step, legs[1].push_this_step);
    row.displacement = body - step_start_body;
    row.stuck = stuck_step;
    rec.steps.push_back(row);
    for (auto& leg : legs) {
      leg.engaged_this_step = leg.mode == LegMode::engaged;
      leg.push_this_step = 0.0;
    }
    step_start_body = body;
  };

  log_tick();
  while (!stuck && drive.ticks() < max_ticks) {
    drive.tick();
    const double now = drive.time();
    const double crank[2] = {drive.left_angle(), drive.right_angle()};
    const bool any_engaged_before =
        legs[0].mode == LegMode::engaged || legs[1].mode == LegMode::engaged;

    double advance = 0.0;
    for (int i = 0; i < 2 && !stuck; ++i) {
      LegState& leg = legs[i];
      const LegTip tip = leg_tip(params.linkage, spec, crank[i]);
      const bool inside = tip.y <= orbit.plane_y;
      const double normal_velocity = (tip.y - leg.prev.y) / dt;
      const Vec2 on_grid{grid_x + body + tip.x, grid_y + leg.lateral};

      if (inside && !leg.prev_inside) {
        leg.supported = any_engaged_before;
        if (on_mesh) {
          leg.engagement = attempt_engage(params.mesh, {on_grid, normal_velocity}, tip.claw, spec,
                                          params.rules, params.noise_sigma, leg.rng);
        } else {
          leg.engagement = {EngagementStatus::engaged, std::nullopt};
        }
        if (leg.engagement.status == EngagementStatus::engaged) {
          leg.mode = LegMode::engaged;
          leg.slack = deflection;
          leg.engaged_this_step = true;
          if (on_mesh) rec.events.push_back({now, leg.name, "engage", leg.engagement.anchor});
        } else {
          leg.mode = LegMode::missed;
          rec.events.push_back({now, leg.name, "miss", std::nullopt});
        }
      } else if (inside && leg.mode == LegMode::engaged) {
        double push = -(tip.x - leg.prev.x);
        if (push > 0.0) {
          const double taken = std::min(leg.slack, push);
          leg.slack -= taken;
          push -= taken;
        } else {
          // Forward travel of an anchored tip unloads the claw.
          leg.slack = std::min(deflection, leg.slack - push);
          push = 0.0;
        }
        leg.push_this_step += push;
        advance += 0.5 * push;
      } else if (!inside && leg.prev_inside) {
        if (leg.mode == LegMode::engaged) {
          if (on_mesh) {
            leg.engagement = attempt_release(leg.engagement, tip.claw, spec, params.rules,
                                             normal_velocity, leg.rng);
          } else {
            leg.engagement = {};
          }
          if (leg.engagement.status == EngagementStatus::stuck) {
            rec.events.push_back({now, leg.name, "stuck", leg.engagement.anchor});
            stuck = true;
          } else if (on_mesh) {
            rec.events.push_back({now, leg.name, "release", std::nullopt});
          }
        } else if (leg.mode == LegMode::missed && on_mesh && cfg.incline > 0.0 &&
                   !leg.supported) {
          rec.events.push_back({now, leg.name, "slip", std::nullopt});
          stuck = true;
        }
        leg.mode = LegMode::airborne;
      }
      if (inside && leg.mode == LegMode::missed) {
        const LegState& other = legs[1 - i];
        if (other.mode == LegMode::engaged) leg.supported = true;
      }
      leg.prev = tip;
      leg.prev_inside = inside;
    }
    body += advance;

    if (drive.ticks() % log_every == 0) log_tick();
    if (stuck) break;
    if (drive.left_angle() - start_left >= 360.0 * step) {
      close_step(false);
      ++step;
      if (cfg.step_budget > 0 && step > cfg.step_budget) break;
    }
  }

  rec.summary.stuck = stuck;
  if (stuck) close_step(true);
  rec.summary.steps_completed = static_cast<int>(
      std::count_if(rec.steps.begin(), rec.steps.end(), [](const StepRow& r) { return !r.stuck; }));
  rec.summary.steps_recorded = static_cast<int>(rec.steps.size());
  rec.summary.displacement = body;
  rec.summary.elapsed = drive.time();
  rec.summary.average_velocity = rec.summary.elapsed > 0.0 ? body / rec.summary.elapsed : 0.0;
  return rec;
}

double success_rate(const std::vector<TrialRecord>& trials) {
  if (trials.empty()) throw EmptyInput("success_rate needs at least one trial");
  const int budget = trials.front().summary.step_budget;
  long before = 0;
  long recorded = 0;
  for (const auto& t : trials) {
    if (t.summary.step_budget != budget) {
      throw std::invalid_argument("success_rate requires a common step budget");
    }
    before += t.summary.steps_completed;
    recorded += t.summary.steps_recorded;
  }
  if (recorded == 0) throw EmptyInput("no recorded steps");
  return static_cast<double>(before) / static_cast<double>(recorded);
}

MeanSd mean_sd(const std::vector<double>& xs) {
  MeanSd r;
  if (xs.empty()) return r;
  for (double x : xs) r.mean += x;
  r.mean /= static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - r.mean) * (x - r.mean);
    r.sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return r;
}

std::vector<TrialRecord> run_trials(const std::vector<TrialConfig>& configs,
                                    const SimParams& params, int jobs) {
  std::vector<TrialRecord> out(configs.size());
  const auto workers = static_cast<std::size_t>(
      std::clamp<long>(jobs, 1, static_cast<long>(std::max<std::size_t>(1, configs.size()))));
  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (std::size_t i = next++; i < configs.size(); i = next++) {
      out[i] = simulate_climb(configs[i], params);
    }
  };
  if (workers == 1) {
    work();
    return out;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  pool.clear();
  return out;
}

std::vector<VelocityRow> velocity_vs_incline(const std::vector<double>& inclines, GaitKind gait,
                                             const std::vector<std::uint64_t>& seeds,
                                             const TrialConfig& base, const SimParams& params,
                                             int jobs) {
  if (!std::is_sorted(inclines.begin(), inclines.end())) {
    throw std::invalid_argument("inclines must be sorted ascending");
  }
  std::vector<TrialConfig> configs;
  for (double incline : inclines) {
    for (auto seed : seeds) {
      TrialConfig c = base;
      c.incline = incline;
      c.gait = GaitCommand::for_gait(gait);
      c.seed = seed;
      configs.push_back(c);
    }
  }
  const auto records = run_trials(configs, params, jobs);
  std::vector<VelocityRow> rows;
  std::size_t k = 0;
  for (double incline : inclines) {
    std::vector<double> v;
    for (std::size_t s = 0; s < seeds.size(); ++s) v.push_back(records[k++].summary.average_velocity);
    const MeanSd ms = mean_sd(v);
    rows.push_back({incline, gait, ms.mean, ms.sd, static_cast<int>(v.size())});
  }
  return rows;
}

}  // namespace meshclimb
