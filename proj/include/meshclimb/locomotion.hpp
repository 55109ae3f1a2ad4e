#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "meshclimb/claw.hpp"
#include "meshclimb/gait.hpp"
#include "meshclimb/linkage.hpp"
#include "meshclimb/mesh.hpp"

namespace meshclimb {

struct RobotBody {
  double mass = 0.050;        // kg
  double body_length = 80.0;  // mm
  double body_width = 70.0;   // mm
  int support_legs = 2;       // tibial-spur rear supports
  double gravity = 9.81;      // m/s^2

  void validate() const;
};

enum class Surface { mesh, flat };
std::string to_string(Surface s);
Surface surface_from_string(const std::string& s);

/// Every model parameter a trial depends on, apart from the per-trial setup.
struct SimParams {
  LinkageParams linkage;
  ClawSpec expandable = default_claw_spec(ClawVariant::expandable);
  ClawSpec unexpandable = default_claw_spec(ClawVariant::unexpandable);
  ClawSpec soft_immobile = default_claw_spec(ClawVariant::soft_immobile);
  ClawSpec rigid_immobile = default_claw_spec(ClawVariant::rigid_immobile);
  MeshLattice mesh;
  EngageRules rules;
  double noise_sigma = 0.4;    // mm, in-plane placement noise per touchdown
  double contact_depth = 3.0;  // mm, tip travel below first contact
  MotorPlant motor;            // mismatch_factor applies to the right motor
  PidGains pid;
  DriveTiming timing;
  double start_phase_jitter = 5.0;  // deg, uniform +/- on the right leg
  RobotBody body;

  SimParams();
  const ClawSpec& claw(ClawVariant v) const;
  ClawSpec& claw(ClawVariant v);
  void validate() const;
};

struct TrialConfig {
  double incline = 30.0;  // deg
  Surface surface = Surface::mesh;
  ClawVariant claw_variant = ClawVariant::expandable;
  GaitCommand gait = GaitCommand::for_gait(GaitKind::tripod);
  ControlMode control_mode = ControlMode::closed_loop;
  int step_budget = 9;   // 0: unlimited
  double duration = 0.0; // s, 0: unlimited
  std::uint64_t seed = 1;

  void validate() const;
};

class ConfigInvalid : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class EmptyInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Where the claw tip meets the surface over one crank revolution.
struct LegOrbit {
  double plane_y = 0.0;          // mm, leg frame
  double touchdown_angle = 0.0;  // deg, crank
  double liftoff_angle = 0.0;    // deg, crank
  double stance_arc = 0.0;       // deg
  double kinematic_stroke = 0.0; // mm, backward tip travel during stance
  double open_at_touchdown = 0.0;
  double open_at_liftoff = 0.0;
};

/// Tip in the leg frame: x forward along the incline, y along the surface
/// normal. The linkage is mounted rotated by 180 deg so the claw hangs down.
struct LegTip {
  double x = 0.0;
  double y = 0.0;
  ClawAngles claw;
};

LegTip leg_tip(const LinkageParams& linkage, const ClawSpec& spec, double crank_deg);

/// Samples one revolution; throws ConfigInvalid unless the tip enters the
/// contact band exactly once per revolution.
LegOrbit analyze_leg_orbit(const LinkageParams& linkage, const ClawSpec& spec,
                           double contact_depth, double resolution_deg = 0.05);

/// Stroke left after the claw's compliance takes up the gravity load shared by
/// n_supporting legs.
double stroke_per_step(const RobotBody& body, double incline_deg, int n_supporting,
                       const ClawSpec& spec, double kinematic_stroke);

struct StepRow {
  int step = 0;          // 1-based
  bool left_engaged = false;
  bool right_engaged = false;
  double stroke = 0.0;        // mm, largest effective push among the legs
  double displacement = 0.0;  // mm, body advance during the step
  bool stuck = false;
};

struct EventRow {
  double t = 0.0;  // s
  std::string leg;
  std::string event;  // engage, miss, release, stuck, slip
  std::optional<LatticeNode> node;
};

struct TickRow {
  double t = 0.0;
  double left_phase = 0.0;
  double right_phase = 0.0;
  double phase_diff = 0.0;
  double v_left = 0.0;
  double v_right = 0.0;
  double body = 0.0;  // mm along the incline
};

struct TrialSummary {
  int steps_completed = 0;
  int steps_recorded = 0;
  int step_budget = 0;
  bool stuck = false;
  double displacement = 0.0;      // mm
  double elapsed = 0.0;           // s
  double average_velocity = 0.0;  // mm/s
};

struct TrialRecord {
  TrialConfig config;
  std::vector<StepRow> steps;
  std::vector<EventRow> events;
  std::vector<TickRow> ticks;  // one per controller period
  TrialSummary summary;
};

TrialRecord simulate_climb(const TrialConfig& cfg, const SimParams& params);

/// Steps before stuck over all recorded steps, pooled across trials.
double success_rate(const std::vector<TrialRecord>& trials);

struct VelocityRow {
  double incline = 0.0;
  GaitKind gait = GaitKind::tripod;
  double mean = 0.0;  // mm/s
  double sd = 0.0;    // mm/s, sample
  int n = 0;
};

/// Runs `seeds.size()` trials per incline from `base` and reports mean and
/// sample s.d. of the average velocity. `jobs` caps worker threads.
std::vector<VelocityRow> velocity_vs_incline(const std::vector<double>& inclines, GaitKind gait,
                                             const std::vector<std::uint64_t>& seeds,
                                             const TrialConfig& base, const SimParams& params,
                                             int jobs = 1);

/// Runs the configs across `jobs` workers; results keep the input order.
std::vector<TrialRecord> run_trials(const std::vector<TrialConfig>& configs,
                                    const SimParams& params, int jobs = 1);

struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;
};
MeanSd mean_sd(const std::vector<double>& xs);

}  // namespace meshclimb
