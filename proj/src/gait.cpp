#include "meshclimb/gait.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "meshclimb/units.hpp"

namespace meshclimb {

void MotorPlant::validate() const {
  if (!(no_load_speed > 0.0)) throw std::invalid_argument("motor no_load_speed must be positive");
  if (!(time_constant > 0.0)) throw std::invalid_argument("motor time_constant must be positive");
  if (!(gear_ratio > 0.0)) throw std::invalid_argument("motor gear_ratio must be positive");
  if (!(mismatch_factor > 0.0)) throw std::invalid_argument("motor mismatch_factor must be positive");
  if (encoder_counts < 1) throw std::invalid_argument("motor encoder_counts must be >= 1");
}

void PidGains::validate() const {
  if (kp < 0.0 || ki < 0.0 || kd < 0.0) throw std::invalid_argument("PID gains must be >= 0");
  if (!(integral_clamp >= 0.0)) throw std::invalid_argument("PID integral_clamp must be >= 0");
  if (!(v_min < v_max)) throw std::invalid_argument("PID command limits must satisfy v_min < v_max");
  if (nominal_voltage < v_min || nominal_voltage > v_max) {
    throw std::invalid_argument("PID nominal_voltage must lie within the command limits");
  }
}

std::string to_string(GaitKind g) { return g == GaitKind::tripod ? "tripod" : "gallop"; }
std::string to_string(ControlMode m) {
  return m == ControlMode::open_loop ? "open_loop" : "closed_loop";
}

GaitKind gait_from_string(const std::string& s) {
  if (s == "tripod") return GaitKind::tripod;
  if (s == "gallop") return GaitKind::gallop;
  throw std::invalid_argument("unknown gait '" + s + "'");
}

ControlMode control_mode_from_string(const std::string& s) {
  if (s == "open_loop") return ControlMode::open_loop;
  if (s == "closed_loop") return ControlMode::closed_loop;
  throw std::invalid_argument("unknown control mode '" + s + "'");
}

MotorState step_plant(const MotorPlant& plant, double command_voltage, double dt,
                      const MotorState& state) {
  const double target = plant.mismatch_factor * plant.no_load_speed * (command_voltage / 5.0);
  const double decay = std::exp(-dt / plant.time_constant);
  MotorState next;
  next.speed = target + (state.speed - target) * decay;
  next.shaft_revs = state.shaft_revs + target * dt +
                    (state.speed - target) * plant.time_constant * (1.0 - decay);
  return next;
}

double leg_angle_deg(const MotorPlant& plant, const MotorState& state) {
  return state.shaft_revs / plant.gear_ratio * 360.0;
}

EncoderState read_encoder(const MotorState& state, int counts_per_motor_rev, double gear_ratio) {
  EncoderState enc;
  enc.counts_per_motor_rev = counts_per_motor_rev;
  enc.gear_ratio = gear_ratio;
  enc.counts = static_cast<std::int64_t>(std::floor(state.shaft_revs * counts_per_motor_rev));
  return enc;
}

double leg_phase_deg(const EncoderState& enc) {
  const auto per_leg_rev =
      static_cast<std::int64_t>(std::llround(enc.counts_per_motor_rev * enc.gear_ratio));
  std::int64_t c = enc.counts % per_leg_rev;
  if (c < 0) c += per_leg_rev;
  return static_cast<double>(c) * 360.0 / static_cast<double>(per_leg_rev);
}

double phase_difference(const EncoderState& left, const EncoderState& right) {
  return wrap_deg180(leg_phase_deg(left) - leg_phase_deg(right));
}

VoltagePair controller_step(ControlMode mode, const PidGains& g, const GaitCommand& cmd,
                            const EncoderState& left, const EncoderState& right, double dt,
                            PidState& pid) {
  const double v0 = g.nominal_voltage;
  if (mode == ControlMode::open_loop) return {v0, v0};

  const double error = wrap_deg180(phase_difference(left, right) - cmd.target_phase_diff);
  pid.integral = std::clamp(pid.integral + error * dt, -g.integral_clamp, g.integral_clamp);
  const double derivative = pid.primed ? wrap_deg180(error - pid.prev_error) / dt : 0.0;
  pid.prev_error = error;
  pid.primed = true;

  const double u = g.kp * error + g.ki * pid.integral + g.kd * derivative;
  const double wanted_right = v0 + u;
  VoltagePair v;
  v.right = std::clamp(wanted_right, g.v_min, g.v_max);
  v.left = std::clamp(v0 - (wanted_right - v.right), g.v_min, g.v_max);
  return v;
}

TwoLegDrive::TwoLegDrive(MotorPlant left, MotorPlant right, PidGains gains, GaitCommand cmd,
                         ControlMode mode, DriveTiming timing)
    : left_plant_(left),
      right_plant_(right),
      gains_(gains),
      cmd_(cmd),
      mode_(mode),
      timing_(timing) {
  if (!(timing_.plant_dt > 0.0) || !(timing_.control_dt >= timing_.plant_dt)) {
    throw std::invalid_argument("drive timing requires 0 < plant_dt <= control_dt");
  }
  control_every_ = std::max(1, static_cast<int>(std::lround(timing_.control_dt / timing_.plant_dt)));
  volts_ = {gains_.nominal_voltage, gains_.nominal_voltage};
}

void TwoLegDrive::set_leg_angles(double left_deg, double right_deg) {
  left_ = {0.0, left_deg / 360.0 * left_plant_.gear_ratio};
  right_ = {0.0, right_deg / 360.0 * right_plant_.gear_ratio};
}

EncoderState TwoLegDrive::left_encoder() const {
  return read_encoder(left_, left_plant_.encoder_counts, left_plant_.gear_ratio);
}

EncoderState TwoLegDrive::right_encoder() const {
  return read_encoder(right_, right_plant_.encoder_counts, right_plant_.gear_ratio);
}

void TwoLegDrive::tick() {
  if (ticks_ % control_every_ == 0) {
    volts_ = controller_step(mode_, gains_, cmd_, left_encoder(), right_encoder(),
                             static_cast<double>(control_every_) * timing_.plant_dt, pid_);
  }
  left_ = step_plant(left_plant_, volts_.left, timing_.plant_dt, left_);
  right_ = step_plant(right_plant_, volts_.right, timing_.plant_dt, right_);
  ++ticks_;
}

PhaseDriftRun run_phase_drift(const MotorPlant& left, const MotorPlant& right,
                              const PidGains& gains, const GaitCommand& cmd, ControlMode mode,
                              const DriveTiming& timing, double initial_offset_deg, int cycles) {
  if (cycles <= 0) throw std::invalid_argument("cycles must be positive");
  TwoLegDrive drive(left, right, gains, cmd, mode, timing);
  drive.set_leg_angles(0.0, -(cmd.target_phase_diff + initial_offset_deg));

  PhaseDriftRun run;
  const auto log_every =
      std::max<std::int64_t>(1, std::llround(timing.control_dt / timing.plant_dt));
  auto log = [&]() {
    const EncoderState le = drive.left_encoder();
    const EncoderState re = drive.right_encoder();
    run.log.push_back({drive.time(), leg_phase_deg(le), leg_phase_deg(re),
                       phase_difference(le, re), drive.voltages().left, drive.voltages().right});
  };

  run.initial_diff = drive.measured_phase_diff();
  double prev = run.initial_diff;
  log();
  while (drive.left_angle() < 360.0 * cycles) {
    drive.tick();
    const double diff = drive.measured_phase_diff();
    run.change += wrap_deg180(diff - prev);
    prev = diff;
    if (drive.ticks() % log_every == 0) log();
  }
  run.final_diff = prev;
  return run;
}

}  // namespace meshclimb
