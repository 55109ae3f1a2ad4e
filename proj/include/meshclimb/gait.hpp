#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace meshclimb {

/// First-order geared DC motor. Speeds are motor-shaft rev/s.
struct MotorPlant {
  double no_load_speed = 100.0;  // rev/s at 5 V
  double time_constant = 0.05;   // s
  double gear_ratio = 150.0;
  double mismatch_factor = 1.0;
  int encoder_counts = 24;       // per motor revolution

  void validate() const;
};

struct MotorState {
  double speed = 0.0;       // motor rev/s
  double shaft_revs = 0.0;  // accumulated motor revolutions
};

struct EncoderState {
  std::int64_t counts = 0;
  int counts_per_motor_rev = 24;
  double gear_ratio = 150.0;
};

struct PidGains {
  double kp = 0.05;    // V/deg
  double ki = 0.02;    // V/(deg*s)
  double kd = 0.002;   // V*s/deg
  double integral_clamp = 100.0;  // deg*s
  double v_min = 0.0;
  double v_max = 5.0;
  double nominal_voltage = 5.0;

  void validate() const;
};

enum class GaitKind { tripod, gallop };
enum class ControlMode { open_loop, closed_loop };

std::string to_string(GaitKind g);
std::string to_string(ControlMode m);
GaitKind gait_from_string(const std::string& s);
ControlMode control_mode_from_string(const std::string& s);

struct GaitCommand {
  GaitKind gait = GaitKind::tripod;
  double target_phase_diff = 180.0;  // deg

  static GaitCommand for_gait(GaitKind g) {
    return {g, g == GaitKind::tripod ? 180.0 : 0.0};
  }
};

struct PidState {
  double integral = 0.0;    // deg*s
  double prev_error = 0.0;  // deg
  bool primed = false;
};

struct VoltagePair {
  double left = 0.0;
  double right = 0.0;
};

/// Advances the motor by dt with the exact first-order response to a constant
/// voltage held over the step.
MotorState step_plant(const MotorPlant& plant, double command_voltage, double dt,
                      const MotorState& state);

/// Leg crank angle in degrees (unwrapped) implied by the motor shaft position.
double leg_angle_deg(const MotorPlant& plant, const MotorState& state);

EncoderState read_encoder(const MotorState& state, int counts_per_motor_rev = 24,
                          double gear_ratio = 150.0);

/// Leg phase in [0, 360) from quantized counts.
double leg_phase_deg(const EncoderState& enc);

/// left - right leg phase, wrapped to (-180, 180].
double phase_difference(const EncoderState& left, const EncoderState& right);

/// Open loop: both motors at the nominal voltage. Closed loop: PID on the
/// wrapped phase error drives the right motor; correction the right motor
/// cannot absorb because of saturation is taken off the left motor.
VoltagePair controller_step(ControlMode mode, const PidGains& gains, const GaitCommand& cmd,
                            const EncoderState& left, const EncoderState& right, double dt,
                            PidState& pid);

struct DriveTiming {
  double plant_dt = 1e-3;    // s
  double control_dt = 1e-2;  // s
};

/// Two-motor leg drive with quantized encoders and a sampled controller.
class TwoLegDrive {
 public:
  TwoLegDrive(MotorPlant left, MotorPlant right, PidGains gains, GaitCommand cmd,
              ControlMode mode, DriveTiming timing = {});

  /// Places the legs at the given crank angles (deg) at rest.
  void set_leg_angles(double left_deg, double right_deg);

  /// One plant step; runs the controller when its period elapses.
  void tick();

  double time() const { return static_cast<double>(ticks_) * timing_.plant_dt; }
  std::int64_t ticks() const { return ticks_; }
  double left_angle() const { return leg_angle_deg(left_plant_, left_); }
  double right_angle() const { return leg_angle_deg(right_plant_, right_); }
  EncoderState left_encoder() const;
  EncoderState right_encoder() const;
  double measured_phase_diff() const { return phase_difference(left_encoder(), right_encoder()); }
  VoltagePair voltages() const { return volts_; }
  const DriveTiming& timing() const { return timing_; }
  const MotorPlant& left_plant() const { return left_plant_; }

 private:
  MotorPlant left_plant_;
  MotorPlant right_plant_;
  PidGains gains_;
  GaitCommand cmd_;
  ControlMode mode_;
  DriveTiming timing_;
  int control_every_ = 10;
  MotorState left_;
  MotorState right_;
  PidState pid_;
  VoltagePair volts_;
  std::int64_t ticks_ = 0;
};

struct PhaseLogRow {
  double t = 0.0;            // s
  double left_phase = 0.0;   // deg
  double right_phase = 0.0;  // deg
  double diff = 0.0;         // deg
  double v_left = 0.0;       // V
  double v_right = 0.0;      // V
};

struct PhaseDriftRun {
  double initial_diff = 0.0;  // deg, measured at the start
  double final_diff = 0.0;    // deg, measured when the left leg completes `cycles`
  double change = 0.0;        // deg, unwrapped change between the two
  std::vector<PhaseLogRow> log;  // one row per controller period
};

/// Runs the drive from rest until the left leg has completed `cycles` full
/// revolutions. The right leg starts `target + initial_offset_deg` behind.
PhaseDriftRun run_phase_drift(const MotorPlant& left, const MotorPlant& right,
                              const PidGains& gains, const GaitCommand& cmd, ControlMode mode,
                              const DriveTiming& timing, double initial_offset_deg, int cycles);

}  // namespace meshclimb
