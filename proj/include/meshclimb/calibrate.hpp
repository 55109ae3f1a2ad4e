#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "meshclimb/locomotion.hpp"

namespace meshclimb {

/// Measured targets the calibration fits against.
struct CalibrationTargets {
  double gallop_60_velocity = 10.0;      // mm/s, flat incline
  double tripod_50_velocity = 7.5;       // mm/s, flat incline
  double expandable_velocity = 26.18;    // mm/s, 30 deg mesh
  double unexpandable_velocity = 23.23;  // mm/s, 30 deg mesh
  double soft_velocity = 13.34;          // mm/s, 30 deg mesh
  double expandable_success = 0.843;
  double unexpandable_success = 0.712;
  double soft_success = 0.370;
};

struct CalibrationResult {
  double cam_crank_offset = 0.0;
  double no_load_speed = 0.0;              // incline sweep preset
  double mesh_compare_no_load_speed = 0.0; // claw comparison preset
  double stiffness_expandable = 0.0;
  double stiffness_unexpandable = 0.0;
  double stiffness_soft = 0.0;
  double capture_radius = 0.0;
  double snagfree_unexpandable = 0.0;
  double snagfree_soft = 0.0;
  std::vector<std::string> log;
};

/// Trial setups shared by the presets and the calibration.
TrialConfig incline_sweep_trial(double incline, GaitKind gait, std::uint64_t seed);
TrialConfig claw_compare_trial(ClawVariant variant, std::uint64_t seed);

/// Cam offset maximising the opening margins at touchdown and lift-off while
/// the opening peak falls on the descending part of the tip orbit.
double fit_cam_offset(const LinkageParams& linkage, const ClawSpec& spec, double contact_depth,
                      const EngageRules& rules);

/// Grid/bisection fit of the free parameters against the targets, on the
/// given seeds. `base` supplies every parameter that is not fitted.
CalibrationResult calibrate(const SimParams& base, const CalibrationTargets& targets,
                            const std::vector<std::uint64_t>& seeds, int jobs,
                            const std::function<void(const std::string&)>& progress = {});

/// Applies the fitted values to a parameter set. The claw-comparison motor
/// speed is kept separately by the presets.
void apply_calibration(const CalibrationResult& result, SimParams& params);

}  // namespace meshclimb
