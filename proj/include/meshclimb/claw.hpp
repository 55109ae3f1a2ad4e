#pragma once

#include <stdexcept>
#include <string>

namespace meshclimb {

enum class ClawVariant { expandable, unexpandable, soft_immobile, rigid_immobile };

std::string to_string(ClawVariant v);
/// Throws std::invalid_argument for an unknown name.
ClawVariant claw_variant_from_string(const std::string& name);

/// Claw transmission and compliance. Angles in degrees, pulls in mm.
struct ClawSpec {
  ClawVariant variant = ClawVariant::expandable;
  double bend_max = 60.0;
  double open_min = -5.0;
  double open_max = 45.0;
  double open_threshold_pull = 1.0;
  double max_pull = 4.0;
  double stiffness = 0.5;        // N/mm, tangential at the tip
  double max_deflection = 30.0;  // mm
  double fixed_bend = 0.0;
  double fixed_open = -5.0;
  /// Probability that a claw which cannot close clears the wire on an upswing.
  double p_snagfree = 1.0;

  void validate() const;
};

/// Calibrated defaults per variant.
ClawSpec default_claw_spec(ClawVariant variant);

struct ClawAngles {
  double bend = 0.0;
  double open = 0.0;
};

class NegativePull : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

ClawAngles claw_angles(const ClawSpec& spec, double pull_mm);

/// Linear tip compliance, saturating at max_deflection.
double tip_deflection(const ClawSpec& spec, double tangential_load_n);

}  // namespace meshclimb
