#include "meshclimb/claw.hpp"

#include <algorithm>
#include <cmath>

#include "meshclimb/calibration.hpp"

namespace meshclimb {

std::string to_string(ClawVariant v) {
  switch (v) {
    case ClawVariant::expandable: return "expandable";
    case ClawVariant::unexpandable: return "unexpandable";
    case ClawVariant::soft_immobile: return "soft_immobile";
    case ClawVariant::rigid_immobile: return "rigid_immobile";
  }
  return "unknown";
}

ClawVariant claw_variant_from_string(const std::string& name) {
  for (auto v : {ClawVariant::expandable, ClawVariant::unexpandable, ClawVariant::soft_immobile,
                 ClawVariant::rigid_immobile}) {
    if (to_string(v) == name) return v;
  }
  throw std::invalid_argument("unknown claw variant '" + name + "'");
}

void ClawSpec::validate() const {
  if (!(open_min < open_max)) throw std::invalid_argument("claw open_min must be < open_max");
  if (!(open_threshold_pull >= 0.0 && open_threshold_pull < max_pull)) {
    throw std::invalid_argument("claw requires 0 <= open_threshold_pull < max_pull");
  }
  if (!(stiffness > 0.0)) throw std::invalid_argument("claw stiffness must be positive");
  if (!(max_deflection >= 0.0)) throw std::invalid_argument("claw max_deflection must be >= 0");
  if (!(bend_max >= 0.0)) throw std::invalid_argument("claw bend_max must be >= 0");
  if (!(p_snagfree >= 0.0 && p_snagfree <= 1.0)) {
    throw std::invalid_argument("claw p_snagfree must lie in [0, 1]");
  }
}

ClawSpec default_claw_spec(ClawVariant variant) {
  ClawSpec s;
  s.variant = variant;
  switch (variant) {
    case ClawVariant::expandable:
      s.stiffness = calibrated::kStiffnessExpandable;
      break;
    case ClawVariant::unexpandable:
      // Permanently half-open hook: engages, but cannot close before lift-off.
      s.fixed_open = 25.0;
      s.stiffness = calibrated::kStiffnessUnexpandable;
      s.p_snagfree = calibrated::kSnagfreeUnexpandable;
      break;
    case ClawVariant::soft_immobile:
      s.fixed_bend = 0.0;
      s.fixed_open = 25.0;
      s.stiffness = calibrated::kStiffnessSoft;
      s.p_snagfree = calibrated::kSnagfreeSoft;
      break;
    case ClawVariant::rigid_immobile:
      s.fixed_bend = 0.0;
      s.fixed_open = -5.0;
      s.stiffness = calibrated::kStiffnessRigid;
      break;
  }
  return s;
}

ClawAngles claw_angles(const ClawSpec& spec, double pull_mm) {
  if (pull_mm < 0.0) throw NegativePull("cable pull must be non-negative");
  if (spec.variant == ClawVariant::soft_immobile || spec.variant == ClawVariant::rigid_immobile) {
    return {spec.fixed_bend, spec.fixed_open};
  }
  const double bend_frac = std::clamp(pull_mm / spec.max_pull, 0.0, 1.0);
  ClawAngles a;
  a.bend = spec.bend_max * bend_frac;
  if (spec.variant == ClawVariant::expandable) {
    const double open_frac = std::clamp(
        (pull_mm - spec.open_threshold_pull) / (spec.max_pull - spec.open_threshold_pull), 0.0, 1.0);
    a.open = spec.open_min + (spec.open_max - spec.open_min) * open_frac;
  } else {
    a.open = spec.fixed_open;
  }
  return a;
}

double tip_deflection(const ClawSpec& spec, double tangential_load_n) {
  return std::min(std::max(tangential_load_n, 0.0) / spec.stiffness, spec.max_deflection);
}

}  // namespace meshclimb
