#pragma once

#include <optional>
#include <string>

#include "meshclimb/claw.hpp"
#include "meshclimb/rng.hpp"
#include "meshclimb/units.hpp"

namespace meshclimb {

/// Square wire grid in the incline plane. Wire centrelines lie on x = i*pitch
/// and y = j*pitch.
struct MeshLattice {
  double cell_pitch = 2.56;    // mm
  double wire_radius = 0.15;   // mm
  double capture_radius = 1.1; // mm

  void validate() const;
};

/// Claw-opening thresholds for hooking and for a clean release.
struct EngageRules {
  double engage_open_threshold = 20.0;   // deg
  double release_open_threshold = 5.0;   // deg
};

struct LatticeNode {
  long i = 0;
  long j = 0;
  friend bool operator==(const LatticeNode&, const LatticeNode&) = default;
};

struct WireHit {
  Vec2 wire_point;
  double distance = 0.0;  // mm
  LatticeNode crossing;   // nearest wire crossing
};

enum class EngagementStatus { detached, engaged, stuck };

std::string to_string(EngagementStatus s);

struct EngagementState {
  EngagementStatus status = EngagementStatus::detached;
  std::optional<LatticeNode> anchor;
};

/// Claw tip as seen by the mesh: in-plane position and the velocity along the
/// plane normal (negative when moving toward the mesh).
struct TipContact {
  Vec2 pos;
  double normal_velocity = 0.0;  // mm/s
};

WireHit nearest_wire(const MeshLattice& lattice, Vec2 point);

/// Hooks the claw when it is open wide enough, descending, and the
/// noise-perturbed tip lands within the capture radius of a wire. Draws two
/// normal variates from rng whenever noise_sigma > 0.
EngagementState attempt_engage(const MeshLattice& lattice, const TipContact& tip,
                               const ClawAngles& claw, const ClawSpec& spec,
                               const EngageRules& rules, double noise_sigma, Rng& rng);

/// Close-before-lift rule: a claw that is closed when the tip moves away
/// detaches; otherwise it clears the wire with probability spec.p_snagfree
/// and sticks if not. A descending tip never releases.
EngagementState attempt_release(const EngagementState& state, const ClawAngles& claw,
                                const ClawSpec& spec, const EngageRules& rules,
                                double normal_velocity, Rng& rng);

}  // namespace meshclimb
