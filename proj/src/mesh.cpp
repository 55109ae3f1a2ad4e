#include "meshclimb/mesh.hpp"

#include <cmath>
#include <stdexcept>

namespace meshclimb {

void MeshLattice::validate() const {
  if (!(cell_pitch > 2.0 * wire_radius) || !(wire_radius >= 0.0)) {
    throw std::invalid_argument("mesh cell_pitch must exceed the wire diameter");
  }
  if (!(capture_radius >= 0.0) || capture_radius > cell_pitch / 2.0) {
    throw std::invalid_argument("mesh capture_radius must lie in [0, cell_pitch/2]");
  }
}

std::string to_string(EngagementStatus s) {
  switch (s) {
    case EngagementStatus::detached: return "detached";
    case EngagementStatus::engaged: return "engaged";
    case EngagementStatus::stuck: return "stuck";
  }
  return "unknown";
}

WireHit nearest_wire(const MeshLattice& lattice, Vec2 point) {
  const double p = lattice.cell_pitch;
  const double ix = std::round(point.x / p);
  const double iy = std::round(point.y / p);
  const double dx = std::abs(point.x - ix * p);
  const double dy = std::abs(point.y - iy * p);

  WireHit hit;
  hit.crossing = {static_cast<long>(ix), static_cast<long>(iy)};
  if (dx <= dy) {
    hit.wire_point = {ix * p, point.y};
    hit.distance = dx;
  } else {
    hit.wire_point = {point.x, iy * p};
    hit.distance = dy;
  }
  return hit;
}

EngagementState attempt_engage(const MeshLattice& lattice, const TipContact& tip,
                               const ClawAngles& claw, const ClawSpec& spec,
                               const EngageRules& rules, double noise_sigma, Rng& rng) {
  (void)spec;
  Vec2 landing = tip.pos;
  if (noise_sigma > 0.0) {
    landing.x += rng.normal(0.0, noise_sigma);
    landing.y += rng.normal(0.0, noise_sigma);
  }
  if (claw.open < rules.engage_open_threshold || tip.normal_velocity >= 0.0) {
    return {};
  }
  const WireHit hit = nearest_wire(lattice, landing);
  if (hit.distance > lattice.capture_radius) return {};
  return {EngagementStatus::engaged, hit.crossing};
}

EngagementState attempt_release(const EngagementState& state, const ClawAngles& claw,
                                const ClawSpec& spec, const EngageRules& rules,
                                double normal_velocity, Rng& rng) {
  if (state.status != EngagementStatus::engaged || normal_velocity <= 0.0) return state;
  if (claw.open <= rules.release_open_threshold) return {};
  if (rng.bernoulli(spec.p_snagfree)) return {};
  return {EngagementStatus::stuck, state.anchor};
}

}  // namespace meshclimb
