#include <cmath>

#include "doctest.h"
#include "meshclimb/mesh.hpp"

using namespace meshclimb;

namespace {
double brute_nearest(double pitch, Vec2 p) {
  // Distance to the four wires bounding the cell that holds p.
  const double x0 = std::floor(p.x / pitch) * pitch;
  const double y0 = std::floor(p.y / pitch) * pitch;
  return std::min({std::abs(p.x - x0), std::abs(x0 + pitch - p.x), std::abs(p.y - y0),
                   std::abs(y0 + pitch - p.y)});
}

const ClawSpec kExpandable = default_claw_spec(ClawVariant::expandable);
}  // namespace

TEST_CASE("default lattice") {
  const MeshLattice m;
  CHECK(m.cell_pitch == 2.56);
  CHECK_NOTHROW(m.validate());
  MeshLattice bad;
  bad.cell_pitch = -1.0;
  CHECK_THROWS(bad.validate());
  bad = MeshLattice{};
  bad.capture_radius = 1.5;
  CHECK_THROWS(bad.validate());
}

TEST_CASE("nearest_wire") {
  const MeshLattice m;
  CHECK(nearest_wire(m, {2.56, 1.0}).distance == doctest::Approx(0.0));
  CHECK(nearest_wire(m, {1.28, 1.28}).distance == doctest::Approx(1.28));
  CHECK(nearest_wire(m, {0.7, 0.9}).distance == doctest::Approx(0.7));
  CHECK(nearest_wire(m, {0.7, 0.9}).distance == doctest::Approx(brute_nearest(2.56, {0.7, 0.9})));

  Rng rng(7);
  for (int i = 0; i < 2000; ++i) {
    const Vec2 p{rng.uniform(-30.0, 30.0), rng.uniform(-30.0, 30.0)};
    const auto hit = nearest_wire(m, p);
    CHECK(hit.distance == doctest::Approx(brute_nearest(2.56, p)).epsilon(1e-12));
    CHECK(norm(hit.wire_point - p) == doctest::Approx(hit.distance));
  }
}

TEST_CASE("attempt_engage") {
  const MeshLattice m;
  const EngageRules rules;
  Rng rng(1);
  const ClawAngles open{30.0, 45.0};

  const auto on_crossing = attempt_engage(m, {{5.12, 2.56}, -20.0}, open, kExpandable, rules, 0.0, rng);
  CHECK(on_crossing.status == EngagementStatus::engaged);
  REQUIRE(on_crossing.anchor.has_value());
  CHECK(*on_crossing.anchor == LatticeNode{2, 1});

  MeshLattice wide = m;
  wide.capture_radius = 1.0;
  const auto centre = attempt_engage(wide, {{1.28, 1.28}, -20.0}, open, kExpandable, rules, 0.0, rng);
  CHECK(centre.status == EngagementStatus::detached);
  CHECK_FALSE(centre.anchor.has_value());

  // Rising tip never hooks.
  CHECK(attempt_engage(m, {{5.12, 2.56}, 5.0}, open, kExpandable, rules, 0.0, rng).status ==
        EngagementStatus::detached);

  const ClawSpec rigid = default_claw_spec(ClawVariant::rigid_immobile);
  for (int i = 0; i < 100; ++i) {
    const auto s = attempt_engage(m, {{5.12, 2.56}, -20.0}, {rigid.fixed_bend, rigid.fixed_open},
                                  rigid, rules, 0.4, rng);
    CHECK(s.status == EngagementStatus::detached);
  }
}

TEST_CASE("attempt_release") {
  const EngageRules rules;
  Rng rng(3);
  const EngagementState engaged{EngagementStatus::engaged, LatticeNode{0, 0}};

  CHECK(attempt_release(engaged, {0.0, -5.0}, kExpandable, rules, 10.0, rng).status ==
        EngagementStatus::detached);
  // Descending: stays hooked whatever the claw does.
  CHECK(attempt_release(engaged, {0.0, -5.0}, kExpandable, rules, -10.0, rng).status ==
        EngagementStatus::engaged);

  ClawSpec never = default_claw_spec(ClawVariant::unexpandable);
  never.p_snagfree = 0.0;
  const auto stuck = attempt_release(engaged, {0.0, 25.0}, never, rules, 10.0, rng);
  CHECK(stuck.status == EngagementStatus::stuck);
  CHECK(stuck.anchor.has_value());
  // Stuck is absorbing.
  CHECK(attempt_release(stuck, {0.0, -5.0}, kExpandable, rules, 10.0, rng).status ==
        EngagementStatus::stuck);

  ClawSpec half = never;
  half.p_snagfree = 0.5;
  int freed = 0;
  for (int i = 0; i < 4000; ++i) {
    freed += attempt_release(engaged, {0.0, 25.0}, half, rules, 10.0, rng).status ==
             EngagementStatus::detached;
  }
  CHECK(freed / 4000.0 == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("seeded engagement is reproducible") {
  const MeshLattice m;
  const EngageRules rules;
  Rng a(99), b(99);
  for (int i = 0; i < 500; ++i) {
    const Vec2 p{0.37 * i, 0.11 * i};
    const auto sa = attempt_engage(m, {p, -1.0}, {30.0, 45.0}, kExpandable, rules, 0.4, a);
    const auto sb = attempt_engage(m, {p, -1.0}, {30.0, 45.0}, kExpandable, rules, 0.4, b);
    CHECK(sa.status == sb.status);
    CHECK(sa.anchor == sb.anchor);
  }
}
