#include <cmath>

#include "doctest.h"
#include "meshclimb/calibrate.hpp"
#include "meshclimb/locomotion.hpp"

using namespace meshclimb;

namespace {

TrialRecord fake_trial(int clean_steps, bool stuck, int budget = 9) {
  TrialRecord r;
  r.summary.step_budget = budget;
  r.summary.steps_completed = clean_steps;
  r.summary.steps_recorded = clean_steps + (stuck ? 1 : 0);
  r.summary.stuck = stuck;
  return r;
}

std::vector<std::uint64_t> seed_range(std::uint64_t first, std::uint64_t n) {
  std::vector<std::uint64_t> s;
  for (std::uint64_t i = 0; i < n; ++i) s.push_back(first + i);
  return s;
}

}  // namespace

TEST_CASE("body defaults") {
  const RobotBody b;
  CHECK(b.mass == 0.050);
  CHECK(b.body_length == 80.0);
  CHECK(b.body_width == 70.0);
}

TEST_CASE("stroke_per_step") {
  const RobotBody body;
  const ClawSpec spec = default_claw_spec(ClawVariant::expandable);
  CHECK(stroke_per_step(body, 0.0, 1, spec, 20.0) == 20.0);
  double prev_t = 1e9, prev_g = 1e9;
  for (int inc = 0; inc < 90; inc += 5) {
    const double t = stroke_per_step(body, inc, 1, spec, 20.0);
    const double g = stroke_per_step(body, inc, 2, spec, 20.0);
    CHECK(g >= t);
    CHECK(t <= prev_t);
    CHECK(g <= prev_g);
    CHECK(t >= 0.0);
    prev_t = t;
    prev_g = g;
  }
  // Direct evaluation: load 0.05 * 9.81 * sin(30) = 0.24525 N on one leg.
  ClawSpec s;
  s.stiffness = 0.5;
  CHECK(stroke_per_step(body, 30.0, 1, s, 3.0) == doctest::Approx(3.0 - 0.4905));
  CHECK_THROWS(stroke_per_step(body, 30.0, 3, s, 3.0));
}

TEST_CASE("default orbit is phased for hooking and clean release") {
  const SimParams p;
  const LegOrbit o = analyze_leg_orbit(p.linkage, p.expandable, p.contact_depth);
  CHECK(o.open_at_touchdown >= p.rules.engage_open_threshold);
  CHECK(o.open_at_liftoff <= p.rules.release_open_threshold);
  CHECK(o.kinematic_stroke > 0.0);
  // Opening peaks while the tip is still descending.
  const double peak = p.linkage.cam_crank_offset + 180.0;
  CHECK(leg_tip(p.linkage, p.expandable, peak + 0.5).y < leg_tip(p.linkage, p.expandable, peak - 0.5).y);
  CHECK(fit_cam_offset(p.linkage, p.expandable, p.contact_depth, p.rules) ==
        doctest::Approx(p.linkage.cam_crank_offset));
}

TEST_CASE("flat ground, no incline: every step completes") {
  TrialConfig c;
  c.surface = Surface::flat;
  c.incline = 0.0;
  const auto r = simulate_climb(c, SimParams{});
  CHECK(r.summary.steps_completed == 9);
  CHECK(r.summary.steps_recorded == 9);
  CHECK_FALSE(r.summary.stuck);
  CHECK(r.summary.average_velocity > 0.0);
  for (const auto& e : r.events) CHECK(e.event != "stuck");
}

TEST_CASE("rigid claws do not climb the mesh") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    TrialConfig c;
    c.claw_variant = ClawVariant::rigid_immobile;
    c.seed = seed;
    const auto r = simulate_climb(c, SimParams{});
    CHECK(r.summary.steps_completed == 0);
    CHECK(r.summary.stuck);
    CHECK(r.summary.average_velocity == 0.0);
    CHECK(r.summary.displacement == 0.0);
  }
}

TEST_CASE("noise-free placement inside the capture radius never sticks") {
  SimParams p;
  p.noise_sigma = 0.0;
  p.mesh.capture_radius = p.mesh.cell_pitch / 2.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    TrialConfig c;
    c.step_budget = 40;
    c.seed = seed;
    const auto r = simulate_climb(c, p);
    CHECK(r.summary.steps_completed == 40);
    CHECK_FALSE(r.summary.stuck);
  }
}

TEST_CASE("trials are bit-reproducible") {
  TrialConfig c;
  c.claw_variant = ClawVariant::unexpandable;
  c.seed = 1234;
  const auto a = simulate_climb(c, SimParams{});
  const auto b = simulate_climb(c, SimParams{});
  REQUIRE(a.steps.size() == b.steps.size());
  REQUIRE(a.events.size() == b.events.size());
  REQUIRE(a.ticks.size() == b.ticks.size());
  for (std::size_t i = 0; i < a.events.size(); ++i) {
    CHECK(a.events[i].t == b.events[i].t);
    CHECK(a.events[i].event == b.events[i].event);
    CHECK(a.events[i].node == b.events[i].node);
  }
  for (std::size_t i = 0; i < a.ticks.size(); ++i) CHECK(a.ticks[i].body == b.ticks[i].body);
  CHECK(a.summary.average_velocity == b.summary.average_velocity);

  // Parallel execution does not change results.
  std::vector<TrialConfig> cfgs;
  for (std::uint64_t s = 1; s <= 12; ++s) {
    TrialConfig t = c;
    t.seed = s;
    cfgs.push_back(t);
  }
  const auto serial = run_trials(cfgs, SimParams{}, 1);
  const auto parallel = run_trials(cfgs, SimParams{}, 4);
  for (std::size_t i = 0; i < cfgs.size(); ++i) {
    CHECK(serial[i].summary.displacement == parallel[i].summary.displacement);
    CHECK(serial[i].events.size() == parallel[i].events.size());
  }
}

TEST_CASE("per-step bookkeeping") {
  for (auto v : {ClawVariant::expandable, ClawVariant::unexpandable, ClawVariant::soft_immobile}) {
    for (std::uint64_t seed = 1; seed <= 15; ++seed) {
      TrialConfig c;
      c.claw_variant = v;
      c.seed = seed;
      const auto r = simulate_climb(c, SimParams{});
      double total = 0.0;
      for (const auto& s : r.steps) {
        CHECK(s.displacement <= s.stroke + 1e-9);
        if (!s.left_engaged && !s.right_engaged) CHECK(s.displacement == 0.0);
        total += s.displacement;
      }
      CHECK(total == doctest::Approx(r.summary.displacement));
      CHECK(r.summary.average_velocity ==
            doctest::Approx(r.summary.displacement / r.summary.elapsed));
      CHECK(r.summary.steps_recorded <= 9);
      if (r.summary.stuck) CHECK(r.steps.back().stuck);
    }
  }
}

TEST_CASE("success_rate") {
  CHECK(success_rate({fake_trial(4, true)}) == doctest::Approx(0.8));
  CHECK(success_rate({fake_trial(9, false), fake_trial(9, false)}) == 1.0);
  CHECK(success_rate({fake_trial(9, false), fake_trial(4, true)}) == doctest::Approx(13.0 / 14.0));
  CHECK_THROWS_AS(success_rate({}), EmptyInput);
  CHECK_THROWS(success_rate({fake_trial(9, false, 9), fake_trial(3, false, 5)}));
}

TEST_CASE("trial config validation") {
  TrialConfig c;
  c.incline = 90.0;
  CHECK_THROWS_AS(simulate_climb(c, SimParams{}), ConfigInvalid);
  c = TrialConfig{};
  c.step_budget = 0;
  c.duration = 0.0;
  CHECK_THROWS_AS(simulate_climb(c, SimParams{}), ConfigInvalid);
}

TEST_CASE("velocity_vs_incline trends and anchors") {
  const SimParams p;
  const auto seeds = seed_range(1, 5);
  const std::vector<double> inclines = {10.0, 30.0, 50.0, 60.0};
  const auto tri = velocity_vs_incline(inclines, GaitKind::tripod, seeds,
                                       incline_sweep_trial(0.0, GaitKind::tripod, 1), p);
  const auto gal = velocity_vs_incline(inclines, GaitKind::gallop, seeds,
                                       incline_sweep_trial(0.0, GaitKind::gallop, 1), p);
  for (std::size_t i = 1; i < inclines.size(); ++i) {
    CHECK(tri[i].mean <= tri[i - 1].mean);
    CHECK(gal[i].mean <= gal[i - 1].mean);
  }
  for (std::size_t i = 0; i < inclines.size(); ++i) {
    if (inclines[i] >= 30.0) CHECK(gal[i].mean >= tri[i].mean);
  }
  CHECK(gal[3].mean == doctest::Approx(10.0).epsilon(0.2));
  CHECK(tri[2].mean == doctest::Approx(7.5).epsilon(0.2));

  // Mesh at 30 deg with the same motor speed.
  auto mesh_velocity = [&](GaitKind g) {
    std::vector<TrialConfig> cfgs;
    for (std::uint64_t s = 1; s <= 100; ++s) {
      TrialConfig c = claw_compare_trial(ClawVariant::expandable, s);
      c.gait = GaitCommand::for_gait(g);
      cfgs.push_back(c);
    }
    std::vector<double> v;
    for (const auto& r : run_trials(cfgs, p)) v.push_back(r.summary.average_velocity);
    return mean_sd(v).mean;
  };
  CHECK(mesh_velocity(GaitKind::gallop) == doctest::Approx(10.0).epsilon(0.2));
  CHECK(mesh_velocity(GaitKind::tripod) == doctest::Approx(8.0).epsilon(0.2));

  CHECK_THROWS(velocity_vs_incline({30.0, 10.0}, GaitKind::tripod, seeds,
                                   incline_sweep_trial(0.0, GaitKind::tripod, 1), p));
}
