#include <fstream>
#include <sstream>

#include "doctest.h"
#include "meshclimb/config.hpp"
#include "meshclimb/presets.hpp"

using namespace meshclimb;

namespace {
std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}
}  // namespace

TEST_CASE("empty config gives the defaults") {
  const Config cfg = parse_config("");
  CHECK(cfg.sim.mesh.cell_pitch == 2.56);
  CHECK(cfg.sim.motor.gear_ratio == 150.0);
  CHECK(cfg.sim.motor.encoder_counts == 24);
  CHECK(cfg.sim.linkage.crank_len == 5.0);
  CHECK(cfg.sim.linkage.coupler_len == 15.0);
  CHECK(cfg.sim.linkage.rocker_len == 13.0);
  CHECK(cfg.sim.linkage.ground_len == 17.0);
  CHECK(cfg.sim.linkage.cam_len == 11.0);
  CHECK(cfg.sim.body.mass == 0.050);
  CHECK(cfg.trial.step_budget == 9);
  CHECK(cfg.trial.gait.target_phase_diff == 180.0);
  CHECK(echo_config(cfg) == echo_config(Config{}));
}

TEST_CASE("comments, blanks and whitespace") {
  const Config cfg = parse_config(
      "# header\n\n  mesh.cell_pitch=3.0   # wider mesh\r\n\ttrial.gait = gallop\n");
  CHECK(cfg.sim.mesh.cell_pitch == 3.0);
  CHECK(cfg.trial.gait.gait == GaitKind::gallop);
  CHECK(cfg.trial.gait.target_phase_diff == 0.0);
}

TEST_CASE("range errors") {
  CHECK_THROWS_AS(parse_config("mesh.cell_pitch = -1"), RangeError);
  CHECK_THROWS_AS(parse_config("trial.incline = 90"), RangeError);
  CHECK_THROWS_AS(parse_config("trial.incline = 95"), RangeError);
  CHECK_THROWS_AS(parse_config("claw.soft_immobile.p_snagfree = 1.5"), RangeError);
  CHECK_THROWS_AS(parse_config("mesh.capture_radius = 2.0"), RangeError);
  CHECK_THROWS_AS(parse_config("swing.smoothing_window = 4"), RangeError);
  CHECK_NOTHROW(parse_config("trial.incline = 89.9"));
}

TEST_CASE("unknown keys are errors") {
  try {
    parse_config("\nmesh.pitch = 2");
    FAIL("expected UnknownKey");
  } catch (const UnknownKey& e) {
    CHECK(e.key() == "mesh.pitch");
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  Config cfg;
  CHECK_THROWS_AS(apply_setting(cfg, "nope", "1"), UnknownKey);
}

TEST_CASE("parse errors carry line and column") {
  try {
    parse_config("trial.incline = 10\ntrial.incline 30\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 17);
  }
  try {
    parse_config("mesh.cell_pitch =   abc");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);
    CHECK(e.column() == 21);
  }
  CHECK_THROWS_AS(parse_config("= 3"), ParseError);
  CHECK_THROWS_AS(parse_config("trial.surface = ice"), ParseError);
  CHECK_THROWS_AS(parse_config("synth.write_traces = maybe"), ParseError);
  CHECK_THROWS_AS(parse_config("trial.step_budget = 9.5"), ParseError);
  CHECK_THROWS_AS(parse_config("swing.vertical_axis = w"), biomech::NoVerticalAxis);
}

TEST_CASE("explicit target phase survives a later gait key") {
  const Config cfg = parse_config("gait.target_phase_diff = 90\ntrial.gait = gallop\n");
  CHECK(cfg.trial.gait.gait == GaitKind::gallop);
  CHECK(cfg.trial.gait.target_phase_diff == 90.0);
}

TEST_CASE("fig9 with a 180 deg target is a tripod-phase run") {
  Config cfg = parse_config("gait.target_phase_diff = 180", preset_config("fig9_phasedrift"));
  CHECK(cfg.trial.gait.target_phase_diff == 180.0);
  CHECK(cfg.sim.motor.mismatch_factor == 0.95);
}

TEST_CASE("echo round-trips every key") {
  Config cfg = parse_config(
      "trial.incline = 42.125\nclaw.unexpandable.stiffness = 0.1234567890123\n"
      "run.seeds = 5,6,7\nsweep.inclines = 5,15.5\ntraces.mocap_csv = a.csv\n"
      "traces.emg_csv = b.csv\nswing.vertical_axis = y\nsynth.write_traces = true\n");
  const std::string echo = echo_config(cfg);
  const Config again = parse_config(echo);
  CHECK(echo_config(again) == echo);
  CHECK(again.seeds == std::vector<std::uint64_t>{5, 6, 7});
  CHECK(again.sim.unexpandable.stiffness == 0.1234567890123);
  CHECK(again.swing.vertical_axis == 1);

  std::size_t lines = 0;
  for (char ch : echo) lines += ch == '\n';
  CHECK(lines == config_keys().size());
}

TEST_CASE("precedence: preset, then file, then overrides") {
  Config cfg = preset_config("fig9_phasedrift");
  CHECK(cfg.sim.motor.mismatch_factor == 0.95);
  cfg = parse_config("motor.mismatch_factor = 0.9", cfg);
  CHECK(cfg.sim.motor.mismatch_factor == 0.9);
  apply_setting(cfg, "motor.mismatch_factor", "1.05");
  CHECK(cfg.sim.motor.mismatch_factor == 1.05);
}

TEST_CASE("shipped calibrated config matches the built-in defaults") {
  const Config cfg = parse_config(slurp(MESHCLIMB_SOURCE_DIR "/config/calibrated.cfg"));
  CHECK(echo_config(cfg) == echo_config(Config{}));
}

TEST_CASE("key reference documents every key") {
  const std::string doc = slurp(MESHCLIMB_SOURCE_DIR "/docs/config.md");
  for (const auto& k : config_keys()) {
    INFO(k.name);
    CHECK(doc.find("`" + k.name + "`") != std::string::npos);
  }
  CHECK(doc.find(config_reference()) != std::string::npos);
}

TEST_CASE("presets are unique and resolvable") {
  const auto& list = presets();
  for (std::size_t i = 0; i < list.size(); ++i) {
    for (std::size_t j = i + 1; j < list.size(); ++j) CHECK(list[i].name != list[j].name);
    CHECK_NOTHROW(preset_config(list[i].name));
    CHECK_FALSE(list[i].default_seeds.empty());
  }
  CHECK_THROWS_AS(find_preset("fig99"), std::invalid_argument);
}
