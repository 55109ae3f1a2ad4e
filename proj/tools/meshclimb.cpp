#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "meshclimb/config.hpp"
#include "meshclimb/presets.hpp"

using namespace meshclimb;

namespace {

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mesh-climbing robot simulator and gait/EMG analysis presets"};
  app.set_version_flag("--version", tool_version());

  std::string preset;
  std::string config_path;
  std::string seeds;
  std::string out_dir;
  int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::vector<std::string> sets;
  bool list = false;
  bool keys = false;
  bool echo = false;
  bool quiet = false;

  app.add_option("preset", preset, "experiment preset (see --list)");
  app.add_option("-c,--config", config_path, "config file applied over the preset defaults")
      ->check(CLI::ExistingFile);
  app.add_option("-s,--seeds", seeds, "comma-separated seeds (overrides run.seeds)");
  app.add_option("-o,--out", out_dir, "output directory (default out/<preset>)");
  app.add_option("-j,--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--set", sets, "key=value override, applied last")->take_all();
  app.add_flag("--list", list, "list presets and exit");
  app.add_flag("--keys", keys, "print the config key reference and exit");
  app.add_flag("--echo", echo, "print the effective config and exit");
  app.add_flag("-q,--quiet", quiet, "no progress output");

  CLI11_PARSE(app, argc, argv);

  if (list) {
    for (const auto& p : presets()) std::cout << p.name << "  " << p.summary << '\n';
    return 0;
  }
  if (keys) {
    std::cout << config_reference();
    return 0;
  }
  if (preset.empty()) {
    std::cerr << "a preset is required (see --list)\n";
    return 2;
  }

  Config cfg;
  try {
    cfg = preset_config(preset);
    if (!config_path.empty()) cfg = parse_config(slurp(config_path), cfg);
    for (const auto& s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw std::invalid_argument("--set expects key=value, got '" + s + "'");
      auto key = s.substr(0, eq);
      auto value = s.substr(eq + 1);
      const auto strip = [](std::string& t) {
        t.erase(0, t.find_first_not_of(" \t"));
        t.erase(t.find_last_not_of(" \t") + 1);
      };
      strip(key);
      strip(value);
      apply_setting(cfg, key, value);
    }
    if (!seeds.empty()) apply_setting(cfg, "run.seeds", seeds);
    cfg.finalize();
    cfg.validate();
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  }

  if (echo) {
    std::cout << echo_config(cfg);
    return 0;
  }

  RunOptions opt;
  opt.out_dir = out_dir.empty() ? std::filesystem::path("out") / preset : std::filesystem::path(out_dir);
  opt.jobs = jobs;
  opt.created = utc_now();
  opt.log = quiet ? nullptr : &std::cerr;
  try {
    const RunReport report = run_preset(preset, cfg, opt);
    if (!quiet)
      std::cerr << report.trials << " run(s), " << report.files.size() << " file(s) written\n";
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
