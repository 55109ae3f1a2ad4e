#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "meshclimb/config.hpp"

namespace meshclimb {

struct PresetInfo {
  std::string name;
  std::string summary;
  std::vector<std::pair<std::string, std::string>> overrides;
  std::vector<std::uint64_t> default_seeds;
};

const std::vector<PresetInfo>& presets();

/// Throws std::invalid_argument listing the known presets.
const PresetInfo& find_preset(const std::string& name);

/// Defaults with the preset's overrides applied (not yet finalized).
Config preset_config(const std::string& name);

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunOptions {
  std::filesystem::path out_dir;
  int jobs = 1;
  std::string created;  // manifest timestamp; only the manifest carries it
  std::ostream* log = nullptr;
};

struct RunReport {
  std::vector<std::uint64_t> seeds;
  int trials = 0;
  std::vector<std::filesystem::path> files;  // every file written, manifest last
};

/// Runs the preset for every seed and writes its CSVs, summary and manifest.
RunReport run_preset(const std::string& name, const Config& cfg, const RunOptions& opt);

std::string tool_version();

}  // namespace meshclimb
