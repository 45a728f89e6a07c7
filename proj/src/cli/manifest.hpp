#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace vqnac::cli {

struct RunManifest {
  std::string command;
  std::string config_path;
  std::uint64_t seed = 0;
  std::string output_dir;
  std::vector<std::string> fixtures;
  std::string version;
  std::string mode = "exact";
  long long shots = 0;
  bool allow_unconverged = false;
  double wall_clock_seconds = 0.0;
  int exit_code = 0;
  std::vector<std::string> warnings;
  // relative to output_dir
  std::vector<std::string> outputs;

  void add_output(const std::string& name);
  void add_fixture(const std::string& id);
  // Writes <output_dir>/manifest.json including file sizes of every output.
  void write() const;
};

std::string tool_version();

}  // namespace vqnac::cli
