#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace vqnac::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

struct RunOptions {
  std::string command;
  std::string config_path;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  std::string mode = "exact";
  long long shots = 8192;
  bool allow_unconverged = false;
};

// Runs one subcommand; exceptions are mapped to exit codes and reported on err.
int run_command(const RunOptions& opt, std::ostream& log, std::ostream& err);

// Full command line (argv[0] is the program name).
int cli_main(int argc, const char* const* argv);
int cli_main(const std::vector<std::string>& args);

}  // namespace vqnac::cli
