#include "cli/manifest.hpp"

#include <algorithm>
#include <fstream>

#include "json.hpp"
#include "vqnac/error.hpp"

namespace vqnac::cli {

std::string tool_version() {
#ifdef VQNAC_VERSION
  return VQNAC_VERSION;
#else
  return "unknown";
#endif
}

void RunManifest::add_output(const std::string& name) {
  if (std::find(outputs.begin(), outputs.end(), name) == outputs.end()) outputs.push_back(name);
}

void RunManifest::add_fixture(const std::string& id) {
  if (std::find(fixtures.begin(), fixtures.end(), id) == fixtures.end()) fixtures.push_back(id);
}

void RunManifest::write() const {
  namespace fs = std::filesystem;
  nlohmann::json files = nlohmann::json::array();
  for (const auto& o : outputs) {
    const fs::path p = fs::path(output_dir) / o;
    std::uintmax_t bytes = fs::exists(p) ? fs::file_size(p) : 0;
    files.push_back({{"path", o}, {"bytes", bytes}});
  }
  nlohmann::json j = {{"command", command},
                      {"config_path", config_path},
                      {"seed", seed},
                      {"output_dir", output_dir},
                      {"fixtures", fixtures},
                      {"version", version},
                      {"mode", mode},
                      {"shots", shots},
                      {"allow_unconverged", allow_unconverged},
                      {"wall_clock_seconds", wall_clock_seconds},
                      {"exit_code", exit_code},
                      {"warnings", warnings},
                      {"outputs", files}};
  std::ofstream out(fs::path(output_dir) / "manifest.json");
  if (!out) throw LoadError(output_dir + ": cannot write manifest.json");
  out << j.dump(2) << '\n';
}

}  // namespace vqnac::cli
