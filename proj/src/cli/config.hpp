#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "vqnac/ansatz.hpp"
#include "vqnac/family.hpp"
#include "vqnac/shotcost.hpp"
#include "vqnac/ssvqe.hpp"

namespace vqnac::cli {

using nlohmann::json;

// A parsed config file plus the directory relative paths resolve against.
struct ConfigFile {
  std::filesystem::path path;
  json root;

  std::filesystem::path resolve(const std::string& p) const;
};

// ConfigError naming the path on unreadable files or invalid JSON.
ConfigFile load_config(const std::string& path);

// ConfigError for keys outside `allowed`.
void check_keys(const json& j, const std::vector<std::string>& allowed, const std::string& where);

double get_number(const json& j, const std::string& key, const std::string& where, std::optional<double> fallback = {});
int get_int(const json& j, const std::string& key, const std::string& where, std::optional<int> fallback = {});
std::string get_string(const json& j, const std::string& key, const std::string& where,
                       std::optional<std::string> fallback = {});
std::vector<double> get_numbers(const json& j, const std::string& key, const std::string& where);

struct FamilySpec {
  HamiltonianFamily family;
  // "builtin:<name>" or the resolved file path
  std::string id;
};

// "family": "builtin:rotor" | "<file.json>", with "family_args" {delta, gap_half}.
FamilySpec family_from(const ConfigFile& cfg, const json& j, const std::string& where);

struct AnsatzSpec {
  ParamCircuit circuit;
  std::string id;
};

// "ansatz": {"kind": ..., "depth": ...} or {"circuit": "<file.json>"}.
AnsatzSpec ansatz_from(const ConfigFile& cfg, const json& j, int n_qubits, const std::string& where);

SsvqeConfig ssvqe_from(const json& j, std::uint64_t seed, const std::string& where);

CostInput cost_input_from(const json& j, const std::string& where);

}  // namespace vqnac::cli
