#include "cli/config.hpp"

#include <algorithm>
#include <fstream>

#include "vqnac/error.hpp"

namespace vqnac::cli {

std::filesystem::path ConfigFile::resolve(const std::string& p) const {
  std::filesystem::path q(p);
  if (q.is_absolute()) return q;
  return path.parent_path() / q;
}

ConfigFile load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  ConfigFile out;
  out.path = std::filesystem::path(path);
  try {
    out.root = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": invalid JSON: " + e.what());
  }
  if (!out.root.is_object()) throw ConfigError(path + ": top level must be an object");
  return out;
}

void check_keys(const json& j, const std::vector<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError(where + ": unknown key '" + key + "'");
    }
  }
}

double get_number(const json& j, const std::string& key, const std::string& where, std::optional<double> fallback) {
  if (!j.contains(key)) {
    if (fallback) return *fallback;
    throw ConfigError(where + ": missing '" + key + "'");
  }
  if (!j[key].is_number()) throw ConfigError(where + "." + key + ": expected a number");
  return j[key].get<double>();
}

int get_int(const json& j, const std::string& key, const std::string& where, std::optional<int> fallback) {
  if (!j.contains(key)) {
    if (fallback) return *fallback;
    throw ConfigError(where + ": missing '" + key + "'");
  }
  if (!j[key].is_number_integer()) throw ConfigError(where + "." + key + ": expected an integer");
  return j[key].get<int>();
}

std::string get_string(const json& j, const std::string& key, const std::string& where,
                       std::optional<std::string> fallback) {
  if (!j.contains(key)) {
    if (fallback) return *fallback;
    throw ConfigError(where + ": missing '" + key + "'");
  }
  if (!j[key].is_string()) throw ConfigError(where + "." + key + ": expected a string");
  return j[key].get<std::string>();
}

std::vector<double> get_numbers(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + ": missing '" + key + "'");
  const json& a = j[key];
  if (!a.is_array()) throw ConfigError(where + "." + key + ": expected an array of numbers");
  std::vector<double> out;
  for (const auto& v : a) {
    if (!v.is_number()) throw ConfigError(where + "." + key + ": expected an array of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

FamilySpec family_from(const ConfigFile& cfg, const json& j, const std::string& where) {
  const std::string name = get_string(j, "family", where);
  FamilySpec out;
  const std::string prefix = "builtin:";
  if (name.rfind(prefix, 0) == 0) {
    const std::string b = name.substr(prefix.size());
    double delta = 0.0, gap_half = 0.1;
    if (j.contains("family_args")) {
      const json& a = j["family_args"];
      check_keys(a, {"delta", "gap_half"}, where + ".family_args");
      delta = get_number(a, "delta", where + ".family_args", 0.0);
      gap_half = get_number(a, "gap_half", where + ".family_args", 0.1);
    }
    try {
      out.family = builtin_family(b, delta, gap_half);
    } catch (const InputError& e) {
      throw ConfigError(where + ".family: " + e.what());
    }
    out.id = name;
    return out;
  }
  const std::filesystem::path p = cfg.resolve(name);
  if (!std::filesystem::exists(p)) throw ConfigError(where + ".family: file not found: " + p.string());
  out.family = load_family(p.string());
  out.id = p.string();
  return out;
}

AnsatzSpec ansatz_from(const ConfigFile& cfg, const json& j, int n_qubits, const std::string& where) {
  if (!j.contains("ansatz")) throw ConfigError(where + ": missing 'ansatz'");
  const json& a = j["ansatz"];
  const std::string w = where + ".ansatz";
  check_keys(a, {"kind", "depth", "circuit"}, w);
  AnsatzSpec out;
  if (a.contains("circuit")) {
    const std::filesystem::path p = cfg.resolve(get_string(a, "circuit", w));
    if (!std::filesystem::exists(p)) throw ConfigError(w + ".circuit: file not found: " + p.string());
    out.circuit = load_circuit(p.string());
    out.id = p.string();
  } else {
    const std::string kind = get_string(a, "kind", w);
    const int depth = get_int(a, "depth", w, 1);
    try {
      out.circuit = build_ansatz(kind, n_qubits, depth);
    } catch (const InputError& e) {
      throw ConfigError(w + ": " + e.what());
    }
    out.id = kind + ":" + std::to_string(depth);
  }
  if (out.circuit.n_qubits() != n_qubits) {
    throw ConfigError(w + ": circuit acts on " + std::to_string(out.circuit.n_qubits()) +
                      " qubits, Hamiltonian needs " + std::to_string(n_qubits));
  }
  return out;
}

SsvqeConfig ssvqe_from(const json& j, std::uint64_t seed, const std::string& where) {
  SsvqeConfig s;
  s.seed = seed;
  if (!j.contains("ssvqe")) throw ConfigError(where + ": missing 'ssvqe'");
  const json& q = j["ssvqe"];
  const std::string w = where + ".ssvqe";
  check_keys(q, {"weights", "references", "restarts", "beta_S", "beta_N", "N0", "grad_tol", "max_iter"}, w);
  s.weights = get_numbers(q, "weights", w);
  if (!q.contains("references") || !q["references"].is_array()) throw ConfigError(w + ".references: expected array");
  s.references.clear();
  for (const auto& r : q["references"]) {
    if (!r.is_string()) throw ConfigError(w + ".references: expected bitstrings");
    s.references.push_back(r.get<std::string>());
  }
  s.restarts = get_int(q, "restarts", w, 4);
  s.beta_S = get_number(q, "beta_S", w, 0.0);
  s.beta_N = get_number(q, "beta_N", w, 0.0);
  s.N0 = get_int(q, "N0", w, 0);
  s.optimizer.grad_tol = get_number(q, "grad_tol", w, s.optimizer.grad_tol);
  s.optimizer.max_iter = get_int(q, "max_iter", w, s.optimizer.max_iter);
  return s;
}

CostInput cost_input_from(const json& j, const std::string& where) {
  check_keys(j, {"N_H", "N_theta", "N_x", "K", "epsilon", "delta", "H_norm", "dH_norm", "A", "gap", "T", "T00", "M3", "M4"},
             where);
  CostInput c;
  c.N_H = get_int(j, "N_H", where, c.N_H);
  c.N_theta = get_int(j, "N_theta", where, c.N_theta);
  c.N_x = get_int(j, "N_x", where, c.N_x);
  c.K = get_int(j, "K", where, c.K);
  c.epsilon = get_number(j, "epsilon", where, c.epsilon);
  c.delta = get_number(j, "delta", where, c.delta);
  c.H_norm = get_number(j, "H_norm", where, c.H_norm);
  if (j.contains("dH_norm")) c.dH_norm = get_numbers(j, "dH_norm", where);
  if (j.contains("A")) c.A = get_numbers(j, "A", where);
  c.gap = get_number(j, "gap", where, c.gap);
  c.T = get_number(j, "T", where, c.T);
  c.T00 = get_number(j, "T00", where, c.T00);
  c.M3 = get_number(j, "M3", where, c.M3);
  c.M4 = get_number(j, "M4", where, c.M4);
  try {
    c.validate();
  } catch (const InputError& e) {
    throw ConfigError(where + ": " + e.what());
  }
  return c;
}

}  // namespace vqnac::cli
