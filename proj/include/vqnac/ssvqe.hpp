#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "vqnac/ansatz.hpp"
#include "vqnac/family.hpp"
#include "vqnac/optimize.hpp"
#include "vqnac/state.hpp"

namespace vqnac {

struct SsvqeConfig {
  // Strictly decreasing, positive.
  std::vector<double> weights{1.0};
  // Computational-basis kets, written |q_{n-1} ... q_0>.
  std::vector<std::string> references{"0"};
  OptOptions optimizer;
  double beta_S = 0.0;
  double beta_N = 0.0;
  int N0 = 0;
  int restarts = 4;
  std::uint64_t seed = 7;

  // ConfigError on weight ordering, reference mismatch, etc.
  void validate(int n_qubits) const;
  int levels() const { return static_cast<int>(weights.size()); }
};

// Weighted SSVQE cost sum_i w_i <psi_i| U^dag H U |psi_i>, evaluated on
// per-gate angles so derivative routines can shift single gates.
struct Objective {
  ParamCircuit circuit;
  std::vector<State> refs;
  std::vector<double> weights;
  // R-independent penalty terms added to H(R) by the SSVQE run.
  std::optional<PauliSum> penalty;

  double value(const Eigen::VectorXd& angles, const PauliSum& H) const;
};

Objective make_objective(const ParamCircuit& c, const SsvqeConfig& cfg);

struct EigensolveResult {
  Eigen::VectorXd theta_star;
  Eigen::VectorXd energies;
  double cost = 0.0;
  bool converged = false;
  double grad_norm = 0.0;
  int iterations = 0;
  Eigen::VectorXd R;
  // Re<phi_0(previous)|phi_0(this)> < 0 along a path.
  bool sign_flip = false;
  // max |theta*_p - theta*_{p-1}| along a path (0 for the first point).
  double max_jump = 0.0;
  std::string message;
};

// Operator actually minimized: family Hamiltonian plus configured penalties.
HamiltonianFamily penalized_family(const HamiltonianFamily& f, const SsvqeConfig& cfg);

double ssvqe_cost(const ParamCircuit& c, const Eigen::VectorXd& theta, const PauliSum& H, const SsvqeConfig& cfg);

// Energies of the prepared states U(theta)|psi_i> under H.
Eigen::VectorXd level_energies(const ParamCircuit& c, const Eigen::VectorXd& theta, const PauliSum& H,
                               const SsvqeConfig& cfg);

EigensolveResult run_ssvqe(const HamiltonianFamily& f, const Eigen::VectorXd& R, const ParamCircuit& c,
                           const SsvqeConfig& cfg, const std::optional<Eigen::VectorXd>& theta0 = std::nullopt);

std::vector<EigensolveResult> continue_along_path(const HamiltonianFamily& f, const std::vector<Eigen::VectorXd>& path,
                                                  const ParamCircuit& c, const SsvqeConfig& cfg);

// U(theta*)|psi_level>
State level_state(const ParamCircuit& c, const EigensolveResult& r, const SsvqeConfig& cfg, int level);

}  // namespace vqnac
