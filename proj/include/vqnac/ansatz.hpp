#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "vqnac/pauli.hpp"
#include "vqnac/state.hpp"

namespace vqnac {

// One circuit element: a fixed gate, or exp(i g P theta[param]).
struct Gate {
  bool parametric = false;
  FixedGate fixed;
  PauliString pauli;
  double g = 0.0;
  int param = -1;
  std::uint64_t controls = 0;
};

// Ordered gate list U = U_N ... U_1. Parametric gates are numbered 0..n_pgates-1
// in list order ("gate index"); several gates may share one circuit parameter,
// in which case derivatives are summed over the gates of that parameter.
class ParamCircuit {
 public:
  ParamCircuit() = default;
  ParamCircuit(int n_qubits, int n_theta);

  void add_fixed(const FixedGate& g);
  void add_rotation(const PauliString& p, double g, int param);
  // exp(-i t Y/2) on qubit q driven by parameter `param`.
  void add_ry(int q, int param);

  int n_qubits() const { return n_; }
  int n_theta() const { return n_theta_; }
  int n_pgates() const { return static_cast<int>(pgate_pos_.size()); }
  const std::vector<Gate>& gates() const { return gates_; }
  const std::string& kind() const { return kind_; }
  void set_kind(std::string k) { kind_ = std::move(k); }

  const Gate& pgate(int a) const;
  int param_of(int a) const { return pgate(a).param; }
  double g(int a) const { return pgate(a).g; }
  const PauliString& P(int a) const { return pgate(a).pauli; }
  // Gates of parameter p.
  const std::vector<int>& gates_of(int p) const;
  bool one_gate_per_param() const;

  // Per-gate angles theta[param_of(a)].
  Eigen::VectorXd gate_angles(const Eigen::VectorXd& theta) const;
  // d(gate angles)/d(theta), n_pgates x n_theta.
  Eigen::MatrixXd jacobian() const;

  // List position just past parametric gate a; a = -1 gives 0, a = n_pgates
  // gives the full list length (trailing fixed gates included).
  int boundary(int a) const;

  // Applies list positions [begin, end).
  void apply_positions(State& s, const Eigen::VectorXd& angles, int begin, int end) const;
  // Applies the gates after boundary(from) up to boundary(to).
  void apply_segment(State& s, const Eigen::VectorXd& angles, int from, int to) const;

  State prepare(const Eigen::VectorXd& theta, const State& ref) const;
  State prepare_angles(const Eigen::VectorXd& angles, const State& ref) const;

  void check_theta(const Eigen::VectorXd& theta) const;
  void check_angles(const Eigen::VectorXd& angles) const;

  // Same circuit on n+1 qubits, every gate controlled by the ancilla (qubit n).
  ParamCircuit controlled(bool on_one = true) const;

 private:
  int n_ = 0;
  int n_theta_ = 0;
  std::vector<Gate> gates_;
  std::vector<int> pgate_pos_;
  std::vector<std::vector<int>> gates_of_param_;
  std::string kind_ = "custom";
};

enum class AnsatzKind { ry_cnot, so4, a_gate };

AnsatzKind parse_ansatz_kind(const std::string& name);
std::string to_string(AnsatzKind kind);

ParamCircuit build_ansatz(AnsatzKind kind, int n_qubits, int depth);
ParamCircuit build_ansatz(const std::string& kind, int n_qubits, int depth);

State prepare_state(const ParamCircuit& c, const Eigen::VectorXd& theta, const State& reference);

struct Insertion {
  enum class Kind { none, exp_plus, exp_minus, proj_plus, proj_minus };
  Kind kind = Kind::none;
  PauliString pauli;

  static Insertion none() { return {}; }
  static Insertion exp(const PauliString& p, int sign);
  static Insertion projector(const PauliString& p, int outcome);
};

struct PrefixResult {
  State state;
  // Branch probability for projector insertions, 1 otherwise.
  double probability = 1.0;
};

// U_{cut+1..end} (insertion) U_{1..cut} |ref>, with gate indices counted over
// parametric gates: cut = b puts the insertion right after parametric gate b,
// end = a stops right after parametric gate a (end = n_pgates runs to the end).
// cut = -1 inserts before the first gate. Projector insertions return the
// normalized post-measurement state and throw DegenerateBranchError for a
// vanishing branch.
PrefixResult prefix_state_angles(const ParamCircuit& c, const Eigen::VectorXd& angles, int cut,
                                 const State& reference, const Insertion& insertion, int end);
PrefixResult prefix_state(const ParamCircuit& c, const Eigen::VectorXd& theta, int cut,
                          const State& reference, const Insertion& insertion, int end);

// Ancilla-controlled U(theta) on n+1 qubits (ancilla = qubit n).
ParamCircuit controlled_compile(const ParamCircuit& c, bool on_one = true);

ParamCircuit load_circuit(const std::string& path);
ParamCircuit parse_circuit_json(const std::string& text, const std::string& source = "<string>");

}  // namespace vqnac
