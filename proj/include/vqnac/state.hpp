#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include <Eigen/Dense>

#include "vqnac/pauli.hpp"

namespace vqnac {

// Unit-norm statevector on n qubits. Amplitude index bit q is qubit q.
class State {
 public:
  State() = default;
  // |0...0>
  explicit State(int n_qubits);

  // Throws InputError unless the vector has length 2^n and unit norm (1e-10).
  static State from_amplitudes(int n_qubits, Eigen::VectorXcd amplitudes);
  // Renormalizes a nonzero vector.
  static State normalized(int n_qubits, Eigen::VectorXcd amplitudes);

  int n_qubits() const { return n_; }
  std::size_t dim() const { return static_cast<std::size_t>(amp_.size()); }
  const Eigen::VectorXcd& amplitudes() const { return amp_; }
  cplx operator[](std::size_t i) const { return amp_[static_cast<Eigen::Index>(i)]; }
  double norm() const { return amp_.norm(); }

  // In-place gate kernels. `controls` is a qubit mask; the gate acts only on
  // the subspace where every control qubit is 1.
  void apply_pauli(const PauliString& p, std::uint64_t controls = 0);
  void apply_pauli_rotation(const PauliString& p, double g, double theta,
                            std::uint64_t controls = 0);
  void apply_hadamard(int q, std::uint64_t controls = 0);
  // diag(1, phase) on qubit q
  void apply_phase(int q, cplx phase, std::uint64_t controls = 0);

  // Raw access for the few routines that build unnormalized vectors.
  Eigen::VectorXcd& mutable_amplitudes() { return amp_; }

 private:
  int n_ = 0;
  Eigen::VectorXcd amp_;
};

// bits is written as a ket |q_{n-1} ... q_0>: the last character is qubit 0.
State basis_state(int n_qubits, std::string_view bits);
State basis_state_index(int n_qubits, std::uint64_t index);

// (s1 + phase*s2)/sqrt(2); s1 and s2 must be orthogonal.
State superpose(const State& s1, const State& s2, cplx phase);

State apply_pauli_rotation(const State& s, const PauliString& p, double g, double theta);

enum class GateKind { H, S, Sdg, X, Y, Z, CNOT, RY, RZ };

struct FixedGate {
  GateKind kind = GateKind::H;
  int target = 0;
  // CNOT control, or -1.
  int control = -1;
  // RY/RZ angle.
  double angle = 0.0;
  // Extra control mask added by controlled compilation.
  std::uint64_t extra_controls = 0;
};

FixedGate make_cnot(int control, int target);
FixedGate make_ry(int target, double angle);
FixedGate make_rz(int target, double angle);

void apply_fixed_gate_inplace(State& s, const FixedGate& gate);
State apply_fixed_gate(const State& s, const FixedGate& gate);
// Applies gate†.
void apply_fixed_gate_adjoint_inplace(State& s, const FixedGate& gate);

// P|s> without the unit-norm check on intermediate sums.
Eigen::VectorXcd apply_pauli_vector(const Eigen::VectorXcd& v, const PauliString& p);
// H|v>
Eigen::VectorXcd apply_sum_vector(const Eigen::VectorXcd& v, const PauliSum& obs);

double pauli_expectation(const State& s, const PauliString& p);
double expectation(const State& s, const PauliSum& obs);
cplx matrix_element(const State& bra, const PauliSum& obs, const State& ket);
cplx inner_product(const State& s1, const State& s2);

inline constexpr double kBranchFloor = 1e-14;

struct Projection {
  double probability = 0.0;
  State post_state;
};

// ½(I ± P)s, normalized. DegenerateBranchError when the branch probability
// is below kBranchFloor.
Projection project_pauli(const State& s, const PauliString& p, int outcome);

// Mean of `shots` ±1 outcomes drawn with P(+1) = (1 + mean)/2.
double sample_pm1(double mean, long long shots, std::mt19937_64& rng);

double sample_expectation(const State& s, const PauliSum& obs, long long shots_per_term,
                          std::uint64_t seed);

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

// Exact expectations or finite-shot emulation. In shot mode every call draws
// from a fresh stream derived from (seed, call counter), so a fixed call
// sequence is reproducible.
class Measurement {
 public:
  enum class Mode { exact, shots };

  Measurement() = default;
  static Measurement exact() { return {}; }
  static Measurement with_shots(long long shots, std::uint64_t seed);

  Mode mode() const { return mode_; }
  bool is_exact() const { return mode_ == Mode::exact; }
  long long shots() const { return shots_; }
  std::uint64_t seed() const { return seed_; }

  double expect(const State& s, const PauliSum& obs);
  double expect(const State& s, const PauliString& p);
  // Probability of outcome +1 for P, estimated with `shots` single draws.
  double branch_probability(const State& s, const PauliString& p);

 private:
  std::mt19937_64 next_rng();

  Mode mode_ = Mode::exact;
  long long shots_ = 0;
  std::uint64_t seed_ = 0;
  std::uint64_t counter_ = 0;
};

}  // namespace vqnac
