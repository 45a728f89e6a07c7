#include "vqnac/state.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "vqnac/error.hpp"

namespace vqnac {

namespace {

void check_same_size(int a, int b, const char* what) {
  if (a != b) {
    throw InputError(std::string(what) + ": qubit count mismatch (" + std::to_string(a) + " vs " +
                     std::to_string(b) + ")");
  }
}

void check_qubit(int q, int n) {
  if (q < 0 || q >= n) {
    throw InputError("qubit " + std::to_string(q) + " out of range for " + std::to_string(n) +
                     " qubits");
  }
}

bool controls_on(std::uint64_t i, std::uint64_t controls) { return (i & controls) == controls; }

}  // namespace

State::State(int n_qubits) : n_(n_qubits) {
  if (n_qubits < 0 || n_qubits > kMaxQubits) {
    throw InputError("qubit count " + std::to_string(n_qubits) + " not supported");
  }
  amp_ = Eigen::VectorXcd::Zero(Eigen::Index{1} << n_qubits);
  amp_[0] = 1.0;
}

State State::from_amplitudes(int n_qubits, Eigen::VectorXcd amplitudes) {
  State s(n_qubits);
  if (amplitudes.size() != s.amp_.size()) {
    throw InputError("amplitude vector has length " + std::to_string(amplitudes.size()) +
                     ", expected " + std::to_string(s.amp_.size()));
  }
  if (std::abs(amplitudes.norm() - 1.0) > 1e-10) throw InputError("amplitude vector not normalized");
  s.amp_ = std::move(amplitudes);
  return s;
}

State State::normalized(int n_qubits, Eigen::VectorXcd amplitudes) {
  const double nrm = amplitudes.norm();
  if (!(nrm > 0.0)) throw InputError("cannot normalize a zero vector");
  amplitudes /= nrm;
  return from_amplitudes(n_qubits, std::move(amplitudes));
}

void State::apply_pauli(const PauliString& p, std::uint64_t controls) {
  check_same_size(p.n_qubits(), n_, "apply_pauli");
  if (controls & p.x_mask()) throw InputError("control qubit flipped by the controlled Pauli");
  const std::uint64_t x = p.x_mask();
  const auto d = static_cast<std::uint64_t>(amp_.size());
  if (x == 0) {
    for (std::uint64_t i = 0; i < d; ++i) {
      if (controls_on(i, controls)) amp_[static_cast<Eigen::Index>(i)] *= p.phase_on(i);
    }
    return;
  }
  // Visit each pair {i, i^x} once, using the lowest set bit of x as pivot.
  const std::uint64_t pivot = x & (~x + 1);
  for (std::uint64_t i = 0; i < d; ++i) {
    if ((i & pivot) || !controls_on(i, controls)) continue;
    const std::uint64_t j = i ^ x;
    const cplx a = amp_[static_cast<Eigen::Index>(i)];
    const cplx b = amp_[static_cast<Eigen::Index>(j)];
    amp_[static_cast<Eigen::Index>(j)] = p.phase_on(i) * a;
    amp_[static_cast<Eigen::Index>(i)] = p.phase_on(j) * b;
  }
}

void State::apply_pauli_rotation(const PauliString& p, double g, double theta,
                                 std::uint64_t controls) {
  check_same_size(p.n_qubits(), n_, "apply_pauli_rotation");
  if (controls & p.x_mask()) throw InputError("control qubit flipped by the controlled rotation");
  const double c = std::cos(g * theta);
  const cplx is{0.0, std::sin(g * theta)};
  const std::uint64_t x = p.x_mask();
  const auto d = static_cast<std::uint64_t>(amp_.size());
  if (x == 0) {
    for (std::uint64_t i = 0; i < d; ++i) {
      if (!controls_on(i, controls)) continue;
      amp_[static_cast<Eigen::Index>(i)] *= c + is * p.phase_on(i);
    }
    return;
  }
  const std::uint64_t pivot = x & (~x + 1);
  for (std::uint64_t i = 0; i < d; ++i) {
    if ((i & pivot) || !controls_on(i, controls)) continue;
    const std::uint64_t j = i ^ x;
    const cplx a = amp_[static_cast<Eigen::Index>(i)];
    const cplx b = amp_[static_cast<Eigen::Index>(j)];
    // (P s)_j = phase_on(i) a, (P s)_i = phase_on(j) b
    amp_[static_cast<Eigen::Index>(i)] = c * a + is * p.phase_on(j) * b;
    amp_[static_cast<Eigen::Index>(j)] = c * b + is * p.phase_on(i) * a;
  }
}

void State::apply_hadamard(int q, std::uint64_t controls) {
  check_qubit(q, n_);
  const std::uint64_t bit = 1ULL << q;
  if (controls & bit) throw InputError("control qubit equals target");
  const double r = 1.0 / std::sqrt(2.0);
  const auto d = static_cast<std::uint64_t>(amp_.size());
  for (std::uint64_t i = 0; i < d; ++i) {
    if ((i & bit) || !controls_on(i, controls)) continue;
    const cplx a = amp_[static_cast<Eigen::Index>(i)];
    const cplx b = amp_[static_cast<Eigen::Index>(i | bit)];
    amp_[static_cast<Eigen::Index>(i)] = r * (a + b);
    amp_[static_cast<Eigen::Index>(i | bit)] = r * (a - b);
  }
}

void State::apply_phase(int q, cplx phase, std::uint64_t controls) {
  check_qubit(q, n_);
  const std::uint64_t bit = 1ULL << q;
  const auto d = static_cast<std::uint64_t>(amp_.size());
  for (std::uint64_t i = 0; i < d; ++i) {
    if ((i & bit) && controls_on(i, controls)) amp_[static_cast<Eigen::Index>(i)] *= phase;
  }
}

State basis_state(int n_qubits, std::string_view bits) {
  if (static_cast<int>(bits.size()) != n_qubits) {
    throw InputError("bitstring \"" + std::string(bits) + "\" has length " +
                     std::to_string(bits.size()) + ", expected " + std::to_string(n_qubits));
  }
  std::uint64_t index = 0;
  for (int j = 0; j < n_qubits; ++j) {
    const char ch = bits[static_cast<std::size_t>(j)];
    if (ch != '0' && ch != '1') throw InputError("bitstring must contain only 0 and 1");
    if (ch == '1') index |= 1ULL << (n_qubits - 1 - j);
  }
  return basis_state_index(n_qubits, index);
}

State basis_state_index(int n_qubits, std::uint64_t index) {
  State s(n_qubits);
  if (index >= s.dim()) throw InputError("basis index out of range");
  auto& a = s.mutable_amplitudes();
  a[0] = 0.0;
  a[static_cast<Eigen::Index>(index)] = 1.0;
  return s;
}

State superpose(const State& s1, const State& s2, cplx phase) {
  check_same_size(s1.n_qubits(), s2.n_qubits(), "superpose");
  if (std::abs(std::abs(phase) - 1.0) > 1e-12) throw InputError("superpose phase must have unit modulus");
  if (std::abs(inner_product(s1, s2)) >= 1e-10) throw InputError("superpose requires orthogonal states");
  Eigen::VectorXcd v = (s1.amplitudes() + phase * s2.amplitudes()) / std::sqrt(2.0);
  return State::normalized(s1.n_qubits(), std::move(v));
}

State apply_pauli_rotation(const State& s, const PauliString& p, double g, double theta) {
  State out = s;
  out.apply_pauli_rotation(p, g, theta);
  return out;
}

FixedGate make_cnot(int control, int target) {
  FixedGate g;
  g.kind = GateKind::CNOT;
  g.control = control;
  g.target = target;
  return g;
}

FixedGate make_ry(int target, double angle) {
  FixedGate g;
  g.kind = GateKind::RY;
  g.target = target;
  g.angle = angle;
  return g;
}

FixedGate make_rz(int target, double angle) {
  FixedGate g;
  g.kind = GateKind::RZ;
  g.target = target;
  g.angle = angle;
  return g;
}

namespace {

void apply_fixed(State& s, const FixedGate& gate, bool adjoint) {
  const int n = s.n_qubits();
  check_qubit(gate.target, n);
  const std::uint64_t ctl = gate.extra_controls;
  auto single = [&](char letter) { return PauliString::single(n, gate.target, letter); };
  switch (gate.kind) {
    case GateKind::H: s.apply_hadamard(gate.target, ctl); break;
    case GateKind::S: s.apply_phase(gate.target, adjoint ? cplx{0, -1} : cplx{0, 1}, ctl); break;
    case GateKind::Sdg: s.apply_phase(gate.target, adjoint ? cplx{0, 1} : cplx{0, -1}, ctl); break;
    case GateKind::X: s.apply_pauli(single('X'), ctl); break;
    case GateKind::Y: s.apply_pauli(single('Y'), ctl); break;
    case GateKind::Z: s.apply_pauli(single('Z'), ctl); break;
    case GateKind::CNOT: {
      check_qubit(gate.control, n);
      if (gate.control == gate.target) throw InputError("CNOT control equals target");
      s.apply_pauli(single('X'), ctl | (1ULL << gate.control));
      break;
    }
    // RY(t) = exp(-i t Y / 2), RZ(t) = exp(-i t Z / 2)
    case GateKind::RY: s.apply_pauli_rotation(single('Y'), -0.5, adjoint ? -gate.angle : gate.angle, ctl); break;
    case GateKind::RZ: s.apply_pauli_rotation(single('Z'), -0.5, adjoint ? -gate.angle : gate.angle, ctl); break;
  }
}

}  // namespace

void apply_fixed_gate_inplace(State& s, const FixedGate& gate) { apply_fixed(s, gate, false); }

void apply_fixed_gate_adjoint_inplace(State& s, const FixedGate& gate) { apply_fixed(s, gate, true); }

State apply_fixed_gate(const State& s, const FixedGate& gate) {
  State out = s;
  apply_fixed_gate_inplace(out, gate);
  return out;
}

Eigen::VectorXcd apply_pauli_vector(const Eigen::VectorXcd& v, const PauliString& p) {
  Eigen::VectorXcd out(v.size());
  const std::uint64_t x = p.x_mask();
  const auto d = static_cast<std::uint64_t>(v.size());
  if (d != (1ULL << p.n_qubits())) throw InputError("apply_pauli_vector: size mismatch");
  for (std::uint64_t i = 0; i < d; ++i) {
    out[static_cast<Eigen::Index>(i ^ x)] = p.phase_on(i) * v[static_cast<Eigen::Index>(i)];
  }
  return out;
}

Eigen::VectorXcd apply_sum_vector(const Eigen::VectorXcd& v, const PauliSum& obs) {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(v.size());
  for (const auto& t : obs.terms()) out += t.coeff * apply_pauli_vector(v, t.pauli);
  return out;
}

double pauli_expectation(const State& s, const PauliString& p) {
  check_same_size(p.n_qubits(), s.n_qubits(), "expectation");
  const auto& a = s.amplitudes();
  const std::uint64_t x = p.x_mask();
  cplx acc = 0.0;
  const auto d = static_cast<std::uint64_t>(a.size());
  for (std::uint64_t i = 0; i < d; ++i) {
    acc += std::conj(a[static_cast<Eigen::Index>(i ^ x)]) * p.phase_on(i) * a[static_cast<Eigen::Index>(i)];
  }
  return acc.real();
}

double expectation(const State& s, const PauliSum& obs) {
  check_same_size(obs.n_qubits(), s.n_qubits(), "expectation");
  double e = 0.0;
  for (const auto& t : obs.terms()) e += t.coeff * pauli_expectation(s, t.pauli);
  return e;
}

cplx matrix_element(const State& bra, const PauliSum& obs, const State& ket) {
  check_same_size(bra.n_qubits(), ket.n_qubits(), "matrix_element");
  check_same_size(obs.n_qubits(), ket.n_qubits(), "matrix_element");
  return bra.amplitudes().dot(apply_sum_vector(ket.amplitudes(), obs));
}

cplx inner_product(const State& s1, const State& s2) {
  check_same_size(s1.n_qubits(), s2.n_qubits(), "inner_product");
  // Eigen's dot conjugates the left operand.
  return s1.amplitudes().dot(s2.amplitudes());
}

Projection project_pauli(const State& s, const PauliString& p, int outcome) {
  check_same_size(p.n_qubits(), s.n_qubits(), "project_pauli");
  if (outcome != 1 && outcome != -1) throw InputError("projection outcome must be +1 or -1");
  Eigen::VectorXcd v = 0.5 * (s.amplitudes() + static_cast<double>(outcome) *
                                                   apply_pauli_vector(s.amplitudes(), p));
  const double prob = v.squaredNorm();
  if (prob < kBranchFloor) {
    throw DegenerateBranchError("projection branch " + std::to_string(outcome) + " of " +
                                    p.to_string() + " has probability " + std::to_string(prob),
                                prob);
  }
  return {prob, State::normalized(s.n_qubits(), std::move(v))};
}

double sample_pm1(double mean, long long shots, std::mt19937_64& rng) {
  if (shots < 1) throw InputError("shot count must be at least 1");
  double p = 0.5 * (1.0 + mean);
  p = std::min(1.0, std::max(0.0, p));
  std::binomial_distribution<long long> dist(shots, p);
  const long long k = dist(rng);
  return 2.0 * static_cast<double>(k) / static_cast<double>(shots) - 1.0;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer over a stream-offset seed
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double sample_expectation(const State& s, const PauliSum& obs, long long shots_per_term,
                          std::uint64_t seed) {
  check_same_size(obs.n_qubits(), s.n_qubits(), "sample_expectation");
  if (shots_per_term < 1) throw InputError("shots_per_term must be at least 1");
  double e = 0.0;
  std::uint64_t stream = 0;
  for (const auto& t : obs.terms()) {
    if (t.pauli.is_identity()) {
      e += t.coeff;
      continue;
    }
    std::mt19937_64 rng(mix_seed(seed, stream++));
    e += t.coeff * sample_pm1(pauli_expectation(s, t.pauli), shots_per_term, rng);
  }
  return e;
}

Measurement Measurement::with_shots(long long shots, std::uint64_t seed) {
  if (shots < 1) throw InputError("shot count must be at least 1");
  Measurement m;
  m.mode_ = Mode::shots;
  m.shots_ = shots;
  m.seed_ = seed;
  return m;
}

std::mt19937_64 Measurement::next_rng() { return std::mt19937_64(mix_seed(seed_, counter_++)); }

double Measurement::expect(const State& s, const PauliSum& obs) {
  if (is_exact()) return expectation(s, obs);
  return sample_expectation(s, obs, shots_, mix_seed(seed_, counter_++));
}

double Measurement::expect(const State& s, const PauliString& p) {
  if (is_exact() || p.is_identity()) return pauli_expectation(s, p);
  auto rng = next_rng();
  return sample_pm1(pauli_expectation(s, p), shots_, rng);
}

double Measurement::branch_probability(const State& s, const PauliString& p) {
  const double exact = 0.5 * (1.0 + pauli_expectation(s, p));
  if (is_exact()) return exact;
  auto rng = next_rng();
  return 0.5 * (1.0 + sample_pm1(2.0 * exact - 1.0, shots_, rng));
}

}  // namespace vqnac
