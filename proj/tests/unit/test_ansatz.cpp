#include <gtest/gtest.h>

#include "random_circuit.hpp"
#include "vqnac/ansatz.hpp"
#include "vqnac/error.hpp"
#include "vqnac/oracle.hpp"

using namespace vqnac;

namespace {

Eigen::MatrixXcd unitary_of(const ParamCircuit& c, const Eigen::VectorXd& theta) {
  const int d = 1 << c.n_qubits();
  Eigen::MatrixXcd U(d, d);
  for (int i = 0; i < d; ++i) U.col(i) = c.prepare(theta, basis_state_index(c.n_qubits(), i)).amplitudes();
  return U;
}

}  // namespace

TEST(Ansatz, ParameterCounts) {
  EXPECT_EQ(build_ansatz("ry_cnot", 3, 2).n_theta(), 9);
  EXPECT_EQ(build_ansatz("so4", 4, 0).n_theta(), 36);
  EXPECT_EQ(build_ansatz("so4", 2, 0).n_theta(), 6);
  const ParamCircuit a = build_ansatz("a_gate", 2, 1);
  EXPECT_EQ(a.n_theta(), 4);
  EXPECT_EQ(a.n_pgates(), 6);
  EXPECT_FALSE(a.one_gate_per_param());
  EXPECT_EQ(a.gates_of(2).size(), 2u);
  EXPECT_THROW(build_ansatz("so4", 3, 0), InputError);
  EXPECT_THROW(build_ansatz("a_gate", 3, 0), InputError);
  EXPECT_THROW(build_ansatz("nope", 2, 0), InputError);
}

TEST(Ansatz, AGatePreservesParticleNumber) {
  // The A gate mixes |01> and |10> only.
  const ParamCircuit a = build_ansatz("a_gate", 2, 1);
  Eigen::VectorXd th(4);
  th << 0.0, 0.0, 0.7, -1.3;
  const State s = a.prepare(th, basis_state(2, "01"));
  EXPECT_NEAR(std::abs(s[0]), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(s[3]), 0.0, 1e-14);
  EXPECT_NEAR(std::norm(s[1]) + std::norm(s[2]), 1.0, 1e-14);
}

TEST(Ansatz, So4IsRealOrthogonal) {
  std::mt19937_64 rng(1);
  const ParamCircuit c = build_ansatz("so4", 2, 0);
  const Eigen::MatrixXcd U = unitary_of(c, fuzz::random_vector(6, rng));
  EXPECT_LT(U.imag().norm(), 1e-14);
  EXPECT_NEAR(U.real().determinant(), 1.0, 1e-12);
}

TEST(Ansatz, JacobianCountsSharedGates) {
  const ParamCircuit a = build_ansatz("a_gate", 2, 1);
  const Eigen::MatrixXd J = a.jacobian();
  EXPECT_EQ(J.rows(), 6);
  EXPECT_EQ(J.cols(), 4);
  EXPECT_DOUBLE_EQ(J.col(2).sum(), 2.0);
  Eigen::VectorXd th(4);
  th << 0.1, 0.2, 0.3, 0.4;
  EXPECT_LT((a.gate_angles(th) - J * th).norm(), 1e-15);
}

TEST(Ansatz, ControlledCompileActsOnlyWhenAncillaMatches) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const ParamCircuit c = fuzz::random_circuit(2, 4, rng);
    const Eigen::VectorXd th = fuzz::random_vector(c.n_theta(), rng);
    const Eigen::MatrixXcd U = unitary_of(c, th);
    const ParamCircuit on = controlled_compile(c, true);
    const ParamCircuit off = controlled_compile(c, false);
    EXPECT_EQ(on.n_qubits(), 3);
    const Eigen::MatrixXcd Uon = unitary_of(on, th), Uoff = unitary_of(off, th);
    EXPECT_LT((Uon.block(4, 4, 4, 4) - U).norm(), 1e-12);
    EXPECT_LT((Uon.block(0, 0, 4, 4) - Eigen::MatrixXcd::Identity(4, 4)).norm(), 1e-12);
    EXPECT_LT((Uoff.block(0, 0, 4, 4) - U).norm(), 1e-12);
    EXPECT_LT((Uoff.block(4, 4, 4, 4) - Eigen::MatrixXcd::Identity(4, 4)).norm(), 1e-12);
  }
}

TEST(Ansatz, PrefixStateSplitsCircuit) {
  std::mt19937_64 rng(8);
  const ParamCircuit c = fuzz::random_circuit(3, 5, rng);
  const Eigen::VectorXd ang = c.gate_angles(fuzz::random_vector(c.n_theta(), rng));
  const State ref = basis_state(3, "010");
  const State full = c.prepare_angles(ang, ref);
  const PrefixResult all = prefix_state_angles(c, ang, 2, ref, Insertion::none(), c.n_pgates());
  EXPECT_LT((all.state.amplitudes() - full.amplitudes()).norm(), 1e-13);
  // exp(+i pi P/4) followed by exp(-i pi P/4) is the identity
  State s = prefix_state_angles(c, ang, 1, ref, Insertion::exp(c.P(1), +1), 1).state;
  s.apply_pauli_rotation(c.P(1), -1.0, M_PI / 4);
  const State plain = prefix_state_angles(c, ang, 1, ref, Insertion::none(), 1).state;
  EXPECT_LT((s.amplitudes() - plain.amplitudes()).norm(), 1e-13);
}

TEST(Ansatz, CircuitJsonRoundTrip) {
  const std::string text = R"({"n_qubits": 2, "gates": [
    {"type": "RY", "targets": [0], "param_index": 0},
    {"type": "CNOT", "targets": [0, 1]},
    {"type": "rotation", "pauli": "XY", "g": 0.25, "param_index": 1},
    {"type": "H", "targets": [1]}]})";
  const ParamCircuit c = parse_circuit_json(text);
  EXPECT_EQ(c.n_theta(), 2);
  EXPECT_EQ(c.n_pgates(), 2);
  EXPECT_DOUBLE_EQ(c.g(1), 0.25);
  EXPECT_THROW(parse_circuit_json(R"({"n_qubits": 2, "gates": [{"type": "Q", "targets": [0]}]})"), LoadError);
  EXPECT_THROW(parse_circuit_json(R"({"n_qubits": 2, "gates": [{"type": "rotation", "pauli": "X", "param_index": 0}]})"),
               LoadError);
}
