#include <gtest/gtest.h>

#include <random>

#include "random_circuit.hpp"
#include "vqnac/error.hpp"
#include "vqnac/family.hpp"
#include "vqnac/nac.hpp"
#include "vqnac/oracle.hpp"
#include "vqnac/response.hpp"

using namespace vqnac;

namespace {

Eigen::VectorXd at(double x) {
  Eigen::VectorXd R(1);
  R << x;
  return R;
}

struct Solved {
  HamiltonianFamily f;
  SolvedPoint sp;
  ThetaResponse resp;
};

Solved rotor_at(double x) {
  Solved s{builtin_rotor(), {}, {}};
  s.sp.circuit = build_ansatz("ry_cnot", 1, 0);
  s.sp.cfg.weights = {1.0, 0.5};
  s.sp.cfg.references = {"0", "1"};
  s.sp.result = run_ssvqe(s.f, at(x), s.sp.circuit, s.sp.cfg);
  s.resp = solve_theta_response(make_objective(s.sp.circuit, s.sp.cfg), s.sp.result, s.f, at(x));
  return s;
}

Solved crossing_at(double x) {
  Solved s{builtin_avoided_crossing(0.1), {}, {}};
  s.sp.circuit = build_ansatz("so4", 2, 0);
  s.sp.cfg.weights = {1.0, 0.5};
  s.sp.cfg.references = {"00", "01"};
  s.sp.cfg.restarts = 6;
  const Objective obj = make_objective(s.sp.circuit, s.sp.cfg);
  s.sp.result = newton_refine(obj, s.f, at(x), run_ssvqe(s.f, at(x), s.sp.circuit, s.sp.cfg));
  s.resp = solve_theta_response(obj, s.sp.result, s.f, at(x));
  return s;
}

}  // namespace

TEST(Decomposition, SuperpositionCombination) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + trial % 2;
    const ParamCircuit c = fuzz::random_circuit(n, 4, rng);
    const Eigen::VectorXd th = fuzz::random_vector(c.n_theta(), rng);
    const PauliSum A = fuzz::random_observable(n, 5, rng);
    const State k = basis_state_index(n, 0), l = basis_state_index(n, 3);
    Measurement m;
    const cplx via = transition_amplitude(c, th, A, k, l, m);
    const cplx direct = transition_amplitude_direct(c, th, A, k, l);
    EXPECT_NEAR(std::abs(via - direct), 0.0, 1e-10);
  }
}

TEST(Decomposition, RandomDrawsMatchDirectContraction) {
  std::mt19937_64 rng(32);
  Measurement m;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + trial % 2;
    const ParamCircuit c = fuzz::random_circuit(n, 3 + trial % 3, rng);
    const Eigen::VectorXd ang = c.gate_angles(fuzz::random_vector(c.n_theta(), rng));
    const int a = static_cast<int>(rng() % c.n_pgates());
    const int b = static_cast<int>(rng() % c.n_pgates());
    const std::uint64_t ki = rng() % (1u << n);
    const std::uint64_t li = (ki + 1 + rng() % ((1u << n) - 1)) % (1u << n);
    const State k = basis_state_index(n, ki), l = basis_state_index(n, li);
    EXPECT_NEAR(std::abs(overlap_first_deriv_gate(c, ang, k, l, a, m) - overlap_first_direct(c, ang, k, l, a)), 0.0,
                1e-10);
    EXPECT_NEAR(std::abs(overlap_second_deriv(k, c, ang, a, b, m) - overlap_second_direct(c, ang, k, k, a, b)), 0.0,
                1e-10)
        << "a = " << a << " b = " << b;
    EXPECT_NEAR(std::abs(pair_second_deriv(c, ang, k, l, a, b, m) - overlap_second_direct(c, ang, k, l, a, b)), 0.0,
                1e-10);
  }
}

TEST(Decomposition, DiagonalShortcutIsExact) {
  std::mt19937_64 rng(33);
  Measurement m;
  for (int trial = 0; trial < 20; ++trial) {
    const ParamCircuit c = fuzz::random_circuit(2, 4, rng);
    const Eigen::VectorXd ang = c.gate_angles(fuzz::random_vector(c.n_theta(), rng));
    const int a = static_cast<int>(rng() % c.n_pgates());
    const cplx v = overlap_second_deriv(basis_state(2, "10"), c, ang, a, a, m);
    EXPECT_EQ(v, cplx(-c.g(a) * c.g(a), 0.0));
  }
}

TEST(Decomposition, ParameterLevelSumsGates) {
  const ParamCircuit c = build_ansatz("a_gate", 2, 1);
  Eigen::VectorXd th(4);
  th << 0.2, -0.4, 0.9, 0.3;
  const Eigen::VectorXd ang = c.gate_angles(th);
  const State k = basis_state(2, "01"), l = basis_state(2, "10");
  Measurement m;
  cplx expect = 0.0;
  for (int a : c.gates_of(2)) expect += overlap_first_direct(c, ang, k, l, a);
  EXPECT_NEAR(std::abs(overlap_first_deriv(c, th, k, l, 2, m) - expect), 0.0, 1e-12);
  cplx expect2 = 0.0;
  for (int a : c.gates_of(2)) {
    for (int b : c.gates_of(3)) expect2 += overlap_second_direct(c, ang, k, l, a, b);
  }
  EXPECT_NEAR(std::abs(overlap_second_param(c, th, k, l, 2, 3, m) - expect2), 0.0, 1e-11);
}

TEST(OneNac, RotorMagnitudeIsOneHalf) {
  for (double x : {-1.2, 0.0, 0.7, 2.5}) {
    Solved s = rotor_at(x);
    Measurement m;
    EXPECT_NEAR(std::abs(one_nac(s.sp, s.f, 0, 0, 1, m)), 0.5, 1e-6);
  }
}

TEST(OneNac, AvoidedCrossingMatchesFiniteDifference) {
  for (double x : {-0.8, -0.4, 0.5}) {
    Solved s = crossing_at(x);
    Measurement m;
    const auto v0 = level_state(s.sp.circuit, s.sp.result, s.sp.cfg, 0).amplitudes();
    const auto v1 = level_state(s.sp.circuit, s.sp.result, s.sp.cfg, 1).amplitudes();
    const cplx d = one_nac(s.sp, s.f, 0, 0, 1, m);
    const cplx fd = oracle::fd_nac(s.f, at(x), 0, 0, 1, 1, 1e-4, v0, v1);
    EXPECT_NEAR(std::abs(d - fd), 0.0, 1e-5) << "R = " << x;
    EXPECT_NEAR(std::abs(one_nac(s.sp, s.f, 0, 1, 0, m) + std::conj(d)), 0.0, 1e-10);
  }
}

TEST(OneNac, GaugeFuzz) {
  // Re-phasing the reference eigenvectors rotates the coupling but not its magnitude.
  std::mt19937_64 rng(34);
  std::uniform_real_distribution<double> ph(-M_PI, M_PI);
  Solved s = crossing_at(-0.3);
  Measurement m;
  const auto v0 = level_state(s.sp.circuit, s.sp.result, s.sp.cfg, 0).amplitudes();
  const auto v1 = level_state(s.sp.circuit, s.sp.result, s.sp.cfg, 1).amplitudes();
  const cplx d = one_nac(s.sp, s.f, 0, 0, 1, m);
  for (int t = 0; t < 20; ++t) {
    const double a = ph(rng), b = ph(rng);
    const Eigen::VectorXcd g0 = v0 * std::polar(1.0, a), g1 = v1 * std::polar(1.0, b);
    const cplx fd = oracle::fd_nac(s.f, at(-0.3), 0, 0, 1, 1, 1e-4, g0, g1);
    EXPECT_NEAR(std::abs(fd), std::abs(d), 1e-5);
    EXPECT_NEAR(std::abs(fd - d * std::polar(1.0, b - a)), 0.0, 1e-5);
  }
}

TEST(OneNac, NearDegeneracyIsReported) {
  const HamiltonianFamily f = builtin_constant(PauliSum::from_strings({{1.0, "ZZ"}}));
  SolvedPoint sp;
  sp.circuit = build_ansatz("ry_cnot", 2, 1);
  sp.cfg.weights = {1.0, 0.5};
  sp.cfg.references = {"00", "11"};
  sp.result = run_ssvqe(f, at(0.0), sp.circuit, sp.cfg);
  Measurement m;
  EXPECT_THROW(one_nac(sp, f, 0, 0, 1, m), NearDegeneracyError);
}

TEST(TwoNac, RotorValues) {
  Solved s = rotor_at(0.6);
  Measurement m;
  EXPECT_NEAR(std::abs(two_nac(s.sp, s.resp, 0, 0, 1, m)), 0.0, 1e-5);
  // -<chi|d^2 chi> = 1/4
  EXPECT_NEAR(two_nac(s.sp, s.resp, 0, 0, 0, m).real(), 0.25, 1e-5);
  EXPECT_NEAR(dboc(s.sp, s.resp, {1.0}, 0, m), 0.125, 1e-5);
  EXPECT_THROW(dboc(s.sp, s.resp, {0.0}, 0, m), InputError);
}

TEST(TwoNac, AvoidedCrossingMatchesFiniteDifference) {
  for (double x : {-0.7, 0.4}) {
    Solved s = crossing_at(x);
    Measurement m;
    const auto v0 = level_state(s.sp.circuit, s.sp.result, s.sp.cfg, 0).amplitudes();
    const auto v1 = level_state(s.sp.circuit, s.sp.result, s.sp.cfg, 1).amplitudes();
    auto fd = [&](int k, int l, const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
      const cplx c1 = oracle::fd_nac(s.f, at(x), 0, k, l, 2, 2e-3, a, b);
      const cplx c2 = oracle::fd_nac(s.f, at(x), 0, k, l, 2, 1e-3, a, b);
      return (4.0 * c2 - c1) / 3.0;
    };
    EXPECT_NEAR(std::abs(two_nac(s.sp, s.resp, 0, 0, 1, m) - fd(0, 1, v0, v1)), 0.0, 1e-4) << "R = " << x;
    EXPECT_NEAR(std::abs(two_nac(s.sp, s.resp, 0, 0, 0, m) - fd(0, 0, v0, v0)), 0.0, 1e-4) << "R = " << x;
  }
}

TEST(Shots, TransitionAmplitudeWithinStandardError) {
  // Each superposition expectation has variance sum_j h_j^2 (1 - <P_j>^2) / shots.
  const ParamCircuit c = build_ansatz("ry_cnot", 2, 1);
  Eigen::VectorXd th(4);
  th << 0.3, -0.8, 1.1, 0.5;
  const PauliSum A = PauliSum::from_strings({{0.7, "ZI"}, {-0.4, "XX"}, {0.25, "YZ"}});
  const State k = basis_state(2, "00"), l = basis_state(2, "01");
  const cplx exact = transition_amplitude_direct(c, th, A, k, l);
  const long long shots = 8192;
  auto var = [&](cplx phase) {
    const State s = c.prepare(th, superpose(k, l, phase));
    double v = 0;
    for (const auto& t : A.terms()) {
      const double e = pauli_expectation(s, t.pauli);
      v += t.coeff * t.coeff * (1 - e * e);
    }
    return v / shots;
  };
  const double se_re = 0.5 * std::sqrt(var(1.0) + var(-1.0));
  const double se_im = 0.5 * std::sqrt(var(cplx(0, 1)) + var(cplx(0, -1)));
  int inside = 0;
  const int trials = 200;
  for (int t = 0; t < trials; ++t) {
    Measurement m = Measurement::with_shots(shots, 1000 + t);
    const cplx v = transition_amplitude(c, th, A, k, l, m);
    if (std::abs(v.real() - exact.real()) < 5 * se_re && std::abs(v.imag() - exact.imag()) < 5 * se_im) ++inside;
  }
  EXPECT_GE(inside, 198);
}
