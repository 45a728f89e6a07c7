#include "vqnac/nac.hpp"

#include <algorithm>
#include <cmath>

#include "vqnac/error.hpp"

namespace vqnac {

namespace {

const cplx kI{0.0, 1.0};

void check_gate(const ParamCircuit& c, int a) {
  if (a < 0 || a >= c.n_pgates()) throw InputError("gate index out of range");
}

void check_param(const ParamCircuit& c, int p) {
  if (p < 0 || p >= c.n_theta()) throw InputError("circuit parameter index out of range");
}

State after_gate(const ParamCircuit& c, const Eigen::VectorXd& angles, const State& ref, int a) {
  return prefix_state_angles(c, angles, a, ref, Insertion::none(), a).state;
}

bool same_state(const State& a, const State& b) {
  return (a.amplitudes() - b.amplitudes()).norm() < 1e-14;
}

}  // namespace

cplx combine_superpositions(const State& k_ref, const State& l_ref, const std::function<cplx(const State&)>& diag) {
  const cplx dp = diag(superpose(k_ref, l_ref, 1.0));
  const cplx dm = diag(superpose(k_ref, l_ref, -1.0));
  const cplx dip = diag(superpose(k_ref, l_ref, kI));
  const cplx dim = diag(superpose(k_ref, l_ref, -kI));
  return 0.5 * ((dp - dm) - kI * (dip - dim));
}

cplx transition_amplitude(const ParamCircuit& c, const Eigen::VectorXd& theta, const PauliSum& A, const State& k_ref,
                          const State& l_ref, Measurement& m) {
  c.check_theta(theta);
  return combine_superpositions(k_ref, l_ref, [&](const State& s) { return cplx(m.expect(c.prepare(theta, s), A)); });
}

cplx transition_amplitude_direct(const ParamCircuit& c, const Eigen::VectorXd& theta, const PauliSum& A,
                                 const State& k_ref, const State& l_ref) {
  return matrix_element(c.prepare(theta, k_ref), A, c.prepare(theta, l_ref));
}

cplx overlap_first_deriv_gate(const ParamCircuit& c, const Eigen::VectorXd& angles, const State& k_ref,
                              const State& l_ref, int a, Measurement& m) {
  check_gate(c, a);
  const double g = c.g(a);
  const PauliString& P = c.P(a);
  if (same_state(k_ref, l_ref)) return kI * g * m.expect(after_gate(c, angles, k_ref, a), P);
  return kI * g *
         combine_superpositions(k_ref, l_ref, [&](const State& s) { return cplx(m.expect(after_gate(c, angles, s, a), P)); });
}

cplx overlap_first_deriv(const ParamCircuit& c, const Eigen::VectorXd& theta, const State& k_ref, const State& l_ref,
                         int p, Measurement& m) {
  check_param(c, p);
  const Eigen::VectorXd angles = c.gate_angles(theta);
  cplx sum = 0.0;
  for (int a : c.gates_of(p)) sum += overlap_first_deriv_gate(c, angles, k_ref, l_ref, a, m);
  return sum;
}

cplx overlap_second_deriv(const State& phi_ref, const ParamCircuit& c, const Eigen::VectorXd& angles, int a, int b,
                          Measurement& m) {
  check_gate(c, a);
  check_gate(c, b);
  c.check_angles(angles);
  if (a == b) return -c.g(a) * c.g(a);
  const int early = std::min(a, b);
  const int late = std::max(a, b);
  const double gg = c.g(a) * c.g(b);
  const PauliString& Pe = c.P(early);
  const PauliString& Pl = c.P(late);

  // Real part: projective branches of P_early.
  double p_plus_est = 0.0;
  if (!m.is_exact()) p_plus_est = m.branch_probability(after_gate(c, angles, phi_ref, early), Pe);
  double re = 0.0;
  for (int outcome : {1, -1}) {
    const auto kind = outcome > 0 ? Insertion::Kind::proj_plus : Insertion::Kind::proj_minus;
    try {
      PrefixResult r = prefix_state_angles(c, angles, early, phi_ref, Insertion{kind, Pe}, late);
      double prob = r.probability;
      if (!m.is_exact()) prob = outcome > 0 ? p_plus_est : 1.0 - p_plus_est;
      if (prob <= 0.0) continue;
      re += outcome * prob * m.expect(r.state, Pl);
    } catch (const DegenerateBranchError&) {
      // vanishing branch contributes nothing
    }
  }

  // Imaginary part: exp(+-i pi P_early / 4) insertions.
  const double e_plus =
      m.expect(prefix_state_angles(c, angles, early, phi_ref, Insertion::exp(Pe, 1), late).state, Pl);
  const double e_minus =
      m.expect(prefix_state_angles(c, angles, early, phi_ref, Insertion::exp(Pe, -1), late).state, Pl);
  return cplx(-gg * re, 0.5 * gg * (e_plus - e_minus));
}

cplx pair_second_deriv(const ParamCircuit& c, const Eigen::VectorXd& angles, const State& k_ref, const State& l_ref,
                       int a, int b, Measurement& m) {
  if (same_state(k_ref, l_ref)) throw InputError("pair_second_deriv needs distinct references");
  return combine_superpositions(k_ref, l_ref,
                                [&](const State& s) { return overlap_second_deriv(s, c, angles, a, b, m); });
}

cplx overlap_second_param(const ParamCircuit& c, const Eigen::VectorXd& theta, const State& k_ref, const State& l_ref,
                          int p, int q, Measurement& m) {
  check_param(c, p);
  check_param(c, q);
  const Eigen::VectorXd angles = c.gate_angles(theta);
  const bool diagonal = same_state(k_ref, l_ref);
  cplx sum = 0.0;
  for (int a : c.gates_of(p)) {
    for (int b : c.gates_of(q)) {
      sum += diagonal ? overlap_second_deriv(k_ref, c, angles, a, b, m) : pair_second_deriv(c, angles, k_ref, l_ref, a, b, m);
    }
  }
  return sum;
}

namespace {

// U with P_a inserted after each listed gate (unit-modulus Paulis keep the norm).
State inserted(const ParamCircuit& c, const Eigen::VectorXd& angles, const State& ref, std::vector<int> marks) {
  std::sort(marks.begin(), marks.end());
  State s = ref;
  int from = -1;
  for (int a : marks) {
    if (a > from) c.apply_segment(s, angles, from, a);
    from = a;
    s.apply_pauli(c.P(a));
  }
  c.apply_segment(s, angles, from, c.n_pgates());
  return s;
}

}  // namespace

cplx overlap_first_direct(const ParamCircuit& c, const Eigen::VectorXd& angles, const State& k_ref,
                          const State& l_ref, int a) {
  check_gate(c, a);
  const State bra = c.prepare_angles(angles, k_ref);
  return kI * c.g(a) * inner_product(bra, inserted(c, angles, l_ref, {a}));
}

cplx overlap_second_direct(const ParamCircuit& c, const Eigen::VectorXd& angles, const State& k_ref,
                           const State& l_ref, int a, int b) {
  check_gate(c, a);
  check_gate(c, b);
  const State bra = c.prepare_angles(angles, k_ref);
  return (kI * c.g(a)) * (kI * c.g(b)) * inner_product(bra, inserted(c, angles, l_ref, {a, b}));
}

State SolvedPoint::ref(int level) const {
  if (level < 0 || level >= cfg.levels()) throw InputError("level index out of range");
  return basis_state(circuit.n_qubits(), cfg.references[static_cast<std::size_t>(level)]);
}

cplx one_nac(const SolvedPoint& sp, const HamiltonianFamily& f, int I, int k, int l, Measurement& m, double gap_floor) {
  if (k == l) throw InputError("first-order coupling needs k != l");
  if (I < 0 || I >= f.n_params()) throw InputError("system-parameter index out of range");
  const auto& e = sp.result.energies;
  if (k < 0 || l < 0 || k >= e.size() || l >= e.size()) throw InputError("level index out of range");
  const double gap = e[k] - e[l];
  if (std::abs(gap) < gap_floor) {
    throw NearDegeneracyError("levels " + std::to_string(k) + " and " + std::to_string(l) + " are nearly degenerate",
                              gap);
  }
  const PauliSum dH = f.deriv(sp.result.R, I, 1);
  return -transition_amplitude(sp.circuit, sp.result.theta_star, dH, sp.ref(k), sp.ref(l), m) / gap;
}

NacResult one_nac_all(const SolvedPoint& sp, const HamiltonianFamily& f, int k, int l, Measurement& m,
                      double gap_floor) {
  NacResult out;
  out.kind = NacResult::Kind::one_nac;
  out.k = k;
  out.l = l;
  out.R = sp.result.R;
  out.values.resize(f.n_params());
  for (int I = 0; I < f.n_params(); ++I) out.values[I] = one_nac(sp, f, I, k, l, m, gap_floor);
  out.gap = sp.result.energies[k] - sp.result.energies[l];
  out.gauge_note = "phases fixed by U(theta*) acting on the computational references";
  return out;
}

cplx two_nac(const SolvedPoint& sp, const ThetaResponse& resp, int I, int k, int l, Measurement& m) {
  if (!resp.has_second) throw InputError("second-order coupling needs the second-order parameter response");
  if (I < 0 || I >= resp.first.cols()) throw InputError("system-parameter index out of range");
  const ParamCircuit& c = sp.circuit;
  const Eigen::VectorXd& theta = sp.result.theta_star;
  const State kr = sp.ref(k);
  const State lr = sp.ref(l);
  const int n = c.n_theta();
  cplx sum = 0.0;
  for (int p = 0; p < n; ++p) {
    const double xp = resp.first(p, I);
    for (int q = 0; q < n; ++q) {
      const double xq = resp.first(q, I);
      if (xp == 0.0 || xq == 0.0) continue;
      sum += xp * xq * overlap_second_param(c, theta, kr, lr, p, q, m);
    }
    const double y = resp.second[static_cast<std::size_t>(p)](I, I);
    if (y != 0.0) sum += y * overlap_first_deriv(c, theta, kr, lr, p, m);
  }
  return -sum;
}

NacResult two_nac_all(const SolvedPoint& sp, const ThetaResponse& resp, int k, int l, Measurement& m) {
  NacResult out;
  out.kind = NacResult::Kind::two_nac;
  out.k = k;
  out.l = l;
  out.R = sp.result.R;
  const int nx = static_cast<int>(resp.first.cols());
  out.values.resize(nx);
  for (int I = 0; I < nx; ++I) out.values[I] = two_nac(sp, resp, I, k, l, m);
  out.gap = sp.result.energies[k] - sp.result.energies[l];
  out.gauge_note = "phases fixed by U(theta*) acting on the computational references";
  return out;
}

double dboc(const SolvedPoint& sp, const ThetaResponse& resp, const std::vector<double>& masses, int k, Measurement& m) {
  if (static_cast<Eigen::Index>(masses.size()) != resp.first.cols()) {
    throw InputError("need one mass per system parameter");
  }
  double total = 0.0;
  for (std::size_t I = 0; I < masses.size(); ++I) {
    if (!(masses[I] > 0.0)) throw InputError("masses must be positive");
    total += two_nac(sp, resp, static_cast<int>(I), k, k, m).real() / (2.0 * masses[I]);
  }
  return total;
}

}  // namespace vqnac
