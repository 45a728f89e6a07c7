#include "vqnac/berry.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "vqnac/error.hpp"
#include "vqnac/nac.hpp"
#include "vqnac/oracle.hpp"

namespace vqnac {

double wrap_phase(double x) {
  constexpr double pi = std::numbers::pi;
  double y = std::remainder(x, 2.0 * pi);
  if (y <= -pi) y += 2.0 * pi;
  return y;
}

std::string to_string(BerryMethod m) {
  return m == BerryMethod::line_integral ? "line_integral" : "fukui_hatsugai";
}

BerryMethod parse_berry_method(const std::string& s) {
  if (s == "line_integral") return BerryMethod::line_integral;
  if (s == "fukui_hatsugai" || s == "fhs") return BerryMethod::fukui_hatsugai;
  throw InputError("unknown Berry method '" + s + "'");
}

OverlapMode parse_overlap_mode(const std::string& s) {
  if (s == "direct") return OverlapMode::direct;
  if (s == "hadamard" || s == "hadamard_circuit") return OverlapMode::hadamard;
  throw InputError("unknown overlap mode '" + s + "'");
}

cplx berry_integrand(const ParamCircuit& c, const Eigen::VectorXd& theta, const State& ref, int p, Measurement& m) {
  if (p < 0 || p >= c.n_theta()) throw InputError("integrand parameter index out of range");
  return overlap_first_deriv(c, theta, ref, ref, p, m);
}

namespace {

Eigen::VectorXcd integrand_vector(const ParamCircuit& c, const Eigen::VectorXd& theta, const State& ref,
                                  Measurement& m) {
  Eigen::VectorXcd v(c.n_theta());
  for (int p = 0; p < c.n_theta(); ++p) v[p] = berry_integrand(c, theta, ref, p, m);
  return v;
}

State with_ancilla(const State& s) {
  Eigen::VectorXcd amp = Eigen::VectorXcd::Zero(2 * static_cast<Eigen::Index>(s.dim()));
  amp.head(static_cast<Eigen::Index>(s.dim())) = s.amplitudes();
  return State::from_amplitudes(s.n_qubits() + 1, std::move(amp));
}

}  // namespace

cplx berry_line_integral(const ParamCircuit& c, const State& ref, const std::vector<EigensolveResult>& path,
                         Measurement& m) {
  if (path.size() < 3) throw InputError("line integral needs at least 3 path points");
  cplx sum = 0.0;
  for (std::size_t p = 0; p + 1 < path.size(); ++p) {
    const Eigen::VectorXd step = path[p + 1].theta_star - path[p].theta_star;
    const Eigen::VectorXcd a = integrand_vector(c, path[p].theta_star, ref, m);
    sum += (step.cast<cplx>().array() * a.array()).sum();
  }
  return sum;
}

cplx overlap_estimate(const ParamCircuit& c, const State& ref, const Eigen::VectorXd& theta_s,
                      const Eigen::VectorXd& theta_t, OverlapMode mode, Measurement& m) {
  c.check_theta(theta_s);
  c.check_theta(theta_t);
  if (mode == OverlapMode::direct) return inner_product(c.prepare(theta_s, ref), c.prepare(theta_t, ref));
  const int anc = c.n_qubits();
  const ParamCircuit on1 = controlled_compile(c, true);
  const ParamCircuit on0 = controlled_compile(c, false);
  State base = with_ancilla(ref);
  base.apply_hadamard(anc);
  base = on1.prepare(theta_t, base);
  base = on0.prepare(theta_s, base);
  const PauliString z_anc = PauliString::single(anc + 1, anc, 'Z');
  State re_state = base;
  re_state.apply_hadamard(anc);
  State im_state = base;
  im_state.apply_phase(anc, cplx(0.0, -1.0));
  im_state.apply_hadamard(anc);
  return {m.expect(re_state, z_anc), m.expect(im_state, z_anc)};
}

double phase_mismatch(const ParamCircuit& c, const State& ref, const Eigen::VectorXd& theta_s,
                      const Eigen::VectorXd& theta_t, OverlapMode mode, Measurement& m) {
  const cplx ov = overlap_estimate(c, ref, theta_s, theta_t, mode, m);
  if (std::abs(ov) <= kGaugeOverlapMin) {
    throw GaugeMismatchError("endpoint states differ beyond a phase: |overlap| = " + std::to_string(std::abs(ov)));
  }
  return std::arg(ov);
}

double fhs_from_states(const std::vector<State>& states) {
  if (states.size() < 2) throw InputError("Fukui-Hatsugai chain needs at least two states");
  double sum = 0.0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    const cplx ov = inner_product(states[i], states[(i + 1) % states.size()]);
    if (std::abs(ov) < 1e-12) throw DiscretizationError("zero overlap on link " + std::to_string(i));
    sum += std::arg(ov);
  }
  return wrap_phase(sum);
}

double berry_fhs(const ParamCircuit& c, const State& ref, const std::vector<EigensolveResult>& path, OverlapMode mode,
                 Measurement& m) {
  if (path.size() < 3) throw InputError("Fukui-Hatsugai route needs at least 3 path points");
  const std::size_t n = path.size() - 1;
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = (i + 1) % n;
    const cplx ov = overlap_estimate(c, ref, path[i].theta_star, path[j].theta_star, mode, m);
    if (std::abs(ov) < 1e-12) throw DiscretizationError("zero overlap on link " + std::to_string(i));
    sum += std::arg(ov);
  }
  return wrap_phase(sum);
}

std::vector<Eigen::VectorXd> angle_loop(int K, int n_params, int I) {
  if (K < 3) throw InputError("loop needs K >= 3");
  if (I < 0 || I >= n_params) throw InputError("loop parameter index out of range");
  std::vector<Eigen::VectorXd> out;
  out.reserve(static_cast<std::size_t>(K) + 1);
  for (int p = 0; p <= K; ++p) {
    Eigen::VectorXd R = Eigen::VectorXd::Zero(n_params);
    R[I] = 2.0 * std::numbers::pi * p / K;
    out.push_back(R);
  }
  return out;
}

LoopResult berry_phase(const HamiltonianFamily& f, const std::vector<Eigen::VectorXd>& loop, const ParamCircuit& c,
                       const SsvqeConfig& cfg, const BerryOptions& opt, Measurement& m) {
  if (loop.size() < 4) throw InputError("loop needs at least 3 distinct points plus the closing point");
  if (!f.eval(loop.front()).approx_equal(f.eval(loop.back()), 1e-12)) {
    throw InputError("loop is not closed: H differs between first and last point");
  }
  LoopResult out;
  out.method = opt.method;
  out.points = loop;
  const std::vector<EigensolveResult> path = continue_along_path(f, loop, c, cfg);
  const State ref = basis_state(c.n_qubits(), cfg.references.front());
  std::string notes;
  for (const auto& r : path) {
    out.thetas.push_back(r.theta_star);
    out.all_converged = out.all_converged && r.converged;
    out.max_jump = std::max(out.max_jump, r.max_jump);
  }
  if (!out.all_converged) notes += "unconverged point on loop; ";
  if (out.max_jump > opt.max_jump) notes += "large parameter jump along loop; ";

  out.endpoint_overlap = overlap_estimate(c, ref, path.front().theta_star, path.back().theta_star, OverlapMode::direct, m);
  const bool endpoint_same = std::abs(out.endpoint_overlap) > 1.0 - 1e-6;
  if (!endpoint_same) notes += "endpoint states differ beyond a phase; ";

  if (opt.method == BerryMethod::line_integral) {
    for (const auto& r : path) out.integrand.push_back(integrand_vector(c, r.theta_star, ref, m));
    out.line_integral = berry_line_integral(c, ref, path, m);
    if (std::abs(std::abs(out.endpoint_overlap) - 1.0) < opt.shortcut_tol &&
        std::abs(std::arg(out.endpoint_overlap)) < opt.shortcut_tol) {
      out.mismatch = 0.0;
      out.mismatch_shortcut = true;
    } else {
      try {
        out.mismatch = phase_mismatch(c, ref, path.front().theta_star, path.back().theta_star, opt.overlap, m);
      } catch (const GaugeMismatchError& e) {
        out.mismatch = std::arg(out.endpoint_overlap);
        notes += std::string(e.what()) + "; ";
      }
    }
    const cplx total = cplx(0.0, -1.0) * out.line_integral - out.mismatch;
    if (std::abs(total.imag()) > 1e-9) throw NumericalError("Berry phase assembly has an imaginary part");
    out.pi_c = wrap_phase(total.real());
  } else {
    out.pi_c = berry_fhs(c, ref, path, opt.overlap, m);
  }

  out.oracle = std::numeric_limits<double>::quiet_NaN();
  bool oracle_ok = true;
  if (opt.oracle_check && f.n_qubits() <= oracle::kMaxDenseQubits) {
    try {
      out.oracle = oracle::exact_berry(f, loop);
    } catch (const OracleInvalid& e) {
      oracle_ok = false;
      notes += std::string("oracle: ") + e.what() + "; ";
    }
  }
  out.stable = out.all_converged && endpoint_same && out.max_jump <= opt.max_jump && oracle_ok;
  out.diagnostics = notes.empty() ? "ok" : notes.substr(0, notes.size() - 2);
  return out;
}

}  // namespace vqnac
