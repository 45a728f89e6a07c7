#include "vqnac/ssvqe.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "vqnac/error.hpp"
#include "vqnac/response.hpp"

namespace vqnac {

void SsvqeConfig::validate(int n_qubits) const {
  if (weights.empty()) throw ConfigError("SSVQE needs at least one weight");
  if (weights.size() != references.size()) {
    throw ConfigError("SSVQE has " + std::to_string(weights.size()) + " weights but " +
                      std::to_string(references.size()) + " references");
  }
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!(weights[i] > 0.0)) throw ConfigError("SSVQE weights must be positive");
    if (i > 0 && !(weights[i] < weights[i - 1])) throw ConfigError("SSVQE weights must be strictly decreasing");
  }
  std::set<std::string> seen;
  for (const auto& r : references) {
    if (static_cast<int>(r.size()) != n_qubits) {
      throw ConfigError("reference \"" + r + "\" has length " + std::to_string(r.size()) + ", expected " +
                        std::to_string(n_qubits));
    }
    if (r.find_first_not_of("01") != std::string::npos) throw ConfigError("reference \"" + r + "\" is not a bitstring");
    if (!seen.insert(r).second) throw ConfigError("SSVQE references must be distinct (orthogonal)");
  }
  if (restarts < 0) throw ConfigError("restart count must be nonnegative");
  if (!(optimizer.grad_tol > 0.0) || optimizer.max_iter < 1) throw ConfigError("invalid optimizer tolerances");
}

double Objective::value(const Eigen::VectorXd& angles, const PauliSum& H) const {
  double v = 0.0;
  for (std::size_t i = 0; i < refs.size(); ++i) {
    v += weights[i] * expectation(circuit.prepare_angles(angles, refs[i]), H);
  }
  return v;
}

Objective make_objective(const ParamCircuit& c, const SsvqeConfig& cfg) {
  cfg.validate(c.n_qubits());
  Objective obj{c, {}, cfg.weights, std::nullopt};
  for (const auto& r : cfg.references) obj.refs.push_back(basis_state(c.n_qubits(), r));
  if (cfg.beta_S != 0.0 || cfg.beta_N != 0.0) {
    PauliSum zero(c.n_qubits());
    zero.add(0.0, PauliString::identity(c.n_qubits()));
    obj.penalty = builtin_penalty(zero, cfg.beta_S, cfg.beta_N, cfg.N0);
  }
  return obj;
}

HamiltonianFamily penalized_family(const HamiltonianFamily& f, const SsvqeConfig& cfg) {
  if (cfg.beta_S == 0.0 && cfg.beta_N == 0.0) return f;
  PauliSum zero(f.n_qubits());
  zero.add(0.0, PauliString::identity(f.n_qubits()));
  return f.plus_constant(builtin_penalty(zero, cfg.beta_S, cfg.beta_N, cfg.N0));
}

double ssvqe_cost(const ParamCircuit& c, const Eigen::VectorXd& theta, const PauliSum& H, const SsvqeConfig& cfg) {
  if (H.n_qubits() != c.n_qubits()) throw InputError("Hamiltonian and circuit qubit counts differ");
  return make_objective(c, cfg).value(c.gate_angles(theta), H);
}

Eigen::VectorXd level_energies(const ParamCircuit& c, const Eigen::VectorXd& theta, const PauliSum& H,
                               const SsvqeConfig& cfg) {
  Eigen::VectorXd e(cfg.levels());
  for (int i = 0; i < cfg.levels(); ++i) {
    e[i] = expectation(c.prepare(theta, basis_state(c.n_qubits(), cfg.references[static_cast<std::size_t>(i)])), H);
  }
  return e;
}

namespace {

OptResult optimize_from(const Objective& obj, const PauliSum& H, const Eigen::VectorXd& x0, const OptOptions& opt) {
  const ParamCircuit& c = obj.circuit;
  auto cost = [&](const Eigen::VectorXd& th) { return obj.value(c.gate_angles(th), H); };
  auto grad = [&](const Eigen::VectorXd& th) { return cost_gradient(obj, th, H); };
  return minimize(cost, grad, x0, opt);
}

bool better(const OptResult& a, const OptResult& b) {
  // Lower cost wins; ties (within rounding) go to the converged run.
  const double tol = 1e-10 * (1.0 + std::abs(b.f));
  if (a.f < b.f - tol) return true;
  if (a.f > b.f + tol) return false;
  return a.converged && !b.converged;
}

}  // namespace

EigensolveResult run_ssvqe(const HamiltonianFamily& f, const Eigen::VectorXd& R, const ParamCircuit& c,
                           const SsvqeConfig& cfg, const std::optional<Eigen::VectorXd>& theta0) {
  if (f.n_qubits() != c.n_qubits()) {
    throw InputError("family has " + std::to_string(f.n_qubits()) + " qubits, circuit has " +
                     std::to_string(c.n_qubits()));
  }
  const Objective obj = make_objective(c, cfg);
  const PauliSum H = penalized_family(f, cfg).eval(R);
  std::mt19937_64 rng(mix_seed(cfg.seed, 0));
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  auto random_start = [&] {
    Eigen::VectorXd x(c.n_theta());
    for (int a = 0; a < c.n_theta(); ++a) x[a] = angle(rng);
    return x;
  };

  std::optional<OptResult> best;
  auto consider = [&](const Eigen::VectorXd& x0) {
    OptResult r = optimize_from(obj, H, x0, cfg.optimizer);
    if (!best || better(r, *best)) best = std::move(r);
  };
  if (theta0) {
    c.check_theta(*theta0);
    consider(*theta0);
    if (!best->converged) {
      for (int k = 0; k < cfg.restarts; ++k) consider(random_start());
    }
  } else {
    const int starts = std::max(1, cfg.restarts);
    for (int k = 0; k < starts; ++k) consider(random_start());
  }

  EigensolveResult out;
  out.theta_star = best->x;
  out.cost = best->f;
  out.converged = best->converged;
  out.grad_norm = best->grad_norm;
  out.iterations = best->iterations;
  out.message = best->message;
  out.R = R;
  out.energies = level_energies(c, out.theta_star, H, cfg);
  return out;
}

State level_state(const ParamCircuit& c, const EigensolveResult& r, const SsvqeConfig& cfg, int level) {
  if (level < 0 || level >= cfg.levels()) throw InputError("level index out of range");
  return c.prepare(r.theta_star, basis_state(c.n_qubits(), cfg.references[static_cast<std::size_t>(level)]));
}

std::vector<EigensolveResult> continue_along_path(const HamiltonianFamily& f, const std::vector<Eigen::VectorXd>& path,
                                                  const ParamCircuit& c, const SsvqeConfig& cfg) {
  std::vector<EigensolveResult> out;
  out.reserve(path.size());
  for (std::size_t p = 0; p < path.size(); ++p) {
    if (p == 0) {
      out.push_back(run_ssvqe(f, path[p], c, cfg));
      continue;
    }
    const EigensolveResult& prev = out.back();
    EigensolveResult r = run_ssvqe(f, path[p], c, cfg, prev.theta_star);
    r.max_jump = (r.theta_star - prev.theta_star).cwiseAbs().maxCoeff();
    const cplx ov = inner_product(level_state(c, prev, cfg, 0), level_state(c, r, cfg, 0));
    r.sign_flip = ov.real() < 0.0;
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace vqnac
