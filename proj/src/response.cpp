#include "vqnac/response.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "vqnac/error.hpp"

namespace vqnac {

namespace {

double shift_rec(const Objective& obj, Eigen::VectorXd& angles, const PauliSum& H, const std::vector<int>& gates,
                 std::size_t idx) {
  if (idx == gates.size()) return obj.value(angles, H);
  const int a = gates[idx];
  const double g = obj.circuit.g(a);
  if (g == 0.0) return 0.0;
  const double s = std::numbers::pi / (4.0 * g);
  angles[a] += s;
  const double fp = shift_rec(obj, angles, H, gates, idx + 1);
  angles[a] -= 2.0 * s;
  const double fm = shift_rec(obj, angles, H, gates, idx + 1);
  angles[a] += s;
  return g * (fp - fm);
}

// U with (i g_a P_a)^{m_a} placed right after each parametric gate a.
Eigen::VectorXcd derivative_vector(const ParamCircuit& c, const Eigen::VectorXd& angles, const State& ref,
                                   const std::vector<int>& mult) {
  State s = ref;
  int a = 0;
  for (const Gate& gt : c.gates()) {
    if (!gt.parametric) {
      apply_fixed_gate_inplace(s, gt.fixed);
      continue;
    }
    s.apply_pauli_rotation(gt.pauli, gt.g, angles[a], gt.controls);
    for (int m = 0; m < mult[static_cast<std::size_t>(a)]; ++m) {
      s.apply_pauli(gt.pauli, gt.controls);
      s.mutable_amplitudes() *= cplx{0.0, gt.g};
    }
    ++a;
  }
  return s.amplitudes();
}

double insertion_deriv(const Objective& obj, const Eigen::VectorXd& angles, const PauliSum& H,
                       const std::vector<int>& gates) {
  const ParamCircuit& c = obj.circuit;
  const std::size_t k = gates.size();
  cplx total = 0.0;
  for (std::uint64_t mask = 0; mask < (1ULL << k); ++mask) {
    std::vector<int> bra(static_cast<std::size_t>(c.n_pgates()), 0), ket = bra;
    for (std::size_t j = 0; j < k; ++j) {
      auto& side = (mask >> j) & 1U ? bra : ket;
      ++side[static_cast<std::size_t>(gates[j])];
    }
    for (std::size_t i = 0; i < obj.refs.size(); ++i) {
      const Eigen::VectorXcd vb = derivative_vector(c, angles, obj.refs[i], bra);
      const Eigen::VectorXcd vk = derivative_vector(c, angles, obj.refs[i], ket);
      total += obj.weights[i] * vb.dot(apply_sum_vector(vk, H));
    }
  }
  return total.real();
}

void check_gate_list(const ParamCircuit& c, const std::vector<int>& gates) {
  if (gates.size() > 4) throw InputError("derivative order above 4 in circuit parameters");
  for (int a : gates) {
    if (a < 0 || a >= c.n_pgates()) throw InputError("gate index " + std::to_string(a) + " out of range");
  }
}

PauliSum hamiltonian_for(const Objective& obj, const HamiltonianFamily& f, const Eigen::VectorXd& R,
                         const std::vector<int>& R_index) {
  if (R_index.size() > 2) throw InputError("derivative order above 2 in system parameters");
  if (R_index.empty()) {
    PauliSum H = f.eval(R);
    if (obj.penalty) H += *obj.penalty;
    return H;
  }
  if (R_index.size() == 1) return f.deriv(R, R_index[0], 1);
  return f.deriv2(R, R_index[0], R_index[1]);
}

}  // namespace

double gate_deriv(const Objective& obj, const Eigen::VectorXd& angles, const PauliSum& H,
                  const std::vector<int>& gates, DerivMethod method) {
  obj.circuit.check_angles(angles);
  check_gate_list(obj.circuit, gates);
  if (method == DerivMethod::insertion) return insertion_deriv(obj, angles, H, gates);
  Eigen::VectorXd work = angles;
  return shift_rec(obj, work, H, gates, 0);
}

double param_deriv(const Objective& obj, const Eigen::VectorXd& theta, const PauliSum& H,
                   const std::vector<int>& params, DerivMethod method) {
  const ParamCircuit& c = obj.circuit;
  const Eigen::VectorXd angles = c.gate_angles(theta);
  if (params.size() > 4) throw InputError("derivative order above 4 in circuit parameters");
  std::vector<int> gates(params.size());
  double total = 0.0;
  // Chain rule over every gate combination of the listed parameters.
  auto rec = [&](auto&& self, std::size_t j) -> void {
    if (j == params.size()) {
      total += gate_deriv(obj, angles, H, gates, method);
      return;
    }
    for (int a : c.gates_of(params[j])) {
      gates[j] = a;
      self(self, j + 1);
    }
  };
  rec(rec, 0);
  return total;
}

Eigen::VectorXd cost_gradient(const Objective& obj, const Eigen::VectorXd& theta, const PauliSum& H,
                              DerivMethod method) {
  const int n = obj.circuit.n_theta();
  Eigen::VectorXd g(n);
  for (int p = 0; p < n; ++p) g[p] = param_deriv(obj, theta, H, {p}, method);
  return g;
}

Eigen::MatrixXd cost_hessian(const Objective& obj, const Eigen::VectorXd& theta, const PauliSum& H,
                             DerivMethod method) {
  const int n = obj.circuit.n_theta();
  Eigen::MatrixXd A(n, n);
  for (int p = 0; p < n; ++p) {
    for (int q = p; q < n; ++q) {
      A(p, q) = param_deriv(obj, theta, H, {p, q}, method);
      A(q, p) = A(p, q);
    }
  }
  return A;
}

double energy_deriv(const Objective& obj, const Eigen::VectorXd& theta, const HamiltonianFamily& f,
                    const Eigen::VectorXd& R, const std::vector<int>& theta_index, const std::vector<int>& R_index,
                    DerivMethod method) {
  if (theta_index.size() > 3) throw InputError("theta derivative order above 3");
  return param_deriv(obj, theta, hamiltonian_for(obj, f, R, R_index), theta_index, method);
}

namespace {

struct PseudoInverse {
  Eigen::MatrixXd pinv;
  Eigen::VectorXd eigenvalues;
  int truncated = 0;
  double condition = 0.0;
};

PseudoInverse pseudo_inverse(const Eigen::MatrixXd& A) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
  if (es.info() != Eigen::Success) throw NumericalError("Hessian eigendecomposition failed");
  const Eigen::VectorXd& lam = es.eigenvalues();
  const Eigen::MatrixXd& V = es.eigenvectors();
  const double lmax = lam.size() ? lam.cwiseAbs().maxCoeff() : 0.0;
  const double scale = std::max(1.0, lmax);
  PseudoInverse out;
  out.eigenvalues = lam;
  if (lam.size() && lam.minCoeff() < -1e-6 * scale) {
    throw NumericalError("Hessian at the claimed minimum is not positive semidefinite (lowest eigenvalue " +
                         std::to_string(lam.minCoeff()) + ")");
  }
  out.pinv = Eigen::MatrixXd::Zero(A.rows(), A.cols());
  double lmin_kept = 0.0;
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    if (std::abs(lam[i]) <= kPseudoInverseTol * scale) {
      ++out.truncated;
      continue;
    }
    out.pinv += V.col(i) * V.col(i).transpose() / lam[i];
    if (lmin_kept == 0.0 || std::abs(lam[i]) < lmin_kept) lmin_kept = std::abs(lam[i]);
  }
  out.condition = lmin_kept > 0.0 ? lmax / lmin_kept : std::numeric_limits<double>::infinity();
  return out;
}

}  // namespace

ThetaResponse solve_theta_first(const Objective& obj, const EigensolveResult& result, const HamiltonianFamily& f,
                                const Eigen::VectorXd& R) {
  const Eigen::VectorXd& th = result.theta_star;
  obj.circuit.check_theta(th);
  const int nt = obj.circuit.n_theta();
  const int nx = f.n_params();
  const PauliSum H0 = hamiltonian_for(obj, f, R, {});
  const double gnorm = cost_gradient(obj, th, H0).norm();
  if (gnorm > kStationarityTol) {
    throw NumericalError("response solve needs a stationary point; gradient norm is " + std::to_string(gnorm));
  }
  ThetaResponse resp;
  resp.hessian = cost_hessian(obj, th, H0);
  const PseudoInverse pi = pseudo_inverse(resp.hessian);
  resp.hessian_eigenvalues = pi.eigenvalues;
  resp.truncated = pi.truncated;
  resp.condition_number = pi.condition;
  Eigen::MatrixXd B(nt, nx);
  for (int I = 0; I < nx; ++I) {
    const PauliSum dH = f.deriv(R, I, 1);
    for (int a = 0; a < nt; ++a) B(a, I) = param_deriv(obj, th, dH, {a});
  }
  resp.first = -pi.pinv * B;
  resp.residual_first = (resp.hessian * resp.first + B).norm();
  return resp;
}

void solve_theta_second(const Objective& obj, const EigensolveResult& result, const HamiltonianFamily& f,
                        const Eigen::VectorXd& R, ThetaResponse& resp) {
  const Eigen::VectorXd& th = result.theta_star;
  const int nt = obj.circuit.n_theta();
  const int nx = f.n_params();
  if (resp.first.rows() != nt || resp.first.cols() != nx) throw InputError("first-order response block missing");
  const PauliSum H0 = hamiltonian_for(obj, f, R, {});
  const Eigen::MatrixXd& X = resp.first;

  // E_cab, symmetric in all three indices
  std::vector<double> E3(static_cast<std::size_t>(nt * nt * nt));
  auto at3 = [&](int c, int a, int b) -> double& {
    return E3[static_cast<std::size_t>((c * nt + a) * nt + b)];
  };
  for (int c = 0; c < nt; ++c) {
    for (int a = c; a < nt; ++a) {
      for (int b = a; b < nt; ++b) {
        const double v = param_deriv(obj, th, H0, {c, a, b});
        at3(c, a, b) = at3(c, b, a) = at3(a, c, b) = at3(a, b, c) = at3(b, c, a) = at3(b, a, c) = v;
      }
    }
  }
  // E_caJ = d^3 L / dtheta_c dtheta_a dR_J
  std::vector<Eigen::MatrixXd> E2R(static_cast<std::size_t>(nx), Eigen::MatrixXd(nt, nt));
  for (int J = 0; J < nx; ++J) {
    const PauliSum dH = f.deriv(R, J, 1);
    for (int c = 0; c < nt; ++c) {
      for (int a = c; a < nt; ++a) {
        const double v = param_deriv(obj, th, dH, {c, a});
        E2R[static_cast<std::size_t>(J)](c, a) = E2R[static_cast<std::size_t>(J)](a, c) = v;
      }
    }
  }
  resp.gamma.assign(static_cast<std::size_t>(nt), Eigen::MatrixXd::Zero(nx, nx));
  for (int I = 0; I < nx; ++I) {
    for (int J = I; J < nx; ++J) {
      const PauliSum d2H = I == J ? f.deriv(R, I, 2) : f.deriv2(R, I, J);
      for (int c = 0; c < nt; ++c) {
        double gam = param_deriv(obj, th, d2H, {c});
        for (int a = 0; a < nt; ++a) {
          gam += E2R[static_cast<std::size_t>(J)](c, a) * X(a, I) + E2R[static_cast<std::size_t>(I)](c, a) * X(a, J);
          for (int b = 0; b < nt; ++b) gam += at3(c, a, b) * X(a, I) * X(b, J);
        }
        resp.gamma[static_cast<std::size_t>(c)](I, J) = gam;
        resp.gamma[static_cast<std::size_t>(c)](J, I) = gam;
      }
    }
  }
  const PseudoInverse pi = pseudo_inverse(resp.hessian);
  resp.second.assign(static_cast<std::size_t>(nt), Eigen::MatrixXd::Zero(nx, nx));
  double res2 = 0.0;
  for (int I = 0; I < nx; ++I) {
    for (int J = I; J < nx; ++J) {
      Eigen::VectorXd g(nt);
      for (int c = 0; c < nt; ++c) g[c] = resp.gamma[static_cast<std::size_t>(c)](I, J);
      const Eigen::VectorXd y = -pi.pinv * g;
      res2 = std::max(res2, (resp.hessian * y + g).norm());
      for (int a = 0; a < nt; ++a) {
        resp.second[static_cast<std::size_t>(a)](I, J) = y[a];
        resp.second[static_cast<std::size_t>(a)](J, I) = y[a];
      }
    }
  }
  resp.residual_second = res2;
  resp.has_second = true;
}

EigensolveResult newton_refine(const Objective& obj, const HamiltonianFamily& f, const Eigen::VectorXd& R,
                               EigensolveResult result, int max_iter) {
  const PauliSum H = hamiltonian_for(obj, f, R, {});
  Eigen::VectorXd th = result.theta_star;
  Eigen::VectorXd g = cost_gradient(obj, th, H);
  for (int it = 0; it < max_iter && g.norm() > 1e-15; ++it) {
    const PseudoInverse pi = pseudo_inverse(cost_hessian(obj, th, H));
    const Eigen::VectorXd trial = th - pi.pinv * g;
    const Eigen::VectorXd gt = cost_gradient(obj, trial, H);
    if (!(gt.norm() < g.norm())) break;
    th = trial;
    g = gt;
  }
  result.theta_star = th;
  result.grad_norm = g.norm();
  result.cost = obj.value(obj.circuit.gate_angles(th), H);
  for (std::size_t i = 0; i < obj.refs.size() && static_cast<Eigen::Index>(i) < result.energies.size(); ++i) {
    result.energies[static_cast<Eigen::Index>(i)] = expectation(obj.circuit.prepare(th, obj.refs[i]), H);
  }
  return result;
}

ThetaResponse solve_theta_response(const Objective& obj, const EigensolveResult& result, const HamiltonianFamily& f,
                                   const Eigen::VectorXd& R, bool with_second) {
  ThetaResponse resp = solve_theta_first(obj, result, f, R);
  if (with_second) solve_theta_second(obj, result, f, R, resp);
  return resp;
}

}  // namespace vqnac
