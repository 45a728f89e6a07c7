#pragma once

#include <vector>

#include <Eigen/Dense>

#include "vqnac/family.hpp"
#include "vqnac/ssvqe.hpp"

namespace vqnac {

enum class DerivMethod { parameter_shift, insertion };

// Mixed derivative of obj.value(angles, H) with respect to the listed gate
// angles (repeats allowed).
//   parameter_shift: g_a [F(angle_a + pi/(4 g_a)) - F(angle_a - pi/(4 g_a))], nested
//   insertion: (i g_a P_a) placed after gate a in bra and ket, Leibniz expansion
double gate_deriv(const Objective& obj, const Eigen::VectorXd& angles, const PauliSum& H,
                  const std::vector<int>& gates, DerivMethod method = DerivMethod::parameter_shift);

// Same with respect to circuit parameters (summed over the gates each drives).
double param_deriv(const Objective& obj, const Eigen::VectorXd& theta, const PauliSum& H,
                   const std::vector<int>& params, DerivMethod method = DerivMethod::parameter_shift);

Eigen::VectorXd cost_gradient(const Objective& obj, const Eigen::VectorXd& theta, const PauliSum& H,
                              DerivMethod method = DerivMethod::parameter_shift);
Eigen::MatrixXd cost_hessian(const Objective& obj, const Eigen::VectorXd& theta, const PauliSum& H,
                             DerivMethod method = DerivMethod::parameter_shift);

// Mixed partial of the cost in theta (<= 3 indices) and R (<= 2 indices);
// R-derivatives act on the Hamiltonian coefficients only.
double energy_deriv(const Objective& obj, const Eigen::VectorXd& theta, const HamiltonianFamily& f,
                    const Eigen::VectorXd& R, const std::vector<int>& theta_index, const std::vector<int>& R_index,
                    DerivMethod method = DerivMethod::parameter_shift);

struct ThetaResponse {
  // d theta*_a / d R_I, N_theta x N_x
  Eigen::MatrixXd first;
  // second[a](I, J) = d^2 theta*_a / dR_I dR_J
  std::vector<Eigen::MatrixXd> second;
  // gamma[c](I, J)
  std::vector<Eigen::MatrixXd> gamma;
  Eigen::MatrixXd hessian;
  Eigen::VectorXd hessian_eigenvalues;
  double condition_number = 0.0;
  int truncated = 0;
  double residual_first = 0.0;
  double residual_second = 0.0;
  bool has_second = false;
};

inline constexpr double kStationarityTol = 1e-6;
inline constexpr double kPseudoInverseTol = 1e-8;

// Hessian d^2L/dtheta^2 at theta*, pseudo-inverse solve of
// Hessian x = -d^2L/dtheta dR_I for each I.
ThetaResponse solve_theta_first(const Objective& obj, const EigensolveResult& result, const HamiltonianFamily& f,
                                const Eigen::VectorXd& R);
// Fills `second` and `gamma` in place.
void solve_theta_second(const Objective& obj, const EigensolveResult& result, const HamiltonianFamily& f,
                        const Eigen::VectorXd& R, ThetaResponse& resp);

// Newton polishing of a converged SSVQE point with the exact Hessian
// (pseudo-inverse), used where theta* is needed to near machine precision.
EigensolveResult newton_refine(const Objective& obj, const HamiltonianFamily& f, const Eigen::VectorXd& R,
                               EigensolveResult result, int max_iter = 8);

ThetaResponse solve_theta_response(const Objective& obj, const EigensolveResult& result, const HamiltonianFamily& f,
                                   const Eigen::VectorXd& R, bool with_second = true);

}  // namespace vqnac
