#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "vqnac/ansatz.hpp"
#include "vqnac/family.hpp"
#include "vqnac/response.hpp"
#include "vqnac/ssvqe.hpp"
#include "vqnac/state.hpp"

namespace vqnac {

inline constexpr double kGapFloor = 1e-6;

// <psi_k|X|psi_l> from four diagonal values <s|X|s> on
// |+-> = (|k> +- |l>)/sqrt2 and |i+-> = (|k> +- i|l>)/sqrt2:
//   X_kl = 1/2 [(X_++ - X_--) - i (X_i+ - X_i-)]
cplx combine_superpositions(const State& k_ref, const State& l_ref, const std::function<cplx(const State&)>& diag);

// <phi_k|A|phi_l> with phi = U(theta)|ref>, from superposition expectations.
cplx transition_amplitude(const ParamCircuit& c, const Eigen::VectorXd& theta, const PauliSum& A, const State& k_ref,
                          const State& l_ref, Measurement& m);
// Direct contraction <U k_ref| A U l_ref>.
cplx transition_amplitude_direct(const ParamCircuit& c, const Eigen::VectorXd& theta, const PauliSum& A,
                                 const State& k_ref, const State& l_ref);

// Gate-level <phi_k|d_a phi_l> = i g_a <psi_k|U_{1:a}^dag P_a U_{1:a}|psi_l>; k_ref == l_ref allowed.
cplx overlap_first_deriv_gate(const ParamCircuit& c, const Eigen::VectorXd& angles, const State& k_ref,
                              const State& l_ref, int a, Measurement& m);
// Parameter-level, summed over the gates parameter p drives.
cplx overlap_first_deriv(const ParamCircuit& c, const Eigen::VectorXd& theta, const State& k_ref, const State& l_ref,
                         int p, Measurement& m);

// Gate-level <Phi|U^dag d_a d_b U|Phi>: -g_a^2 on the diagonal, projective
// branches for the real part and exp(+-i pi P_b/4) insertions for the imaginary
// part otherwise.
cplx overlap_second_deriv(const State& phi_ref, const ParamCircuit& c, const Eigen::VectorXd& angles, int a, int b,
                          Measurement& m);
// Gate-level <phi_k|d_a d_b phi_l> for orthogonal references, via superpositions.
cplx pair_second_deriv(const ParamCircuit& c, const Eigen::VectorXd& angles, const State& k_ref, const State& l_ref,
                       int a, int b, Measurement& m);
// Parameter-level <phi_k|d_p d_q phi_l>; k_ref == l_ref allowed.
cplx overlap_second_param(const ParamCircuit& c, const Eigen::VectorXd& theta, const State& k_ref, const State& l_ref,
                          int p, int q, Measurement& m);

// Reference implementation: derivative insertions contracted directly.
cplx overlap_second_direct(const ParamCircuit& c, const Eigen::VectorXd& angles, const State& k_ref,
                           const State& l_ref, int a, int b);
cplx overlap_first_direct(const ParamCircuit& c, const Eigen::VectorXd& angles, const State& k_ref,
                          const State& l_ref, int a);

struct NacResult {
  enum class Kind { one_nac, two_nac, dboc };
  Kind kind = Kind::one_nac;
  int k = 0;
  int l = 0;
  Eigen::VectorXd R;
  // one entry per system parameter I (dboc: single real total)
  Eigen::VectorXcd values;
  double gap = 0.0;
  std::string gauge_note;
};

// Everything the NAC routines need from an SSVQE solve.
struct SolvedPoint {
  ParamCircuit circuit;
  SsvqeConfig cfg;
  EigensolveResult result;
  State ref(int level) const;
};

// -<phi_k|dH/dR_I|phi_l> / (E_k - E_l)
cplx one_nac(const SolvedPoint& sp, const HamiltonianFamily& f, int I, int k, int l, Measurement& m,
             double gap_floor = kGapFloor);
NacResult one_nac_all(const SolvedPoint& sp, const HamiltonianFamily& f, int k, int l, Measurement& m,
                      double gap_floor = kGapFloor);

// D_kl^I = -<phi_k| d^2/dR_I^2 |phi_l>
cplx two_nac(const SolvedPoint& sp, const ThetaResponse& resp, int I, int k, int l, Measurement& m);
NacResult two_nac_all(const SolvedPoint& sp, const ThetaResponse& resp, int k, int l, Measurement& m);

// sum_I D_kk^I / (2 M_I)
double dboc(const SolvedPoint& sp, const ThetaResponse& resp, const std::vector<double>& masses, int k, Measurement& m);

}  // namespace vqnac
