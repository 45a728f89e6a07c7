#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "vqnac/ansatz.hpp"
#include "vqnac/family.hpp"
#include "vqnac/ssvqe.hpp"
#include "vqnac/state.hpp"

namespace vqnac {

enum class BerryMethod { line_integral, fukui_hatsugai };
enum class OverlapMode { direct, hadamard };

std::string to_string(BerryMethod m);
BerryMethod parse_berry_method(const std::string& s);
OverlapMode parse_overlap_mode(const std::string& s);

inline constexpr double kGaugeOverlapMin = 0.9;

// <phi_0|d/dtheta_p phi_0> = sum over the gates of p of i g_a <P_a> on the prefix state.
cplx berry_integrand(const ParamCircuit& c, const Eigen::VectorXd& theta, const State& ref, int p, Measurement& m);

// sum_p (theta_{p+1} - theta_p) . <phi_0|d_theta phi_0> at theta_p
cplx berry_line_integral(const ParamCircuit& c, const State& ref, const std::vector<EigensolveResult>& path,
                         Measurement& m);

// <U(theta_s) ref | U(theta_t) ref>, contracted directly or through the
// ancilla-controlled Hadamard test (Re without, Im with S-dagger on the ancilla).
cplx overlap_estimate(const ParamCircuit& c, const State& ref, const Eigen::VectorXd& theta_s,
                      const Eigen::VectorXd& theta_t, OverlapMode mode, Measurement& m);

// arg of overlap_estimate; GaugeMismatchError when its magnitude is <= 0.9.
double phase_mismatch(const ParamCircuit& c, const State& ref, const Eigen::VectorXd& theta_s,
                      const Eigen::VectorXd& theta_t, OverlapMode mode, Measurement& m);

// Sum of link phases arg<s_i|s_{i+1}> around the closed chain s_0..s_{n-1}, s_0.
double fhs_from_states(const std::vector<State>& states);

// Link phases over the loop points, the repeated endpoint replaced by the
// closure link back to the first point.
double berry_fhs(const ParamCircuit& c, const State& ref, const std::vector<EigensolveResult>& path, OverlapMode mode,
                 Measurement& m);

struct BerryOptions {
  BerryMethod method = BerryMethod::line_integral;
  OverlapMode overlap = OverlapMode::direct;
  // endpoint overlap counted as already aligned
  double shortcut_tol = 1e-9;
  double max_jump = 1.0;
  bool oracle_check = true;
};

struct LoopResult {
  std::vector<Eigen::VectorXd> points;
  std::vector<Eigen::VectorXd> thetas;
  // per point, one entry per circuit parameter
  std::vector<Eigen::VectorXcd> integrand;
  cplx line_integral = 0.0;
  cplx endpoint_overlap = 1.0;
  double mismatch = 0.0;
  bool mismatch_shortcut = false;
  double pi_c = 0.0;
  BerryMethod method = BerryMethod::line_integral;
  bool all_converged = true;
  double max_jump = 0.0;
  bool stable = true;
  // exact reference value, NaN when the oracle refuses the loop
  double oracle = 0.0;
  std::string diagnostics;
};

LoopResult berry_phase(const HamiltonianFamily& f, const std::vector<Eigen::VectorXd>& loop, const ParamCircuit& c,
                       const SsvqeConfig& cfg, const BerryOptions& opt, Measurement& m);

// K+1 points in parameter I sweeping [0, 2 pi], the last equal to the first in H.
std::vector<Eigen::VectorXd> angle_loop(int K, int n_params = 1, int I = 0);

double wrap_phase(double x);

}  // namespace vqnac
