#pragma once

#include <string>
#include <vector>

namespace vqnac {

struct CostInput {
  int N_H = 1;
  int N_theta = 1;
  int N_x = 1;
  int K = 100;
  double epsilon = 1e-3;
  double delta = 0.05;
  double H_norm = 1.0;
  // one entry per system parameter
  std::vector<double> dH_norm{1.0};
  std::vector<double> A{0.0};
  double gap = 1.0;
  // overlap floor |<phi_k|phi_l>| used by the finite-difference routes
  double T = 1.0;
  // ground-state overlap floor along the Berry loop
  double T00 = 1.0;
  double M3 = 1.0;
  double M4 = 1.0;

  // InputError on a violated invariant.
  void validate() const;
};

struct ShotCount {
  double count = 0.0;
  // leading-order estimate, constant taken as 1
  bool order_estimate = true;
  std::string note;
};

struct FdCount {
  double count = 0.0;
  double h = 0.0;
  double h_opt = 0.0;
  // count in the regime where the smoothness bound dominates (constant 1)
  double regime_count = 0.0;
  // exact maximizer of the accuracy window, reported next to h_opt
  double h_window_max = 0.0;
};

enum class CostRoute { analytic, fd };

// Per-Pauli shots for accuracy eps on a +-1 observable with confidence 1 - delta.
double hoeffding_shots(double eps, double delta);

ShotCount shots_one_nac_analytic(const CostInput& in);
// StepTooLargeError outside eps h - h^3 M3 / 6 > 0.
FdCount shots_one_nac_fd(const CostInput& in, double h);
FdCount shots_one_nac_fd(const CostInput& in);
double one_nac_fd_optimal_step(double eps, double M3);

ShotCount shots_two_nac(const CostInput& in, CostRoute route);
FdCount shots_two_nac_fd(const CostInput& in, double h);
double two_nac_fd_optimal_step(double eps, double M4);

ShotCount shots_berry(const CostInput& in, CostRoute route);

}  // namespace vqnac
