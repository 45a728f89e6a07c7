#include "vqnac/shotcost.hpp"

#include <cmath>

#include "vqnac/error.hpp"

namespace vqnac {

void CostInput::validate() const {
  if (N_H < 1 || N_theta < 1 || N_x < 1 || K < 1) throw InputError("sizes N_H, N_theta, N_x, K must be >= 1");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InputError("epsilon must lie in (0, 1)");
  if (!(delta > 0.0 && delta < 1.0)) throw InputError("delta must lie in (0, 1)");
  if (!(H_norm >= 0.0)) throw InputError("norm of H must be non-negative");
  if (dH_norm.empty() || A.size() != dH_norm.size()) {
    throw InputError("dH_norm and A need one entry per system parameter");
  }
  for (std::size_t i = 0; i < A.size(); ++i) {
    if (!(dH_norm[i] >= 0.0) || !(A[i] >= 0.0)) throw InputError("norms must be non-negative");
  }
  if (!(gap > 0.0)) throw InputError("gap must be positive");
  if (!(T > 0.0) || !(T00 > 0.0)) throw InputError("overlap floors must be positive");
  if (!(M3 > 0.0) || !(M4 > 0.0)) throw InputError("smoothness bounds must be positive");
}

double hoeffding_shots(double eps, double delta) {
  if (!(eps > 0.0)) throw InputError("epsilon must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw InputError("delta must lie in (0, 1)");
  return std::ceil(2.0 * std::log(2.0 / delta) / (eps * eps));
}

ShotCount shots_one_nac_analytic(const CostInput& in) {
  in.validate();
  double worst = 0.0;
  for (std::size_t I = 0; I < in.A.size(); ++I) {
    worst = std::max(worst, 2.0 * (in.gap * in.dH_norm[I] + in.H_norm * in.A[I]));
  }
  const double g4 = std::pow(in.gap, 4);
  ShotCount out;
  out.count = in.N_H * std::log(1.0 / in.delta) * worst * worst / (in.epsilon * in.epsilon * g4);
  out.note = "order estimate; worst system parameter";
  return out;
}

double one_nac_fd_optimal_step(double eps, double M3) { return std::sqrt(2.0 * eps / M3); }

double two_nac_fd_optimal_step(double eps, double M4) { return std::sqrt(3.0 * eps / M4); }

FdCount shots_one_nac_fd(const CostInput& in, double h) {
  in.validate();
  if (!(h > 0.0)) throw InputError("finite-difference step must be positive");
  const double window = in.epsilon * h - h * h * h * in.M3 / 6.0;
  if (!(window > 0.0)) throw StepTooLargeError("step outside the finite-difference accuracy window");
  FdCount out;
  const double base = in.N_x * std::log(1.0 / in.delta) / (in.T * in.T);
  out.count = base / (window * window);
  out.h = h;
  out.h_opt = one_nac_fd_optimal_step(in.epsilon, in.M3);
  out.h_window_max = out.h_opt;
  out.regime_count = base / (in.epsilon * in.epsilon);
  return out;
}

FdCount shots_one_nac_fd(const CostInput& in) {
  return shots_one_nac_fd(in, one_nac_fd_optimal_step(in.epsilon, in.M3));
}

FdCount shots_two_nac_fd(const CostInput& in, double h) {
  in.validate();
  if (!(h > 0.0)) throw InputError("finite-difference step must be positive");
  const double window = in.epsilon * h * h - h * h * h * h * in.M4 / 12.0;
  if (!(window > 0.0)) throw StepTooLargeError("step outside the finite-difference accuracy window");
  FdCount out;
  const double base = static_cast<double>(in.N_x) * in.N_x * std::log(1.0 / in.delta) / (in.T * in.T);
  out.count = base / (window * window);
  out.h = h;
  out.h_opt = two_nac_fd_optimal_step(in.epsilon, in.M4);
  out.h_window_max = std::sqrt(6.0 * in.epsilon / in.M4);
  out.regime_count = base / (in.epsilon * in.epsilon);
  return out;
}

ShotCount shots_two_nac(const CostInput& in, CostRoute route) {
  in.validate();
  ShotCount out;
  if (route == CostRoute::analytic) {
    const double nt = in.N_theta;
    out.count = nt * nt * nt * in.N_H / (in.epsilon * in.epsilon);
    out.note = "order estimate; response-solve error propagation not included";
  } else {
    out.count = shots_two_nac_fd(in, two_nac_fd_optimal_step(in.epsilon, in.M4)).regime_count;
    out.note = "order estimate; smoothness-dominated regime";
  }
  return out;
}

ShotCount shots_berry(const CostInput& in, CostRoute route) {
  in.validate();
  ShotCount out;
  const double e2 = in.epsilon * in.epsilon;
  if (route == CostRoute::analytic) {
    out.count = static_cast<double>(in.K) * in.N_theta / e2;
  } else {
    out.count = in.K / (in.T00 * in.T00 * e2);
  }
  out.note = "order estimate";
  return out;
}

}  // namespace vqnac
