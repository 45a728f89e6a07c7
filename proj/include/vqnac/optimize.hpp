#pragma once

#include <functional>
#include <string>

#include <Eigen/Dense>

namespace vqnac {

struct OptOptions {
  double grad_tol = 1e-9;
  int max_iter = 500;
  double armijo_c = 1e-4;
  int max_backtracks = 60;
};

struct OptResult {
  Eigen::VectorXd x;
  double f = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
  std::string message;
};

using CostFn = std::function<double(const Eigen::VectorXd&)>;
using GradFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

// BFGS on the inverse Hessian with Armijo backtracking. Non-finite cost or
// gradient throws NumericalError.
OptResult minimize(const CostFn& f, const GradFn& grad, const Eigen::VectorXd& x0, const OptOptions& opt = {});

}  // namespace vqnac
