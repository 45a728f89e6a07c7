#include "vqnac/optimize.hpp"

#include <cmath>
#include <limits>

#include "vqnac/error.hpp"

namespace vqnac {

namespace {

double checked(double v, const char* what) {
  if (!std::isfinite(v)) throw NumericalError(std::string("optimizer abort: non-finite ") + what);
  return v;
}

Eigen::VectorXd checked(Eigen::VectorXd v) {
  if (!v.allFinite()) throw NumericalError("optimizer abort: non-finite gradient");
  return v;
}

}  // namespace

OptResult minimize(const CostFn& f, const GradFn& grad, const Eigen::VectorXd& x0, const OptOptions& opt) {
  const Eigen::Index n = x0.size();
  OptResult r;
  r.x = x0;
  r.f = checked(f(x0), "cost");
  Eigen::VectorXd g = checked(grad(x0));
  r.evaluations = 1;
  r.grad_norm = g.norm();
  if (n == 0 || r.grad_norm <= opt.grad_tol) {
    r.converged = true;
    r.message = "gradient below tolerance";
    return r;
  }
  constexpr double eps = std::numeric_limits<double>::epsilon();
  Eigen::MatrixXd Hinv = Eigen::MatrixXd::Identity(n, n);
  bool fresh = true;
  int stalls = 0;
  for (r.iterations = 0; r.iterations < opt.max_iter; ++r.iterations) {
    Eigen::VectorXd p = -Hinv * g;
    double slope = g.dot(p);
    if (!(slope < 0.0)) {
      Hinv.setIdentity();
      fresh = true;
      p = -g;
      slope = -g.squaredNorm();
    }
    double alpha = 1.0;
    if (fresh) alpha = std::min(1.0, 1.0 / std::max(1e-300, g.norm()));
    Eigen::VectorXd x_new;
    double f_new = 0.0;
    bool accepted = false;
    const double noise = 10.0 * eps * (1.0 + std::abs(r.f));
    for (int k = 0; k < opt.max_backtracks; ++k) {
      x_new = r.x + alpha * p;
      f_new = checked(f(x_new), "cost");
      ++r.evaluations;
      if (f_new <= r.f + opt.armijo_c * alpha * slope + noise) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      if (!fresh) {
        Hinv.setIdentity();
        fresh = true;
        continue;
      }
      r.message = "line search failed";
      break;
    }
    Eigen::VectorXd g_new = checked(grad(x_new));
    const Eigen::VectorXd s = x_new - r.x;
    const Eigen::VectorXd y = g_new - g;
    const double f_old = r.f;
    r.x = x_new;
    r.f = f_new;
    g = g_new;
    r.grad_norm = g.norm();
    if (r.grad_norm <= opt.grad_tol) {
      r.converged = true;
      r.message = "gradient below tolerance";
      ++r.iterations;
      return r;
    }
    // Rounding-level progress with a non-vanishing gradient.
    if (s.norm() <= 1e-16 * (1.0 + r.x.norm()) && std::abs(f_old - f_new) <= noise) {
      if (++stalls >= 3) {
        r.message = "stalled at rounding level";
        break;
      }
    } else {
      stalls = 0;
    }
    const double sy = s.dot(y);
    if (sy > 1e-300 && sy > 1e-14 * s.norm() * y.norm()) {
      if (fresh) {
        Hinv *= sy / y.squaredNorm();
        fresh = false;
      }
      const double rho = 1.0 / sy;
      const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
      Hinv = (I - rho * s * y.transpose()) * Hinv * (I - rho * y * s.transpose()) + rho * s * s.transpose();
    }
  }
  if (r.message.empty()) r.message = "maximum iterations reached";
  r.converged = r.grad_norm <= opt.grad_tol;
  return r;
}

}  // namespace vqnac
