#include "vqnac/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>

#include "vqnac/error.hpp"
#include "vqnac/state.hpp"

namespace vqnac {

void FsshConfig::validate() const {
  if (!(dt_fs > 0.0)) throw InputError("dt must be positive");
  if (!(t_max_fs >= 0.0)) throw InputError("t_max must be non-negative");
  if (!(mass > 0.0)) throw InputError("mass must be positive");
  if (active != 0 && active != 1) throw InputError("active surface must be 0 or 1");
  if (!(kinetic_energy >= 0.0)) throw InputError("initial kinetic energy must be non-negative");
  if (velocity_sign < -1 || velocity_sign > 1) throw InputError("velocity sign must be -1, 0 or +1");
  if (substeps < 1) throw InputError("substeps must be >= 1");
  if (!(energy_tol > 0.0)) throw InputError("energy tolerance must be positive");
  if (record_every < 1) throw InputError("record_every must be >= 1");
}

namespace {

using cd = std::complex<double>;
using Coeffs = std::array<cd, 2>;

const cd kI{0.0, 1.0};

Coeffs rhs(const SurfaceSplines& s, double R, double v, const Coeffs& c) {
  const double e0 = s.energy(0, R), e1 = s.energy(1, R);
  // a shared energy shift only changes the global phase
  const double mid = 0.5 * (e0 + e1);
  const double d = s.coupling(R);
  return {-kI * (e0 - mid) * c[0] - v * d * c[1], -kI * (e1 - mid) * c[1] + v * d * c[0]};
}

Coeffs axpy(const Coeffs& c, double a, const Coeffs& k) { return {c[0] + a * k[0], c[1] + a * k[1]}; }

struct Propagator {
  const SurfaceSplines& s;
  const FsshConfig& cfg;
  double dt = 0.0;

  double total_energy(double R, double v, int active) const { return 0.5 * cfg.mass * v * v + s.energy(active, R); }

  // d_{lk} for the 2x2 antisymmetric coupling
  double coupling_lk(double R, int k) const { return k == 0 ? -s.coupling(R) : s.coupling(R); }

  // Electronic propagation across one nuclear step; returns the accumulated
  // k -> l hop probability for the active surface k.
  double electronic(Coeffs& c, double Ra, double va, double Rb, double vb, int k) const {
    const int l = 1 - k;
    const int n = cfg.substeps;
    const double tau = dt / n;
    double g = 0.0;
    auto R_at = [&](double f) { return Ra + f * (Rb - Ra); };
    auto v_at = [&](double f) { return va + f * (vb - va); };
    for (int j = 0; j < n; ++j) {
      const double f0 = static_cast<double>(j) / n, fh = (j + 0.5) / n, f1 = static_cast<double>(j + 1) / n;
      const Coeffs k1 = rhs(s, R_at(f0), v_at(f0), c);
      const Coeffs k2 = rhs(s, R_at(fh), v_at(fh), axpy(c, 0.5 * tau, k1));
      const Coeffs k3 = rhs(s, R_at(fh), v_at(fh), axpy(c, 0.5 * tau, k2));
      const Coeffs k4 = rhs(s, R_at(f1), v_at(f1), axpy(c, tau, k3));
      for (int q = 0; q < 2; ++q) c[q] += tau / 6.0 * (k1[q] + 2.0 * k2[q] + 2.0 * k3[q] + k4[q]);
      const double pk = std::norm(c[k]);
      if (pk > 0.0) {
        const double b = -2.0 * std::real(std::conj(c[k]) * c[l] * v_at(f1) * coupling_lk(R_at(f1), k));
        g += std::max(0.0, tau * b / pk);
      }
    }
    return std::clamp(g, 0.0, 1.0);
  }
};

struct RunOptions {
  bool hops_enabled = true;
  int forced_sign = 0;
  // hop-off quadrature: log of the no-hop probability
  double* log_no_hop = nullptr;
  bool record = true;
};

Trajectory propagate(const SurfaceSplines& s, const FsshConfig& cfg, const RunOptions& ro) {
  cfg.validate();
  Trajectory out;
  out.seed = cfg.seed;
  const double L = s.length_scale;
  double R = cfg.R0 * L;
  if (R < s.r_min() || R > s.r_max()) throw InputError("initial position lies outside the surface grid");
  std::mt19937_64 rng(mix_seed(cfg.seed, 0));
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  int sign = ro.forced_sign != 0 ? ro.forced_sign : cfg.velocity_sign;
  const double draw = uni(rng);
  if (sign == 0) sign = draw < 0.5 ? -1 : 1;
  out.velocity_sign = sign;
  double v = sign * std::sqrt(2.0 * cfg.kinetic_energy / cfg.mass);
  int active = cfg.active;
  Coeffs c = active == 0 ? Coeffs{1.0, 0.0} : Coeffs{0.0, 1.0};

  Propagator prop{s, cfg, cfg.dt_fs * kAuTimePerFs};
  const double dt = prop.dt;
  const long long steps = static_cast<long long>(std::floor(cfg.t_max_fs / cfg.dt_fs + 1e-9));
  double E_ref = prop.total_energy(R, v, active);
  auto record = [&](long long step) {
    if (!ro.record) return;
    TrajectoryState st;
    st.t_fs = step * cfg.dt_fs;
    st.R = R / L;
    st.v = v / L * kAuTimePerFs;
    st.active = active;
    st.c0 = c[0];
    st.c1 = c[1];
    st.E_total = prop.total_energy(R, v, active);
    out.states.push_back(st);
  };
  record(0);
  double force = -s.energy(active, R, 1);
  for (long long step = 1; step <= steps; ++step) {
    const double Ra = R, va = v;
    const double v_half = v + 0.5 * dt * force / cfg.mass;
    const double Rb = R + dt * v_half;
    if (Rb < s.r_min() || Rb > s.r_max()) {
      out.dissociated = true;
      break;
    }
    const double fb = -s.energy(active, Rb, 1);
    const double vb = v_half + 0.5 * dt * fb / cfg.mass;
    const double g = prop.electronic(c, Ra, va, Rb, vb, active);
    R = Rb;
    v = vb;
    force = fb;
    out.max_norm_drift = std::max(out.max_norm_drift, std::abs(std::norm(c[0]) + std::norm(c[1]) - 1.0));

    const double E = prop.total_energy(R, v, active);
    out.max_energy_drift = std::max(out.max_energy_drift, std::abs(E - E_ref));
    if (std::abs(E - E_ref) > cfg.energy_tol) {
      char msg[160];
      std::snprintf(msg, sizeof msg, "energy conservation violated at t = %g fs: drift %.3e Hartree exceeds %.3e; reduce dt",
                    step * cfg.dt_fs, E - E_ref, cfg.energy_tol);
      throw NumericalError(msg);
    }

    const int target = 1 - active;
    const double kin = 0.5 * cfg.mass * v * v;
    const double dE = s.energy(target, R) - s.energy(active, R);
    const bool allowed = kin >= dE;
    if (ro.log_no_hop && allowed) *ro.log_no_hop += std::log1p(-std::min(g, 1.0 - 1e-300));
    const double xi = uni(rng);
    if (ro.hops_enabled && xi < g) {
      HopEvent ev{step * cfg.dt_fs, active, target, !allowed};
      if (allowed) {
        const double vs = v >= 0.0 ? 1.0 : -1.0;
        v = vs * std::sqrt(2.0 * (kin - dE) / cfg.mass);
        active = target;
        force = -s.energy(active, R, 1);
        E_ref = prop.total_energy(R, v, active);
        ++out.accepted_hops;
      } else {
        ++out.frustrated_hops;
      }
      out.hops.push_back(ev);
    }
    if (step % cfg.record_every == 0) record(step);
  }
  return out;
}

}  // namespace

Trajectory fssh_run(const SurfaceSplines& s, const FsshConfig& cfg) { return propagate(s, cfg, RunOptions{}); }

Trajectory fssh_run(const SurfaceTable& table, const FsshConfig& cfg) { return fssh_run(spline_fit(table), cfg); }

double hop_probability_quadrature(const SurfaceSplines& s, const FsshConfig& cfg, int velocity_sign) {
  if (velocity_sign != 1 && velocity_sign != -1) throw InputError("velocity sign must be +1 or -1");
  double log_none = 0.0;
  RunOptions ro;
  ro.hops_enabled = false;
  ro.forced_sign = velocity_sign;
  ro.log_no_hop = &log_none;
  ro.record = false;
  propagate(s, cfg, ro);
  return -std::expm1(log_none);
}

EnsembleSummary fssh_ensemble(const SurfaceSplines& s, const FsshConfig& cfg, int n_trajectories,
                              bool keep_trajectories) {
  if (n_trajectories < 1) throw InputError("ensemble needs at least one trajectory");
  EnsembleSummary out;
  out.n_trajectories = n_trajectories;
  out.final_population = {0.0, 0.0};
  double p_plus = -1.0, p_minus = -1.0;
  double var = 0.0;
  for (int i = 0; i < n_trajectories; ++i) {
    FsshConfig c = cfg;
    c.seed = mix_seed(cfg.seed, static_cast<std::uint64_t>(i) + 1);
    Trajectory t = fssh_run(s, c);
    if (t.accepted_hops > 0) ++out.hopped;
    if (t.dissociated) ++out.dissociated;
    int final_active = cfg.active;
    for (const auto& h : t.hops) {
      if (!h.frustrated) final_active = h.to;
    }
    out.final_population[static_cast<std::size_t>(final_active)] += 1.0;
    double& p = t.velocity_sign > 0 ? p_plus : p_minus;
    if (p < 0.0) p = hop_probability_quadrature(s, cfg, t.velocity_sign);
    out.predicted += p;
    var += p * (1.0 - p);
    if (keep_trajectories) out.trajectories.push_back(std::move(t));
  }
  out.hop_fraction = static_cast<double>(out.hopped) / n_trajectories;
  out.predicted /= n_trajectories;
  out.sigma = std::sqrt(var) / n_trajectories;
  for (double& f : out.final_population) f /= n_trajectories;
  return out;
}

namespace {

struct Minimum {
  double x = 0.0;
  double value = 0.0;
  double curvature = 0.0;
};

Minimum spline_minimum(const CubicSpline& sp) {
  const auto& x = sp.knots();
  const double span = x.back() - x.front();
  const double edge = 1e-9 * span;
  Minimum best;
  bool found = false;
  auto consider = [&](double r) {
    if (r <= x.front() + edge || r >= x.back() - edge) return;
    const double curv = sp.eval(r, 2);
    if (!(curv > 0.0)) return;
    const double val = sp.eval(r, 0);
    if (!found || val < best.value) best = {r, val, curv};
    found = true;
  };
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    // S' restricted to one interval is a quadratic; fit it from three samples
    const double a = x[i], b = x[i + 1], m = 0.5 * (a + b), h = 0.5 * (b - a);
    const double fa = sp.eval(a, 1), fm = sp.eval(m, 1), fb = sp.eval(b, 1);
    // p(u) = A u^2 + B u + C with u = (r - m)/h in [-1, 1]
    const double A = 0.5 * (fb + fa) - fm, B = 0.5 * (fb - fa), C = fm;
    std::vector<double> roots;
    if (std::abs(A) < 1e-14 * (std::abs(B) + std::abs(C) + 1e-300)) {
      if (B != 0.0) roots.push_back(-C / B);
    } else {
      const double disc = B * B - 4.0 * A * C;
      if (disc >= 0.0) {
        const double sq = std::sqrt(disc);
        const double q = -0.5 * (B + (B >= 0.0 ? sq : -sq));
        roots.push_back(q / A);
        if (q != 0.0) roots.push_back(C / q);
      }
    }
    for (double u : roots) {
      if (u < -1.0 - 1e-12 || u > 1.0 + 1e-12) continue;
      double r = std::clamp(m + u * h, a, b);
      // polish against the exact derivative
      for (int it = 0; it < 3; ++it) {
        const double d2 = sp.eval(r, 2);
        if (d2 == 0.0) break;
        r = std::clamp(r - sp.eval(r, 1) / d2, a, b);
      }
      consider(r);
    }
  }
  if (!found) throw InputError("surface has no interior minimum");
  return best;
}

}  // namespace

double surface_minimum(const SurfaceTable& table, int surface) {
  const SurfaceSplines s = spline_fit(table);
  const CubicSpline& sp = surface == 0 ? s.E0 : s.E1;
  if (surface != 0 && surface != 1) throw InputError("surface index must be 0 or 1");
  return spline_minimum(sp).x / s.length_scale;
}

double harmonic_zero_point(const SurfaceTable& table, double mass, int surface) {
  if (!(mass > 0.0)) throw InputError("mass must be positive");
  if (surface != 0 && surface != 1) throw InputError("surface index must be 0 or 1");
  const SurfaceSplines s = spline_fit(table);
  const Minimum mn = spline_minimum(surface == 0 ? s.E0 : s.E1);
  if (std::isinf(mass)) return 0.0;
  return 0.5 * std::sqrt(mn.curvature / mass);
}

void write_trajectory_csv(const Trajectory& traj, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw LoadError(path + ": cannot write trajectory");
  out.precision(12);
  out << "t,R,v,active,|c0|^2,|c1|^2,E_total\n";
  for (const auto& s : traj.states) {
    out << s.t_fs << ',' << s.R << ',' << s.v << ',' << s.active << ',' << std::norm(s.c0) << ',' << std::norm(s.c1)
        << ',' << s.E_total << '\n';
  }
}

}  // namespace vqnac
