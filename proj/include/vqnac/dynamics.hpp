#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "vqnac/spline.hpp"

namespace vqnac {

struct FsshConfig {
  // initial position in table length units
  double R0 = 0.0;
  // initial nuclear kinetic energy, Hartree
  double kinetic_energy = 0.0;
  int active = 1;
  double dt_fs = 0.5;
  double t_max_fs = 100.0;
  // atomic units (electron masses)
  double mass = 1836.15267343;
  std::uint64_t seed = 1;
  // +1 or -1 fixes the initial direction; 0 draws it from the seed
  int velocity_sign = 0;
  int substeps = 20;
  // allowed |E_total - E_ref| between hops, Hartree
  double energy_tol = 1e-5;
  int record_every = 1;

  void validate() const;
};

struct TrajectoryState {
  double t_fs = 0.0;
  // table length units
  double R = 0.0;
  // table length units per fs
  double v = 0.0;
  int active = 0;
  std::complex<double> c0 = 1.0;
  std::complex<double> c1 = 0.0;
  double E_total = 0.0;
};

struct HopEvent {
  double t_fs = 0.0;
  int from = 0;
  int to = 0;
  bool frustrated = false;
};

struct Trajectory {
  std::vector<TrajectoryState> states;
  std::vector<HopEvent> hops;
  int accepted_hops = 0;
  int frustrated_hops = 0;
  bool dissociated = false;
  int velocity_sign = 1;
  double max_norm_drift = 0.0;
  // largest |E_total - E_ref| seen between hops
  double max_energy_drift = 0.0;
  std::uint64_t seed = 0;
};

Trajectory fssh_run(const SurfaceSplines& s, const FsshConfig& cfg);
Trajectory fssh_run(const SurfaceTable& table, const FsshConfig& cfg);

// Probability of at least one accepted hop, from the hop probabilities
// accumulated along the deterministic trajectory with hopping switched off.
// Steps where the hop would be frustrated do not contribute.
double hop_probability_quadrature(const SurfaceSplines& s, const FsshConfig& cfg, int velocity_sign);

struct EnsembleSummary {
  int n_trajectories = 0;
  int hopped = 0;
  double hop_fraction = 0.0;
  double predicted = 0.0;
  double sigma = 0.0;
  int dissociated = 0;
  std::vector<double> final_population;  // fraction on surface 0, 1
  std::vector<Trajectory> trajectories;
};

// Per-trajectory seeds derived from cfg.seed; the velocity sign is drawn per
// trajectory unless cfg.velocity_sign fixes it.
EnsembleSummary fssh_ensemble(const SurfaceSplines& s, const FsshConfig& cfg, int n_trajectories,
                              bool keep_trajectories = false);

// 1/2 sqrt(k/m) from the spline minimum of `surface` (Hartree).
double harmonic_zero_point(const SurfaceTable& table, double mass, int surface);
// Position of that minimum in table length units.
double surface_minimum(const SurfaceTable& table, int surface);

void write_trajectory_csv(const Trajectory& traj, const std::string& path);

}  // namespace vqnac
