#include <gtest/gtest.h>

#include <cmath>

#include "vqnac/dynamics.hpp"
#include "vqnac/error.hpp"
#include "vqnac/spline.hpp"

using namespace vqnac;

namespace {

SurfaceTable table(const std::string& name) {
  return load_surface_table(std::string(VQNAC_FIXTURE_DIR) + "/" + name);
}

FsshConfig crossing_config() {
  FsshConfig cfg;
  cfg.R0 = -8.0;
  cfg.kinetic_energy = 0.05;
  cfg.active = 1;
  cfg.dt_fs = 0.05;
  cfg.t_max_fs = 100.0;
  cfg.velocity_sign = 1;
  cfg.energy_tol = 1e-6;
  cfg.seed = 11;
  return cfg;
}

}  // namespace

TEST(Fssh, ConfigValidation) {
  FsshConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.dt_fs = -1;
  EXPECT_THROW(cfg.validate(), InputError);
  cfg = FsshConfig{};
  cfg.active = 2;
  EXPECT_THROW(cfg.validate(), InputError);
  cfg = FsshConfig{};
  cfg.velocity_sign = 3;
  EXPECT_THROW(cfg.validate(), InputError);
}

TEST(Fssh, NormAndEnergyConservation) {
  const SurfaceSplines s = spline_fit(table("crossing.csv"));
  FsshConfig cfg = crossing_config();
  const Trajectory t = fssh_run(s, cfg);
  const std::size_t steps = t.states.size() - 1;
  const double per_kstep = 1000.0 / std::max<std::size_t>(steps, 1000);
  EXPECT_LT(t.max_norm_drift * per_kstep, 1e-6);
  EXPECT_LT(t.max_energy_drift * per_kstep, 1e-6);
  for (const auto& st : t.states) EXPECT_NEAR(std::norm(st.c0) + std::norm(st.c1), 1.0, 1e-6);
}

TEST(Fssh, ZeroCouplingNeverHops) {
  const SurfaceTable tb = table("harmonic_uncoupled.csv");
  const SurfaceSplines s = spline_fit(tb);
  FsshConfig cfg;
  cfg.R0 = 0.5;
  cfg.kinetic_energy = 0.01;
  cfg.active = 1;
  cfg.dt_fs = 0.05;
  cfg.t_max_fs = 200.0;
  const EnsembleSummary e = fssh_ensemble(s, cfg, 50, true);
  EXPECT_EQ(e.hopped, 0);
  for (const auto& t : e.trajectories) {
    EXPECT_EQ(t.accepted_hops + t.frustrated_hops, 0);
    EXPECT_NEAR(std::norm(t.states.back().c1), 1.0, 1e-8);
  }
  EXPECT_DOUBLE_EQ(hop_probability_quadrature(s, cfg, 1), 0.0);
}

TEST(Fssh, DeterministicForSeed) {
  const SurfaceSplines s = spline_fit(table("crossing.csv"));
  FsshConfig cfg = crossing_config();
  cfg.velocity_sign = 0;
  const Trajectory a = fssh_run(s, cfg), b = fssh_run(s, cfg);
  ASSERT_EQ(a.states.size(), b.states.size());
  EXPECT_EQ(a.states.back().R, b.states.back().R);
  EXPECT_EQ(a.accepted_hops, b.accepted_hops);
  EXPECT_EQ(a.velocity_sign, b.velocity_sign);
}

TEST(Fssh, FlatSurfaceMovesBallistically) {
  const SurfaceSplines s = spline_fit(table("flat.csv"));
  FsshConfig cfg;
  cfg.R0 = 0.0;
  cfg.kinetic_energy = 0.02;
  cfg.active = 0;
  cfg.velocity_sign = -1;
  cfg.t_max_fs = 10.0;
  const Trajectory t = fssh_run(s, cfg);
  const double v_au = -std::sqrt(2 * 0.02 / cfg.mass);
  EXPECT_NEAR(t.states.back().R, v_au * 10.0 * kAuTimePerFs, 1e-9);
  EXPECT_NEAR(t.states.back().v, v_au * kAuTimePerFs, 1e-12);
}

TEST(Fssh, GridExitMarksDissociation) {
  const SurfaceSplines s = spline_fit(table("flat.csv"));
  FsshConfig cfg;
  cfg.R0 = 9.0;
  cfg.kinetic_energy = 0.05;
  cfg.active = 0;
  cfg.velocity_sign = 1;
  cfg.t_max_fs = 500.0;
  const Trajectory t = fssh_run(s, cfg);
  EXPECT_TRUE(t.dissociated);
  EXPECT_LT(t.states.back().t_fs, 500.0);
}

TEST(Fssh, LargeStepViolatesEnergyTolerance) {
  const SurfaceSplines s = spline_fit(table("crossing.csv"));
  FsshConfig cfg = crossing_config();
  cfg.dt_fs = 1.0;
  cfg.energy_tol = 1e-7;
  EXPECT_THROW(fssh_run(s, cfg), NumericalError);
}

TEST(Fssh, HopFractionMatchesQuadrature) {
  const SurfaceSplines s = spline_fit(table("crossing.csv"));
  const EnsembleSummary e = fssh_ensemble(s, crossing_config(), 500, false);
  EXPECT_GT(e.predicted, 0.1);
  EXPECT_LT(e.predicted, 0.9);
  EXPECT_LT(std::abs(e.hop_fraction - e.predicted), 3 * e.sigma);
}

TEST(Fssh, ZeroPointAndMinimum) {
  const SurfaceTable tb = table("harmonic_uncoupled.csv");
  // E0 = 0.025 R^2: k = 0.05, zero point = sqrt(k/m)/2
  const double m = 1836.15;
  EXPECT_NEAR(harmonic_zero_point(tb, m, 0), 0.5 * std::sqrt(0.05 / m), 1e-9);
  EXPECT_NEAR(surface_minimum(tb, 0), 0.0, 1e-9);
  const SurfaceTable morse = table("morse.csv");
  EXPECT_NEAR(surface_minimum(morse, 0), 1.6, 1e-4);
  EXPECT_THROW(surface_minimum(table("flat.csv"), 1), InputError);
}
