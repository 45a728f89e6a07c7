#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace vqnac {

// Cubic interpolating spline with not-a-knot end conditions.
class CubicSpline {
 public:
  CubicSpline() = default;
  // x strictly increasing, at least 4 points.
  CubicSpline(std::vector<double> x, std::vector<double> y);

  // order 0..3; x must lie within the knot range (1e-12 slack)
  double eval(double x, int order = 0) const;
  double operator()(double x) const { return eval(x, 0); }

  double x_min() const { return x_.front(); }
  double x_max() const { return x_.back(); }
  const std::vector<double>& knots() const { return x_; }
  const std::vector<double>& values() const { return y_; }
  // second derivatives at the knots
  const std::vector<double>& moments() const { return m_; }

  // Interval index containing x.
  std::size_t interval(double x) const;

 private:
  std::vector<double> x_, y_, m_;
};

inline constexpr double kBohrPerAngstrom = 1.8897261254578281;
inline constexpr double kAuTimePerFs = 41.341374575751;
inline constexpr double kEvPerHartree = 27.211386245988;

// Potential-energy table: two adiabatic surfaces and their coupling.
struct SurfaceTable {
  std::vector<double> R;
  std::vector<double> E0;
  std::vector<double> E1;
  std::vector<double> d01;
  // "angstrom" or "bohr"
  std::string length_unit = "bohr";
  // "hartree" or "ev"
  std::string energy_unit = "hartree";
  // exact | vqe-exact | vqe-shots
  std::string provenance = "exact";

  // InputError on a short or non-increasing grid, non-finite values, E1 < E0.
  void validate() const;
  double bohr_per_length() const;
  double hartree_per_energy() const;
};

// CSV with header R,E0,E1,d01 and a JSON sidecar <path>.units.json holding
// {"length": ..., "energy": ..., "provenance": ...}.
SurfaceTable load_surface_table(const std::string& path);
void save_surface_table(const SurfaceTable& t, const std::string& path);
std::string units_sidecar_path(const std::string& table_path);

// Splines of E0, E1, d01 over the table grid, converted to atomic units.
struct SurfaceSplines {
  CubicSpline E0, E1, d01;
  double length_scale = 1.0;  // bohr per table length unit

  double energy(int surface, double R_bohr, int order = 0) const;
  double coupling(double R_bohr) const { return d01.eval(R_bohr, 0); }
  double r_min() const { return E0.x_min(); }
  double r_max() const { return E0.x_max(); }
};

SurfaceSplines spline_fit(const SurfaceTable& table);

}  // namespace vqnac
