#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "vqnac/pauli.hpp"

namespace vqnac {

// Coefficient h(R) of one Pauli term.
//   constant:    c
//   polynomial:  sum_k c_k R_I^k
//   trig:        amp * cos(freq R_I + phase)  or  amp * sin(...)
struct CoeffDescriptor {
  enum class Kind { constant, polynomial, trig };
  enum class TrigKind { cos, sin };

  Kind kind = Kind::constant;
  double value = 0.0;
  std::vector<double> poly;
  int param = 0;
  double amp = 0.0;
  double freq = 1.0;
  double phase = 0.0;
  TrigKind trig_kind = TrigKind::cos;

  static CoeffDescriptor constant(double c);
  static CoeffDescriptor polynomial(std::vector<double> c, int param);
  static CoeffDescriptor trig(double amp, double freq, double phase, TrigKind kind, int param);

  // d^order h / dR_param^order evaluated at R_param = x (order 0..3).
  double eval(double x, int order) const;
};

struct FamilyTerm {
  PauliString pauli;
  CoeffDescriptor coeff;
};

// R -> H(R) = sum_i h_i(R) P_i with coefficient derivatives.
class HamiltonianFamily {
 public:
  enum class DerivMode { analytic, central };

  HamiltonianFamily() = default;
  HamiltonianFamily(int n_qubits, int n_params, std::vector<FamilyTerm> terms);

  int n_qubits() const { return n_qubits_; }
  int n_params() const { return n_params_; }
  const std::vector<FamilyTerm>& terms() const { return terms_; }

  DerivMode deriv_mode() const { return mode_; }
  double fd_step() const { return fd_step_; }
  void set_deriv_mode(DerivMode mode, double step = 1e-4);

  const std::string& name() const { return name_; }
  void set_name(std::string n) { name_ = std::move(n); }
  const std::string& energy_unit() const { return energy_unit_; }
  const std::string& length_unit() const { return length_unit_; }
  void set_units(std::string energy, std::string length);

  PauliSum eval(const Eigen::VectorXd& R) const;
  // d^order H / dR_I^order, order 1 or 2.
  PauliSum deriv(const Eigen::VectorXd& R, int I, int order) const;
  // d^2 H / dR_I dR_J
  PauliSum deriv2(const Eigen::VectorXd& R, int I, int J) const;

  // Adds R-independent terms (penalties).
  HamiltonianFamily plus_constant(const PauliSum& extra) const;

 private:
  void check_R(const Eigen::VectorXd& R) const;
  void check_index(int I) const;
  PauliSum analytic_deriv(const Eigen::VectorXd& R, int I, int order) const;

  int n_qubits_ = 0;
  int n_params_ = 0;
  std::vector<FamilyTerm> terms_;
  DerivMode mode_ = DerivMode::analytic;
  double fd_step_ = 1e-4;
  std::string name_ = "custom";
  std::string energy_unit_ = "hartree";
  std::string length_unit_ = "bohr";
};

PauliSum family_eval(const HamiltonianFamily& f, const Eigen::VectorXd& R);
PauliSum family_deriv(const HamiltonianFamily& f, const Eigen::VectorXd& R, int I, int order);

// cos(R) Z + sin(R) X on one qubit.
HamiltonianFamily builtin_rotor();
// H with every coefficient constant, one system parameter.
HamiltonianFamily builtin_constant(const PauliSum& H, int n_params = 1);
// Twisted two-spin model as a function of the twist rho (one parameter).
HamiltonianFamily builtin_twisted_spin_family(double delta);
PauliSum builtin_twisted_spin(double delta, double rho);
// Two-qubit real family whose lowest two levels have an avoided crossing
// near R = 0 with gap of roughly 4*gap_half.
HamiltonianFamily builtin_avoided_crossing(double gap_half = 0.1);

// H + beta_S S^2 + beta_N (N - N0)^2, Jordan-Wigner with qubit 2p = alpha and
// qubit 2p+1 = beta spin orbital of spatial orbital p.
PauliSum builtin_penalty(const PauliSum& H, double beta_S, double beta_N, int N0);
PauliSum spin_squared_operator(int n_qubits);
PauliSum number_operator(int n_qubits);

// Family by name: rotor, twisted_spin (needs delta), avoided_crossing.
HamiltonianFamily builtin_family(const std::string& name, double delta = 0.0, double gap_half = 0.1);

HamiltonianFamily load_family(const std::string& path);
HamiltonianFamily parse_family_json(const std::string& text, const std::string& source = "<string>");
std::string family_to_json(const HamiltonianFamily& f);
void save_family(const HamiltonianFamily& f, const std::string& path);

}  // namespace vqnac
