#include "vqnac/family.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "json.hpp"

#include "vqnac/error.hpp"

namespace vqnac {

using json = nlohmann::json;

CoeffDescriptor CoeffDescriptor::constant(double c) {
  CoeffDescriptor d;
  d.kind = Kind::constant;
  d.value = c;
  return d;
}

CoeffDescriptor CoeffDescriptor::polynomial(std::vector<double> c, int param) {
  CoeffDescriptor d;
  d.kind = Kind::polynomial;
  d.poly = std::move(c);
  d.param = param;
  return d;
}

CoeffDescriptor CoeffDescriptor::trig(double amp, double freq, double phase, TrigKind kind, int param) {
  CoeffDescriptor d;
  d.kind = Kind::trig;
  d.amp = amp;
  d.freq = freq;
  d.phase = phase;
  d.trig_kind = kind;
  d.param = param;
  return d;
}

double CoeffDescriptor::eval(double x, int order) const {
  if (order < 0) throw InputError("negative derivative order");
  switch (kind) {
    case Kind::constant:
      return order == 0 ? value : 0.0;
    case Kind::polynomial: {
      double acc = 0.0;
      for (std::size_t k = poly.size(); k-- > 0;) {
        if (static_cast<int>(k) < order) break;
        double falling = 1.0;
        for (int j = 0; j < order; ++j) falling *= static_cast<double>(static_cast<int>(k) - j);
        acc += poly[k] * falling * std::pow(x, static_cast<double>(static_cast<int>(k) - order));
      }
      return acc;
    }
    case Kind::trig: {
      const double arg = freq * x + phase + order * std::numbers::pi / 2.0;
      const double scale = amp * std::pow(freq, order);
      return trig_kind == TrigKind::cos ? scale * std::cos(arg) : scale * std::sin(arg);
    }
  }
  return 0.0;
}

HamiltonianFamily::HamiltonianFamily(int n_qubits, int n_params, std::vector<FamilyTerm> terms)
    : n_qubits_(n_qubits), n_params_(n_params), terms_(std::move(terms)) {
  if (n_qubits < 1 || n_qubits > kMaxQubits) throw InputError("family qubit count out of range");
  if (n_params < 1) throw InputError("family needs at least one system parameter");
  if (terms_.empty()) throw InputError("family needs at least one term");
  for (const auto& t : terms_) {
    if (t.pauli.n_qubits() != n_qubits) throw InputError("family term " + t.pauli.to_string() + " has wrong qubit count");
    if (t.coeff.kind != CoeffDescriptor::Kind::constant && (t.coeff.param < 0 || t.coeff.param >= n_params)) {
      throw InputError("family term " + t.pauli.to_string() + " references parameter " +
                       std::to_string(t.coeff.param) + " of " + std::to_string(n_params));
    }
  }
}

void HamiltonianFamily::set_deriv_mode(DerivMode mode, double step) {
  if (!(step > 0.0)) throw InputError("derivative step must be positive");
  mode_ = mode;
  fd_step_ = step;
}

void HamiltonianFamily::set_units(std::string energy, std::string length) {
  energy_unit_ = std::move(energy);
  length_unit_ = std::move(length);
}

void HamiltonianFamily::check_R(const Eigen::VectorXd& R) const {
  if (R.size() != n_params_) {
    throw InputError("system-parameter vector has length " + std::to_string(R.size()) + ", family expects " +
                     std::to_string(n_params_));
  }
}

void HamiltonianFamily::check_index(int I) const {
  if (I < 0 || I >= n_params_) throw InputError("system-parameter index " + std::to_string(I) + " out of range");
}

PauliSum HamiltonianFamily::eval(const Eigen::VectorXd& R) const {
  check_R(R);
  PauliSum out(n_qubits_);
  for (const auto& t : terms_) out.add(t.coeff.eval(R[t.coeff.param], 0), t.pauli);
  return out;
}

PauliSum HamiltonianFamily::analytic_deriv(const Eigen::VectorXd& R, int I, int order) const {
  PauliSum out(n_qubits_);
  for (const auto& t : terms_) {
    const bool depends = t.coeff.kind != CoeffDescriptor::Kind::constant && t.coeff.param == I;
    out.add(depends ? t.coeff.eval(R[I], order) : 0.0, t.pauli);
  }
  return out;
}

PauliSum HamiltonianFamily::deriv(const Eigen::VectorXd& R, int I, int order) const {
  check_R(R);
  check_index(I);
  if (order != 1 && order != 2) throw InputError("family derivative order must be 1 or 2");
  if (mode_ == DerivMode::analytic) return analytic_deriv(R, I, order);
  const double h = fd_step_;
  Eigen::VectorXd rp = R, rm = R;
  rp[I] += h;
  rm[I] -= h;
  if (order == 1) return (eval(rp) + eval(rm).scaled(-1.0)).scaled(0.5 / h);
  return (eval(rp) + eval(R).scaled(-2.0) + eval(rm)).scaled(1.0 / (h * h));
}

PauliSum HamiltonianFamily::deriv2(const Eigen::VectorXd& R, int I, int J) const {
  check_R(R);
  check_index(I);
  check_index(J);
  if (I == J) return deriv(R, I, 2);
  if (mode_ == DerivMode::analytic) {
    // Every descriptor depends on a single parameter.
    PauliSum out(n_qubits_);
    for (const auto& t : terms_) out.add(0.0, t.pauli);
    return out;
  }
  const double h = fd_step_;
  auto at = [&](double si, double sj) {
    Eigen::VectorXd r = R;
    r[I] += si * h;
    r[J] += sj * h;
    return eval(r);
  };
  return (at(1, 1) + at(-1, -1) + at(1, -1).scaled(-1.0) + at(-1, 1).scaled(-1.0)).scaled(0.25 / (h * h));
}

HamiltonianFamily HamiltonianFamily::plus_constant(const PauliSum& extra) const {
  if (extra.n_qubits() != n_qubits_) throw InputError("penalty qubit count mismatch");
  std::vector<FamilyTerm> t = terms_;
  for (const auto& e : extra.terms()) t.push_back({e.pauli, CoeffDescriptor::constant(e.coeff)});
  HamiltonianFamily out(n_qubits_, n_params_, std::move(t));
  out.mode_ = mode_;
  out.fd_step_ = fd_step_;
  out.name_ = name_;
  out.energy_unit_ = energy_unit_;
  out.length_unit_ = length_unit_;
  return out;
}

PauliSum family_eval(const HamiltonianFamily& f, const Eigen::VectorXd& R) { return f.eval(R); }

PauliSum family_deriv(const HamiltonianFamily& f, const Eigen::VectorXd& R, int I, int order) {
  return f.deriv(R, I, order);
}

HamiltonianFamily builtin_rotor() {
  using T = CoeffDescriptor::TrigKind;
  HamiltonianFamily f(1, 1,
                      {{parse_pauli("Z"), CoeffDescriptor::trig(1.0, 1.0, 0.0, T::cos, 0)},
                       {parse_pauli("X"), CoeffDescriptor::trig(1.0, 1.0, 0.0, T::sin, 0)}});
  f.set_name("rotor");
  f.set_units("hartree", "rad");
  return f;
}

HamiltonianFamily builtin_constant(const PauliSum& H, int n_params) {
  std::vector<FamilyTerm> t;
  for (const auto& term : H.terms()) t.push_back({term.pauli, CoeffDescriptor::constant(term.coeff)});
  HamiltonianFamily f(H.n_qubits(), n_params, std::move(t));
  f.set_name("constant");
  return f;
}

HamiltonianFamily builtin_twisted_spin_family(double delta) {
  using T = CoeffDescriptor::TrigKind;
  // -1/2 (e^{-i rho} S0+ S1- + h.c.) + delta S0z S1z
  HamiltonianFamily f(2, 1,
                      {{parse_pauli("XX"), CoeffDescriptor::trig(-0.25, 1.0, 0.0, T::cos, 0)},
                       {parse_pauli("YY"), CoeffDescriptor::trig(-0.25, 1.0, 0.0, T::cos, 0)},
                       {parse_pauli("YX"), CoeffDescriptor::trig(-0.25, 1.0, 0.0, T::sin, 0)},
                       {parse_pauli("XY"), CoeffDescriptor::trig(0.25, 1.0, 0.0, T::sin, 0)},
                       {parse_pauli("ZZ"), CoeffDescriptor::constant(delta / 4.0)}});
  f.set_name("twisted_spin");
  f.set_units("hartree", "rad");
  return f;
}

PauliSum builtin_twisted_spin(double delta, double rho) {
  Eigen::VectorXd R(1);
  R << rho;
  return builtin_twisted_spin_family(delta).eval(R);
}

HamiltonianFamily builtin_avoided_crossing(double gap_half) {
  using T = CoeffDescriptor::TrigKind;
  HamiltonianFamily f(2, 1,
                      {{parse_pauli("ZI"), CoeffDescriptor::polynomial({0.0, 0.5}, 0)},
                       {parse_pauli("IZ"), CoeffDescriptor::polynomial({0.0, -0.5}, 0)},
                       {parse_pauli("XX"), CoeffDescriptor::constant(gap_half)},
                       {parse_pauli("YY"), CoeffDescriptor::constant(gap_half)},
                       {parse_pauli("ZZ"), CoeffDescriptor::polynomial({1.0, 0.0, 0.05}, 0)},
                       {parse_pauli("XI"), CoeffDescriptor::trig(0.05, 1.0, 0.0, T::cos, 0)}});
  f.set_name("avoided_crossing");
  return f;
}

namespace {

// Complex-coefficient Pauli polynomial, only used to assemble penalties.
using Poly = std::map<PauliString, cplx>;

Poly poly_mul(const Poly& a, const Poly& b) {
  Poly out;
  for (const auto& [pa, ca] : a) {
    for (const auto& [pb, cb] : b) {
      auto [ph, pc] = multiply(pa, pb);
      out[pc] += ca * cb * ph;
    }
  }
  return out;
}

Poly poly_add(Poly a, const Poly& b, cplx scale = 1.0) {
  for (const auto& [p, c] : b) a[p] += scale * c;
  return a;
}

Poly poly_const(int n, cplx c) { return {{PauliString::identity(n), c}}; }

// Jordan-Wigner: a_q = Z_0...Z_{q-1} (X_q + i Y_q)/2, a_q^dag with (X_q - i Y_q)/2.
Poly ladder(int n, int q, bool create) {
  std::uint64_t zs = (1ULL << q) - 1;
  const std::uint64_t bit = 1ULL << q;
  Poly out;
  out[PauliString(n, bit, zs)] += 0.5;
  out[PauliString(n, bit, zs | bit)] += create ? cplx{0.0, -0.5} : cplx{0.0, 0.5};
  return out;
}

PauliSum to_real_sum(int n, const Poly& p) {
  PauliSum out(n);
  for (const auto& [ps, c] : p) {
    if (std::abs(c.imag()) > 1e-12) throw NumericalError("penalty operator has a non-Hermitian term");
    if (std::abs(c.real()) > 1e-15) out.add(c.real(), ps);
  }
  if (out.empty()) out.add(0.0, PauliString::identity(n));
  return out;
}

Poly number_poly(int n) {
  Poly out;
  for (int q = 0; q < n; ++q) {
    out[PauliString::identity(n)] += 0.5;
    out[PauliString(n, 0, 1ULL << q)] += -0.5;
  }
  return out;
}

void check_spin_orbitals(int n) {
  if (n < 2 || n % 2 != 0) throw InputError("penalty operators need an even number of spin-orbital qubits");
}

}  // namespace

PauliSum number_operator(int n_qubits) {
  check_spin_orbitals(n_qubits);
  return to_real_sum(n_qubits, number_poly(n_qubits));
}

PauliSum spin_squared_operator(int n_qubits) {
  check_spin_orbitals(n_qubits);
  const int n = n_qubits;
  Poly s_plus, sz;
  for (int p = 0; p < n / 2; ++p) {
    const int a = 2 * p, b = 2 * p + 1;
    s_plus = poly_add(s_plus, poly_mul(ladder(n, a, true), ladder(n, b, false)));
    sz[PauliString(n, 0, 1ULL << a)] += -0.25;
    sz[PauliString(n, 0, 1ULL << b)] += 0.25;
  }
  Poly s_minus;
  for (const auto& [p, c] : s_plus) s_minus[p] += std::conj(c);
  Poly s2 = poly_mul(s_minus, s_plus);
  s2 = poly_add(s2, poly_mul(sz, sz));
  s2 = poly_add(s2, sz);
  return to_real_sum(n, s2);
}

PauliSum builtin_penalty(const PauliSum& H, double beta_S, double beta_N, int N0) {
  check_spin_orbitals(H.n_qubits());
  if (beta_S == 0.0 && beta_N == 0.0) return H;
  const int n = H.n_qubits();
  PauliSum out = H;
  if (beta_S != 0.0) out += spin_squared_operator(n).scaled(beta_S);
  if (beta_N != 0.0) {
    Poly shifted = poly_add(number_poly(n), poly_const(n, -static_cast<double>(N0)));
    out += to_real_sum(n, poly_mul(shifted, shifted)).scaled(beta_N);
  }
  return out;
}

HamiltonianFamily builtin_family(const std::string& name, double delta, double gap_half) {
  if (name == "rotor") return builtin_rotor();
  if (name == "twisted_spin") return builtin_twisted_spin_family(delta);
  if (name == "avoided_crossing") return builtin_avoided_crossing(gap_half);
  throw InputError("unknown builtin family \"" + name + "\" (expected rotor, twisted_spin, avoided_crossing)");
}

namespace {

[[noreturn]] void load_fail(const std::string& source, const std::string& field, const std::string& msg) {
  throw LoadError(source + ": " + field + ": " + msg);
}

double get_real(const json& j, const std::string& source, const std::string& field) {
  if (j.is_number()) return j.get<double>();
  if (j.is_array() || (j.is_object() && (j.contains("im") || j.contains("imag") || j.contains("re")))) {
    load_fail(source, field, "complex coefficients are not allowed (Hamiltonian must be Hermitian)");
  }
  if (j.is_string()) load_fail(source, field, "expected a real number, got string \"" + j.get<std::string>() + "\"");
  load_fail(source, field, "expected a real number");
}

int get_param(const json& j, const std::string& source, const std::string& field, int n_params) {
  if (!j.contains("param")) load_fail(source, field, "missing \"param\"");
  if (!j["param"].is_number_integer()) load_fail(source, field + ".param", "expected an integer");
  const int p = j["param"].get<int>();
  if (p < 0 || p >= n_params) {
    load_fail(source, field + ".param", "index " + std::to_string(p) + " outside [0, " + std::to_string(n_params) + ")");
  }
  return p;
}

CoeffDescriptor parse_descriptor(const json& j, const std::string& source, const std::string& field, int n_params) {
  if (j.is_number() || j.is_array()) return CoeffDescriptor::constant(get_real(j, source, field));
  if (!j.is_object()) load_fail(source, field, "expected a descriptor object");
  if (j.contains("im") || j.contains("imag") || j.contains("re")) {
    load_fail(source, field, "complex coefficients are not allowed (Hamiltonian must be Hermitian)");
  }
  if (j.contains("const")) return CoeffDescriptor::constant(get_real(j["const"], source, field + ".const"));
  if (j.contains("poly")) {
    if (!j["poly"].is_array() || j["poly"].empty()) load_fail(source, field + ".poly", "expected a non-empty array");
    std::vector<double> c;
    for (std::size_t k = 0; k < j["poly"].size(); ++k) {
      c.push_back(get_real(j["poly"][k], source, field + ".poly[" + std::to_string(k) + "]"));
    }
    return CoeffDescriptor::polynomial(std::move(c), get_param(j, source, field, n_params));
  }
  if (j.contains("trig")) {
    const json& t = j["trig"];
    const std::string tf = field + ".trig";
    if (!t.is_object()) load_fail(source, tf, "expected an object");
    for (const char* key : {"amp", "kind", "param"}) {
      if (!t.contains(key)) load_fail(source, tf, std::string("missing \"") + key + "\"");
    }
    const double amp = get_real(t["amp"], source, tf + ".amp");
    const double freq = t.contains("freq") ? get_real(t["freq"], source, tf + ".freq") : 1.0;
    const double phase = t.contains("phase") ? get_real(t["phase"], source, tf + ".phase") : 0.0;
    if (!t["kind"].is_string()) load_fail(source, tf + ".kind", "expected \"cos\" or \"sin\"");
    const std::string kind = t["kind"].get<std::string>();
    CoeffDescriptor::TrigKind tk;
    if (kind == "cos") tk = CoeffDescriptor::TrigKind::cos;
    else if (kind == "sin") tk = CoeffDescriptor::TrigKind::sin;
    else load_fail(source, tf + ".kind", "expected \"cos\" or \"sin\", got \"" + kind + "\"");
    return CoeffDescriptor::trig(amp, freq, phase, tk, get_param(t, source, tf, n_params));
  }
  load_fail(source, field, "descriptor must contain one of const, poly, trig");
}

}  // namespace

HamiltonianFamily parse_family_json(const std::string& text, const std::string& source) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw LoadError(source + ": invalid JSON: " + e.what());
  }
  if (!j.is_object()) load_fail(source, "<root>", "expected an object");
  for (const char* key : {"n_qubits", "n_params", "terms"}) {
    if (!j.contains(key)) load_fail(source, key, "missing required field");
  }
  if (!j["n_qubits"].is_number_integer()) load_fail(source, "n_qubits", "expected an integer");
  if (!j["n_params"].is_number_integer()) load_fail(source, "n_params", "expected an integer");
  const int n = j["n_qubits"].get<int>();
  const int np = j["n_params"].get<int>();
  if (n < 1 || n > kMaxQubits) load_fail(source, "n_qubits", "must be in [1, " + std::to_string(kMaxQubits) + "]");
  if (np < 1) load_fail(source, "n_params", "must be at least 1");
  const json& terms = j["terms"];
  if (!terms.is_array() || terms.empty()) load_fail(source, "terms", "expected a non-empty array");
  std::vector<FamilyTerm> out;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const std::string field = "terms[" + std::to_string(i) + "]";
    const json& t = terms[i];
    if (!t.is_object()) load_fail(source, field, "expected an object");
    if (!t.contains("pauli") || !t["pauli"].is_string()) load_fail(source, field + ".pauli", "missing Pauli string");
    const std::string ps = t["pauli"].get<std::string>();
    if (static_cast<int>(ps.size()) != n) {
      load_fail(source, field + ".pauli", "\"" + ps + "\" has length " + std::to_string(ps.size()) +
                                               ", n_qubits is " + std::to_string(n));
    }
    PauliString p;
    try {
      p = parse_pauli(ps);
    } catch (const ParseError& e) {
      load_fail(source, field + ".pauli", e.what());
    }
    if (!t.contains("coeff")) load_fail(source, field + ".coeff", "missing coefficient");
    out.push_back({p, parse_descriptor(t["coeff"], source, field + ".coeff", np)});
  }
  HamiltonianFamily f(n, np, std::move(out));
  std::string energy = "hartree", length = "bohr";
  if (j.contains("units")) {
    const json& u = j["units"];
    if (u.is_string()) {
      energy = u.get<std::string>();
    } else if (u.is_object()) {
      if (u.contains("energy")) energy = u["energy"].get<std::string>();
      if (u.contains("length")) length = u["length"].get<std::string>();
      if (u.contains("R")) length = u["R"].get<std::string>();
    } else {
      load_fail(source, "units", "expected a string or object");
    }
  }
  f.set_units(energy, length);
  if (j.contains("name") && j["name"].is_string()) f.set_name(j["name"].get<std::string>());
  return f;
}

HamiltonianFamily load_family(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LoadError(path + ": cannot open Hamiltonian family file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_family_json(ss.str(), path);
}

std::string family_to_json(const HamiltonianFamily& f) {
  json j;
  j["name"] = f.name();
  j["n_qubits"] = f.n_qubits();
  j["n_params"] = f.n_params();
  j["units"] = {{"energy", f.energy_unit()}, {"length", f.length_unit()}};
  json terms = json::array();
  for (const auto& t : f.terms()) {
    json c;
    switch (t.coeff.kind) {
      case CoeffDescriptor::Kind::constant: c["const"] = t.coeff.value; break;
      case CoeffDescriptor::Kind::polynomial:
        c["poly"] = t.coeff.poly;
        c["param"] = t.coeff.param;
        break;
      case CoeffDescriptor::Kind::trig:
        c["trig"] = {{"amp", t.coeff.amp},
                     {"freq", t.coeff.freq},
                     {"phase", t.coeff.phase},
                     {"kind", t.coeff.trig_kind == CoeffDescriptor::TrigKind::cos ? "cos" : "sin"},
                     {"param", t.coeff.param}};
        break;
    }
    terms.push_back({{"pauli", t.pauli.to_string()}, {"coeff", c}});
  }
  j["terms"] = terms;
  return j.dump(2);
}

void save_family(const HamiltonianFamily& f, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw LoadError(path + ": cannot write Hamiltonian family file");
  out << family_to_json(f) << "\n";
}

}  // namespace vqnac
