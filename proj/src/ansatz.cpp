#include "vqnac/ansatz.hpp"

#include <fstream>
#include <numbers>
#include <sstream>

#include "json.hpp"

#include "vqnac/error.hpp"

namespace vqnac {

using json = nlohmann::json;

ParamCircuit::ParamCircuit(int n_qubits, int n_theta) : n_(n_qubits), n_theta_(n_theta) {
  if (n_qubits < 1 || n_qubits > kMaxQubits) throw InputError("circuit qubit count out of range");
  if (n_theta < 0) throw InputError("negative parameter count");
  gates_of_param_.resize(static_cast<std::size_t>(n_theta));
}

void ParamCircuit::add_fixed(const FixedGate& g) {
  if (g.target < 0 || g.target >= n_) throw InputError("fixed gate target out of range");
  if (g.kind == GateKind::CNOT && (g.control < 0 || g.control >= n_ || g.control == g.target)) {
    throw InputError("invalid CNOT control");
  }
  Gate gate;
  gate.fixed = g;
  gates_.push_back(gate);
}

void ParamCircuit::add_rotation(const PauliString& p, double g, int param) {
  if (p.n_qubits() != n_) throw InputError("rotation Pauli has wrong qubit count");
  if (param < 0 || param >= n_theta_) {
    throw InputError("parameter index " + std::to_string(param) + " outside [0, " + std::to_string(n_theta_) + ")");
  }
  Gate gate;
  gate.parametric = true;
  gate.pauli = p;
  gate.g = g;
  gate.param = param;
  gates_of_param_[static_cast<std::size_t>(param)].push_back(n_pgates());
  pgate_pos_.push_back(static_cast<int>(gates_.size()));
  gates_.push_back(gate);
}

void ParamCircuit::add_ry(int q, int param) { add_rotation(PauliString::single(n_, q, 'Y'), -0.5, param); }

const Gate& ParamCircuit::pgate(int a) const {
  if (a < 0 || a >= n_pgates()) {
    throw InputError("gate index " + std::to_string(a) + " outside [0, " + std::to_string(n_pgates()) + ")");
  }
  return gates_[static_cast<std::size_t>(pgate_pos_[static_cast<std::size_t>(a)])];
}

const std::vector<int>& ParamCircuit::gates_of(int p) const {
  if (p < 0 || p >= n_theta_) throw InputError("parameter index out of range");
  return gates_of_param_[static_cast<std::size_t>(p)];
}

bool ParamCircuit::one_gate_per_param() const {
  for (const auto& v : gates_of_param_) {
    if (v.size() != 1) return false;
  }
  return true;
}

Eigen::VectorXd ParamCircuit::gate_angles(const Eigen::VectorXd& theta) const {
  check_theta(theta);
  Eigen::VectorXd out(n_pgates());
  for (int a = 0; a < n_pgates(); ++a) out[a] = theta[param_of(a)];
  return out;
}

Eigen::MatrixXd ParamCircuit::jacobian() const {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n_pgates(), n_theta_);
  for (int a = 0; a < n_pgates(); ++a) J(a, param_of(a)) = 1.0;
  return J;
}

int ParamCircuit::boundary(int a) const {
  if (a < -1 || a > n_pgates()) throw InputError("gate boundary out of range");
  if (a == -1) return 0;
  if (a == n_pgates()) return static_cast<int>(gates_.size());
  return pgate_pos_[static_cast<std::size_t>(a)] + 1;
}

void ParamCircuit::check_theta(const Eigen::VectorXd& theta) const {
  if (theta.size() != n_theta_) {
    throw InputError("parameter vector has length " + std::to_string(theta.size()) + ", circuit has " +
                     std::to_string(n_theta_) + " parameters");
  }
}

void ParamCircuit::check_angles(const Eigen::VectorXd& angles) const {
  if (angles.size() != n_pgates()) {
    throw InputError("gate-angle vector has length " + std::to_string(angles.size()) + ", circuit has " +
                     std::to_string(n_pgates()) + " parametric gates");
  }
}

void ParamCircuit::apply_positions(State& s, const Eigen::VectorXd& angles, int begin, int end) const {
  if (s.n_qubits() != n_) throw InputError("state and circuit qubit counts differ");
  int a = 0;
  // gate index of the first parametric gate at or after `begin`
  while (a < n_pgates() && pgate_pos_[static_cast<std::size_t>(a)] < begin) ++a;
  for (int pos = begin; pos < end; ++pos) {
    const Gate& gt = gates_[static_cast<std::size_t>(pos)];
    if (gt.parametric) {
      s.apply_pauli_rotation(gt.pauli, gt.g, angles[a], gt.controls);
      ++a;
    } else {
      apply_fixed_gate_inplace(s, gt.fixed);
    }
  }
}

void ParamCircuit::apply_segment(State& s, const Eigen::VectorXd& angles, int from, int to) const {
  apply_positions(s, angles, boundary(from), boundary(to));
}

State ParamCircuit::prepare(const Eigen::VectorXd& theta, const State& ref) const {
  return prepare_angles(gate_angles(theta), ref);
}

State ParamCircuit::prepare_angles(const Eigen::VectorXd& angles, const State& ref) const {
  check_angles(angles);
  State s = ref;
  apply_positions(s, angles, 0, static_cast<int>(gates_.size()));
  return s;
}

ParamCircuit ParamCircuit::controlled(bool on_one) const {
  ParamCircuit out(n_ + 1, n_theta_);
  out.kind_ = kind_ + "_controlled";
  const std::uint64_t anc = 1ULL << n_;
  FixedGate flip;
  flip.kind = GateKind::X;
  flip.target = n_;
  if (!on_one) out.add_fixed(flip);
  for (const auto& gt : gates_) {
    if (gt.parametric) {
      out.add_rotation(gt.pauli.widened(1), gt.g, gt.param);
      out.gates_.back().controls = gt.controls | anc;
    } else {
      FixedGate f = gt.fixed;
      f.extra_controls |= anc;
      out.add_fixed(f);
    }
  }
  if (!on_one) out.add_fixed(flip);
  return out;
}

AnsatzKind parse_ansatz_kind(const std::string& name) {
  if (name == "ry_cnot") return AnsatzKind::ry_cnot;
  if (name == "so4") return AnsatzKind::so4;
  if (name == "a_gate") return AnsatzKind::a_gate;
  throw InputError("unknown ansatz kind \"" + name + "\" (expected ry_cnot, so4, a_gate)");
}

std::string to_string(AnsatzKind kind) {
  switch (kind) {
    case AnsatzKind::ry_cnot: return "ry_cnot";
    case AnsatzKind::so4: return "so4";
    case AnsatzKind::a_gate: return "a_gate";
  }
  return "?";
}

namespace {

ParamCircuit build_ry_cnot(int n, int depth) {
  if (n < 1) throw InputError("ry_cnot needs at least one qubit");
  if (depth < 0) throw InputError("ansatz depth must be nonnegative");
  ParamCircuit c(n, n * (depth + 1));
  int p = 0;
  for (int q = 0; q < n; ++q) c.add_ry(q, p++);
  for (int layer = 0; layer < depth; ++layer) {
    for (int q = 0; q + 1 < n; ++q) c.add_fixed(make_cnot(q, q + 1));
    for (int q = 0; q < n; ++q) c.add_ry(q, p++);
  }
  c.set_kind("ry_cnot");
  return c;
}

void so4_block(ParamCircuit& c, int top, int bottom, int& p) {
  c.add_ry(top, p++);
  c.add_ry(bottom, p++);
  c.add_fixed(make_cnot(bottom, top));
  c.add_ry(top, p++);
  c.add_ry(bottom, p++);
  c.add_fixed(make_cnot(bottom, top));
  c.add_ry(top, p++);
  c.add_ry(bottom, p++);
}

ParamCircuit build_so4(int n) {
  if (n != 2 && n != 4) throw InputError("so4 ansatz is defined on 2 or 4 qubits");
  int p = 0;
  if (n == 2) {
    ParamCircuit c(2, 6);
    so4_block(c, 0, 1, p);
    c.set_kind("so4");
    return c;
  }
  ParamCircuit c(4, 36);
  const int pairs[6][2] = {{0, 1}, {2, 3}, {1, 2}, {0, 1}, {2, 3}, {1, 2}};
  for (const auto& pr : pairs) so4_block(c, pr[0], pr[1], p);
  c.set_kind("so4");
  return c;
}

ParamCircuit build_a_gate(int n) {
  if (n != 2) throw InputError("a_gate ansatz is defined on 2 qubits");
  constexpr double pi = std::numbers::pi;
  // Parameters: 0 = x0, 1 = x1, 2 = theta, 3 = phi. Rotations follow the
  // A-gate convention R_Y(t) = exp(i t Y/2), R_Z(t) = exp(i t Z/2).
  ParamCircuit c(2, 4);
  const PauliString y1 = PauliString::single(2, 1, 'Y');
  const PauliString z1 = PauliString::single(2, 1, 'Z');
  c.add_rotation(PauliString::single(2, 0, 'Y'), 0.5, 0);
  c.add_rotation(y1, 0.5, 1);
  c.add_fixed(make_cnot(1, 0));
  // R(theta, phi) = R_Y(theta + pi/2) R_Z(phi + pi) on qubit 1
  c.add_fixed(make_rz(1, -pi));
  c.add_rotation(z1, 0.5, 3);
  c.add_fixed(make_ry(1, -pi / 2));
  c.add_rotation(y1, 0.5, 2);
  c.add_fixed(make_cnot(0, 1));
  // R(theta, phi)^dagger
  c.add_rotation(y1, -0.5, 2);
  c.add_fixed(make_ry(1, pi / 2));
  c.add_rotation(z1, -0.5, 3);
  c.add_fixed(make_rz(1, pi));
  c.add_fixed(make_cnot(1, 0));
  c.set_kind("a_gate");
  return c;
}

}  // namespace

ParamCircuit build_ansatz(AnsatzKind kind, int n_qubits, int depth) {
  switch (kind) {
    case AnsatzKind::ry_cnot: return build_ry_cnot(n_qubits, depth);
    case AnsatzKind::so4: return build_so4(n_qubits);
    case AnsatzKind::a_gate: return build_a_gate(n_qubits);
  }
  throw InputError("unknown ansatz kind");
}

ParamCircuit build_ansatz(const std::string& kind, int n_qubits, int depth) {
  return build_ansatz(parse_ansatz_kind(kind), n_qubits, depth);
}

State prepare_state(const ParamCircuit& c, const Eigen::VectorXd& theta, const State& reference) {
  return c.prepare(theta, reference);
}

Insertion Insertion::exp(const PauliString& p, int sign) {
  if (sign != 1 && sign != -1) throw InputError("insertion sign must be +1 or -1");
  return {sign > 0 ? Kind::exp_plus : Kind::exp_minus, p};
}

Insertion Insertion::projector(const PauliString& p, int outcome) {
  if (outcome != 1 && outcome != -1) throw InputError("projector outcome must be +1 or -1");
  return {outcome > 0 ? Kind::proj_plus : Kind::proj_minus, p};
}

PrefixResult prefix_state_angles(const ParamCircuit& c, const Eigen::VectorXd& angles, int cut,
                                 const State& reference, const Insertion& insertion, int end) {
  c.check_angles(angles);
  if (cut < -1 || cut >= c.n_pgates()) throw InputError("prefix cut out of range");
  if (end < cut || end > c.n_pgates()) throw InputError("prefix endpoint out of range");
  PrefixResult r{reference, 1.0};
  c.apply_segment(r.state, angles, -1, cut);
  constexpr double quarter = std::numbers::pi / 4.0;
  switch (insertion.kind) {
    case Insertion::Kind::none: break;
    case Insertion::Kind::exp_plus: r.state.apply_pauli_rotation(insertion.pauli, 1.0, quarter); break;
    case Insertion::Kind::exp_minus: r.state.apply_pauli_rotation(insertion.pauli, 1.0, -quarter); break;
    case Insertion::Kind::proj_plus:
    case Insertion::Kind::proj_minus: {
      Projection pr = project_pauli(r.state, insertion.pauli, insertion.kind == Insertion::Kind::proj_plus ? 1 : -1);
      r.state = std::move(pr.post_state);
      r.probability = pr.probability;
      break;
    }
  }
  if (end > cut) c.apply_segment(r.state, angles, cut, end);
  return r;
}

PrefixResult prefix_state(const ParamCircuit& c, const Eigen::VectorXd& theta, int cut, const State& reference,
                          const Insertion& insertion, int end) {
  return prefix_state_angles(c, c.gate_angles(theta), cut, reference, insertion, end);
}

ParamCircuit controlled_compile(const ParamCircuit& c, bool on_one) { return c.controlled(on_one); }

namespace {

[[noreturn]] void circuit_fail(const std::string& source, const std::string& field, const std::string& msg) {
  throw LoadError(source + ": " + field + ": " + msg);
}

std::vector<int> targets_of(const json& g, const std::string& source, const std::string& field) {
  if (!g.contains("targets") || !g["targets"].is_array()) circuit_fail(source, field + ".targets", "expected an array");
  std::vector<int> t;
  for (const auto& v : g["targets"]) {
    if (!v.is_number_integer()) circuit_fail(source, field + ".targets", "expected integers");
    t.push_back(v.get<int>());
  }
  return t;
}

}  // namespace

ParamCircuit parse_circuit_json(const std::string& text, const std::string& source) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw LoadError(source + ": invalid JSON: " + e.what());
  }
  if (!j.is_object()) circuit_fail(source, "<root>", "expected an object");
  if (!j.contains("n_qubits") || !j["n_qubits"].is_number_integer()) circuit_fail(source, "n_qubits", "missing integer");
  if (!j.contains("gates") || !j["gates"].is_array()) circuit_fail(source, "gates", "missing gate list");
  const int n = j["n_qubits"].get<int>();
  int n_theta = 0;
  for (const auto& g : j["gates"]) {
    if (g.contains("param_index") && g["param_index"].is_number_integer()) {
      n_theta = std::max(n_theta, g["param_index"].get<int>() + 1);
    }
  }
  if (j.contains("n_params")) n_theta = std::max(n_theta, j["n_params"].get<int>());
  ParamCircuit c(n, n_theta);
  for (std::size_t i = 0; i < j["gates"].size(); ++i) {
    const json& g = j["gates"][i];
    const std::string field = "gates[" + std::to_string(i) + "]";
    if (!g.contains("type") || !g["type"].is_string()) circuit_fail(source, field + ".type", "missing gate type");
    const std::string type = g["type"].get<std::string>();
    try {
      const bool param = g.contains("param_index");
      if (type == "rotation" || type == "pauli_rotation") {
        if (!param) circuit_fail(source, field, "rotation needs param_index");
        if (!g.contains("pauli") || !g["pauli"].is_string()) circuit_fail(source, field + ".pauli", "missing Pauli string");
        PauliString p = parse_pauli(g["pauli"].get<std::string>());
        if (p.n_qubits() != n) circuit_fail(source, field + ".pauli", "length differs from n_qubits");
        c.add_rotation(p, g.value("g", 1.0), g["param_index"].get<int>());
        continue;
      }
      const std::vector<int> t = targets_of(g, source, field);
      if (type == "CNOT") {
        if (t.size() != 2) circuit_fail(source, field + ".targets", "CNOT needs [control, target]");
        c.add_fixed(make_cnot(t[0], t[1]));
        continue;
      }
      if (t.size() != 1) circuit_fail(source, field + ".targets", "single-qubit gate needs one target");
      if ((type == "RY" || type == "RZ") && param) {
        const char letter = type == "RY" ? 'Y' : 'Z';
        c.add_rotation(PauliString::single(n, t[0], letter), g.value("g", -0.5), g["param_index"].get<int>());
        continue;
      }
      FixedGate f;
      f.target = t[0];
      f.angle = g.value("angle", 0.0);
      if (type == "H") f.kind = GateKind::H;
      else if (type == "S") f.kind = GateKind::S;
      else if (type == "Sdg") f.kind = GateKind::Sdg;
      else if (type == "X") f.kind = GateKind::X;
      else if (type == "Y") f.kind = GateKind::Y;
      else if (type == "Z") f.kind = GateKind::Z;
      else if (type == "RY") f.kind = GateKind::RY;
      else if (type == "RZ") f.kind = GateKind::RZ;
      else circuit_fail(source, field + ".type", "unknown gate type \"" + type + "\"");
      c.add_fixed(f);
    } catch (const InputError& e) {
      circuit_fail(source, field, e.what());
    }
  }
  for (int p = 0; p < n_theta; ++p) {
    if (c.gates_of(p).empty()) circuit_fail(source, "gates", "parameter " + std::to_string(p) + " drives no gate");
  }
  c.set_kind(j.value("name", std::string("custom")));
  return c;
}

ParamCircuit load_circuit(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LoadError(path + ": cannot open circuit file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_circuit_json(ss.str(), path);
}

}  // namespace vqnac
