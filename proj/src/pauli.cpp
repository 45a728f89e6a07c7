#include "vqnac/pauli.hpp"

#include <bit>
#include <cmath>
#include <sstream>

#include "vqnac/error.hpp"

namespace vqnac {

namespace {

cplx ipow(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

void check_qubit_count(int n) {
  if (n < 0 || n > kMaxQubits) {
    throw InputError("qubit count " + std::to_string(n) + " outside [0, " +
                     std::to_string(kMaxQubits) + "]");
  }
}

}  // namespace

PauliString::PauliString(int n_qubits, std::uint64_t x_mask, std::uint64_t z_mask)
    : n_(n_qubits), x_(x_mask), z_(z_mask) {
  check_qubit_count(n_qubits);
  const std::uint64_t full = n_qubits == 64 ? ~0ULL : ((1ULL << n_qubits) - 1);
  if ((x_mask | z_mask) & ~full) throw InputError("Pauli mask exceeds qubit count");
}

PauliString PauliString::identity(int n_qubits) { return PauliString(n_qubits, 0, 0); }

PauliString PauliString::single(int n_qubits, int qubit, char letter) {
  if (qubit < 0 || qubit >= n_qubits) {
    throw InputError("qubit " + std::to_string(qubit) + " out of range for " +
                     std::to_string(n_qubits) + " qubits");
  }
  const std::uint64_t bit = 1ULL << qubit;
  switch (letter) {
    case 'I': return PauliString(n_qubits, 0, 0);
    case 'X': return PauliString(n_qubits, bit, 0);
    case 'Y': return PauliString(n_qubits, bit, bit);
    case 'Z': return PauliString(n_qubits, 0, bit);
    default: throw ParseError(std::string("illegal Pauli letter '") + letter + "'");
  }
}

int PauliString::y_count() const { return std::popcount(x_ & z_); }

char PauliString::letter(int qubit) const {
  const bool x = (x_ >> qubit) & 1U;
  const bool z = (z_ >> qubit) & 1U;
  if (x && z) return 'Y';
  if (x) return 'X';
  if (z) return 'Z';
  return 'I';
}

std::string PauliString::to_string() const {
  std::string out(static_cast<std::size_t>(n_), 'I');
  for (int q = 0; q < n_; ++q) out[static_cast<std::size_t>(q)] = letter(q);
  return out;
}

cplx PauliString::phase_on(std::uint64_t basis_index) const {
  const int sign_flips = std::popcount(basis_index & z_);
  return ipow(y_count() + 2 * sign_flips);
}

PauliString PauliString::widened(int extra) const { return PauliString(n_ + extra, x_, z_); }

std::pair<cplx, PauliString> multiply(const PauliString& a, const PauliString& b) {
  if (a.n_qubits() != b.n_qubits()) throw InputError("Pauli product size mismatch");
  // Write P = i^{y} X^x Z^z. Then (X^x1 Z^z1)(X^x2 Z^z2) = (-1)^{z1.x2} X^{x1^x2} Z^{z1^z2}.
  const std::uint64_t x = a.x_mask() ^ b.x_mask();
  const std::uint64_t z = a.z_mask() ^ b.z_mask();
  const int y_out = std::popcount(x & z);
  const int swap_sign = std::popcount(a.z_mask() & b.x_mask());
  // i^{ya} i^{yb} (-1)^{swap} = phase * i^{y_out}
  const int k = a.y_count() + b.y_count() + 2 * swap_sign - y_out;
  return {ipow(k), PauliString(a.n_qubits(), x, z)};
}

PauliString parse_pauli(std::string_view text) {
  const int n = static_cast<int>(text.size());
  if (n > kMaxQubits) throw ParseError("Pauli string longer than " + std::to_string(kMaxQubits));
  std::uint64_t x = 0;
  std::uint64_t z = 0;
  for (int q = 0; q < n; ++q) {
    const std::uint64_t bit = 1ULL << q;
    switch (text[static_cast<std::size_t>(q)]) {
      case 'I': break;
      case 'X': x |= bit; break;
      case 'Y': x |= bit; z |= bit; break;
      case 'Z': z |= bit; break;
      default:
        throw ParseError("illegal character '" + std::string(1, text[static_cast<std::size_t>(q)]) +
                         "' at position " + std::to_string(q) + " in Pauli string \"" +
                         std::string(text) + "\"");
    }
  }
  return PauliString(n, x, z);
}

PauliSum::PauliSum(int n_qubits, const std::vector<PauliTerm>& terms) : n_(n_qubits) {
  for (const auto& t : terms) add(t.coeff, t.pauli);
}

PauliSum PauliSum::from_strings(const std::vector<std::pair<double, std::string>>& terms) {
  if (terms.empty()) throw InputError("PauliSum needs at least one term");
  PauliSum out(static_cast<int>(terms.front().second.size()));
  for (const auto& [c, s] : terms) out.add(c, parse_pauli(s));
  return out;
}

void PauliSum::add(double coeff, const PauliString& p) {
  if (p.n_qubits() != n_) {
    throw InputError("Pauli string " + p.to_string() + " has " + std::to_string(p.n_qubits()) +
                     " qubits, sum has " + std::to_string(n_));
  }
  if (!std::isfinite(coeff)) throw InputError("non-finite Pauli coefficient");
  auto it = index_.find(p);
  if (it != index_.end()) {
    terms_[it->second].coeff += coeff;
    return;
  }
  index_.emplace(p, terms_.size());
  terms_.push_back({coeff, p});
}

double PauliSum::one_norm() const {
  double s = 0.0;
  for (const auto& t : terms_) s += std::abs(t.coeff);
  return s;
}

double PauliSum::coeff_of(const PauliString& p) const {
  auto it = index_.find(p);
  return it == index_.end() ? 0.0 : terms_[it->second].coeff;
}

PauliSum PauliSum::scaled(double s) const {
  PauliSum out(n_);
  for (const auto& t : terms_) out.add(t.coeff * s, t.pauli);
  return out;
}

PauliSum& PauliSum::operator+=(const PauliSum& other) {
  if (empty() && n_ == 0) n_ = other.n_;
  for (const auto& t : other.terms_) add(t.coeff, t.pauli);
  return *this;
}

bool PauliSum::approx_equal(const PauliSum& other, double tol) const {
  if (n_ != other.n_) return false;
  for (const auto& t : terms_) {
    if (std::abs(t.coeff - other.coeff_of(t.pauli)) > tol) return false;
  }
  for (const auto& t : other.terms_) {
    if (std::abs(t.coeff - coeff_of(t.pauli)) > tol) return false;
  }
  return true;
}

std::string PauliSum::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& t : terms_) {
    if (!first) os << " + ";
    os << t.coeff << "*" << t.pauli.to_string();
    first = false;
  }
  return os.str();
}

}  // namespace vqnac
