#pragma once

#include <compare>
#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

namespace vqnac {

using cplx = std::complex<double>;

inline constexpr int kMaxQubits = 20;

// Tensor product of single-qubit Paulis in symplectic form. Letter index in
// the text form equals the qubit index: "ZX" is Z on qubit 0, X on qubit 1.
//
// Action on a basis state: P|i> = i^{#Y} (-1)^{popcount(i & z)} |i ^ x>.
class PauliString {
 public:
  PauliString() = default;
  PauliString(int n_qubits, std::uint64_t x_mask, std::uint64_t z_mask);

  static PauliString identity(int n_qubits);
  static PauliString single(int n_qubits, int qubit, char letter);

  int n_qubits() const { return n_; }
  std::uint64_t x_mask() const { return x_; }
  std::uint64_t z_mask() const { return z_; }
  // Qubits acted on non-trivially.
  std::uint64_t support() const { return x_ | z_; }
  bool is_identity() const { return (x_ | z_) == 0; }
  int y_count() const;

  char letter(int qubit) const;
  std::string to_string() const;

  // Phase picked up by basis state |i> (the image is |i ^ x>).
  cplx phase_on(std::uint64_t basis_index) const;

  // Same letters on an (n_qubits + extra)-qubit register.
  PauliString widened(int extra) const;

  friend bool operator==(const PauliString&, const PauliString&) = default;
  friend auto operator<=>(const PauliString& a, const PauliString& b) {
    return std::tie(a.n_, a.x_, a.z_) <=> std::tie(b.n_, b.x_, b.z_);
  }

 private:
  int n_ = 0;
  std::uint64_t x_ = 0;
  std::uint64_t z_ = 0;
};

// Product a*b = phase * c for Pauli strings.
std::pair<cplx, PauliString> multiply(const PauliString& a, const PauliString& b);

PauliString parse_pauli(std::string_view text);

struct PauliTerm {
  double coeff = 0.0;
  PauliString pauli;
};

// Real-weighted sum of Pauli strings; the Hermitian observables of the library.
// Adding a string that is already present merges the coefficients.
class PauliSum {
 public:
  PauliSum() = default;
  explicit PauliSum(int n_qubits) : n_(n_qubits) {}
  PauliSum(int n_qubits, const std::vector<PauliTerm>& terms);

  static PauliSum from_strings(const std::vector<std::pair<double, std::string>>& terms);

  void add(double coeff, const PauliString& p);

  int n_qubits() const { return n_; }
  const std::vector<PauliTerm>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  // sum_i |h_i|
  double one_norm() const;
  double coeff_of(const PauliString& p) const;

  PauliSum scaled(double s) const;
  PauliSum& operator+=(const PauliSum& other);
  friend PauliSum operator+(PauliSum a, const PauliSum& b) { return a += b; }

  // Term-by-term comparison after merging; missing strings count as zero.
  bool approx_equal(const PauliSum& other, double tol) const;

  std::string to_string() const;

 private:
  int n_ = 0;
  std::vector<PauliTerm> terms_;
  std::map<PauliString, std::size_t> index_;
};

}  // namespace vqnac
