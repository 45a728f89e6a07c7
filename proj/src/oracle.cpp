#include "vqnac/oracle.hpp"

#include <cmath>
#include <numbers>

#include "vqnac/error.hpp"

namespace vqnac::oracle {

namespace {

Eigen::Matrix2cd letter_matrix(char c) {
  Eigen::Matrix2cd m;
  const cplx i{0.0, 1.0};
  switch (c) {
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, -i, i, 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: m << 1, 0, 0, 1; break;
  }
  return m;
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    for (Eigen::Index c = 0; c < a.cols(); ++c) out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
  }
  return out;
}

void check_dense(int n) {
  if (n > kMaxDenseQubits) {
    throw OracleInvalid("dense oracle refuses " + std::to_string(n) + " qubits (cap " +
                        std::to_string(kMaxDenseQubits) + ")");
  }
}

double wrap(double x) {
  constexpr double pi = std::numbers::pi;
  double y = std::remainder(x, 2.0 * pi);
  if (y <= -pi) y += 2.0 * pi;
  return y;
}

void check_isolated(const Eigen::VectorXd& e, int k, const char* where) {
  constexpr double tol = 1e-8;
  if (k < 0 || k >= e.size()) throw InputError("level index out of range");
  if ((k > 0 && e[k] - e[k - 1] < tol) || (k + 1 < e.size() && e[k + 1] - e[k] < tol)) {
    throw OracleInvalid(std::string("level ") + std::to_string(k) + " is degenerate " + where);
  }
}

}  // namespace

Eigen::MatrixXcd dense_pauli(const PauliString& p) {
  check_dense(p.n_qubits());
  // Kronecker order: qubit n-1 leftmost, so qubit 0 is the least significant bit.
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(1, 1);
  for (int q = p.n_qubits() - 1; q >= 0; --q) m = kron(m, letter_matrix(p.letter(q)));
  return m;
}

Eigen::MatrixXcd dense_matrix(const PauliSum& H) {
  check_dense(H.n_qubits());
  const Eigen::Index d = Eigen::Index{1} << H.n_qubits();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
  for (const auto& t : H.terms()) m += t.coeff * dense_pauli(t.pauli);
  return m;
}

Eigen::VectorXcd align_phase(const Eigen::VectorXcd& v) {
  Eigen::Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  const cplx a = v[imax];
  if (std::abs(a) == 0.0) return v;
  return v * (std::conj(a) / std::abs(a));
}

Eigen::VectorXcd align_to(const Eigen::VectorXcd& v, const Eigen::VectorXcd& reference) {
  const cplx ov = reference.dot(v);
  if (std::abs(ov) < 1e-12) throw OracleInvalid("cannot align phase to an orthogonal reference");
  return v * (std::conj(ov) / std::abs(ov));
}

SpectrumResult exact_spectrum(const PauliSum& H) {
  const Eigen::MatrixXcd m = dense_matrix(H);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
  if (es.info() != Eigen::Success) throw OracleInvalid("dense eigendecomposition failed");
  SpectrumResult out;
  out.eigenvalues = es.eigenvalues();
  out.eigenvectors = es.eigenvectors();
  for (Eigen::Index c = 0; c < out.eigenvectors.cols(); ++c) {
    out.eigenvectors.col(c) = align_phase(out.eigenvectors.col(c));
  }
  return out;
}

namespace {

struct Eigenpair {
  Eigen::VectorXd e;
  Eigen::MatrixXcd v;
};

Eigenpair spectrum_at(const HamiltonianFamily& f, const Eigen::VectorXd& R) {
  SpectrumResult s = exact_spectrum(f.eval(R));
  return {s.eigenvalues, s.eigenvectors};
}

}  // namespace

cplx fd_nac(const HamiltonianFamily& f, const Eigen::VectorXd& R, int I, int k, int l, int order, double h,
            const std::optional<Eigen::VectorXcd>& gauge_k, const std::optional<Eigen::VectorXcd>& gauge_l) {
  if (order != 1 && order != 2) throw InputError("fd_nac order must be 1 or 2");
  if (!(h > 0.0)) throw InputError("fd_nac step must be positive");
  if (I < 0 || I >= f.n_params()) throw InputError("system-parameter index out of range");
  Eigen::VectorXd rp = R, rm = R;
  rp[I] += h;
  rm[I] -= h;
  const Eigenpair c0 = spectrum_at(f, R);
  const Eigenpair cp = spectrum_at(f, rp);
  const Eigenpair cm = spectrum_at(f, rm);
  for (const Eigenpair* s : {&c0, &cp, &cm}) {
    check_isolated(s->e, k, "within the finite-difference stencil");
    check_isolated(s->e, l, "within the finite-difference stencil");
  }
  Eigen::VectorXcd xk = c0.v.col(k);
  Eigen::VectorXcd xl = c0.v.col(l);
  if (gauge_k) xk = align_to(xk, *gauge_k);
  if (gauge_l) xl = align_to(xl, *gauge_l);
  // Continuous gauge across the stencil.
  const Eigen::VectorXcd xlp = align_to(cp.v.col(l), xl);
  const Eigen::VectorXcd xlm = align_to(cm.v.col(l), xl);
  if (order == 1) return xk.dot((xlp - xlm) / (2.0 * h));
  return -xk.dot((xlp - 2.0 * xl + xlm) / (h * h));
}

cplx hellmann_feynman_nac(const HamiltonianFamily& f, const Eigen::VectorXd& R, int I, int k, int l,
                          const std::optional<Eigen::VectorXcd>& gauge_k,
                          const std::optional<Eigen::VectorXcd>& gauge_l) {
  if (k == l) throw InputError("Hellmann-Feynman coupling needs k != l");
  const Eigenpair c0 = spectrum_at(f, R);
  check_isolated(c0.e, k, "at R");
  check_isolated(c0.e, l, "at R");
  Eigen::VectorXcd xk = c0.v.col(k);
  Eigen::VectorXcd xl = c0.v.col(l);
  if (gauge_k) xk = align_to(xk, *gauge_k);
  if (gauge_l) xl = align_to(xl, *gauge_l);
  const Eigen::MatrixXcd dH = dense_matrix(f.deriv(R, I, 1));
  return -xk.dot(dH * xl) / (c0.e[k] - c0.e[l]);
}

Eigen::MatrixXcd ground_multiplet(const PauliSum& H, double tol) {
  SpectrumResult s = exact_spectrum(H);
  const double e0 = s.eigenvalues[0];
  Eigen::Index m = 1;
  while (m < s.eigenvalues.size() && s.eigenvalues[m] - e0 <= tol * std::max(1.0, std::abs(e0))) ++m;
  return s.eigenvectors.leftCols(m);
}

double exact_berry(const HamiltonianFamily& f, const std::vector<Eigen::VectorXd>& loop) {
  if (loop.size() < 2) throw InputError("loop needs at least two points");
  if (!f.eval(loop.front()).approx_equal(f.eval(loop.back()), 1e-12)) {
    throw InputError("loop is not closed: H differs between first and last point");
  }
  std::vector<Eigen::MatrixXcd> V;
  V.reserve(loop.size());
  for (const auto& R : loop) V.push_back(ground_multiplet(f.eval(R)));
  const Eigen::Index m = V.front().cols();
  for (const auto& v : V) {
    if (v.cols() != m) throw OracleInvalid("ground-state multiplicity changes along the loop");
  }
  Eigen::MatrixXcd W = Eigen::MatrixXcd::Identity(m, m);
  for (std::size_t p = 0; p + 1 < V.size(); ++p) W = W * (V[p].adjoint() * V[p + 1]);
  W = W * (V.back().adjoint() * V.front());
  if (m > 1) {
    const cplx avg = W.trace() / static_cast<double>(m);
    if ((W - avg * Eigen::MatrixXcd::Identity(m, m)).norm() > 1e-6 * std::max(1.0, std::abs(avg))) {
      throw OracleInvalid("degenerate ground space with non-scalar holonomy: Berry phase undefined");
    }
    if (std::abs(avg) < 1e-12) throw OracleInvalid("loop discretization too coarse: vanishing overlap product");
    return wrap(std::arg(avg));
  }
  const cplx det = W.determinant();
  if (std::abs(det) < 1e-12) throw OracleInvalid("loop discretization too coarse: vanishing overlap product");
  return wrap(std::arg(det) / static_cast<double>(m));
}

}  // namespace vqnac::oracle
