#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "vqnac/family.hpp"
#include "vqnac/pauli.hpp"

namespace vqnac::oracle {

inline constexpr int kMaxDenseQubits = 10;

Eigen::MatrixXcd dense_pauli(const PauliString& p);
Eigen::MatrixXcd dense_matrix(const PauliSum& H);

struct SpectrumResult {
  // ascending
  Eigen::VectorXd eigenvalues;
  // columns; largest-magnitude component real positive
  Eigen::MatrixXcd eigenvectors;
};

// Multiplies v by the phase that makes its largest-magnitude entry real positive.
Eigen::VectorXcd align_phase(const Eigen::VectorXcd& v);
// Multiplies v by the phase that makes <reference|v> real positive.
Eigen::VectorXcd align_to(const Eigen::VectorXcd& v, const Eigen::VectorXcd& reference);

SpectrumResult exact_spectrum(const PauliSum& H);

// First or second nonadiabatic coupling from central differences of exact
// eigenvectors: <chi_k|d_I chi_l> (order 1) or -<chi_k|d_I^2 chi_l> (order 2).
// Stencil vectors are phase-chained to chi_l(R). The optional gauge vectors fix
// the phases of chi_k and chi_l at R (default: largest component real positive).
cplx fd_nac(const HamiltonianFamily& f, const Eigen::VectorXd& R, int I, int k, int l, int order, double h,
            const std::optional<Eigen::VectorXcd>& gauge_k = std::nullopt,
            const std::optional<Eigen::VectorXcd>& gauge_l = std::nullopt);

// -<chi_k|dH/dR_I|chi_l> / (E_k - E_l) from exact eigenpairs.
cplx hellmann_feynman_nac(const HamiltonianFamily& f, const Eigen::VectorXd& R, int I, int k, int l,
                          const std::optional<Eigen::VectorXcd>& gauge_k = std::nullopt,
                          const std::optional<Eigen::VectorXcd>& gauge_l = std::nullopt);

// Columns spanning the lowest eigenspace (eigenvalues within tol of E_0).
Eigen::MatrixXcd ground_multiplet(const PauliSum& H, double tol = 1e-8);

// Gauge-invariant Berry phase of the ground state(s) around the closed loop
// (last point equal to the first). Degenerate ground spaces are handled by the
// Wilson loop; a non-scalar holonomy or a multiplicity change along the loop
// throws OracleInvalid. Result in (-pi, pi].
double exact_berry(const HamiltonianFamily& f, const std::vector<Eigen::VectorXd>& loop);

}  // namespace vqnac::oracle
