#pragma once

#include "cpt/params.hpp"
#include "cpt/symmetric_basis.hpp"
#include "cpt/types.hpp"

namespace cpt {

// Exact dynamics caps out where the dense superoperator (d^2 x d^2 with
// d = (N+1)(N+2)/2) stops fitting in memory: N = 12 gives 8281^2 complex
// entries, about 1 GiB.
inline constexpr int kMaxExactAtoms = 12;

// Collective Hamiltonian at two-photon detuning delta (hbar = 1):
//   H = delta (S22 - S33) + omega2 (S12 + S21) + omega3 (S13 + S31).
ComplexMatrix build_hamiltonian(const SystemParams& params,
                                const SymmetricBasis& basis);

// Dense Liouvillian superoperator acting on column-major vec(rho):
//   drho/dt = -i[H, rho]
//             + gamma2 { (1+nbar2) D[S21] + nbar2 D[S12] } rho
//             + gamma3 { (1+nbar3) D[S31] + nbar3 D[S13] } rho
// with D[C] rho = 2 C rho C^dag - C^dag C rho - rho C^dag C. Thermal photons
// drive the upward jumps S12, S13. Throws for n_atoms > kMaxExactAtoms.
ComplexMatrix build_liouvillian(const SystemParams& params,
                                const SymmetricBasis& basis);

// Health metrics of a candidate density matrix.
struct DensityCheck {
  double hermiticity_error;  // max |rho - rho^dag| element
  double trace_error;        // |Tr rho - 1|
  double min_eigenvalue;
};

DensityCheck check_density(const ComplexMatrix& rho);

// Throws std::invalid_argument if rho is not Hermitian / unit-trace /
// positive within the given tolerances.
void require_density(const ComplexMatrix& rho, double herm_tol = 1e-10,
                     double trace_tol = 1e-10, double eig_floor = -1e-8);

// Integrates vec(rho)' = L vec(rho) from 0 to t_final with an adaptive
// embedded Dormand-Prince 5(4) pair at local tolerance tol. The state is
// re-Hermitized after every accepted step; trace or Hermiticity drift beyond
// 100*tol, or a step-size underflow, throws std::runtime_error.
ComplexMatrix evolve(const ComplexMatrix& liouvillian,
                     const ComplexMatrix& rho0, double t_final,
                     double tol = 1e-9);

struct SteadyStateOptions {
  // Accept only if ||L vec(rho)||_2 <= residual_tol * ||L||_F.
  double residual_tol = 1e-10;
  // Null-space uniqueness check via full SVD of L: 1 = on, 0 = off,
  // -1 = auto (on when d^2 <= 1024, i.e. N <= 6; the SVD is cubic in d^2).
  int uniqueness_check = -1;
};

struct SteadyStateResult {
  ComplexMatrix rho;
  double residual_rel = 0.0;    // ||L vec(rho)||_2 / ||L||_F
  double null_space_gap = 0.0;  // sigma_{second smallest} / sigma_max; NaN if skipped
};

// Steady state of the Liouvillian: least-squares solution of L x = 0 with the
// trace functional appended as a weighted constraint row, then re-Hermitized
// and trace-normalized. Throws std::runtime_error if the residual exceeds the
// tolerance or the null space is degenerate (dimension > 1).
SteadyStateResult steady_state_numeric(const ComplexMatrix& liouvillian,
                                       const SteadyStateOptions& options = {});

// Collective excited-state population Tr(S11 rho) = sum_i m1(i) rho_ii,
// in [0, N].
double upper_population(const ComplexMatrix& rho, const SymmetricBasis& basis);

}  // namespace cpt
