#pragma once

#include "cpt/params.hpp"
#include "cpt/symmetric_basis.hpp"
#include "cpt/types.hpp"

namespace cpt {

// Single-atom semiclassical dressed states at two-photon resonance, as
// components in the bare basis (|1>, |2>, |3>):
//   |Psi1> = (omega2 |3> - omega3 |2>) / Omega            energy 0 (dark)
//   |Psi2> = |1>/sqrt(2) + (omega2 |2> + omega3 |3>) / (sqrt(2) Omega)  +Omega
//   |Psi3> = |1>/sqrt(2) - (omega2 |2> + omega3 |3>) / (sqrt(2) Omega)  -Omega
struct DressedVectors {
  Eigen::Vector3d psi1;
  Eigen::Vector3d psi2;
  Eigen::Vector3d psi3;
};

DressedVectors dressed_vectors(const SystemParams& params);

// Secular (Omega >> gamma, N gamma nbar) relaxation rates between dressed
// states:
//   gamma0 = (1/2) [ gamma2 (1+2 nbar2) (omega2 / sqrt(2) Omega)^2
//                  + gamma3 (1+2 nbar3) (omega3 / sqrt(2) Omega)^2 ]
//   gamma1 = (1/2) [ gamma2 (1+nbar2) (omega3/Omega)^2
//                  + gamma3 (1+nbar3) (omega2/Omega)^2 ]   (into the dark state)
//   gamma2 = (1/2) [ gamma2 nbar2 (omega3/Omega)^2
//                  + gamma3 nbar3 (omega2/Omega)^2 ]       (out of the dark state)
// gamma1 > gamma2 always; gamma2 vanishes only without thermal photons.
struct DressedRates {
  double gamma0 = 0.0;
  double gamma1 = 0.0;
  double gamma2 = 0.0;
};

DressedRates dressed_rates(const SystemParams& params);

// Pauli master operator W for the populations P(m1,m2,m3) of the collective
// dressed occupation states, dP/dt = W P, with W(j,i) the rate from state i
// to state j and columns summing to zero. The allowed transitions and rates
// (m the source state, Rij the collective dressed transition operators):
//   Psi2 -> Psi1 : 2 gamma1 (m1+1) m2      Psi1 -> Psi2 : 2 gamma2 (m2+1) m1
//   Psi3 -> Psi1 : 2 gamma1 (m1+1) m3      Psi1 -> Psi3 : 2 gamma2 (m3+1) m1
//   Psi3 -> Psi2 : 2 gamma0 (m2+1) m3      Psi2 -> Psi3 : 2 gamma0 (m3+1) m2
// Valid only at two-photon resonance; delta != 0 throws, because away from
// resonance the dressed populations do not close on themselves.
RealMatrix pauli_generator(const SystemParams& params,
                           const SymmetricBasis& basis);

// Stationary distribution of the Pauli operator: solves W P = 0 with the
// normalization sum(P) = 1 replacing the first row, LU plus iterative
// refinement. Entries clamped to >= 0 and renormalized. Throws
// std::runtime_error if the generator is reducible/degenerate or the solve
// does not meet its residual.
RealVector pauli_steady_state(const RealMatrix& generator);

// Collective bare excited-state population implied by dressed populations:
// each of Psi2, Psi3 carries |<1|Psi>|^2 = 1/2, the dark state none, so
// <S11> = (1/2) sum_m P(m) (m2 + m3) = (N - <m1>)/2.
double dressed_upper_population(const SymmetricBasis& basis,
                                const RealVector& populations);

}  // namespace cpt
