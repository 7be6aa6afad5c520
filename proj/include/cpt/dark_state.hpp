#pragma once

#include <utility>
#include <vector>

#include "cpt/params.hpp"
#include "cpt/symmetric_basis.hpp"
#include "cpt/types.hpp"

namespace cpt {

// Cap for explicit dark-state coefficient vectors (binomial weights handled
// in log space up to here).
inline constexpr int kMaxDarkStateAtoms = 40;

// The closed excitation chain |3> = |2^0>, |1> = |1 2^0>, |2> = |2^1>,
// |1 2^1>, |2^2>, ..., |2^N>, where |1 2^k> has one shared excitation and k
// atoms transferred to level 2 (the rest in level 3). 2N+1 states: even chain
// positions 2k are the ground states |2^k>, odd positions 2k+1 the excited
// |1 2^k>.
//
// Tridiagonal Hamiltonian on the chain: couplings omega3 sqrt(N-k) between
// |2^k> and |1 2^k>, omega2 sqrt(k+1) between |1 2^k> and |2^{k+1}>; diagonal
// alternating -N delta (ground) and -(N-1) delta (excited).
RealMatrix build_chain_hamiltonian(const SystemParams& params);

// Symmetric-basis occupation label of each chain position, |2^k> -> (0,k,N-k)
// and |1 2^k> -> (1,k,N-1-k).
std::vector<Occupation> chain_state_triples(int n_atoms);

struct DarkStateVector {
  RealVector coefficients;  // on the chain basis, unit norm
  double theta;             // mixing angle, tan(theta) = omega3/omega2
};

// Collective dark state at two-photon resonance: zero-energy eigenvector of
// the chain Hamiltonian, supported on the ground chain states only, with
//   c_{2k} = sqrt(C(N,k)) (-sin theta)^k (cos theta)^{N-k}.
// dark_state() builds it by marching the zero-eigenvalue recurrence
//   c_{2k+2} = -(omega3/omega2) sqrt((N-k)/(k+1)) c_{2k}
// (log-space march, falling back to the closed form when omega2 = 0);
// dark_state_closed_form() evaluates the binomial expression directly.
// Both require delta = 0 and N <= kMaxDarkStateAtoms.
DarkStateVector dark_state(const SystemParams& params);
DarkStateVector dark_state_closed_form(const SystemParams& params);

// Amplitudes of the product state |Psi1> x ... x |Psi1> (every atom in its
// single-atom dark state) on the chain basis: the m1 = 0 sector of the
// symmetric expansion, sqrt(C(N,k)) (-sin theta)^k (cos theta)^{N-k} on
// |2^k>, zero on the excited positions.
RealVector chain_product_state(const SystemParams& params);

// |<D|Psi1 x ... x Psi1>|^2 between the recurrence-built dark state and the
// product expansion; exactly 1 in exact arithmetic (the collective dark state
// is a product state).
double product_form_overlap(const SystemParams& params);

// The two nearest collective dressed states reachable from the dark state
// |D> = |N,0,0>: |D2> = |N-1,1,0> and |D3> = |N-1,0,1>, as unit vectors in
// the given dressed occupation basis. They carry dressed energy +Omega and
// -Omega relative to |D>.
std::pair<RealVector, RealVector> d2_d3_states(const SystemParams& params,
                                               const SymmetricBasis& basis);

struct DarkRateCoefficients {
  double out_rate;  // total escape rate from |N,0,0>: 4 N gamma2_rate
  double in_rate;   // feeding rate from each of |D2>, |D3>: 2 N gamma1_rate
};

// Reads the dark-state row of the Pauli generator; the linear-in-N
// coefficients are the collectivity statement for trapping and escape.
DarkRateCoefficients dark_rate_coefficients(const SystemParams& params);

}  // namespace cpt
