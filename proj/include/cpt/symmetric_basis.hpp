#pragma once

#include <array>
#include <vector>

#include "cpt/types.hpp"

namespace cpt {

// Occupation numbers (m1, m2, m3) of the three single-atom levels,
// m1 + m2 + m3 = N. Index 0 holds the level-1 (excited) count.
using Occupation = std::array<int, 3>;

// The permutation-symmetric subspace of N three-level atoms, spanned by the
// symmetrized occupation states |m1, m2, m3>. Dimension (N+1)(N+2)/2.
// States are ordered lexicographically descending in (m1, m2): (N,0,0) first,
// then (N-1,1,0), (N-1,0,1), ..., (0,0,N) last.
class SymmetricBasis {
 public:
  explicit SymmetricBasis(int n_atoms);

  int n_atoms() const { return n_; }
  int dim() const { return static_cast<int>(states_.size()); }
  const Occupation& state(int index) const { return states_.at(index); }
  const std::vector<Occupation>& states() const { return states_; }

  // Position of an occupation triple in the ordering above. Throws
  // std::out_of_range for triples that do not belong to this basis.
  int index_of(const Occupation& occ) const;

 private:
  int n_;
  std::vector<Occupation> states_;
};

// Matrix of the collective transition operator S_{alpha beta} = sum_j
// |alpha><beta|_j restricted to the symmetric subspace. Levels are 1-based.
// For alpha != beta the only nonzero elements connect |...,m_beta,...> to the
// state with one atom moved from beta to alpha and equal
// sqrt((m_alpha + 1) m_beta); for alpha == beta the operator is diagonal with
// eigenvalue m_alpha. Throws std::out_of_range for levels outside 1..3.
ComplexMatrix collective_operator(const SymmetricBasis& basis, int alpha,
                                  int beta);

}  // namespace cpt
