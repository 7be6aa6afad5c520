#include "cpt/symmetric_basis.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cpt {

SymmetricBasis::SymmetricBasis(int n_atoms) : n_(n_atoms) {
  if (n_atoms < 1) {
    throw std::invalid_argument("SymmetricBasis requires at least one atom");
  }
  states_.reserve(static_cast<std::size_t>((n_ + 1) * (n_ + 2) / 2));
  for (int m1 = n_; m1 >= 0; --m1) {
    for (int m2 = n_ - m1; m2 >= 0; --m2) {
      states_.push_back(Occupation{m1, m2, n_ - m1 - m2});
    }
  }
}

int SymmetricBasis::index_of(const Occupation& occ) const {
  const auto [m1, m2, m3] = occ;
  if (m1 < 0 || m2 < 0 || m3 < 0 || m1 + m2 + m3 != n_) {
    throw std::out_of_range("occupation (" + std::to_string(m1) + "," +
                            std::to_string(m2) + "," + std::to_string(m3) +
                            ") is not a state of " + std::to_string(n_) +
                            " atoms");
  }
  // States with larger m1 fill a triangular block of size r(r+1)/2,
  // r = N - m1; within a block m2 descends from r.
  const int r = n_ - m1;
  return r * (r + 1) / 2 + (r - m2);
}

ComplexMatrix collective_operator(const SymmetricBasis& basis, int alpha,
                                  int beta) {
  if (alpha < 1 || alpha > 3 || beta < 1 || beta > 3) {
    throw std::out_of_range("level labels must be 1, 2 or 3");
  }
  const int d = basis.dim();
  ComplexMatrix op = ComplexMatrix::Zero(d, d);
  const int a = alpha - 1;
  const int b = beta - 1;
  for (int i = 0; i < d; ++i) {
    const Occupation& occ = basis.state(i);
    if (a == b) {
      op(i, i) = static_cast<double>(occ[a]);
      continue;
    }
    if (occ[b] == 0) continue;
    Occupation target = occ;
    target[a] += 1;
    target[b] -= 1;
    const int j = basis.index_of(target);
    op(j, i) = std::sqrt(static_cast<double>((occ[a] + 1) * occ[b]));
  }
  return op;
}

}  // namespace cpt
