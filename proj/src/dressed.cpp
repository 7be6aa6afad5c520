#include "cpt/dressed.hpp"

#include <cmath>
#include <stdexcept>

namespace cpt {

DressedVectors dressed_vectors(const SystemParams& params) {
  params.require_driven();
  const double om = params.omega();
  const double c2 = params.omega2 / om;
  const double c3 = params.omega3 / om;
  const double s = 1.0 / std::sqrt(2.0);
  DressedVectors v;
  v.psi1 << 0.0, -c3, c2;
  v.psi2 << s, s * c2, s * c3;
  v.psi3 << s, -s * c2, -s * c3;
  return v;
}

DressedRates dressed_rates(const SystemParams& params) {
  params.require_driven();
  const double om2 = params.omega() * params.omega();
  const double w2 = params.omega2 * params.omega2 / om2;  // (omega2/Omega)^2
  const double w3 = params.omega3 * params.omega3 / om2;
  DressedRates r;
  r.gamma0 = 0.5 * (params.gamma2 * (1.0 + 2.0 * params.nbar2) * w2 / 2.0 +
                    params.gamma3 * (1.0 + 2.0 * params.nbar3) * w3 / 2.0);
  r.gamma1 = 0.5 * (params.gamma2 * (1.0 + params.nbar2) * w3 +
                    params.gamma3 * (1.0 + params.nbar3) * w2);
  r.gamma2 = 0.5 * (params.gamma2 * params.nbar2 * w3 +
                    params.gamma3 * params.nbar3 * w2);
  return r;
}

RealMatrix pauli_generator(const SystemParams& params,
                           const SymmetricBasis& basis) {
  params.require_driven();
  if (basis.n_atoms() != params.n_atoms) {
    throw std::invalid_argument("basis was built for a different atom count");
  }
  if (params.delta != 0.0) {
    throw std::invalid_argument(
        "the secular dressed-state reduction only closes at two-photon "
        "resonance; delta must be 0 (use the exact route otherwise)");
  }
  const DressedRates r = dressed_rates(params);
  const int d = basis.dim();
  RealMatrix w = RealMatrix::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    const auto [m1, m2, m3] = basis.state(i);
    auto add = [&](Occupation target, double rate) {
      const int j = basis.index_of(target);
      w(j, i) += rate;
      w(i, i) -= rate;
    };
    if (m2 > 0) add({m1 + 1, m2 - 1, m3}, 2.0 * r.gamma1 * (m1 + 1) * m2);
    if (m3 > 0) add({m1 + 1, m2, m3 - 1}, 2.0 * r.gamma1 * (m1 + 1) * m3);
    if (m1 > 0) add({m1 - 1, m2 + 1, m3}, 2.0 * r.gamma2 * (m2 + 1) * m1);
    if (m1 > 0) add({m1 - 1, m2, m3 + 1}, 2.0 * r.gamma2 * (m3 + 1) * m1);
    if (m3 > 0) add({m1, m2 + 1, m3 - 1}, 2.0 * r.gamma0 * (m2 + 1) * m3);
    if (m2 > 0) add({m1, m2 - 1, m3 + 1}, 2.0 * r.gamma0 * (m3 + 1) * m2);
  }
  return w;
}

RealVector pauli_steady_state(const RealMatrix& generator) {
  const Eigen::Index d = generator.rows();
  if (generator.cols() != d || d == 0) {
    throw std::invalid_argument("generator must be square and non-empty");
  }
  RealMatrix a = generator;
  a.row(0).setOnes();
  RealVector b = RealVector::Zero(d);
  b(0) = 1.0;

  Eigen::PartialPivLU<RealMatrix> lu(a);
  RealVector x = lu.solve(b);
  x += lu.solve(b - a * x);
  x += lu.solve(b - a * x);

  const double scale = std::max(1.0, generator.cwiseAbs().maxCoeff());
  const double aug_residual = (a * x - b).cwiseAbs().maxCoeff();
  if (!(aug_residual < 1e-8 * scale) || !x.allFinite()) {
    throw std::runtime_error(
        "Pauli steady state is not unique (reducible or degenerate "
        "generator)");
  }
  // Exponentially small populations can come out as tiny negatives.
  for (Eigen::Index i = 0; i < d; ++i) {
    if (x(i) < 0.0) {
      if (x(i) < -1e-12) {
        throw std::runtime_error(
            "Pauli steady state has a significantly negative entry");
      }
      x(i) = 0.0;
    }
  }
  x /= x.sum();
  return x;
}

double dressed_upper_population(const SymmetricBasis& basis,
                                const RealVector& populations) {
  const int d = basis.dim();
  if (populations.size() != d) {
    throw std::invalid_argument(
        "population vector does not match the basis dimension");
  }
  double bright = 0.0;
  for (int i = 0; i < d; ++i) {
    const auto& occ = basis.state(i);
    bright += populations(i) * (occ[1] + occ[2]);
  }
  return 0.5 * bright;
}

}  // namespace cpt
