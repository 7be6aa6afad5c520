#include "cpt/dark_state.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "cpt/dressed.hpp"

namespace cpt {

namespace {

void require_chain_params(const SystemParams& params) {
  params.require_driven();
  if (params.n_atoms > kMaxDarkStateAtoms) {
    throw std::invalid_argument("dark-state vectors support at most " +
                                std::to_string(kMaxDarkStateAtoms) + " atoms");
  }
  if (params.delta != 0.0) {
    throw std::invalid_argument(
        "the dark state only exists at two-photon resonance (delta = 0)");
  }
}

double log_binomial(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

}  // namespace

RealMatrix build_chain_hamiltonian(const SystemParams& params) {
  params.require_driven();
  const int n = params.n_atoms;
  const int dim = 2 * n + 1;
  RealMatrix h = RealMatrix::Zero(dim, dim);
  for (int k = 0; k <= n; ++k) {
    h(2 * k, 2 * k) = -n * params.delta;                       // |2^k>
    if (k < n) h(2 * k + 1, 2 * k + 1) = -(n - 1) * params.delta;  // |1 2^k>
  }
  for (int k = 0; k < n; ++k) {
    const double w3 = params.omega3 * std::sqrt(static_cast<double>(n - k));
    h(2 * k, 2 * k + 1) = w3;
    h(2 * k + 1, 2 * k) = w3;
    const double w2 = params.omega2 * std::sqrt(static_cast<double>(k + 1));
    h(2 * k + 1, 2 * k + 2) = w2;
    h(2 * k + 2, 2 * k + 1) = w2;
  }
  return h;
}

std::vector<Occupation> chain_state_triples(int n_atoms) {
  if (n_atoms < 1) {
    throw std::invalid_argument("chain requires at least one atom");
  }
  std::vector<Occupation> triples;
  triples.reserve(2 * n_atoms + 1);
  for (int k = 0; k <= n_atoms; ++k) {
    triples.push_back(Occupation{0, k, n_atoms - k});
    if (k < n_atoms) triples.push_back(Occupation{1, k, n_atoms - 1 - k});
  }
  return triples;
}

DarkStateVector dark_state_closed_form(const SystemParams& params) {
  require_chain_params(params);
  const int n = params.n_atoms;
  const double theta = std::atan2(params.omega3, params.omega2);
  // sin/cos of the mixing angle, algebraically: exact zeros when one
  // coupling is switched off (cos(atan2(w3, 0)) would only be ~1e-16)
  const double s = params.omega3 / params.omega();
  const double c = params.omega2 / params.omega();
  RealVector coeffs = RealVector::Zero(2 * n + 1);
  for (int k = 0; k <= n; ++k) {
    double value;
    if (s == 0.0) {
      value = (k == 0) ? 1.0 : 0.0;
    } else if (c == 0.0) {
      value = (k == n) ? ((n % 2 == 0) ? 1.0 : -1.0) : 0.0;
    } else {
      const double lg =
          0.5 * log_binomial(n, k) + k * std::log(s) + (n - k) * std::log(c);
      value = ((k % 2 == 0) ? 1.0 : -1.0) * std::exp(lg);
    }
    coeffs(2 * k) = value;
  }
  coeffs /= coeffs.norm();
  return DarkStateVector{std::move(coeffs), theta};
}

DarkStateVector dark_state(const SystemParams& params) {
  require_chain_params(params);
  if (params.omega2 == 0.0) {
    // The recurrence divides by omega2; take the theta -> pi/2 closed form.
    return dark_state_closed_form(params);
  }
  const int n = params.n_atoms;
  const double log_ratio = std::log(params.omega3) - std::log(params.omega2);
  // March c_{2k+2} = -(omega3/omega2) sqrt((N-k)/(k+1)) c_{2k} in log space.
  std::vector<double> log_mag(n + 1, -std::numeric_limits<double>::infinity());
  log_mag[0] = 0.0;
  if (params.omega3 > 0.0) {
    for (int k = 0; k < n; ++k) {
      log_mag[k + 1] = log_mag[k] + log_ratio +
                       0.5 * (std::log(static_cast<double>(n - k)) -
                              std::log(static_cast<double>(k + 1)));
    }
  }
  double mx = -std::numeric_limits<double>::infinity();
  for (double v : log_mag) mx = std::max(mx, v);
  RealVector coeffs = RealVector::Zero(2 * n + 1);
  for (int k = 0; k <= n; ++k) {
    const double mag = std::exp(log_mag[k] - mx);
    coeffs(2 * k) = ((k % 2 == 0) ? 1.0 : -1.0) * mag;
  }
  coeffs /= coeffs.norm();
  return DarkStateVector{std::move(coeffs),
                         std::atan2(params.omega3, params.omega2)};
}

RealVector chain_product_state(const SystemParams& params) {
  require_chain_params(params);
  const int n = params.n_atoms;
  const DressedVectors v = dressed_vectors(params);
  const double amp2 = v.psi1(1);  // -sin(theta)
  const double amp3 = v.psi1(2);  //  cos(theta)
  // Symmetric expansion of |Psi1>^{(x) N}: the amplitude on |m1=0, k, N-k> is
  // sqrt(C(N,k)) amp2^k amp3^{N-k}; all excited chain positions vanish.
  RealVector coeffs = RealVector::Zero(2 * n + 1);
  for (int k = 0; k <= n; ++k) {
    double value;
    if (amp2 == 0.0) {
      value = (k == 0) ? std::pow(amp3, n) : 0.0;
    } else if (amp3 == 0.0) {
      value = (k == n) ? std::pow(amp2, n) : 0.0;
    } else {
      // amp3 = cos(theta) >= 0 and amp2 = -sin(theta) <= 0 on this
      // parameter domain, so the sign is (-1)^k.
      const double lg = 0.5 * log_binomial(n, k) +
                        k * std::log(std::abs(amp2)) +
                        (n - k) * std::log(amp3);
      value = ((k % 2 == 0) ? 1.0 : -1.0) * std::exp(lg);
    }
    coeffs(2 * k) = value;
  }
  return coeffs;
}

double product_form_overlap(const SystemParams& params) {
  const DarkStateVector dark = dark_state(params);
  const RealVector product = chain_product_state(params);
  const double inner = dark.coefficients.dot(product);
  return inner * inner;
}

std::pair<RealVector, RealVector> d2_d3_states(const SystemParams& params,
                                               const SymmetricBasis& basis) {
  params.require_driven();
  if (basis.n_atoms() != params.n_atoms) {
    throw std::invalid_argument("basis was built for a different atom count");
  }
  const int n = params.n_atoms;
  RealVector d2 = RealVector::Zero(basis.dim());
  RealVector d3 = RealVector::Zero(basis.dim());
  d2(basis.index_of(Occupation{n - 1, 1, 0})) = 1.0;
  d3(basis.index_of(Occupation{n - 1, 0, 1})) = 1.0;
  return {std::move(d2), std::move(d3)};
}

DarkRateCoefficients dark_rate_coefficients(const SystemParams& params) {
  const SymmetricBasis basis(params.n_atoms);
  const RealMatrix w = pauli_generator(params, basis);
  const int dark_index = basis.index_of(Occupation{params.n_atoms, 0, 0});
  const int d2_index = basis.index_of(Occupation{params.n_atoms - 1, 1, 0});
  DarkRateCoefficients out;
  out.out_rate = -w(dark_index, dark_index);
  out.in_rate = w(dark_index, d2_index);
  return out;
}

}  // namespace cpt
