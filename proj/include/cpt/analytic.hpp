#pragma once

#include <cstdint>

#include "cpt/dressed.hpp"
#include "cpt/params.hpp"

namespace cpt {

// Largest atom number the closed-form route accepts; evaluation is log-space
// throughout, the only cost driver is the O(N) moment summation.
inline constexpr std::int64_t kMaxAnalyticAtoms = 1'000'000;

// Thermal trapping parameter
//   xi = ln[ (omega3^2 nbar2 + eta omega2^2 nbar3) /
//            (omega3^2 (1+nbar2) + eta omega2^2 (1+nbar3)) ],  eta = gamma3/gamma2.
// Strictly negative for any thermal occupation; -infinity (value() ==
// -HUGE_VAL, finite() == false) when nbar2 = nbar3 = 0. Identically
// ln(gamma2_rate / gamma1_rate) of the dressed rates.
struct XiValue {
  double value = 0.0;
  bool finite() const;
  static XiValue minus_infinity();
};

XiValue xi(const SystemParams& params);

// Limit forms of xi:
//  - only the 1-3 transition thermally occupied (nbar2 = 0):
//      xi = ln[ eta omega2^2 nbar3 / (omega3^2 + eta omega2^2 (1+nbar3)) ]
//  - one thermal weight dominant (nbar2 omega3^2 >> eta nbar3 omega2^2), and
//    equally the equal-occupation case nbar2 = nbar3 = nbar:
//      xi = ln[ nbar / (1+nbar) ]   (Rabi-frequency independent)
XiValue xi_limit_single_thermal(const SystemParams& params);
XiValue xi_limit_thermal_fraction(double nbar);

// log of the partition function
//   Z = sum_{m=0}^{N} (N - m + 1) e^{-xi m}
//     = (x^{N+2} - (N+2) x + N + 1) / (x - 1)^2,  x = e^{-xi},
// evaluated from the closed form in log space (dominant exponential factored
// out; all-positive series below (N+2)|xi| <= 1 where the closed form
// cancels). Requires finite xi <= 0; xi -> 0 limit is (N+1)(N+2)/2, the
// xi = -infinity marker returns +infinity.
double log_partition(const XiValue& xi, std::int64_t n_atoms);

// k-th moment <R11^k> = Z^{-1} sum_m (N - m + 1) m^k e^{-xi m} of the dark
// occupation number under the stationary distribution, by direct log-space
// summation. xi = -infinity gives N^k (all atoms dark).
double moment_r11(const XiValue& xi, std::int64_t n_atoms, int order);

// Stationary collective excited-state population
//   <S11> = (N - <R11>)/2
//         = [x^{N+2} + N(N+2) x - ((N+1)(N+2)/2) x^2 - N(N+1)/2 ...]
// evaluated from the closed form in log space with the same series guard as
// log_partition. In [0, N/2); 0 at xi = -infinity, N/3 as xi -> 0-.
// At N = 1 it reduces to e^xi / (1 + 2 e^xi).
double upper_population_analytic(const XiValue& xi, std::int64_t n_atoms);

// Stationary population of the first excited collective dressed state
// |N-1, 1, 0>, rho_D2 = e^{-xi (N-1)} / Z. Vanishes at xi = -infinity.
double rho_d2_analytic(const XiValue& xi, std::int64_t n_atoms);

// The same population from the rate-equation chain in terms of the dressed
// rates alone: rho_D2 = gamma2_rate * gamma1_rate^{N-1} /
// (gamma1_rate + 2 gamma2_rate)^N. Log-space; 0 when gamma2_rate = 0.
double rho_d2_independent(const DressedRates& rates, std::int64_t n_atoms);

// Ratio of the two rho_D2 expressions above (rate-chain over closed-form),
// equal to 1 at N = 1 and below 1 for N > 1 (the collective steady state
// holds more weight near the dark state than the naive chain). Throws
// std::domain_error at zero thermal occupation where it degenerates to 0/0.
double capacity_ratio(const SystemParams& params, std::int64_t n_atoms);

}  // namespace cpt
