#include "cpt/analytic.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace cpt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_atom_count(std::int64_t n_atoms) {
  if (n_atoms < 1 || n_atoms > kMaxAnalyticAtoms) {
    throw std::invalid_argument("atom count must lie in [1, " +
                                std::to_string(kMaxAnalyticAtoms) + "]");
  }
}

// Rejects NaN and positive xi; true iff xi is finite (false only for the
// -infinity marker).
bool check_xi(const XiValue& xi) {
  if (std::isnan(xi.value) || xi.value > 0.0) {
    throw std::invalid_argument("xi must be <= 0");
  }
  return std::isfinite(xi.value);
}

// Log-sum-exp accumulator (single pass, running maximum).
struct LogSum {
  double mx = -kInf;
  double s = 0.0;
  void add(double t) {
    if (t == -kInf) return;
    if (s == 0.0) {
      mx = t;
      s = 1.0;
    } else if (t <= mx) {
      s += std::exp(t - mx);
    } else {
      s = s * std::exp(mx - t) + 1.0;
      mx = t;
    }
  }
  double value() const { return s == 0.0 ? -kInf : mx + std::log(s); }
};

double signed_log_sum_exp(std::initializer_list<std::pair<double, double>>
                              terms /* (log|t|, sign) */) {
  double mx = -kInf;
  for (const auto& [lg, sign] : terms) mx = std::max(mx, lg);
  double s = 0.0;
  for (const auto& [lg, sign] : terms) s += sign * std::exp(lg - mx);
  if (!(s > 0.0)) {
    throw std::runtime_error("cancellation produced a non-positive sum");
  }
  return mx + std::log(s);
}

// The direct three-term evaluation of e^{(N+2)a} - (N+2) e^a + (N+1) loses
// roughly eps * (N+2) e^a / e^u relative digits to cancellation, so it is only
// safe once e^u dominates every coefficient. Below the crossover we switch to
// the all-positive Taylor series, whose terms peak near k = u and never
// cancel. u = 30 keeps the direct form accurate up to the N = 10^6 cap
// (e^30 ~ 1e13 >> N) while the series needs < 100 terms.
constexpr double kSeriesCrossover = 30.0;

// log of Z (e^a - 1)^2 = e^{(N+2)a} - (N+2) e^a + (N+1). Below the crossover
// the exponentials cancel to O(a^2) and the all-positive Taylor series with
// coefficients (N+2)^k - (N+2) takes over, with a^2 factored out:
//   Z (e^a - 1)^2 = a^2 sum_{k>=2} [ (N+2)^2 u^{k-2} - (N+2) a^{k-2} ] / k!,
// u = (N+2) a.
double log_z_numerator(double a, double n) {
  const double u = (n + 2.0) * a;
  if (u > kSeriesCrossover) {
    return signed_log_sum_exp({{u, +1.0},
                               {std::log(n + 2.0) + a, -1.0},
                               {std::log(n + 1.0), +1.0}});
  }
  const double c2 = (n + 2.0) * (n + 2.0);
  double pu = 1.0, pa = 1.0, fact = 2.0, sum = 0.0;
  for (int k = 2; k < 200; ++k) {
    const double term = (c2 * pu - (n + 2.0) * pa) / fact;
    sum += term;
    if (term < sum * 1e-18) break;
    pu *= u;
    pa *= a;
    fact *= static_cast<double>(k + 1);
  }
  return 2.0 * std::log(a) + std::log(sum);
}

// log of B = e^{(N+2)a} + N(N+2) e^a - ((N+1)(N+2)/2) e^{2a} - N(N+1)/2,
// which equals <S11> * Z (e^a - 1)^3. Taylor coefficients
// (N+2)^k + N(N+2) - (N+1)(N+2) 2^{k-1} vanish for k < 3 and are positive
// from k = 3 on, so below the crossover the series (a^3 factored out) is
// cancellation-free.
double log_b_numerator(double a, double n) {
  const double u = (n + 2.0) * a;
  const double alpha = n * (n + 2.0);
  const double beta = (n + 1.0) * (n + 2.0) / 2.0;
  const double delta = n * (n + 1.0) / 2.0;
  if (u > kSeriesCrossover) {
    return signed_log_sum_exp({{u, +1.0},
                               {std::log(alpha) + a, +1.0},
                               {std::log(beta) + 2.0 * a, -1.0},
                               {std::log(delta), -1.0}});
  }
  const double c3 = (n + 2.0) * (n + 2.0) * (n + 2.0);
  double pu = 1.0, pa = 1.0, p2a = 1.0, fact = 6.0, sum = 0.0;
  for (int k = 3; k < 200; ++k) {
    const double term = (c3 * pu + alpha * pa - 8.0 * beta * p2a) / fact;
    sum += term;
    if (term < sum * 1e-18) break;
    pu *= u;
    pa *= a;
    p2a *= 2.0 * a;
    fact *= static_cast<double>(k + 1);
  }
  return 3.0 * std::log(a) + std::log(sum);
}

}  // namespace

bool XiValue::finite() const { return std::isfinite(value); }

XiValue XiValue::minus_infinity() { return XiValue{-kInf}; }

XiValue xi(const SystemParams& params) {
  params.require_driven();
  const double w2 = params.omega2 * params.omega2;
  const double w3 = params.omega3 * params.omega3;
  const double eta = params.eta();
  const double num = w3 * params.nbar2 + eta * w2 * params.nbar3;
  const double den = w3 * (1.0 + params.nbar2) + eta * w2 * (1.0 + params.nbar3);
  if (num == 0.0) return XiValue::minus_infinity();
  return XiValue{std::log(num) - std::log(den)};
}

XiValue xi_limit_single_thermal(const SystemParams& params) {
  params.require_driven();
  if (params.nbar2 != 0.0) {
    throw std::invalid_argument(
        "the single-sided thermal form assumes nbar2 = 0");
  }
  const double w2 = params.omega2 * params.omega2;
  const double w3 = params.omega3 * params.omega3;
  const double eta = params.eta();
  const double num = eta * w2 * params.nbar3;
  if (num == 0.0) return XiValue::minus_infinity();
  return XiValue{std::log(num) -
                 std::log(w3 + eta * w2 * (1.0 + params.nbar3))};
}

XiValue xi_limit_thermal_fraction(double nbar) {
  if (!(nbar >= 0.0) || !std::isfinite(nbar)) {
    throw std::invalid_argument("nbar must be finite and >= 0");
  }
  if (nbar == 0.0) return XiValue::minus_infinity();
  return XiValue{std::log(nbar) - std::log1p(nbar)};
}

double log_partition(const XiValue& xi, std::int64_t n_atoms) {
  require_atom_count(n_atoms);
  const double n = static_cast<double>(n_atoms);
  if (!check_xi(xi)) {
    return kInf;  // weights e^{-xi m} diverge; consumers short-circuit
  }
  const double a = -xi.value;
  if (a == 0.0) return std::log((n + 1.0) * (n + 2.0) / 2.0);
  return log_z_numerator(a, n) - 2.0 * std::log(std::expm1(a));
}

double moment_r11(const XiValue& xi, std::int64_t n_atoms, int order) {
  require_atom_count(n_atoms);
  if (order < 0) throw std::invalid_argument("moment order must be >= 0");
  if (order == 0) return 1.0;
  const double n = static_cast<double>(n_atoms);
  if (!check_xi(xi)) {
    return std::pow(n, order);  // point mass at m = N
  }
  const double a = -xi.value;
  LogSum num, den;
  for (std::int64_t m = 0; m <= n_atoms; ++m) {
    const double md = static_cast<double>(m);
    const double base = std::log(n - md + 1.0) + md * a;
    den.add(base);
    if (m > 0) num.add(base + order * std::log(md));
  }
  return std::exp(num.value() - den.value());
}

double upper_population_analytic(const XiValue& xi, std::int64_t n_atoms) {
  require_atom_count(n_atoms);
  const double n = static_cast<double>(n_atoms);
  if (!check_xi(xi)) {
    return 0.0;  // perfect trapping without thermal photons
  }
  const double a = -xi.value;
  if (a == 0.0) return n / 3.0;  // uniform limit
  return std::exp(log_b_numerator(a, n) - log_z_numerator(a, n) -
                  std::log(std::expm1(a)));
}

double rho_d2_analytic(const XiValue& xi, std::int64_t n_atoms) {
  require_atom_count(n_atoms);
  if (!check_xi(xi)) {
    return 0.0;
  }
  const double a = -xi.value;
  const double n = static_cast<double>(n_atoms);
  return std::exp((n - 1.0) * a - log_partition(xi, n_atoms));
}

double rho_d2_independent(const DressedRates& rates, std::int64_t n_atoms) {
  require_atom_count(n_atoms);
  if (!(rates.gamma1 > 0.0) || rates.gamma2 < 0.0) {
    throw std::invalid_argument(
        "dressed rates require gamma1 > 0 and gamma2 >= 0");
  }
  if (rates.gamma2 == 0.0) return 0.0;
  const double n = static_cast<double>(n_atoms);
  return std::exp(std::log(rates.gamma2) + (n - 1.0) * std::log(rates.gamma1) -
                  n * std::log(rates.gamma1 + 2.0 * rates.gamma2));
}

double capacity_ratio(const SystemParams& params, std::int64_t n_atoms) {
  require_atom_count(n_atoms);
  const DressedRates rates = dressed_rates(params);
  if (rates.gamma2 == 0.0) {
    throw std::domain_error(
        "capacity ratio is undefined (0/0) without thermal photons");
  }
  const double n = static_cast<double>(n_atoms);
  const double log_chain = std::log(rates.gamma2) +
                           (n - 1.0) * std::log(rates.gamma1) -
                           n * std::log(rates.gamma1 + 2.0 * rates.gamma2);
  const XiValue x = xi(params);
  const double log_exact = -x.value * (n - 1.0) - log_partition(x, n_atoms);
  return std::exp(log_chain - log_exact);
}

}  // namespace cpt
