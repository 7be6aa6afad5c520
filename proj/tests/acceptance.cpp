// Acceptance gate for the collective-trapping library: eight end-to-end
// criteria, one [PASS]/[FAIL] line each, nonzero exit if any fails. Every
// tolerance is pinned here, next to the check it guards.
#include <cmath>
#include <cstdio>
#include <exception>
#include <random>
#include <string>
#include <vector>

#include "cpt/analytic.hpp"
#include "cpt/dark_state.hpp"
#include "cpt/dressed.hpp"
#include "cpt/liouvillian.hpp"
#include "cpt/scan.hpp"
#include "cpt/symmetric_basis.hpp"

using cpt::ComplexMatrix;
using cpt::Occupation;
using cpt::RealMatrix;
using cpt::RealVector;
using cpt::SymmetricBasis;
using cpt::SystemParams;
using cpt::XiValue;

namespace {

int failures = 0;

void report(const std::string& name, bool pass, const std::string& detail) {
  std::printf("[%s] %s: %s\n", pass ? "PASS" : "FAIL", name.c_str(),
              detail.c_str());
  if (!pass) ++failures;
}

std::string dev(double observed, double bound) {
  char buf[80];
  std::snprintf(buf, sizeof(buf), "%.3e (bound %.0e)", observed, bound);
  return buf;
}

// 1. The three routes agree on the excited-state population across a grid of
//    temperatures, coupling ratios, and system sizes, with the drive strong
//    enough for the secular picture: closed form vs rate equations to 1e-10
//    relative, closed form vs exact steady state to 5% relative.
void criterion_routes_agree() {
  const double kSecularBound = 1e-10;
  const double kExactBound = 0.05;
  double worst_secular = 0.0, worst_exact = 0.0;
  try {
    for (double nbar : {0.2, 1.0, 3.0}) {
      for (double ratio : {0.5, 1.0, 2.0}) {
        for (int n : {1, 2, 4}) {
          SystemParams p;
          p.n_atoms = n;
          p.nbar2 = p.nbar3 = nbar;
          const double omega = 50.0 * n * (1.0 + nbar);
          p.omega2 = omega / std::sqrt(1.0 + ratio * ratio);
          p.omega3 = ratio * p.omega2;

          const double analytic =
              cpt::upper_population_analytic(cpt::xi(p), n);

          SymmetricBasis basis(n);
          const RealVector pop =
              cpt::pauli_steady_state(cpt::pauli_generator(p, basis));
          const double dressed = cpt::dressed_upper_population(basis, pop);
          worst_secular = std::max(
              worst_secular, std::abs(dressed - analytic) / analytic);

          const auto ss =
              cpt::steady_state_numeric(cpt::build_liouvillian(p, basis));
          const double exact = cpt::upper_population(ss.rho, basis);
          worst_exact =
              std::max(worst_exact, std::abs(exact - analytic) / analytic);
        }
      }
    }
    report("three-route population agreement, 27-point grid",
           worst_secular <= kSecularBound && worst_exact <= kExactBound,
           "rate-eq vs closed form " + dev(worst_secular, kSecularBound) +
               ", exact vs closed form " + dev(worst_exact, kExactBound));
  } catch (const std::exception& e) {
    report("three-route population agreement, 27-point grid", false, e.what());
  }
}

// 2. Perfect trapping: at two-photon resonance with zero-temperature
//    reservoirs the exact steady state is fully dark.
void criterion_perfect_trapping() {
  const double kBound = 1e-8;
  try {
    SystemParams p;
    p.omega2 = 5.0;
    p.omega3 = 5.0;
    SymmetricBasis basis(1);
    const auto ss = cpt::steady_state_numeric(cpt::build_liouvillian(p, basis));
    const double population = cpt::upper_population(ss.rho, basis);
    report("perfect trapping at resonance, zero temperature",
           population <= kBound, "excited population " + dev(population, kBound));
  } catch (const std::exception& e) {
    report("perfect trapping at resonance, zero temperature", false, e.what());
  }
}

// 3. Exact stationary values: 1/4 for one atom at nbar = 1 and 5/11 for two
//    atoms at e^{-xi} = 2, from both the closed form and the rate equations.
void criterion_exact_values() {
  const double kBound = 1e-12;
  try {
    double worst = 0.0;
    const XiValue x = cpt::xi_limit_thermal_fraction(1.0);  // ln(1/2)
    worst = std::max(worst,
                     std::abs(cpt::upper_population_analytic(x, 1) - 0.25));
    worst = std::max(
        worst, std::abs(cpt::upper_population_analytic(x, 2) - 5.0 / 11));

    SystemParams p;
    p.omega2 = 5.0;
    p.omega3 = 5.0;
    p.nbar2 = p.nbar3 = 1.0;
    for (int n : {1, 2}) {
      p.n_atoms = n;
      SymmetricBasis basis(n);
      const RealVector pop =
          cpt::pauli_steady_state(cpt::pauli_generator(p, basis));
      const double value = cpt::dressed_upper_population(basis, pop);
      worst = std::max(worst, std::abs(value - (n == 1 ? 0.25 : 5.0 / 11)));
    }
    report("pinned stationary populations 1/4 and 5/11", worst <= kBound,
           dev(worst, kBound));
  } catch (const std::exception& e) {
    report("pinned stationary populations 1/4 and 5/11", false, e.what());
  }
}

// 4. The rate-equation steady state is the geometric distribution
//    e^{-xi m1}/Z for 50 random parameter draws up to N = 12, and xi always
//    equals ln(gamma2_rate/gamma1_rate).
void criterion_geometric_distribution() {
  const double kBound = 1e-12;
  try {
    std::mt19937 rng(20240817);
    std::uniform_int_distribution<int> atoms(1, 12);
    std::uniform_real_distribution<double> coupling(0.5, 10.0);
    std::uniform_real_distribution<double> decay(0.3, 3.0);
    std::uniform_real_distribution<double> thermal(0.1, 4.0);
    double worst_state = 0.0, worst_xi = 0.0;
    for (int draw = 0; draw < 50; ++draw) {
      SystemParams p;
      p.n_atoms = atoms(rng);
      p.omega2 = coupling(rng);
      p.omega3 = coupling(rng);
      p.gamma3 = decay(rng);
      p.nbar2 = thermal(rng);
      p.nbar3 = thermal(rng);
      SymmetricBasis basis(p.n_atoms);
      const RealVector pop =
          cpt::pauli_steady_state(cpt::pauli_generator(p, basis));
      const XiValue x = cpt::xi(p);
      RealVector expected(basis.dim());
      for (int i = 0; i < basis.dim(); ++i) {
        expected(i) = std::exp(-x.value * basis.state(i)[0]);
      }
      expected /= expected.sum();
      worst_state =
          std::max(worst_state, (pop - expected).cwiseAbs().maxCoeff());
      const auto r = cpt::dressed_rates(p);
      worst_xi = std::max(
          worst_xi, std::abs(x.value - std::log(r.gamma2 / r.gamma1)));
    }
    report("geometric stationary distribution, 50 random draws",
           worst_state <= kBound && worst_xi <= kBound,
           "state " + dev(worst_state, kBound) + ", xi identity " +
               dev(worst_xi, kBound));
  } catch (const std::exception& e) {
    report("geometric stationary distribution, 50 random draws", false,
           e.what());
  }
}

// 5. Dark-state suite: numerical zero mode to 1e-10 up to N = 40, recurrence
//    equals the closed binomial form to 1e-12, the product form to 1e-10 up
//    to N = 8, and the trapped-state rates are exactly 4 N gamma2_rate out
//    and 2 N gamma1_rate in up to N = 12.
void criterion_dark_state() {
  const double kResidualBound = 1e-10;
  const double kFormBound = 1e-12;
  const double kOverlapBound = 1e-10;
  try {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> coupling(0.3, 9.0);
    double worst_residual = 0.0, worst_form = 0.0, worst_overlap = 0.0;
    bool rates_exact = true;
    for (int n = 1; n <= 40; ++n) {
      SystemParams p;
      p.n_atoms = n;
      p.omega2 = coupling(rng);
      p.omega3 = coupling(rng);
      const auto d = cpt::dark_state(p);
      const RealMatrix h = cpt::build_chain_hamiltonian(p);
      worst_residual =
          std::max(worst_residual, (h * d.coefficients).norm() / h.norm());
      const auto closed = cpt::dark_state_closed_form(p);
      worst_form = std::max(
          worst_form,
          (d.coefficients - closed.coefficients).cwiseAbs().maxCoeff());
      if (n <= 8) {
        worst_overlap = std::max(
            worst_overlap, std::abs(cpt::product_form_overlap(p) - 1.0));
      }
      if (n <= 12) {
        p.nbar2 = 0.8;
        p.nbar3 = 1.6;
        const auto rates = cpt::dressed_rates(p);
        const auto coeff = cpt::dark_rate_coefficients(p);
        rates_exact = rates_exact && coeff.out_rate == 4.0 * n * rates.gamma2 &&
                      coeff.in_rate == 2.0 * n * rates.gamma1;
      }
    }
    report("dark-state zero mode, product form, and rates",
           worst_residual <= kResidualBound && worst_form <= kFormBound &&
               worst_overlap <= kOverlapBound && rates_exact,
           "residual " + dev(worst_residual, kResidualBound) + ", closed form " +
               dev(worst_form, kFormBound) + ", overlap " +
               dev(worst_overlap, kOverlapBound) + ", rates " +
               (rates_exact ? "exact" : "NOT exact"));
  } catch (const std::exception& e) {
    report("dark-state zero mode, product form, and rates", false, e.what());
  }
}

// 6. Figure presets: the per-atom excited population falls strictly with N at
//    every positive temperature and rises strictly with temperature at every
//    N (fig4, fig5); the capacity ratio never exceeds 1, falls pointwise with
//    N, and is exactly 1 for a single atom (fig7).
void criterion_collective_suppression() {
  try {
    bool ok = true;
    std::string breach;
    for (const char* name : {"fig4", "fig5"}) {
      const auto res = cpt::run_scan(cpt::preset(name));
      const auto& axes = res.spec.axes;
      const std::size_t inner = axes[1].values.size();
      for (std::size_t jn = 0; jn < inner; ++jn) {
        if (axes[1].values[jn] <= 0.0) continue;
        for (std::size_t in = 1; in < axes[0].values.size(); ++in) {
          const double prev = res.rows[(in - 1) * inner + jn].value /
                              axes[0].values[in - 1];
          const double cur =
              res.rows[in * inner + jn].value / axes[0].values[in];
          if (!(cur < prev)) {
            ok = false;
            breach = std::string(name) + " not decreasing in N";
          }
        }
      }
      for (std::size_t in = 0; in < axes[0].values.size(); ++in) {
        for (std::size_t jn = 1; jn < inner; ++jn) {
          const double prev = res.rows[in * inner + jn - 1].value;
          const double cur = res.rows[in * inner + jn].value;
          if (!(cur > prev)) {
            ok = false;
            breach = std::string(name) + " not increasing in nbar";
          }
        }
      }
    }
    const auto fig7 = cpt::run_scan(cpt::preset("fig7"));
    const std::size_t inner = fig7.spec.axes[1].values.size();
    for (std::size_t jn = 0; jn < inner; ++jn) {
      double prev = 1.0 + 1e-12;
      for (std::size_t in = 0; in < fig7.spec.axes[0].values.size(); ++in) {
        const double cur = fig7.rows[in * inner + jn].value;
        if (!(cur <= 1.0 + 1e-12) || !(cur < prev)) {
          ok = false;
          breach = "fig7 capacity ratio order violated";
        }
        prev = cur;
      }
    }
    SystemParams single;
    single.omega2 = 3.0;
    single.omega3 = 4.0;
    single.nbar2 = single.nbar3 = 0.7;
    const double one = cpt::capacity_ratio(single, 1);
    if (std::abs(one - 1.0) > 1e-12) {
      ok = false;
      breach = "single-atom capacity ratio differs from 1";
    }
    report("collective suppression across the figure presets", ok,
           ok ? "fig4/fig5 strictly monotone, fig7 ratio in (0, 1], "
                "single atom exactly 1"
              : breach);
  } catch (const std::exception& e) {
    report("collective suppression across the figure presets", false, e.what());
  }
}

// 7. Limit forms of xi: the single-thermal and equal-occupation expressions
//    are exact identities on their domains; the thermal-fraction limit is
//    approached monotonically under a geometric ramp of omega3, ending below
//    1e-3 relative error.
void criterion_xi_limits() {
  const double kIdentityBound = 1e-13;
  const double kRampBound = 1e-3;
  try {
    double worst_single = 0.0, worst_equal = 0.0;
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> coupling(0.5, 8.0);
    std::uniform_real_distribution<double> thermal(0.2, 3.0);
    for (int rep = 0; rep < 20; ++rep) {
      SystemParams p;
      p.omega2 = coupling(rng);
      p.omega3 = coupling(rng);
      p.gamma3 = coupling(rng) / 4.0;
      p.nbar3 = thermal(rng);
      worst_single = std::max(
          worst_single,
          std::abs(cpt::xi(p).value - cpt::xi_limit_single_thermal(p).value));
      p.nbar2 = p.nbar3;
      worst_equal = std::max(
          worst_equal,
          std::abs(cpt::xi(p).value -
                   cpt::xi_limit_thermal_fraction(p.nbar3).value));
    }

    SystemParams ramp;
    ramp.omega2 = 2.0;
    ramp.omega3 = 2.0;
    ramp.gamma3 = 0.7;
    ramp.nbar2 = 0.9;
    ramp.nbar3 = 1.8;
    const double target = cpt::xi_limit_thermal_fraction(ramp.nbar2).value;
    bool monotone = true;
    double err = std::abs(cpt::xi(ramp).value - target) / std::abs(target);
    for (int step = 0; step < 8; ++step) {
      ramp.omega3 *= 4.0;
      const double next =
          std::abs(cpt::xi(ramp).value - target) / std::abs(target);
      monotone = monotone && next < err;
      err = next;
    }
    report("limit forms of the trapping parameter",
           worst_single <= kIdentityBound && worst_equal <= kIdentityBound &&
               monotone && err <= kRampBound,
           "single-thermal " + dev(worst_single, kIdentityBound) +
               ", equal-occupation " + dev(worst_equal, kIdentityBound) +
               ", ramp end " + dev(err, kRampBound) +
               (monotone ? ", monotone" : ", NOT monotone"));
  } catch (const std::exception& e) {
    report("limit forms of the trapping parameter", false, e.what());
  }
}

// Excited population by direct summation, independent of the library:
// log-space sum of the observable (N - m)/2 under weights
// (N - m + 1) e^{-xi m}, with no subtraction of near-equal quantities.
double population_by_summation(double xi, std::int64_t n) {
  const double a = -xi;
  double mx_num = -1e308, mx_den = -1e308;
  std::vector<double> num, den;
  for (std::int64_t m = 0; m <= n; ++m) {
    const double base = std::log(static_cast<double>(n - m + 1)) + a * m;
    den.push_back(base);
    mx_den = std::max(mx_den, base);
    if (m < n) {
      const double t = std::log((n - m) / 2.0) + base;
      num.push_back(t);
      mx_num = std::max(mx_num, t);
    }
  }
  double sn = 0.0, sd = 0.0;
  for (double t : num) sn += std::exp(t - mx_num);
  for (double t : den) sd += std::exp(t - mx_den);
  return std::exp(mx_num - mx_den) * sn / sd;
}

// 8. Large-N stability: at N = 1000 the closed form stays finite over a
//    log-spaced xi grid spanning [-10, -1e-6] and matches the direct
//    summation of the population to 1e-9 relative.
void criterion_large_n() {
  const double kBound = 1e-9;
  const std::int64_t n = 1000;
  try {
    double worst = 0.0;
    bool finite = true;
    for (int i = 0; i < 50; ++i) {
      const double expo = 1.0 - 7.0 * i / 49.0;  // 10^1 down to 10^-6
      const XiValue x{-std::pow(10.0, expo)};
      const double closed = cpt::upper_population_analytic(x, n);
      finite = finite && std::isfinite(closed) && closed > 0.0 &&
               closed < n / 2.0;
      const double direct = population_by_summation(x.value, n);
      worst = std::max(worst, std::abs(closed - direct) / direct);
    }
    report("closed form vs direct summation at N = 1000", finite && worst <= kBound,
           dev(worst, kBound) + (finite ? "" : ", non-finite value"));
  } catch (const std::exception& e) {
    report("closed form vs direct summation at N = 1000", false, e.what());
  }
}

}  // namespace

int main() {
  criterion_routes_agree();
  criterion_perfect_trapping();
  criterion_exact_values();
  criterion_geometric_distribution();
  criterion_dark_state();
  criterion_collective_suppression();
  criterion_xi_limits();
  criterion_large_n();
  if (failures == 0) {
    std::printf("all 8 acceptance criteria passed\n");
    return 0;
  }
  std::printf("%d acceptance criteria FAILED\n", failures);
  return 1;
}
