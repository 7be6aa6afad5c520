#include "cpt/scan.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <vector>

#include "cpt/analytic.hpp"
#include "cpt/dark_state.hpp"
#include "cpt/dressed.hpp"
#include "cpt/liouvillian.hpp"
#include "cpt/symmetric_basis.hpp"
#include "cpt/version.hpp"

namespace cpt {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

const std::vector<std::string>& sweepable_variables() {
  static const std::vector<std::string> names = {
      "omega2", "omega3", "gamma2", "gamma3", "nbar2",
      "nbar3",  "nbar",   "delta",  "n_atoms"};
  return names;
}

void apply_variable(SystemParams& params, const std::string& variable,
                    double value) {
  if (variable == "omega2") {
    params.omega2 = value;
  } else if (variable == "omega3") {
    params.omega3 = value;
  } else if (variable == "gamma2") {
    params.gamma2 = value;
  } else if (variable == "gamma3") {
    params.gamma3 = value;
  } else if (variable == "nbar2") {
    params.nbar2 = value;
  } else if (variable == "nbar3") {
    params.nbar3 = value;
  } else if (variable == "nbar") {
    params.nbar2 = value;
    params.nbar3 = value;
  } else if (variable == "delta") {
    params.delta = value;
  } else if (variable == "n_atoms") {
    const double rounded = std::round(value);
    if (!(std::abs(value - rounded) <= 1e-6) || rounded < 1.0 ||
        rounded > static_cast<double>(kMaxAnalyticAtoms)) {
      throw std::invalid_argument("n_atoms sweep values must be integers >= 1");
    }
    params.n_atoms = static_cast<int>(rounded);
  } else {
    throw std::invalid_argument("unknown sweep variable '" + variable + "'");
  }
}

std::int64_t max_atoms_in(const ScanSpec& spec) {
  std::int64_t mx = spec.base.n_atoms;
  for (const auto& axis : spec.axes) {
    if (axis.variable != "n_atoms") continue;
    for (double v : axis.values) {
      mx = std::max(mx, static_cast<std::int64_t>(std::llround(v)));
    }
  }
  return mx;
}

bool sweeps_delta(const ScanSpec& spec) {
  if (spec.base.delta != 0.0) return true;
  for (const auto& axis : spec.axes) {
    if (axis.variable == "delta") {
      for (double v : axis.values) {
        if (v != 0.0) return true;
      }
    }
  }
  return false;
}

int resolve_threads(const ScanSpec& spec, int requested, int n_points) {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  int threads = requested > 0 ? requested : hw;
  threads = std::min(threads, n_points);
  if (spec.route == Route::bare) {
    // Each bare point holds the superoperator plus its QR working copy.
    const double n = static_cast<double>(max_atoms_in(spec));
    const double d = (n + 1.0) * (n + 2.0) / 2.0;
    const double bytes = 2.2 * 16.0 * d * d * d * d;
    const int cap = std::max(1, static_cast<int>(3e9 / std::max(bytes, 1.0)));
    threads = std::min(threads, cap);
  }
  return std::max(threads, 1);
}

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  if (threads <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&]() {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        next.store(n);  // stop handing out work
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

ScanRow evaluate_point(const ScanSpec& spec, const SystemParams& params) {
  ScanRow row;
  row.params = params;
  switch (spec.quantity) {
    case Quantity::upper_population_numeric: {
      const SymmetricBasis basis(params.n_atoms);
      const ComplexMatrix liou = build_liouvillian(params, basis);
      SteadyStateOptions options;
      options.residual_tol = spec.tol;
      const SteadyStateResult ss = steady_state_numeric(liou, options);
      row.value = upper_population(ss.rho, basis);
      row.residual = ss.residual_rel;
      if (params.n_atoms > 1 && params.delta != 0.0) {
        row.note = "beyond-analytic-regime";
      }
      break;
    }
    case Quantity::upper_population_dressed: {
      const SymmetricBasis basis(params.n_atoms);
      const RealMatrix w = pauli_generator(params, basis);
      const RealVector pop = pauli_steady_state(w);
      row.value = dressed_upper_population(basis, pop);
      row.residual = (w * pop).cwiseAbs().maxCoeff();
      break;
    }
    case Quantity::upper_population_analytic: {
      row.value = upper_population_analytic(xi(params), params.n_atoms);
      break;
    }
    case Quantity::capacity_ratio: {
      try {
        row.value = capacity_ratio(params, params.n_atoms);
      } catch (const std::domain_error&) {
        row.value = kNan;
        row.note = "capacity-ratio-undefined-at-zero-thermal-occupation";
      }
      break;
    }
    case Quantity::xi: {
      const XiValue x = xi(params);
      if (x.finite()) {
        row.value = x.value;
      } else {
        row.value = kNan;
        row.note = "xi-minus-infinity-at-zero-thermal-occupation";
      }
      break;
    }
    case Quantity::dark_residual: {
      const RealMatrix h = build_chain_hamiltonian(params);
      const DarkStateVector dark = dark_state(params);
      row.value = (h * dark.coefficients).norm() / h.norm();
      break;
    }
  }
  return row;
}

}  // namespace

std::string to_string(Route route) {
  switch (route) {
    case Route::bare:
      return "bare";
    case Route::dressed:
      return "dressed";
    case Route::analytic:
      return "analytic";
  }
  return "?";
}

std::string to_string(Quantity quantity) {
  switch (quantity) {
    case Quantity::upper_population_numeric:
      return "upper_population_numeric";
    case Quantity::upper_population_dressed:
      return "upper_population_dressed";
    case Quantity::upper_population_analytic:
      return "upper_population_analytic";
    case Quantity::capacity_ratio:
      return "capacity_ratio";
    case Quantity::xi:
      return "xi";
    case Quantity::dark_residual:
      return "dark_residual";
  }
  return "?";
}

Route route_from_string(const std::string& name) {
  if (name == "bare") return Route::bare;
  if (name == "dressed") return Route::dressed;
  if (name == "analytic") return Route::analytic;
  throw std::invalid_argument("unknown route '" + name +
                              "' (expected bare, dressed or analytic)");
}

Quantity quantity_from_string(const std::string& name) {
  if (name == "upper_population_numeric")
    return Quantity::upper_population_numeric;
  if (name == "upper_population_dressed")
    return Quantity::upper_population_dressed;
  if (name == "upper_population_analytic")
    return Quantity::upper_population_analytic;
  if (name == "capacity_ratio") return Quantity::capacity_ratio;
  if (name == "xi") return Quantity::xi;
  if (name == "dark_residual") return Quantity::dark_residual;
  throw std::invalid_argument("unknown quantity '" + name + "'");
}

SweepAxis SweepAxis::linear(const std::string& variable, double start,
                            double stop, int count) {
  if (count < 2) throw std::invalid_argument("sweep needs at least 2 points");
  SweepAxis axis;
  axis.variable = variable;
  axis.explicit_list = false;
  axis.start = start;
  axis.stop = stop;
  axis.count = count;
  axis.log_spaced = false;
  axis.values.resize(count);
  for (int i = 0; i < count; ++i) {
    axis.values[i] = start + (stop - start) * i / (count - 1);
  }
  return axis;
}

SweepAxis SweepAxis::logarithmic(const std::string& variable, double start,
                                 double stop, int count) {
  if (count < 2) throw std::invalid_argument("sweep needs at least 2 points");
  if (!(start > 0.0) || !(stop > 0.0)) {
    throw std::invalid_argument("log-spaced sweeps need positive endpoints");
  }
  SweepAxis axis;
  axis.variable = variable;
  axis.explicit_list = false;
  axis.start = start;
  axis.stop = stop;
  axis.count = count;
  axis.log_spaced = true;
  axis.values.resize(count);
  const double la = std::log(start), lb = std::log(stop);
  for (int i = 0; i < count; ++i) {
    axis.values[i] = std::exp(la + (lb - la) * i / (count - 1));
  }
  return axis;
}

SweepAxis SweepAxis::list(const std::string& variable,
                          std::vector<double> values) {
  if (values.size() < 2) {
    throw std::invalid_argument("sweep needs at least 2 points");
  }
  SweepAxis axis;
  axis.variable = variable;
  axis.explicit_list = true;
  axis.values = std::move(values);
  axis.count = static_cast<int>(axis.values.size());
  return axis;
}

void ScanSpec::validate() const {
  base.validate();
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (axes.empty() || axes.size() > 2) {
    throw std::invalid_argument("a scan takes one or two sweep axes");
  }
  for (const auto& axis : axes) {
    if (axis.values.size() < 2) {
      throw std::invalid_argument("each sweep axis needs at least 2 points");
    }
    const auto& names = sweepable_variables();
    if (std::find(names.begin(), names.end(), axis.variable) == names.end()) {
      throw std::invalid_argument("unknown sweep variable '" + axis.variable +
                                  "'");
    }
    for (double v : axis.values) {
      SystemParams probe = base;
      apply_variable(probe, axis.variable, v);  // validates value shape
    }
  }
  if (axes.size() == 2 && axes[0].variable == axes[1].variable) {
    throw std::invalid_argument("both sweep axes use the same variable");
  }

  const bool route_matches =
      (quantity == Quantity::upper_population_numeric &&
       route == Route::bare) ||
      (quantity == Quantity::upper_population_dressed &&
       route == Route::dressed) ||
      ((quantity == Quantity::upper_population_analytic ||
        quantity == Quantity::capacity_ratio || quantity == Quantity::xi ||
        quantity == Quantity::dark_residual) &&
       route == Route::analytic);
  if (!route_matches) {
    throw std::invalid_argument("route '" + to_string(route) +
                                "' cannot produce quantity '" +
                                to_string(quantity) + "'");
  }
  if (route != Route::bare && sweeps_delta(*this)) {
    throw std::invalid_argument(
        "only the bare route supports nonzero two-photon detuning");
  }

  const std::int64_t atoms = max_atoms_in(*this);
  std::int64_t cap = kMaxAnalyticAtoms;
  if (route == Route::bare) cap = kMaxExactAtoms;
  if (route == Route::dressed) cap = kMaxDressedScanAtoms;
  if (quantity == Quantity::dark_residual) cap = kMaxDarkStateAtoms;
  if (atoms > cap) {
    throw std::invalid_argument(
        "atom count " + std::to_string(atoms) + " exceeds the cap " +
        std::to_string(cap) + " for this route/quantity");
  }
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  char buf[48];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value,
                                 std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

namespace {

std::string format_params(const SystemParams& p) {
  std::ostringstream out;
  out << p.n_atoms << ',' << format_double(p.omega2) << ','
      << format_double(p.omega3) << ',' << format_double(p.gamma2) << ','
      << format_double(p.gamma3) << ',' << format_double(p.nbar2) << ','
      << format_double(p.nbar3) << ',' << format_double(p.delta);
  return out.str();
}

std::string describe_axis(const SweepAxis& axis) {
  std::ostringstream out;
  out << "# axis: variable=" << axis.variable;
  if (axis.explicit_list) {
    out << " values=";
    for (std::size_t i = 0; i < axis.values.size(); ++i) {
      if (i > 0) out << ',';
      out << format_double(axis.values[i]);
    }
  } else {
    out << " start=" << format_double(axis.start)
        << " stop=" << format_double(axis.stop) << " count=" << axis.count
        << " spacing=" << (axis.log_spaced ? "log" : "linear");
  }
  return out.str();
}

}  // namespace

std::string ScanResult::csv() const {
  std::ostringstream out;
  out << "# cptsim " << kVersion << '\n';
  out << "# quantity=" << to_string(spec.quantity)
      << " route=" << to_string(spec.route)
      << " tol=" << format_double(spec.tol) << '\n';
  for (const auto& axis : spec.axes) out << describe_axis(axis) << '\n';
  out << "# base: n_atoms=" << spec.base.n_atoms
      << " omega2=" << format_double(spec.base.omega2)
      << " omega3=" << format_double(spec.base.omega3)
      << " gamma2=" << format_double(spec.base.gamma2)
      << " gamma3=" << format_double(spec.base.gamma3)
      << " nbar2=" << format_double(spec.base.nbar2)
      << " nbar3=" << format_double(spec.base.nbar3)
      << " delta=" << format_double(spec.base.delta) << '\n';
  out << "n_atoms,omega2,omega3,gamma2,gamma3,nbar2,nbar3,delta,quantity,"
         "route,value,residual,tol,note\n";
  for (const auto& row : rows) {
    out << format_params(row.params) << ',' << to_string(spec.quantity) << ','
        << to_string(spec.route) << ',' << format_double(row.value) << ','
        << format_double(row.residual) << ',' << format_double(spec.tol) << ','
        << row.note << '\n';
  }
  return out.str();
}

ScanResult run_scan(const ScanSpec& spec, int threads) {
  spec.validate();
  const int outer = static_cast<int>(spec.axes[0].values.size());
  const int inner =
      spec.axes.size() == 2 ? static_cast<int>(spec.axes[1].values.size()) : 1;
  const int n_points = outer * inner;

  ScanResult result;
  result.spec = spec;
  result.rows.resize(n_points);
  const int n_threads = resolve_threads(spec, threads, n_points);
  parallel_for(n_points, n_threads, [&](int i) {
    SystemParams p = spec.base;
    apply_variable(p, spec.axes[0].variable, spec.axes[0].values[i / inner]);
    if (spec.axes.size() == 2) {
      apply_variable(p, spec.axes[1].variable, spec.axes[1].values[i % inner]);
    }
    result.rows[i] = evaluate_point(spec, p);
  });
  return result;
}

std::vector<std::string> preset_names() {
  return {"fig2", "fig4", "fig5", "fig7"};
}

ScanSpec preset(const std::string& name) {
  ScanSpec spec;
  spec.base.omega2 = 5.0;
  spec.base.omega3 = 5.0;
  spec.base.gamma2 = 1.0;
  spec.base.gamma3 = 1.0;
  if (name == "fig2") {
    // Single-atom steady-state excited population against two-photon
    // detuning, one trace per thermal occupation.
    spec.quantity = Quantity::upper_population_numeric;
    spec.route = Route::bare;
    spec.base.n_atoms = 1;
    spec.axes = {SweepAxis::list("nbar", {0.0, 0.5, 2.0}),
                 SweepAxis::linear("delta", -15.0, 15.0, 301)};
  } else if (name == "fig4") {
    spec.quantity = Quantity::upper_population_analytic;
    spec.route = Route::analytic;
    spec.axes = {SweepAxis::linear("n_atoms", 1.0, 50.0, 50),
                 SweepAxis::linear("nbar", 0.0, 5.0, 51)};
  } else if (name == "fig5") {
    spec.quantity = Quantity::upper_population_analytic;
    spec.route = Route::analytic;
    spec.axes = {SweepAxis::list("n_atoms", {10.0, 100.0, 1000.0}),
                 SweepAxis::linear("nbar", 0.0, 10.0, 201)};
  } else if (name == "fig7") {
    spec.quantity = Quantity::capacity_ratio;
    spec.route = Route::analytic;
    spec.axes = {SweepAxis::list("n_atoms", {2.0, 4.0, 20.0}),
                 SweepAxis::linear("nbar", 0.05, 5.0, 100)};
  } else {
    throw std::invalid_argument("unknown preset '" + name +
                                "' (try fig2, fig4, fig5, fig7)");
  }
  return spec;
}

std::vector<CheckLine> cross_route_checks() {
  std::vector<CheckLine> lines;
  auto push = [&](const std::string& name, double observed, double bound) {
    CheckLine line;
    line.name = name;
    line.observed = observed;
    line.bound = bound;
    line.pass = std::isfinite(observed) && observed <= bound;
    lines.push_back(line);
  };

  // Closed form vs Pauli vs exact steady states in the strong-field regime.
  for (const auto& [n, nbar] : {std::pair<int, double>{1, 0.5},
                                std::pair<int, double>{2, 2.0},
                                std::pair<int, double>{3, 1.0}}) {
    SystemParams p;
    p.n_atoms = n;
    p.nbar2 = p.nbar3 = nbar;
    const double omega = 50.0 * n * (1.0 + nbar);
    p.omega2 = omega / std::sqrt(2.0);
    p.omega3 = p.omega2;
    const double analytic = upper_population_analytic(xi(p), n);

    const SymmetricBasis basis(n);
    const RealVector pop = pauli_steady_state(pauli_generator(p, basis));
    const double dressed = dressed_upper_population(basis, pop);
    push("dressed vs analytic population, N=" + std::to_string(n),
         std::abs(dressed - analytic) / analytic, 1e-10);

    const SteadyStateResult ss =
        steady_state_numeric(build_liouvillian(p, basis));
    const double bare = upper_population(ss.rho, basis);
    push("exact vs analytic population, N=" + std::to_string(n),
         std::abs(bare - analytic) / analytic, 0.05);
  }

  {
    SystemParams p;
    p.n_atoms = 6;
    p.omega2 = 3.0;
    p.omega3 = 7.0;
    p.gamma3 = 2.0;
    p.nbar2 = 0.7;
    p.nbar3 = 1.3;
    const SymmetricBasis basis(p.n_atoms);
    const RealVector pop = pauli_steady_state(pauli_generator(p, basis));
    const XiValue x = xi(p);
    RealVector expected(basis.dim());
    for (int i = 0; i < basis.dim(); ++i) {
      expected(i) = std::exp(-x.value * basis.state(i)[0]);
    }
    expected /= expected.sum();
    push("Pauli steady state matches e^{-xi m1}/Z, N=6",
         (pop - expected).cwiseAbs().maxCoeff(), 1e-12);

    const DressedRates r = dressed_rates(p);
    push("xi equals ln(gamma2_rate/gamma1_rate)",
         std::abs(x.value - std::log(r.gamma2 / r.gamma1)), 1e-12);
  }

  {
    SystemParams p;
    p.n_atoms = 20;
    p.omega2 = 2.0;
    p.omega3 = 5.0;
    const RealMatrix h = build_chain_hamiltonian(p);
    const DarkStateVector dark = dark_state(p);
    push("dark-state zero-mode residual, N=20",
         (h * dark.coefficients).norm() / h.norm(), 1e-10);
    push("dark state equals its product form, N=20",
         std::abs(product_form_overlap(p) - 1.0), 1e-10);
  }

  {
    SystemParams p;
    p.n_atoms = 8;
    p.omega2 = 4.0;
    p.omega3 = 4.0;
    p.nbar2 = p.nbar3 = 1.0;
    const DressedRates r = dressed_rates(p);
    const DarkRateCoefficients coeffs = dark_rate_coefficients(p);
    const double err =
        std::abs(coeffs.out_rate - 4.0 * p.n_atoms * r.gamma2) +
        std::abs(coeffs.in_rate - 2.0 * p.n_atoms * r.gamma1);
    push("dark-state escape/feeding coefficients, N=8", err, 1e-12);
  }

  {
    SystemParams p;
    p.omega2 = 5.0;
    p.omega3 = 5.0;
    p.nbar2 = p.nbar3 = 1.0;
    push("single-atom closed form at nbar=1",
         std::abs(upper_population_analytic(xi(p), 1) - 0.25), 1e-12);
    push("single-atom capacity ratio is 1",
         std::abs(capacity_ratio(p, 1) - 1.0), 1e-12);
  }

  return lines;
}

}  // namespace cpt
