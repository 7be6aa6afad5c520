#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cpt/params.hpp"

namespace cpt {

inline constexpr int kMaxDressedScanAtoms = 60;

enum class Route { bare, dressed, analytic };

enum class Quantity {
  upper_population_numeric,   // bare route, exact steady state
  upper_population_dressed,   // Pauli steady state
  upper_population_analytic,  // closed form
  capacity_ratio,
  xi,
  dark_residual,  // ||H_chain d|| / ||H_chain||_F of the dark state
};

std::string to_string(Route route);
std::string to_string(Quantity quantity);
Route route_from_string(const std::string& name);
Quantity quantity_from_string(const std::string& name);

// One sweep axis: either an explicit value list or a linear / logarithmic
// grid description (kept for the CSV echo).
struct SweepAxis {
  std::string variable;  // omega2 omega3 gamma2 gamma3 nbar2 nbar3 nbar delta n_atoms
  std::vector<double> values;
  bool explicit_list = true;
  double start = 0.0, stop = 0.0;
  int count = 0;
  bool log_spaced = false;

  static SweepAxis linear(const std::string& variable, double start,
                          double stop, int count);
  static SweepAxis logarithmic(const std::string& variable, double start,
                               double stop, int count);
  static SweepAxis list(const std::string& variable,
                        std::vector<double> values);
};

// A full scan request: quantity + route, one or two sweep axes (first axis
// outermost), remaining parameters fixed. validate() enforces route/quantity
// compatibility, delta = 0 away from the bare route, per-route atom caps
// (bare 12, dressed 60, dark vectors 40, analytic 1e6), and at least two
// points per axis.
struct ScanSpec {
  Quantity quantity = Quantity::upper_population_analytic;
  Route route = Route::analytic;
  SystemParams base;
  std::vector<SweepAxis> axes;
  double tol = 1e-10;

  void validate() const;
};

struct ScanRow {
  SystemParams params;
  double value = 0.0;
  double residual = 0.0;
  std::string note;  // empty, "beyond-analytic-regime", or a nan reason
};

struct ScanResult {
  ScanSpec spec;
  std::vector<ScanRow> rows;
  // Deterministic CSV: '#' metadata header (version, spec echo), one data row
  // per grid point in grid order, 12-significant-digit values, '.' decimal
  // separator, Unix newlines. Byte-identical across reruns and thread counts.
  std::string csv() const;
};

// Evaluates every grid point (concurrently; threads = 0 picks a hardware and
// memory based count) and returns rows in grid order. Degenerate points
// (capacity ratio at zero thermal occupation, xi = -infinity) yield value nan
// plus a reason note; numerical failures (steady-state residual above
// spec.tol) throw std::runtime_error.
ScanResult run_scan(const ScanSpec& spec, int threads = 0);

// Figure-reproduction presets, in order: fig2 (single-atom detuning profiles
// at nbar = 0, 0.5, 2), fig4 (N x nbar surface of the excited population),
// fig5 (large-N excited population vs nbar), fig7 (capacity ratio vs nbar for
// N = 2, 4, 20). Throws std::invalid_argument for unknown names.
std::vector<std::string> preset_names();
ScanSpec preset(const std::string& name);

// Cross-route verification table used by the CLI `check` subcommand: closed
// form vs Pauli vs exact steady states, the detailed-balance identity, the
// dark-state residual, and the dark-state rate coefficients.
struct CheckLine {
  std::string name;
  double observed = 0.0;  // deviation actually measured
  double bound = 0.0;     // tolerance it must stay below
  bool pass = false;
};

std::vector<CheckLine> cross_route_checks();

// Locale-independent formatting used for all CSV numbers: shortest of 12
// significant digits, "nan" for quiet NaNs.
std::string format_double(double value);

}  // namespace cpt
