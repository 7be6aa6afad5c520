// Command-line front end: figure presets, free-form parameter scans, and a
// cross-route self-check. Exit codes: 0 success, 2 invalid request, 3
// numerical failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cpt/scan.hpp"
#include "cpt/version.hpp"

namespace {

struct SweepRequest {
  std::string variable;
  double start = 0.0, stop = 0.0;
  int count = 0;
  bool log_spaced = false;
};

SweepRequest parse_sweep(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ':')) parts.push_back(item);
  if (parts.size() < 4 || parts.size() > 5) {
    throw std::invalid_argument("--sweep expects var:start:stop:count[:log]");
  }
  SweepRequest req;
  req.variable = parts[0];
  try {
    req.start = std::stod(parts[1]);
    req.stop = std::stod(parts[2]);
    req.count = std::stoi(parts[3]);
  } catch (const std::exception&) {
    throw std::invalid_argument("could not parse sweep '" + text + "'");
  }
  if (parts.size() == 5) {
    if (parts[4] != "log") {
      throw std::invalid_argument("sweep spacing must be 'log' or omitted");
    }
    req.log_spaced = true;
  }
  return req;
}

void apply_set(cpt::SystemParams& params, const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) {
    throw std::invalid_argument("--set expects param=value");
  }
  const std::string key = text.substr(0, eq);
  double value = 0.0;
  try {
    value = std::stod(text.substr(eq + 1));
  } catch (const std::exception&) {
    throw std::invalid_argument("could not parse value in '" + text + "'");
  }
  if (key == "omega2") params.omega2 = value;
  else if (key == "omega3") params.omega3 = value;
  else if (key == "gamma2") params.gamma2 = value;
  else if (key == "gamma3") params.gamma3 = value;
  else if (key == "nbar2") params.nbar2 = value;
  else if (key == "nbar3") params.nbar3 = value;
  else if (key == "nbar") { params.nbar2 = value; params.nbar3 = value; }
  else if (key == "delta") params.delta = value;
  else if (key == "n_atoms") params.n_atoms = static_cast<int>(value);
  else throw std::invalid_argument("unknown parameter '" + key + "'");
}

void write_output(const std::string& csv, const std::string& path) {
  if (path.empty()) {
    std::cout << csv;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << csv;
  if (!out.good()) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Collective coherent-population-trapping steady-state scans"};
  app.set_version_flag("--version", std::string("cptscan ") + cpt::kVersion);
  app.require_subcommand(1);

  std::string preset_name;
  std::string out_path;
  int threads = 0;
  auto* preset_cmd =
      app.add_subcommand("preset", "run a named figure-reproduction scan");
  preset_cmd->add_option("name", preset_name, "one of: fig2 fig4 fig5 fig7")
      ->required();
  preset_cmd->add_option("--out", out_path, "output CSV path (default stdout)");
  preset_cmd->add_option("--threads", threads, "worker threads (0 = auto)");

  std::string quantity_name = "upper_population_analytic";
  std::string route_name = "analytic";
  std::vector<std::string> sweep_texts;
  std::vector<std::string> set_texts;
  double tol = 1e-10;
  auto* scan_cmd = app.add_subcommand("scan", "run a custom parameter scan");
  scan_cmd->add_option("--quantity", quantity_name,
                       "upper_population_numeric | upper_population_dressed | "
                       "upper_population_analytic | capacity_ratio | xi | "
                       "dark_residual");
  scan_cmd->add_option("--route", route_name, "bare | dressed | analytic");
  scan_cmd
      ->add_option("--sweep", sweep_texts,
                   "axis as var:start:stop:count[:log]; repeat for a 2-D grid "
                   "(first axis outermost)")
      ->expected(-1);
  scan_cmd->add_option("--set", set_texts, "fixed parameter as name=value")
      ->expected(-1);
  scan_cmd->add_option("--tol", tol, "steady-state residual tolerance");
  scan_cmd->add_option("--out", out_path, "output CSV path (default stdout)");
  scan_cmd->add_option("--threads", threads, "worker threads (0 = auto)");

  auto* check_cmd = app.add_subcommand(
      "check", "run the cross-route verification table and report pass/fail");
  check_cmd->add_option("--threads", threads, "worker threads (ignored)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (preset_cmd->parsed()) {
      const cpt::ScanSpec spec = cpt::preset(preset_name);
      write_output(cpt::run_scan(spec, threads).csv(), out_path);
      return 0;
    }
    if (scan_cmd->parsed()) {
      cpt::ScanSpec spec;
      spec.quantity = cpt::quantity_from_string(quantity_name);
      spec.route = cpt::route_from_string(route_name);
      spec.tol = tol;
      for (const auto& text : set_texts) apply_set(spec.base, text);
      if (sweep_texts.empty()) {
        throw std::invalid_argument("at least one --sweep is required");
      }
      for (const auto& text : sweep_texts) {
        const SweepRequest req = parse_sweep(text);
        spec.axes.push_back(
            req.log_spaced
                ? cpt::SweepAxis::logarithmic(req.variable, req.start,
                                              req.stop, req.count)
                : cpt::SweepAxis::linear(req.variable, req.start, req.stop,
                                         req.count));
      }
      write_output(cpt::run_scan(spec, threads).csv(), out_path);
      return 0;
    }
    // check
    const auto lines = cpt::cross_route_checks();
    bool all_pass = true;
    for (const auto& line : lines) {
      all_pass = all_pass && line.pass;
      std::printf("[%s] %-55s observed %-12.3e bound %-10.1e\n",
                  line.pass ? "PASS" : "FAIL", line.name.c_str(),
                  line.observed, line.bound);
    }
    std::printf("%s\n", all_pass ? "all checks passed" : "CHECKS FAILED");
    return all_pass ? 0 : 3;
  } catch (const std::invalid_argument& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 2;
  } catch (const std::exception& err) {
    std::cerr << "numerical failure: " << err.what() << '\n';
    return 3;
  }
}
