#pragma once

#include <cmath>

namespace cpt {

// Physical inputs for N identical three-level Lambda atoms driven by two
// lasers in a thermal reservoir. Level 1 is the shared excited state; levels
// 2 and 3 are the ground doublet. Everything is quoted in units of gamma2.
//
// Conventions: omega2/omega3 are the Rabi half-frequencies of the 1-2 / 1-3
// laser couplings, gamma2/gamma3 the spontaneous-decay half-rates (the
// population of a lone excited atom decays as exp[-2(gamma2+gamma3) t]),
// nbar2/nbar3 the mean thermal photon numbers at the two transition
// frequencies, and delta the two-photon detuning (equal and opposite detuning
// of the two lasers from their respective transitions).
struct SystemParams {
  double omega2 = 0.0;
  double omega3 = 0.0;
  double gamma2 = 1.0;
  double gamma3 = 1.0;
  double nbar2 = 0.0;
  double nbar3 = 0.0;
  double delta = 0.0;
  int n_atoms = 1;

  // Generalized Rabi half-frequency Omega = sqrt(omega2^2 + omega3^2); also
  // the dressed-state energy splitting at two-photon resonance.
  double omega() const { return std::hypot(omega2, omega3); }

  // Decay-rate asymmetry eta = gamma3 / gamma2.
  double eta() const { return gamma3 / gamma2; }

  // Throws std::invalid_argument on unphysical values (negative rates or
  // occupations, non-finite detuning, fewer than one atom). A completely
  // undriven system (omega2 = omega3 = 0) is allowed here; operations whose
  // math requires a field call require_driven().
  void validate() const;

  // Throws std::invalid_argument unless omega() > 0.
  void require_driven() const;
};

}  // namespace cpt
