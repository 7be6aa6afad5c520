#include "cpt/params.hpp"

#include <cmath>
#include <stdexcept>

namespace cpt {

void SystemParams::validate() const {
  if (n_atoms < 1) {
    throw std::invalid_argument("n_atoms must be at least 1");
  }
  if (!(omega2 >= 0.0) || !(omega3 >= 0.0) || !std::isfinite(omega2) ||
      !std::isfinite(omega3)) {
    throw std::invalid_argument("Rabi frequencies must be finite and >= 0");
  }
  if (!(gamma2 > 0.0) || !(gamma3 > 0.0) || !std::isfinite(gamma2) ||
      !std::isfinite(gamma3)) {
    throw std::invalid_argument("decay rates must be finite and > 0");
  }
  if (!(nbar2 >= 0.0) || !(nbar3 >= 0.0) || !std::isfinite(nbar2) ||
      !std::isfinite(nbar3)) {
    throw std::invalid_argument(
        "thermal photon numbers must be finite and >= 0");
  }
  if (!std::isfinite(delta)) {
    throw std::invalid_argument("detuning must be finite");
  }
}

void SystemParams::require_driven() const {
  validate();
  if (!(omega() > 0.0)) {
    throw std::invalid_argument(
        "at least one Rabi frequency must be positive for this quantity");
  }
}

}  // namespace cpt
