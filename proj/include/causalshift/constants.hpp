#pragma once

#include <string>

namespace causalshift {

/// SI constants. Passed explicitly to everything that needs them.
struct PhysicalConstants {
  std::string version;
  double hbar;        // J s
  double c;           // m/s
  double eps0;        // F/m
  double e_charge;    // C
  double a0;          // m
  double alpha;
  double m_electron;  // kg
  double m_proton;    // kg

  /// Electron volt in joules (numerically equal to e_charge).
  double electron_volt() const { return e_charge; }
};

PhysicalConstants codata2018();

/// Throws DomainError if a constant is non-positive or alpha disagrees with
/// e^2/(4 pi eps0 hbar c) by more than 1e-6 relative.
void validate(const PhysicalConstants& k);

}  // namespace causalshift
