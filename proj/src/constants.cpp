#include "causalshift/constants.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "causalshift/errors.hpp"

namespace causalshift {

PhysicalConstants codata2018() {
  PhysicalConstants k;
  k.version = "CODATA-2018";
  k.hbar = 1.054571817e-34;
  k.c = 299792458.0;
  k.eps0 = 8.8541878128e-12;
  k.e_charge = 1.602176634e-19;
  k.a0 = 5.29177210903e-11;
  k.alpha = 7.2973525693e-3;
  k.m_electron = 9.1093837015e-31;
  k.m_proton = 1.67262192369e-27;
  return k;
}

void validate(const PhysicalConstants& k) {
  const double values[] = {k.hbar, k.c, k.eps0, k.e_charge, k.a0, k.alpha, k.m_electron,
                           k.m_proton};
  for (double v : values) {
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("physical constants must be positive");
  }
  const double alpha = k.e_charge * k.e_charge / (4.0 * std::numbers::pi * k.eps0 * k.hbar * k.c);
  if (std::abs(alpha / k.alpha - 1.0) > 1e-6) {
    std::ostringstream msg;
    msg << "fine-structure constant " << k.alpha << " inconsistent with e^2/(4 pi eps0 hbar c) = "
        << alpha;
    throw DomainError(msg.str());
  }
}

}  // namespace causalshift
