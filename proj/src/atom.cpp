#include "causalshift/atom.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "causalshift/errors.hpp"

namespace causalshift {

AtomParams::AtomParams(double m_g, double omega_eg, double d_eg_abs, double t_g,
                       const PhysicalConstants& k)
    : m_g_(m_g), omega_eg_(omega_eg), d_eg_abs_(d_eg_abs), t_g_(t_g), k_(k) {
  if (!(m_g > 0.0) || !std::isfinite(m_g)) throw DomainError("m_g must be positive");
  if (!(omega_eg > 0.0) || !std::isfinite(omega_eg)) {
    throw DomainError("omega_eg must be positive");
  }
  if (!(d_eg_abs >= 0.0) || !std::isfinite(d_eg_abs)) {
    throw DomainError("|d_eg| must be non-negative");
  }
  if (!(t_g > 0.0) || !std::isfinite(t_g)) throw DomainError("t_g must be positive");
  if (!(delta_u() < 0.1)) {
    std::ostringstream msg;
    msg << "delta_u = " << delta_u() << " is not small (must be < 0.1)";
    throw DomainError(msg.str());
  }
}

double AtomParams::lambda_bar_g() const { return k_.hbar / (m_g_ * k_.c); }

double AtomParams::lambda_bar_e() const {
  return 1.0 / (1.0 / lambda_bar_g() + omega_eg_ / k_.c);
}

double AtomParams::delta_u() const { return k_.hbar * omega_eg_ / (m_g_ * k_.c * k_.c); }

namespace {

double number(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw DomainError(std::string("atom preset missing key '") + key + "'");
  const auto& v = j.at(key);
  if (!v.is_number()) throw DomainError(std::string("atom preset key '") + key + "' not a number");
  return v.get<double>();
}

}  // namespace

AtomParams atom_from_json(const nlohmann::json& j, const PhysicalConstants& k) {
  if (!j.is_object()) throw DomainError("atom preset must be a JSON object");
  for (const auto& item : j.items()) {
    const std::string& key = item.key();
    if (key != "m_g_kg" && key != "omega_eg_rad_s" && key != "d_eg_Cm" && key != "t_g_s") {
      throw DomainError("unknown atom preset key '" + key + "'");
    }
  }
  return AtomParams(number(j, "m_g_kg"), number(j, "omega_eg_rad_s"), number(j, "d_eg_Cm"),
                    number(j, "t_g_s"), k);
}

nlohmann::ordered_json atom_to_json(const AtomParams& atom) {
  nlohmann::ordered_json j;
  j["m_g_kg"] = atom.m_g();
  j["omega_eg_rad_s"] = atom.omega_eg();
  j["d_eg_Cm"] = atom.d_eg_abs();
  j["t_g_s"] = atom.t_g();
  return j;
}

AtomParams synthetic_atom(double delta_u, double t_g, const PhysicalConstants& k) {
  const double m_g = k.m_proton + k.m_electron;
  const double omega = delta_u * m_g * k.c * k.c / k.hbar;
  const double d = 128.0 * std::numbers::sqrt2 / 243.0 * k.e_charge * k.a0;
  return AtomParams(m_g, omega, d, t_g, k);
}

}  // namespace causalshift
