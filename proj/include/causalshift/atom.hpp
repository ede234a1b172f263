#pragma once

#include <json.hpp>

#include "causalshift/constants.hpp"

namespace causalshift {

/// Two-level atom at rest: ground-state mass, transition frequency, dipole
/// matrix element and interaction duration.
class AtomParams {
 public:
  /// Throws DomainError for non-positive inputs (d_eg may be zero) or when
  /// delta_u >= 0.1.
  AtomParams(double m_g, double omega_eg, double d_eg_abs, double t_g,
             const PhysicalConstants& k);

  double m_g() const { return m_g_; }
  double omega_eg() const { return omega_eg_; }
  double d_eg_abs() const { return d_eg_abs_; }
  double t_g() const { return t_g_; }
  const PhysicalConstants& constants() const { return k_; }

  /// hbar / (m_g c)
  double lambda_bar_g() const;
  /// 1 / (1/lambda_bar_g + omega_eg/c)
  double lambda_bar_e() const;
  /// hbar omega_eg / (m_g c^2)
  double delta_u() const;
  /// lambda_bar_g / lambda_bar_e = 1 + delta_u
  double u_res() const { return 1.0 + delta_u(); }

  AtomParams with_d_eg(double d) const { return {m_g_, omega_eg_, d, t_g_, k_}; }
  AtomParams with_t_g(double t) const { return {m_g_, omega_eg_, d_eg_abs_, t, k_}; }
  AtomParams with_m_g(double m) const { return {m, omega_eg_, d_eg_abs_, t_g_, k_}; }

 private:
  double m_g_;
  double omega_eg_;
  double d_eg_abs_;
  double t_g_;
  PhysicalConstants k_;
};

/// Reads {"m_g_kg", "omega_eg_rad_s", "d_eg_Cm", "t_g_s"}; any other key is
/// rejected.
AtomParams atom_from_json(const nlohmann::json& j, const PhysicalConstants& k);
nlohmann::ordered_json atom_to_json(const AtomParams& atom);

/// Synthetic atom with the given delta_u, hydrogen-like mass and dipole.
AtomParams synthetic_atom(double delta_u, double t_g, const PhysicalConstants& k);

}  // namespace causalshift
