#include "causalshift/selfenergy.hpp"

#include <sstream>

#include "causalshift/errors.hpp"

namespace causalshift {

namespace {

constexpr double kSingularTolerance = 1e-12;
constexpr double kPi = std::numbers::pi;

void check_branch(double u) {
  if (std::abs(std::abs(u) - 1.0) < kSingularTolerance) {
    std::ostringstream msg;
    msg << "u = " << u << " is a branch point of the self-energy";
    throw DomainError(msg.str());
  }
}

void check_singular(double u) {
  check_branch(u);
  if (std::abs(u) < kSingularTolerance) throw DomainError("u = 0 is a pole of the closed form");
}

SelfEnergyValue make_value(double u, double prefactor, const BracketParts<double>& parts) {
  SelfEnergyValue v;
  v.u = u;
  v.parts = parts;
  v.prefactor = prefactor;
  v.total = prefactor * parts.sum();
  return v;
}

double dipole_scale(const AtomParams& atom) {
  const auto& k = atom.constants();
  const double lb = atom.lambda_bar_g();
  return atom.d_eg_abs() * atom.d_eg_abs() / (k.eps0 * k.hbar * k.c * lb * lb * lb);
}

}  // namespace

Complex d2_core(double u) {
  const double w = u * u - 1.0;
  if (!(w > 0.0)) return 0.0;
  const double u2 = u * u;
  const double g = w * w * w / (u2 * u2);
  return {0.0, u > 0.0 ? g : -g};
}

double d2_prefactor(const AtomParams& atom) {
  return dipole_scale(atom) / (12.0 * std::pow(2.0 * kPi, 3));
}

double r2_prefactor(const AtomParams& atom) {
  return dipole_scale(atom) / (6.0 * std::pow(2.0 * kPi, 4));
}

double t2_prefactor(const AtomParams& atom) {
  return dipole_scale(atom) / (12.0 * std::pow(2.0 * kPi, 4));
}

Complex d2_tilde(double u, const AtomParams& atom) {
  check_branch(u);
  return d2_prefactor(atom) * d2_core(u);
}

Complex d2_tilde_general(double p0, const Eigen::Vector3d& pvec, const Eigen::Vector3cd& dvec,
                         const AtomParams& atom) {
  const auto& k = atom.constants();
  const double lb = atom.lambda_bar_g();
  const double pp = p0 * p0 - pvec.squaredNorm();
  const double x = pp * lb * lb;
  if (std::abs(x - 1.0) < kSingularTolerance) {
    throw DomainError("p.p lbar_g^2 = 1 is a branch surface of D2");
  }
  if (!(x > 1.0)) return 0.0;
  const double d2 = dvec.squaredNorm();
  const double pd = std::norm(pvec.cast<Complex>().dot(dvec.conjugate()));
  const double dipole = d2 * (2.0 * p0 * p0 - pp) - 2.0 * pd;
  // (p.p)^3 lbar^7 = x^3 lbar
  const double w = x - 1.0;
  const double mag = w * w * w /
                     (12.0 * k.eps0 * k.hbar * k.c * std::pow(2.0 * kPi, 3) * x * x * x * lb) *
                     dipole;
  return {0.0, p0 > 0.0 ? mag : -mag};
}

Complex r2prime_tilde(double u, const AtomParams& atom) {
  check_branch(u);
  if (!(u < 0.0)) return 0.0;
  const double w = u * u - 1.0;
  if (!(w > 0.0)) return 0.0;
  const double u2 = u * u;
  return {0.0, -d2_prefactor(atom) * w * w * w / (u2 * u2)};
}

SelfEnergyValue r2_tilde_closed(double u, const AtomParams& atom) {
  check_singular(u);
  BracketShape<double> s;
  s.pole = 0.5;
  s.constant = -5.0 / 4.0;
  s.quadratic = 11.0 / 12.0;
  return make_value(u, r2_prefactor(atom), bracket_parts(u, u * u - 1.0, s));
}

SelfEnergyValue r2_tilde_central_closed(double u, const AtomParams& atom) {
  check_singular(u);
  return make_value(u, t2_prefactor(atom), bracket_parts(u, u * u - 1.0, BracketShape<double>{}));
}

SelfEnergyValue t2_sym(double u, const AtomParams& atom, const NormalizationConstants& C) {
  check_singular(u);
  BracketShape<double> s;
  s.step_follows_sign = false;
  s.C0 = C.C0;
  s.C1 = C.C1;
  s.C2 = C.C2;
  return make_value(u, t2_prefactor(atom), bracket_parts(u, u * u - 1.0, s));
}

SelfEnergyValue t2_sym_offset(double delta, const AtomParams& atom,
                              const NormalizationConstants& C) {
  if (delta == 0.0) throw DomainError("u = 1 is a branch point of the self-energy");
  if (delta == -1.0) throw DomainError("u = 0 is a pole of the closed form");
  return make_value(1.0 + delta, t2_prefactor(atom),
                    t2_sym_bracket_offset<double>(delta, C.C0, C.C1, C.C2));
}

SelfEnergyValue t2_sym_normalized_offset(double delta, const AtomParams& atom) {
  if (delta == 0.0) throw DomainError("u = 1 is a branch point of the self-energy");
  if (delta == -1.0) throw DomainError("u = 0 is a pole of the closed form");
  return make_value(1.0 + delta, t2_prefactor(atom), t2_sym_bracket_normalized_offset<double>(delta));
}

Complex symmetrized_retarded(double u, const AtomParams& atom, RetardedForm form) {
  auto r = [&](double x) {
    return form == RetardedForm::displayed ? r2_tilde_closed(x, atom).total
                                           : r2_tilde_central_closed(x, atom).total;
  };
  return 0.5 * (r(u) - r2prime_tilde(u, atom) + r(-u) - r2prime_tilde(-u, atom));
}

CausalDistribution1D core_distribution() {
  CausalDistribution1D d;
  d.evaluate = d2_core;
  d.singular_order = 2;
  d.k_min = 1.0;
  d.parity = Parity::odd;
  d.large_k_growth = 2;
  return d;
}

CausalDistribution1D as_causal_distribution(const AtomParams& atom) {
  CausalDistribution1D d = core_distribution();
  const double pref = d2_prefactor(atom);
  d.evaluate = [pref](double u) { return pref * d2_core(u); };
  return d;
}

}  // namespace causalshift
