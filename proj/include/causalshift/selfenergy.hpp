#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>

#include "causalshift/atom.hpp"
#include "causalshift/splitting.hpp"

namespace causalshift {

struct NormalizationConstants {
  double C0 = 0.0;
  double C1 = 0.0;
  double C2 = 0.0;
};

/// Pieces of a self-energy bracket of the form
///   (u^2-1)^3/(2u^4) [2 pi i theta(u^2-1) s - log((u^2-1)^2)] + a/u^2 + poly(u).
template <class Scalar>
struct BracketParts {
  std::complex<Scalar> log_term{};
  std::complex<Scalar> pole_terms{};
  std::complex<Scalar> step_term{};
  std::complex<Scalar> polynomial_term{};

  std::complex<Scalar> sum() const { return log_term + pole_terms + step_term + polynomial_term; }
};

/// Coefficients distinguishing the bracket variants.
template <class Scalar>
struct BracketShape {
  bool step_follows_sign = true;  // step multiplied by sgn u
  Scalar pole = 1;                // coefficient of 1/u^2
  Scalar constant = Scalar(-5) / 2;
  Scalar quadratic = Scalar(11) / 6;
  Scalar C0 = 0;
  Scalar C1 = 0;
  Scalar C2 = 0;
};

/// Bracket evaluated from u and w = u^2 - 1 supplied separately, so callers
/// near the branch point can pass w without cancellation.
template <class Scalar>
BracketParts<Scalar> bracket_parts(Scalar u, Scalar w, const BracketShape<Scalar>& s) {
  using std::abs;
  using std::atan;
  using std::log;
  const Scalar pi = Scalar(4) * atan(Scalar(1));
  const Scalar u2 = u * u;
  const Scalar cube = w * w * w / (Scalar(2) * u2 * u2);
  BracketParts<Scalar> p;
  if (w != Scalar(0)) p.log_term = -cube * Scalar(2) * log(abs(w));
  if (w > Scalar(0)) {
    const Scalar sign = s.step_follows_sign && u < Scalar(0) ? Scalar(-1) : Scalar(1);
    p.step_term = std::complex<Scalar>(0, cube * Scalar(2) * pi * sign);
  }
  p.pole_terms = s.pole / u2;
  p.polynomial_term = s.constant + s.quadratic * u2 + s.C0 + s.C1 * u + s.C2 * u2;
  return p;
}

/// Bracket of the symmetrized amplitude at u = 1 + delta.
template <class Scalar>
BracketParts<Scalar> t2_sym_bracket_offset(Scalar delta, Scalar C0, Scalar C1, Scalar C2) {
  BracketShape<Scalar> s;
  s.step_follows_sign = false;
  s.C0 = C0;
  s.C1 = C1;
  s.C2 = C2;
  return bracket_parts(Scalar(1) + delta, delta * (Scalar(2) + delta), s);
}

/// Bracket at u = 1 + delta with C = (-7/2, 8, -29/6) substituted exactly.
/// Those constants cancel the Taylor part 1 - 2 delta + 3 delta^2 of 1/u^2
/// together with the rest of the polynomial, leaving
///   log term + step term - (4 delta^3 + 3 delta^4)/(1 + delta)^2
/// with no cancellation left to evaluate.
template <class Scalar>
BracketParts<Scalar> t2_sym_bracket_normalized_offset(Scalar delta) {
  BracketShape<Scalar> s;
  s.step_follows_sign = false;
  const Scalar u = Scalar(1) + delta;
  BracketParts<Scalar> p = bracket_parts(u, delta * (Scalar(2) + delta), s);
  const Scalar d3 = delta * delta * delta;
  p.pole_terms = -(Scalar(4) * d3 + Scalar(3) * d3 * delta) / (u * u);
  p.polynomial_term = 0;
  return p;
}

struct SelfEnergyValue {
  double u = 0.0;
  Complex total{};
  BracketParts<double> parts;
  /// SI factor; total = prefactor * parts.sum().
  double prefactor = 0.0;
};

/// Dimensionless core i sgn(u) theta(u^2-1) (u^2-1)^3/u^4, continuous everywhere.
Complex d2_core(double u);

/// |d|^2 / (12 eps0 hbar c (2pi)^3 lbar_g^3)
double d2_prefactor(const AtomParams& atom);
/// |d|^2 / (6 (2pi)^4 hbar c eps0 lbar_g^3); equals d2_prefactor/pi.
double r2_prefactor(const AtomParams& atom);
/// |d|^2 / (12 (2pi)^4 eps0 c hbar lbar_g^3); equals d2_prefactor/(2 pi).
double t2_prefactor(const AtomParams& atom);

/// D2 at rest, p0 = u / lbar_g. Throws DomainError at |u| = 1.
Complex d2_tilde(double u, const AtomParams& atom);

/// Full D2(p) for a moving argument; p0 and pvec in 1/m, dvec in C m.
Complex d2_tilde_general(double p0, const Eigen::Vector3d& pvec, const Eigen::Vector3cd& dvec,
                         const AtomParams& atom);

/// R2' at rest; equal to d2_tilde for u < 0, zero for u > 0.
Complex r2prime_tilde(double u, const AtomParams& atom);

/// Retarded part in the displayed closed form (prefactor 1/6, step times
/// sgn u, 1/(2u^2) - 5/4 + 11u^2/12). Throws DomainError at u in {0, +-1}.
SelfEnergyValue r2_tilde_closed(double u, const AtomParams& atom);

/// Closed form of the central splitting of d2_tilde (the value the
/// dispersion integral produces): prefactor t2_prefactor, step times sgn u,
/// 1/u^2 - 5/2 + 11u^2/6.
SelfEnergyValue r2_tilde_central_closed(double u, const AtomParams& atom);

/// Symmetrized amplitude with the normalization polynomial C0 + C1 u + C2 u^2.
SelfEnergyValue t2_sym(double u, const AtomParams& atom, const NormalizationConstants& C);

/// t2_sym at u = 1 + delta, evaluated without forming u^2 - 1 by subtraction.
SelfEnergyValue t2_sym_offset(double delta, const AtomParams& atom,
                              const NormalizationConstants& C);

/// t2_sym_offset with the normalization that removes the x^0, x^1, x^2
/// terms of the line-shift series, in the cancellation-free form above.
SelfEnergyValue t2_sym_normalized_offset(double delta, const AtomParams& atom);

enum class RetardedForm { displayed, central };

/// (1/2)[R(u) - R'(u) + R(-u) - R'(-u)] with R in the chosen closed form.
Complex symmetrized_retarded(double u, const AtomParams& atom, RetardedForm form);

/// d2_tilde in u units with singular order 2, support |u| > 1, odd parity.
CausalDistribution1D as_causal_distribution(const AtomParams& atom);

/// Same with unit prefactor (d = i g(u)).
CausalDistribution1D core_distribution();

}  // namespace causalshift
