#pragma once

#include <string>

#include "causalshift/atom.hpp"
#include "causalshift/selfenergy.hpp"
#include "causalshift/series_fit.hpp"

namespace causalshift {

/// Hydrogen 1s-2p: hbar omega = 0.75 * 13.6 eV, |d| = 128 sqrt(2)/243 e a0,
/// m_g = m_p + m_e.
AtomParams hydrogen_1s2p_preset(const PhysicalConstants& k, double t_g = 1e-6);

/// Power of (1 + delta_u) in the denominator of the exact decay rate. `five`
/// is the displayed form; `four` is Im(Z/t_g) obtained by substituting
/// u = 1 + delta_u into the symmetrized amplitude.
enum class DenominatorPower { five = 5, four = 4 };

double gamma_exact(const AtomParams& atom, DenominatorPower power = DenominatorPower::five);

/// |d|^2 omega^3 / (3 pi hbar eps0 c^3)
double gamma_leading(const AtomParams& atom);

/// Re(Z/t_g) near resonance in units of
///   prefactor = |d|^2 / (144 pi^2 eps0 hbar lbar_g^3):
///   c0 + c1 x + c2 x^2 + c3 x^3 + c_log3 x^3 log(2x),  x = delta_u.
struct LineShiftSeries {
  double c0 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
  double c_log3 = 0.0;
  double prefactor = 0.0;
  /// Fit residual (numerical extraction only), bracket units.
  double residual_norm = 0.0;

  double bracket(double x) const;
};

/// Coefficients as displayed:
///   c0 = 2 + 6(C0+C1+C2), c1 = 8 - 6C0 + 6C2, c2 = 3(2C0+7),
///   c3 = -3(2C0+15), c_log3 = -48.
LineShiftSeries lineshift_series(const AtomParams& atom, const NormalizationConstants& C);

/// Coefficients of the direct expansion of 6 Re bracket(1 + x):
///   c0 = 2 + 6(C0+C1+C2), c1 = 10 + 6C1 + 12C2, c2 = 29 + 6C2,
///   c3 = -24, c_log3 = -48.
LineShiftSeries lineshift_series_direct(const AtomParams& atom, const NormalizationConstants& C);

/// Which function of delta_u is expanded. `direct` samples
/// Re[2(2pi)^2 c T2s(1 + x)]; `over_u` additionally divides by u = 1 + x,
/// which is the weighting that reproduces the displayed coefficients.
enum class ResonanceWeight { direct, over_u };

struct SeriesGrid {
  double x_min = 1e-5;
  double x_max = 1e-2;
  int points = 40;
  /// Highest power of the x^n, x^n ln x nuisance columns (0 disables them).
  int nuisance_max_power = 9;
};

/// Least-squares extraction of the series from sampled closed-form values.
/// The ln 2 of log(2x) is separated analytically from the fitted x^3
/// coefficient. Throws FitError when the residual exceeds 1e-6 of the
/// largest coefficient.
LineShiftSeries extract_series_numerically(const AtomParams& atom, const NormalizationConstants& C,
                                           ResonanceWeight weight = ResonanceWeight::direct,
                                           SeriesGrid grid = {});

struct NormalizationSolution {
  NormalizationConstants C;
  /// Series re-extracted at the solved constants.
  LineShiftSeries series;
  /// -3(2 C0 + 15) at the solved C0, bracket units.
  double cubic_expected = 0.0;
  /// The ordering written in the prose next to the equations (C1 and C2
  /// swapped relative to the solution).
  NormalizationConstants prose_ordering{-3.5, -29.0 / 6.0, 8.0};
};

/// Solves for C such that the x^0, x^1, x^2 coefficients of the numerically
/// extracted series vanish. The linear map C -> (c0, c1, c2) is itself
/// measured by extraction at unit C vectors.
NormalizationSolution solve_normalization(const AtomParams& atom,
                                          ResonanceWeight weight = ResonanceWeight::direct,
                                          SeriesGrid grid = {});

/// -(gamma/2pi) [1 + 2 log(2 hbar omega/(m_g c^2))], gamma = gamma_leading.
double delta_final(const AtomParams& atom);

/// 1 + 2 log(2 delta_u)
double delta_final_bracket(double delta_u);

/// (m_e c^2 alpha^5/(pi hbar)) (-25.25 + (4/3) ln alpha^-2)
double lamb_reference(const PhysicalConstants& k);

struct ShiftRatio {
  double delta = 0.0;
  double lamb = 0.0;
  double signed_value = 0.0;
  double magnitude = 0.0;
};

ShiftRatio shift_ratio(const AtomParams& atom, const PhysicalConstants& k);

/// 2 (2pi)^2 c t_g T2s(u_res), with u_res - 1 = delta_u passed directly.
Complex z_factor(const AtomParams& atom, const NormalizationConstants& C);

/// z_factor at C = (-7/2, 8, -29/6) taken exactly. At hydrogen scale the
/// real part is O(delta_u^3) of the individual polynomial terms, far below
/// the rounding of C in double precision, so z_factor(atom, C) cannot
/// resolve it; this form can.
Complex z_factor_normalized(const AtomParams& atom);

struct DecayObservables {
  double gamma_exact = 0.0;
  double gamma_exact_power4 = 0.0;
  double gamma_leading = 0.0;
  double delta_shift = 0.0;
  double lamb_reference = 0.0;
  double ratio = 0.0;
  double ratio_magnitude = 0.0;
  Complex z_factor{};
};

DecayObservables decay_observables(const AtomParams& atom, const PhysicalConstants& k,
                                   const NormalizationConstants& C);

}  // namespace causalshift
