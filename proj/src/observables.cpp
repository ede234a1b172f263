#include "causalshift/observables.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/eigen.hpp>

#include "causalshift/errors.hpp"
#include "causalshift/linear.hpp"

namespace causalshift {

namespace {

constexpr double kPi = std::numbers::pi;

double series_prefactor(const AtomParams& atom) {
  const auto& k = atom.constants();
  const double lb = atom.lambda_bar_g();
  return atom.d_eg_abs() * atom.d_eg_abs() / (144.0 * kPi * kPi * k.eps0 * k.hbar * lb * lb * lb);
}

}  // namespace

AtomParams hydrogen_1s2p_preset(const PhysicalConstants& k, double t_g) {
  const double omega = 0.75 * 13.6 * k.electron_volt() / k.hbar;
  const double d = 128.0 * std::numbers::sqrt2 / 243.0 * k.e_charge * k.a0;
  return AtomParams(k.m_proton + k.m_electron, omega, d, t_g, k);
}

double gamma_exact(const AtomParams& atom, DenominatorPower power) {
  const auto& k = atom.constants();
  const double du = atom.delta_u();
  const double lb = atom.lambda_bar_g();
  const double num = std::pow(du * (2.0 + du), 3) * atom.d_eg_abs() * atom.d_eg_abs();
  const double den = 24.0 * kPi * std::pow(1.0 + du, static_cast<int>(power)) * k.eps0 * k.hbar *
                     lb * lb * lb;
  return num / den;
}

double gamma_leading(const AtomParams& atom) {
  const auto& k = atom.constants();
  const double w = atom.omega_eg();
  return atom.d_eg_abs() * atom.d_eg_abs() * w * w * w / (3.0 * kPi * k.hbar * k.eps0 * k.c * k.c * k.c);
}

double LineShiftSeries::bracket(double x) const {
  return c0 + x * (c1 + x * (c2 + x * c3)) + c_log3 * x * x * x * std::log(2.0 * x);
}

LineShiftSeries lineshift_series(const AtomParams& atom, const NormalizationConstants& C) {
  LineShiftSeries s;
  s.c0 = 2.0 + 6.0 * (C.C0 + C.C1 + C.C2);
  s.c1 = 8.0 - 6.0 * C.C0 + 6.0 * C.C2;
  s.c2 = 3.0 * (2.0 * C.C0 + 7.0);
  s.c3 = -3.0 * (2.0 * C.C0 + 15.0);
  s.c_log3 = -48.0;
  s.prefactor = series_prefactor(atom);
  return s;
}

LineShiftSeries lineshift_series_direct(const AtomParams& atom, const NormalizationConstants& C) {
  LineShiftSeries s;
  s.c0 = 2.0 + 6.0 * (C.C0 + C.C1 + C.C2);
  s.c1 = 10.0 + 6.0 * C.C1 + 12.0 * C.C2;
  s.c2 = 29.0 + 6.0 * C.C2;
  s.c3 = -24.0;
  s.c_log3 = -48.0;
  s.prefactor = series_prefactor(atom);
  return s;
}

LineShiftSeries extract_series_numerically(const AtomParams& atom, const NormalizationConstants& C,
                                           ResonanceWeight weight, SeriesGrid grid) {
  // Quad precision: the 13-column design has condition ~1e14.
  using LD = boost::multiprecision::number<boost::multiprecision::cpp_bin_float_quad::backend_type,
                                           boost::multiprecision::et_off>;
  if (!(grid.x_min > 0.0) || !(grid.x_max > grid.x_min) || grid.points < 2) {
    throw DomainError("invalid series grid");
  }
  std::vector<Sample<LD>> samples;
  samples.reserve(static_cast<std::size_t>(grid.points));
  const LD lmin = log(static_cast<LD>(grid.x_min));
  const LD lmax = log(static_cast<LD>(grid.x_max));
  for (int i = 0; i < grid.points; ++i) {
    const LD x = exp(lmin + (lmax - lmin) * static_cast<LD>(i) / (grid.points - 1));
    // 2(2pi)^2 c * t2_prefactor = 6 * series prefactor.
    LD y = LD(6) * t2_sym_bracket_offset<LD>(x, C.C0, C.C1, C.C2).sum().real();
    if (weight == ResonanceWeight::over_u) y /= LD(1) + x;
    samples.push_back({x, y});
  }
  std::vector<BasisTerm> basis = standard_series_basis();
  if (grid.nuisance_max_power >= 4) {
    const auto extra = nuisance_terms(4, grid.nuisance_max_power);
    basis.insert(basis.end(), extra.begin(), extra.end());
  }
  const SeriesFit<LD> fit = fit_series<LD>(samples, basis);

  LineShiftSeries s;
  s.c0 = static_cast<double>(fit.coefficient({0, false}));
  s.c1 = static_cast<double>(fit.coefficient({1, false}));
  s.c2 = static_cast<double>(fit.coefficient({2, false}));
  const LD log3 = fit.coefficient({3, true});
  s.c_log3 = static_cast<double>(log3);
  s.c3 = static_cast<double>(fit.coefficient({3, false}) - log3 * log(LD(2)));
  s.prefactor = series_prefactor(atom);
  s.residual_norm = static_cast<double>(fit.residual_norm);

  const double leading = std::max({std::abs(s.c0), std::abs(s.c1), std::abs(s.c2),
                                   std::abs(s.c3), std::abs(s.c_log3)});
  if (s.residual_norm > 1e-6 * leading) {
    std::ostringstream msg;
    msg << "series fit residual " << s.residual_norm << " exceeds 1e-6 of the leading coefficient "
        << leading;
    throw FitError(msg.str(), "", "");
  }
  return s;
}

NormalizationSolution solve_normalization(const AtomParams& atom, ResonanceWeight weight,
                                          SeriesGrid grid) {
  auto low = [&](const NormalizationConstants& C) {
    const LineShiftSeries s = extract_series_numerically(atom, C, weight, grid);
    return Vector3<double>(s.c0, s.c1, s.c2);
  };
  const Vector3<double> base = low({0.0, 0.0, 0.0});
  Matrix3<double> m;
  m.col(0) = low({1.0, 0.0, 0.0}) - base;
  m.col(1) = low({0.0, 1.0, 0.0}) - base;
  m.col(2) = low({0.0, 0.0, 1.0}) - base;
  const Vector3<double> c = solve_linear<double>(m, -base);

  NormalizationSolution out;
  out.C = {c(0), c(1), c(2)};
  out.series = extract_series_numerically(atom, out.C, weight, grid);
  out.cubic_expected = -3.0 * (2.0 * out.C.C0 + 15.0);
  return out;
}

double delta_final_bracket(double delta_u) { return 1.0 + 2.0 * std::log(2.0 * delta_u); }

double delta_final(const AtomParams& atom) {
  return -(gamma_leading(atom) / (2.0 * kPi)) * delta_final_bracket(atom.delta_u());
}

double lamb_reference(const PhysicalConstants& k) {
  const double a = k.alpha;
  const double scale = k.m_electron * k.c * k.c * std::pow(a, 5) / (kPi * k.hbar);
  return scale * (-25.25 + (4.0 / 3.0) * std::log(1.0 / (a * a)));
}

ShiftRatio shift_ratio(const AtomParams& atom, const PhysicalConstants& k) {
  ShiftRatio r;
  r.delta = delta_final(atom);
  r.lamb = lamb_reference(k);
  if (r.lamb == 0.0) throw DomainError("Lamb-shift reference vanishes");
  r.signed_value = r.delta / r.lamb;
  r.magnitude = std::abs(r.signed_value);
  return r;
}

Complex z_factor(const AtomParams& atom, const NormalizationConstants& C) {
  const auto& k = atom.constants();
  const SelfEnergyValue t = t2_sym_offset(atom.delta_u(), atom, C);
  return 2.0 * 4.0 * kPi * kPi * k.c * atom.t_g() * t.total;
}

Complex z_factor_normalized(const AtomParams& atom) {
  const auto& k = atom.constants();
  const SelfEnergyValue t = t2_sym_normalized_offset(atom.delta_u(), atom);
  return 2.0 * 4.0 * kPi * kPi * k.c * atom.t_g() * t.total;
}

DecayObservables decay_observables(const AtomParams& atom, const PhysicalConstants& k,
                                   const NormalizationConstants& C) {
  DecayObservables o;
  o.gamma_exact = gamma_exact(atom, DenominatorPower::five);
  o.gamma_exact_power4 = gamma_exact(atom, DenominatorPower::four);
  o.gamma_leading = gamma_leading(atom);
  const ShiftRatio r = shift_ratio(atom, k);
  o.delta_shift = r.delta;
  o.lamb_reference = r.lamb;
  o.ratio = r.signed_value;
  o.ratio_magnitude = r.magnitude;
  o.z_factor = z_factor(atom, C);
  return o;
}

}  // namespace causalshift
