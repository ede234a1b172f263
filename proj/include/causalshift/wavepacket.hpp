#pragma once

#include <Eigen/Dense>

#include "causalshift/atom.hpp"
#include "causalshift/observables.hpp"

namespace causalshift {

/// Smooth switch used for both ramps: 0 at s <= 0, 1 at s >= 1,
/// f(s)/(f(s)+f(1-s)) with f(s) = exp(-1/s).
double smoothstep(double s);

/// Interaction switch g(x0): 1 on the plateau [0, c t_g], smooth ramps of
/// width c ramp on both sides, 0 outside. x0 in metres.
class TestFunction {
 public:
  TestFunction(double t_g, double ramp, double c);

  double t_g() const { return t_g_; }
  double ramp() const { return ramp_; }
  double plateau_length() const { return c_ * t_g_; }
  double ramp_length() const { return c_ * ramp_; }

  double operator()(double x0) const;
  /// int g^2 dx0 = c t_g + 2 c ramp int_0^1 smoothstep^2.
  double norm_squared() const;

 private:
  double t_g_;
  double ramp_;
  double c_;
};

TestFunction bump_g(double t_g, double ramp, double c);

double smoothstep_derivative(double s);

/// int_0^1 smoothstep(s) exp(-i w s) ds
Complex ramp_transform(double w);
/// Same integral by adaptive quadrature; slow, used as a reference.
Complex ramp_transform_direct(double w);

/// (1/sqrt(2pi)) int g(x) exp(-i q x) dx, q in 1/m.
Complex g_fourier(const TestFunction& g, double q);

/// Centre-of-mass wavepacket with Gaussian momentum profile, normalized so
/// that int |phi(k)|^2 d^3k = 1.
class Wavepacket {
 public:
  /// Throws DomainError unless sigma_k * lbar_e < 1e-3.
  Wavepacket(Eigen::Vector3d center_k, double sigma_k, const AtomParams& atom);

  const Eigen::Vector3d& center_k() const { return center_; }
  double sigma_k() const { return sigma_; }
  Complex operator()(const Eigen::Vector3d& k) const;

 private:
  Eigen::Vector3d center_;
  double sigma_;
};

struct ZOptions {
  /// Integration cut at |q| * ramp length = w_max.
  double w_max = 60.0;
  double rel_tol = 1e-9;
  long max_evaluations = 40'000'000;
};

struct ZComparison {
  /// 4 pi int dq T2s(u_e + q lbar_g) |G(q)|^2, unit weight.
  Complex z_numerical{};
  /// Same with the extra factor u_e/u.
  Complex z_numerical_wp{};
  /// 2 (2pi)^2 c t_g T2s(u_res)
  Complex z_closed{};
  /// 8 pi^2 T2s(u_res) int g^2
  Complex z_closed_effective{};
  double rel_error = 0.0;
  double rel_error_wp = 0.0;
  double rel_error_effective = 0.0;
  /// |dT/du| lbar_g / (c t_g) / |T| at resonance.
  double regime_metric = 0.0;
  bool regime_ok = false;
  long evaluations = 0;
};

ZComparison z_numerical(const AtomParams& atom, const NormalizationConstants& C,
                        const TestFunction& g, ZOptions options = {});

}  // namespace causalshift
