#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "causalshift/constants.hpp"
#include "causalshift/quadrature.hpp"
#include "causalshift/wavepacket.hpp"

using namespace causalshift;

namespace {

constexpr double kPi = std::numbers::pi;
const NormalizationConstants kSolved{-3.5, 8.0, -29.0 / 6.0};

const PhysicalConstants& K() {
  static const PhysicalConstants k = codata2018();
  return k;
}

double period(const AtomParams& a) { return 2.0 * kPi / a.omega_eg(); }

Complex fourier_by_quadrature(const TestFunction& g, double q) {
  const double r = g.ramp_length();
  const double len = g.plateau_length();
  std::vector<double> br;
  const int n = 200;
  for (int i = 0; i <= n; ++i) br.push_back(-r + (len + 2.0 * r) * i / n);
  QuadratureTolerance t;
  t.rel = 1e-12;
  t.abs = 1e-18 * len;
  return integrate_adaptive([&](double x) { return g(x) * std::polar(1.0, -q * x); },
                            std::span<const double>(br), t)
             .value /
         std::sqrt(2.0 * kPi);
}

}  // namespace

TEST_SUITE("wavepacket") {

TEST_CASE("smoothstep") {
  CHECK(smoothstep(-1.0) == 0.0);
  CHECK(smoothstep(0.0) == 0.0);
  CHECK(smoothstep(1.0) == 1.0);
  CHECK(smoothstep(2.0) == 1.0);
  CHECK(std::abs(smoothstep(0.5) - 0.5) <= 1e-15);
  for (double s : {0.1, 0.3, 0.7}) {
    CHECK(std::abs(smoothstep(s) + smoothstep(1.0 - s) - 1.0) <= 1e-15);
    const double h = 1e-6;
    const double fd = (smoothstep(s + h) - smoothstep(s - h)) / (2.0 * h);
    CHECK(std::abs(smoothstep_derivative(s) - fd) <= 1e-8);
  }
  CHECK(smoothstep_derivative(0.0) == 0.0);
  CHECK(smoothstep_derivative(1.0) == 0.0);
}

TEST_CASE("test function shape") {
  const TestFunction g = bump_g(2.0, 0.5, 3.0);
  CHECK(g.plateau_length() == 6.0);
  CHECK(g.ramp_length() == 1.5);
  CHECK(g(3.0) == 1.0);
  CHECK(g(0.0) == 1.0);
  CHECK(g(6.0) == 1.0);
  CHECK(g(-1.5) == 0.0);
  CHECK(g(7.5) == 0.0);
  CHECK(g(-100.0) == 0.0);
  CHECK(g(-0.75) > 0.0);
  CHECK(g(-0.75) < 1.0);
  CHECK(std::abs(g(-0.75) - g(6.75)) <= 1e-15);
  const double n2 = g.norm_squared();
  CHECK(n2 >= 6.0);
  CHECK(n2 <= 6.0 + 2.0 * 1.5);
  std::vector<double> br{-1.5, 0.0, 6.0, 7.5};
  const double q = integrate_adaptive([&](double x) { return Complex(g(x) * g(x)); },
                                      std::span<const double>(br))
                       .value.real();
  CHECK(std::abs(q - n2) <= 1e-10 * n2);
  CHECK_THROWS_AS(bump_g(0.0, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(bump_g(1.0, -1.0, 1.0), DomainError);
}

TEST_CASE("ramp transform agrees with direct quadrature") {
  for (double w : {0.0, 1e-3, 0.3, 0.49, 0.5, 0.51, 2.0, 7.5, 20.0, 60.0, -3.0}) {
    const Complex fast = ramp_transform(w);
    const Complex ref = ramp_transform_direct(w);
    CHECK(std::abs(fast - ref) <= 1e-12);
  }
  CHECK(std::abs(ramp_transform(0.0) - 0.5) <= 1e-15);
  CHECK(ramp_transform(-2.0) == std::conj(ramp_transform(2.0)));
}

TEST_CASE("Fourier transform of the test function") {
  const TestFunction g = bump_g(1.0, 0.1, 1.0);
  const Complex g0 = g_fourier(g, 0.0);
  // int g = plateau + 2 ramp * 1/2
  CHECK(std::abs(g0.real() - 1.1 / std::sqrt(2.0 * kPi)) <= 1e-14);
  CHECK(std::abs(g0.imag()) <= 1e-15);
  for (double q : {0.3, 7.0, 42.0, 180.0}) {
    const Complex fast = g_fourier(g, q);
    CHECK(std::abs(fast - fourier_by_quadrature(g, q)) <= 1e-9 * std::abs(g0));
    CHECK(g_fourier(g, -q) == std::conj(fast));
  }
}

TEST_CASE("Fourier transform decays faster than a power") {
  const TestFunction g = bump_g(1.0, 0.1, 1.0);
  const double r = g.ramp_length();
  const double g0 = std::abs(g_fourier(g, 0.0));
  auto scaled = [&](double w) { return std::pow(w, 4) * std::abs(g_fourier(g, w / r)) / g0; };
  CHECK(scaled(100.0) < scaled(30.0));
  CHECK(scaled(300.0) < scaled(100.0));
  CHECK(std::abs(g_fourier(g, 100.0 / r)) < 1e-8 * g0);
  // At w = 10 this bump is still at the 3e-3 level.
  CHECK(std::abs(g_fourier(g, 10.0 / r)) > 1e-3 * g0);
}

TEST_CASE("wavepacket premise and normalization") {
  const AtomParams a = synthetic_atom(1e-2, 1e-6, K());
  const double lb = a.lambda_bar_e();
  CHECK_THROWS_AS(Wavepacket(Eigen::Vector3d::Zero(), 2e-3 / lb, a), DomainError);
  CHECK_THROWS_AS(Wavepacket(Eigen::Vector3d::Zero(), 0.0, a), DomainError);
  const Wavepacket wp(Eigen::Vector3d(1.0, -2.0, 0.5), 0.7, a);
  // |phi|^2 factorizes into three identical 1-D gaussians
  const double one_d =
      integrate_adaptive(
          [&](double x) {
            const Complex v = wp(Eigen::Vector3d(1.0 + x, -2.0, 0.5));
            return Complex(std::norm(v));
          },
          Interval{-std::numeric_limits<double>::infinity(),
                   std::numeric_limits<double>::infinity()})
          .value.real();
  const double peak = std::norm(wp(wp.center_k()));
  // int |phi|^2 d^3k = one_d^3 / peak^2
  CHECK(std::abs(one_d * one_d * one_d / (peak * peak) - 1.0) <= 1e-10);
}

TEST_CASE("Z from the p0 integral converges with the plateau length") {
  const AtomParams a = synthetic_atom(1e-2, 1e-6, K());
  const double T = period(a);
  std::vector<double> errors;
  for (double n : {10.0, 100.0, 1000.0}) {
    const auto r = z_numerical(a, kSolved, bump_g(n * T, 10.0 * T, K().c));
    CHECK(r.regime_ok);
    CHECK(r.rel_error_effective <= 1e-2);
    errors.push_back(r.rel_error);
  }
  CHECK(errors[1] < errors[0]);
  CHECK(errors[2] < errors[1]);
  // fixed ramp: the error is the ramp fraction and drops tenfold per decade
  CHECK(std::abs(errors[1] / errors[0] - 0.1) <= 1e-3);
  CHECK(std::abs(errors[2] / errors[1] - 0.1) <= 1e-3);
}

TEST_CASE("Z scales with the dipole squared") {
  const AtomParams a = synthetic_atom(1e-2, 1e-6, K());
  const double T = period(a);
  const TestFunction g = bump_g(100.0 * T, 10.0 * T, K().c);
  const auto r1 = z_numerical(a, kSolved, g);
  const auto r2 = z_numerical(a.with_d_eg(2.0 * a.d_eg_abs()), kSolved, g);
  CHECK(std::abs(r2.z_numerical.real() - 4.0 * r1.z_numerical.real()) <=
        1e-9 * std::abs(r1.z_numerical.real()));
  CHECK(std::abs(r2.z_numerical.imag() - 4.0 * r1.z_numerical.imag()) <=
        1e-9 * std::abs(r1.z_numerical.imag()));
}

TEST_CASE("proportional ramps: only the effective comparison converges") {
  const AtomParams a = synthetic_atom(1e-2, 1e-6, K());
  const double tg = 1e6 * period(a);
  const auto r = z_numerical(a, kSolved, bump_g(tg, tg / 10.0, K().c));
  CHECK(r.rel_error_effective <= 1e-2);
  // Against c t_g alone the ramps contribute a fixed 8 %.
  CHECK(std::abs(r.rel_error - 0.0811) <= 1e-3);
  CHECK(r.regime_ok);
}

TEST_CASE("decay rate from the numerical Z") {
  const AtomParams a = synthetic_atom(1e-3, 1e-6, K());
  const double T = period(a);
  const double tg = 1e4 * T;
  const auto r = z_numerical(a, kSolved, bump_g(tg, 10.0 * T, K().c));
  const double ratio = r.z_numerical.imag() / tg / gamma_leading(a);
  CHECK(std::abs(ratio - 1.0) <= 0.02);
  // The w_p weighting differs by O(delta_u).
  CHECK(std::abs(r.rel_error_wp - r.rel_error) <= 5.0 * a.delta_u());
}

}
