#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "causalshift/constants.hpp"
#include "causalshift/observables.hpp"
#include "causalshift/wworacle.hpp"

using namespace causalshift;

namespace {

constexpr double kPi = std::numbers::pi;

const AtomParams& hydrogen() {
  static const AtomParams a = hydrogen_1s2p_preset(codata2018());
  return a;
}

double gamma() { return gamma_leading(hydrogen()); }

double fitted_rate(int n_modes, double bandwidth_gamma, double dt_gamma = 4e-4) {
  const double g = gamma();
  const auto grid = build_grid(hydrogen(), bandwidth_gamma * g, n_modes);
  const auto trace = evolve(grid, hydrogen(), 6.0 / g, dt_gamma / g);
  return fit_decay(trace, 1.0 / g, 5.0 / g).rate;
}

ModeGrid single_mode(double coupling) {
  ModeGrid m;
  m.omega_eg = hydrogen().omega_eg();
  m.frequencies = {m.omega_eg};
  m.couplings = {coupling};
  m.gamma_target = coupling;
  m.density = 1.0;
  return m;
}

}  // namespace

TEST_SUITE("wworacle") {

TEST_CASE("grid construction") {
  const double g = gamma();
  const auto grid = build_grid(hydrogen(), 200.0 * g, 4000);
  CHECK(grid.frequencies.size() == 4000);
  CHECK(std::abs(2.0 * kPi * grid.couplings[0] * grid.couplings[0] * grid.density / g - 1.0) <=
        1e-12);
  CHECK(std::abs(grid.density - 4000.0 / (200.0 * g)) <= 1e-15 * grid.density);
  CHECK(std::abs(grid.spacing() - 200.0 * g / 3999.0) <= 1e-6 * grid.spacing());
  for (std::size_t i = 1; i < grid.frequencies.size(); ++i) {
    CHECK(grid.frequencies[i] > grid.frequencies[i - 1]);
  }
  const auto det = grid.detunings();
  CHECK(std::abs(det.front() + 100.0 * g) <= 1e-6 * g);
  CHECK(std::abs(det.back() - 100.0 * g) <= 1e-6 * g);
  // revival well after the fit window
  CHECK(2.0 * kPi / grid.spacing() > 10.0 / g);
}

TEST_CASE("grid rejections") {
  const double g = gamma();
  CHECK_THROWS_AS(build_grid(hydrogen(), 30.0 * g, 4000), DomainError);
  CHECK_THROWS_AS(build_grid(hydrogen(), 200.0 * g, 999), DomainError);
  CHECK_THROWS_AS(build_grid(hydrogen(), 2000.0 * g, 4000), DomainError);  // spacing 0.5 gamma
  CHECK_THROWS_AS(build_grid(hydrogen().with_d_eg(0.0), 200.0, 4000), DomainError);
  const auto grid = build_grid(hydrogen(), 200.0 * g, 4000);
  CHECK_THROWS_AS(evolve(grid, hydrogen(), 6.0 / g, 2e-3 / g), DomainError);
  CHECK_THROWS_AS(evolve(grid, hydrogen(), -1.0, 1e-4 / g), DomainError);
}

TEST_CASE("uncoupled atom stays excited") {
  ModeGrid m = single_mode(1e8);
  m.couplings = {0.0};
  const auto trace = evolve(m, hydrogen(), 1e-7, 1e-10);
  for (const auto& s : trace) CHECK(s.c_e == Complex(1.0));
}

TEST_CASE("single resonant mode gives Rabi oscillation") {
  const double g = 1e8;
  EvolveOptions o;
  o.stride = 10;
  const auto trace = evolve(single_mode(g), hydrogen(), 5e-8, 1e-11, o);
  double worst = 0.0;
  for (const auto& s : trace) {
    const double c = std::cos(g * s.t);
    worst = std::max(worst, std::abs(std::norm(s.c_e) - c * c));
    CHECK(std::abs(s.norm - 1.0) <= 1e-12);
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("mode amplitudes are kept in the interaction picture on request") {
  const double g = gamma();
  const auto grid = build_grid(hydrogen(), 50.0 * g, 1000);
  EvolveOptions o;
  o.keep_modes = true;
  o.stride = 200;
  const auto trace = evolve(grid, hydrogen(), 2.0 / g, 4e-4 / g, o);
  for (const auto& s : trace) {
    REQUIRE(s.c_k.size() == 1000);
    double n = std::norm(s.c_e);
    for (const auto& c : s.c_k) n += std::norm(c);
    CHECK(std::abs(n - 1.0) <= 1e-6);
  }
}

TEST_CASE("exponential decay at the golden-rule rate with a conserved norm") {
  const double g = gamma();
  const auto grid = build_grid(hydrogen(), 200.0 * g, 4000);
  const auto trace = evolve(grid, hydrogen(), 6.0 / g, 5e-4 / g);
  for (const auto& s : trace) CHECK(std::abs(s.norm - 1.0) <= 1e-6);
  const auto fit = fit_decay(trace, 1.0 / g, 5.0 / g);
  CHECK(std::abs(fit.rate / g - 1.0) <= 0.02);
  CHECK(fit.fit_residual <= 1e-3);
  // symmetric band: no net shift
  CHECK(std::abs(fit.shift) <= 1e-6 * g);
}

TEST_CASE("fit of a synthetic exponential is exact") {
  const double rate = 3.0;
  const double shift = 0.7;
  std::vector<AmplitudeState> trace;
  for (int i = 0; i <= 600; ++i) {
    AmplitudeState s;
    s.t = 0.01 * i;
    s.c_e = std::exp(Complex(-0.5 * rate * s.t, -shift * s.t));
    s.norm = 1.0;
    trace.push_back(s);
  }
  const auto fit = fit_decay(trace, 1.0, 5.0);
  CHECK(std::abs(fit.rate - rate) <= 1e-12);
  CHECK(std::abs(fit.shift - shift) <= 1e-12);
  CHECK(fit.fit_residual <= 1e-12);
  // window too short for three decay times at this rate
  CHECK_THROWS_AS(fit_decay(trace, 1.0, 1.5), DomainError);
  CHECK_THROWS_AS(fit_decay(trace, 10.0, 12.0), DomainError);
  // non-exponential data
  for (auto& s : trace) s.c_e *= 1.0 + 0.3 * std::sin(20.0 * s.t);
  CHECK_THROWS_AS(fit_decay(trace, 1.0, 5.0, 1e-3), ComputationError);
}

TEST_CASE("norm drift is reported") {
  const double g = gamma();
  const auto grid = build_grid(hydrogen(), 50.0 * g, 1000);
  EvolveOptions o;
  o.max_norm_drift = 1e-17;
  try {
    evolve(grid, hydrogen(), 2.0 / g, 4e-4 / g, o);
    FAIL("expected NormDriftError");
  } catch (const NormDriftError& e) {
    CHECK(std::abs(e.drift()) > 1e-17);
    CHECK(std::abs(e.drift()) <= 1e-6);
  }
}

TEST_CASE("rate is independent of the time step") {
  const double r1 = fitted_rate(4000, 200.0, 4e-4);
  const double r2 = fitted_rate(4000, 200.0, 2e-4);
  const double r3 = fitted_rate(4000, 200.0, 1e-4);
  CHECK(std::abs(r2 - r3) <= 1e-6 * r3);
  CHECK(std::abs(r1 - r3) <= 1e-6 * r3);
}

TEST_CASE("mode-count convergence at fixed bandwidth is first order") {
  // The limit n -> inf at fixed bandwidth carries a separate O(gamma/B)
  // truncation error, so successive differences are compared.
  const double r1 = fitted_rate(2001, 200.0);
  const double r2 = fitted_rate(4001, 200.0);
  const double r3 = fitted_rate(8001, 200.0);
  const double ratio = (r2 - r1) / (r3 - r2);
  MESSAGE("rate/gamma - 1 at n = 2001, 4001, 8001: ", r1 / gamma() - 1.0, ", ",
          r2 / gamma() - 1.0, ", ", r3 / gamma() - 1.0);
  CHECK(std::abs(ratio - 2.0) <= 0.2);
}

TEST_CASE("bandwidth truncation error halves when the band doubles") {
  const double g = gamma();
  // same spacing; extrapolate each to infinite n using the first-order law
  auto converged = [&](double b) {
    const int n = static_cast<int>(b * 10.0) + 1;
    const double a = fitted_rate(n, b, 0.18 / b);
    const double c = fitted_rate(2 * n - 1, b, 0.18 / b);
    return 2.0 * c - a;
  };
  const double e1 = converged(100.0) / g - 1.0;
  const double e2 = converged(200.0) / g - 1.0;
  CHECK(std::abs(e1 / e2 - 2.0) <= 0.1);
}

TEST_CASE("shift grows with the logarithm of the upper cutoff") {
  const double g = gamma();
  const double lo = -50.0;
  std::vector<double> x;
  std::vector<double> y;
  for (double hi : {50.0, 100.0, 200.0, 350.0, 500.0}) {
    const int n = static_cast<int>((hi - lo) / 0.1) + 1;
    const auto grid = build_grid_range(hydrogen(), lo * g, hi * g, n);
    EvolveOptions o;
    o.stride = 50;
    const auto trace = evolve(grid, hydrogen(), 6.0 / g, 0.18 / (hi - lo) / g, o);
    x.push_back(std::log(hi));
    y.push_back(fit_decay(trace, 1.0 / g, 5.0 / g).shift / g);
  }
  const double m = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
    syy += y[i] * y[i];
  }
  const double cov = sxy - sx * sy / m;
  const double vx = sxx - sx * sx / m;
  const double vy = syy - sy * sy / m;
  const double slope = cov / vx;
  const double r2 = cov * cov / (vx * vy);
  CHECK(r2 > 0.99);
  // principal-value integral over a flat band: slope -1/(2 pi)
  CHECK(std::abs(slope * 2.0 * kPi + 1.0) <= 0.02);
}

}
