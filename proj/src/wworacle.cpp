#include "causalshift/wworacle.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "causalshift/errors.hpp"
#include "causalshift/observables.hpp"

namespace causalshift {

double ModeGrid::spacing() const {
  return frequencies.size() < 2 ? 0.0 : frequencies[1] - frequencies[0];
}

std::vector<double> ModeGrid::detunings() const {
  std::vector<double> d(frequencies.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = frequencies[i] - omega_eg;
  return d;
}

ModeGrid build_grid_range(const AtomParams& atom, double detuning_lo, double detuning_hi,
                          int n_modes) {
  const double gamma = gamma_leading(atom);
  const double bandwidth = detuning_hi - detuning_lo;
  if (!(gamma > 0.0)) throw DomainError("mode grid needs a decaying atom (|d_eg| > 0)");
  if (n_modes < 1000) throw DomainError("mode grid needs at least 1000 modes");
  if (!(bandwidth >= 40.0 * gamma)) {
    throw DomainError("mode grid bandwidth must be at least 40 gamma");
  }
  const double spacing = bandwidth / (n_modes - 1);
  if (spacing > gamma / 10.0) {
    std::ostringstream msg;
    msg << "under-resolved mode grid: spacing " << spacing / gamma << " gamma > gamma/10";
    throw DomainError(msg.str());
  }
  ModeGrid g;
  g.omega_eg = atom.omega_eg();
  g.gamma_target = gamma;
  g.density = n_modes / bandwidth;
  const double coupling = std::sqrt(gamma / (2.0 * std::numbers::pi * g.density));
  g.frequencies.resize(static_cast<std::size_t>(n_modes));
  g.couplings.assign(static_cast<std::size_t>(n_modes), coupling);
  for (int i = 0; i < n_modes; ++i) {
    g.frequencies[static_cast<std::size_t>(i)] = g.omega_eg + detuning_lo + spacing * i;
  }
  return g;
}

ModeGrid build_grid(const AtomParams& atom, double bandwidth, int n_modes) {
  return build_grid_range(atom, -0.5 * bandwidth, 0.5 * bandwidth, n_modes);
}

std::vector<AmplitudeState> evolve(const ModeGrid& grid, const AtomParams& atom, double t_end,
                                   double dt, EvolveOptions options) {
  (void)atom;
  const std::size_t n = grid.frequencies.size();
  if (n == 0 || grid.couplings.size() != n) throw DomainError("malformed mode grid");
  if (!(dt > 0.0) || !(t_end > 0.0)) throw DomainError("dt and t_end must be positive");
  const double bandwidth = grid.frequencies.back() - grid.frequencies.front();
  if (!(dt * bandwidth / 2.0 < 0.1)) {
    std::ostringstream msg;
    msg << "time step does not resolve the band: dt*bandwidth/2 = " << dt * bandwidth / 2.0;
    throw DomainError(msg.str());
  }
  if (options.stride < 1) options.stride = 1;

  // Internal units: time in 1/gamma.
  const double gamma = grid.gamma_target > 0.0 ? grid.gamma_target : 1.0;
  const double tau = 0.5 * dt * gamma;
  const Complex i(0.0, 1.0);
  std::vector<double> delta(n);
  std::vector<double> g(n);
  std::vector<Complex> inv(n);  // 1/(1 + i tau Delta_k)
  Complex schur = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    delta[k] = (grid.frequencies[k] - grid.omega_eg) / gamma;
    g[k] = grid.couplings[k] / gamma;
    inv[k] = 1.0 / (1.0 + i * tau * delta[k]);
    schur += tau * tau * g[k] * g[k] * inv[k];
  }
  const Complex inv_schur = 1.0 / schur;

  Complex be = 1.0;
  std::vector<Complex> bk(n, 0.0);
  std::vector<Complex> rk(n);
  const long steps = static_cast<long>(std::ceil(t_end / dt - 1e-9));

  std::vector<AmplitudeState> trace;
  auto record = [&](long step) {
    AmplitudeState s;
    s.t = step * dt;
    s.c_e = be;
    double norm = std::norm(be);
    for (std::size_t k = 0; k < n; ++k) norm += std::norm(bk[k]);
    s.norm = norm;
    if (std::abs(norm - 1.0) > options.max_norm_drift) {
      std::ostringstream msg;
      msg << "norm drift " << norm - 1.0 << " at t = " << s.t << " s";
      throw NormDriftError(msg.str(), norm - 1.0);
    }
    if (options.keep_modes) {
      s.c_k.resize(n);
      const double tg = s.t * gamma;
      for (std::size_t k = 0; k < n; ++k) s.c_k[k] = bk[k] * std::polar(1.0, delta[k] * tg);
    }
    trace.push_back(std::move(s));
  };

  record(0);
  for (long step = 1; step <= steps; ++step) {
    Complex sum_gb = 0.0;
    for (std::size_t k = 0; k < n; ++k) sum_gb += g[k] * bk[k];
    const Complex re = be - i * tau * sum_gb;
    Complex acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      rk[k] = bk[k] - i * tau * (delta[k] * bk[k] + g[k] * be);
      acc += g[k] * rk[k] * inv[k];
    }
    be = (re - i * tau * acc) * inv_schur;
    for (std::size_t k = 0; k < n; ++k) bk[k] = (rk[k] - i * tau * g[k] * be) * inv[k];
    if (step % options.stride == 0 || step == steps) record(step);
  }
  return trace;
}

DecayFit fit_decay(std::span<const AmplitudeState> trace, double t_lo, double t_hi,
                   double max_residual) {
  std::vector<double> t;
  std::vector<double> y;
  std::vector<double> phase;
  double unwrap = 0.0;
  double prev = 0.0;
  bool first = true;
  for (const auto& s : trace) {
    // Unwrap along the whole trace so the phase is continuous in the window.
    const double a = std::arg(s.c_e);
    if (!first) {
      double d = a - prev;
      while (d > std::numbers::pi) d -= 2.0 * std::numbers::pi;
      while (d < -std::numbers::pi) d += 2.0 * std::numbers::pi;
      unwrap += d;
    } else {
      unwrap = a;
      first = false;
    }
    prev = a;
    if (s.t < t_lo || s.t > t_hi) continue;
    const double p = std::norm(s.c_e);
    if (!(p > 0.0)) throw ComputationError("excited-state population vanished in fit window");
    t.push_back(s.t);
    y.push_back(std::log(p));
    phase.push_back(unwrap);
  }
  if (t.size() < 3) throw DomainError("fit window contains fewer than three samples");

  auto line = [&](const std::vector<double>& v, double& slope, double& icept) {
    const double m = static_cast<double>(t.size());
    double st = 0.0, sv = 0.0;
    for (std::size_t j = 0; j < t.size(); ++j) {
      st += t[j];
      sv += v[j];
    }
    const double tm = st / m;
    const double vm = sv / m;
    double stt = 0.0, stv = 0.0;
    for (std::size_t j = 0; j < t.size(); ++j) {
      stt += (t[j] - tm) * (t[j] - tm);
      stv += (t[j] - tm) * (v[j] - vm);
    }
    slope = stv / stt;
    icept = vm - slope * tm;
  };

  double slope = 0.0, icept = 0.0;
  line(y, slope, icept);
  DecayFit fit;
  fit.rate = -slope;
  fit.points = static_cast<int>(t.size());
  double ss = 0.0;
  for (std::size_t j = 0; j < t.size(); ++j) {
    const double r = y[j] - (icept + slope * t[j]);
    ss += r * r;
  }
  fit.fit_residual = std::sqrt(ss / static_cast<double>(t.size()));
  double pslope = 0.0, picept = 0.0;
  line(phase, pslope, picept);
  fit.shift = -pslope;

  if (!(fit.rate * (t_hi - t_lo) >= 3.0 - 1e-9)) {
    std::ostringstream msg;
    msg << "fit window covers only " << fit.rate * (t_hi - t_lo) << " decay times (need 3)";
    throw DomainError(msg.str());
  }
  if (fit.fit_residual > max_residual) {
    std::ostringstream msg;
    msg << "decay fit residual " << fit.fit_residual << " above threshold " << max_residual;
    throw ComputationError(msg.str());
  }
  return fit;
}

}  // namespace causalshift
