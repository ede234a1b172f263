#pragma once

#include <span>
#include <vector>

#include "causalshift/atom.hpp"
#include "causalshift/quadrature.hpp"

namespace causalshift {

/// Discretized radiation continuum for the Weisskopf-Wigner oracle. Flat
/// couplings calibrated so that 2 pi g^2 density equals the target rate.
struct ModeGrid {
  std::vector<double> frequencies;  // rad/s
  std::vector<double> couplings;    // rad/s
  double density = 0.0;             // modes per rad/s
  double omega_eg = 0.0;            // rad/s
  double gamma_target = 0.0;        // 1/s

  double spacing() const;
  std::vector<double> detunings() const;
};

/// Uniform grid of n_modes over omega_eg +- bandwidth/2, calibrated to
/// gamma_leading(atom). Requires bandwidth >= 40 gamma, n_modes >= 1000 and
/// a spacing no larger than gamma/10.
ModeGrid build_grid(const AtomParams& atom, double bandwidth, int n_modes);

/// Same over detunings [lo, hi] (rad/s) with the density n_modes/(hi - lo).
ModeGrid build_grid_range(const AtomParams& atom, double detuning_lo, double detuning_hi,
                          int n_modes);

struct AmplitudeState {
  double t = 0.0;  // s
  Complex c_e{};
  /// Interaction-picture mode amplitudes; empty unless requested.
  std::vector<Complex> c_k;
  double norm = 0.0;
};

struct EvolveOptions {
  /// Store every `stride`-th step (the initial and final states always).
  int stride = 20;
  bool keep_modes = false;
  double max_norm_drift = 1e-6;
};

/// Integrates i d/dt b_e = sum g_k b_k, i d/dt b_k = Delta_k b_k + g_k b_e
/// (frame rotating at omega_eg) from b_e = 1 with the Cayley transform
///   (1 + i dt H/2) b(t+dt) = (1 - i dt H/2) b(t),
/// which is unitary. The arrowhead system is solved in O(n) per step.
/// Requires dt * bandwidth / 2 < 0.1; throws NormDriftError when
/// | |b|^2 - 1 | exceeds max_norm_drift.
std::vector<AmplitudeState> evolve(const ModeGrid& grid, const AtomParams& atom, double t_end,
                                   double dt, EvolveOptions options = {});

struct DecayFit {
  double rate = 0.0;          // 1/s, from ln|c_e|^2
  double shift = 0.0;         // rad/s, minus the slope of arg c_e
  double fit_residual = 0.0;  // rms residual of ln|c_e|^2
  int points = 0;
};

/// Least-squares fit over samples with t in [t_lo, t_hi]. The window must
/// cover at least three fitted decay times; throws ComputationError when the
/// rms residual exceeds max_residual.
DecayFit fit_decay(std::span<const AmplitudeState> trace, double t_lo, double t_hi,
                   double max_residual = 1e-2);

}  // namespace causalshift
