#pragma once

#include <complex>
#include <functional>
#include <span>

#include "causalshift/errors.hpp"

namespace causalshift {

using Complex = std::complex<double>;

/// Integration range; either endpoint may be infinite.
struct Interval {
  double lo;
  double hi;

  bool lo_infinite() const;
  bool hi_infinite() const;
  void validate() const;
};

struct QuadratureResult {
  Complex value{};
  double abs_error_estimate = 0.0;
  long evaluations = 0;

  QuadratureResult& operator+=(const QuadratureResult& other);
};

struct QuadratureTolerance {
  double rel = 1e-10;
  double abs = 1e-14;
  long max_evaluations = 1'000'000;
};

class QuadratureError : public ComputationError {
 public:
  QuadratureError(const std::string& what, QuadratureResult partial)
      : ComputationError(what), partial_(partial) {}
  const QuadratureResult& partial() const noexcept { return partial_; }
  const char* kind() const noexcept override { return "quadrature"; }

 private:
  QuadratureResult partial_;
};

/// Real-valued integrands convert implicitly.
using Integrand = std::function<Complex(double)>;

/// Globally adaptive 21-point Gauss-Kronrod quadrature.
///
/// Semi-infinite ranges are mapped with k = lo + t/(1-t) (mirrored for a
/// lower infinite endpoint); the doubly infinite range uses k = t/(1-t^2).
/// Converges when the summed error estimate drops below
/// max(tol.abs, tol.rel*|I|). Throws QuadratureError, carrying the partial
/// estimate, once tol.max_evaluations is exhausted.
QuadratureResult integrate_adaptive(const Integrand& f, Interval iv,
                                    QuadratureTolerance tol = {});

/// Same as above over a finite range pre-split at `breakpoints` (sorted,
/// inclusive of both endpoints). Used for oscillatory integrands where a
/// single starting panel would alias.
QuadratureResult integrate_adaptive(const Integrand& f, std::span<const double> breakpoints,
                                    QuadratureTolerance tol = {});

/// Cauchy principal value of  PV int_iv numerator(x) / (x - pole) dx.
///
/// The singular neighbourhood is folded symmetrically,
///   int_0^h [numerator(pole+t) - numerator(pole-t)] / t dt,
/// with h the distance to the nearer endpoint; what is left of the range is
/// integrated as an ordinary integral.
QuadratureResult integrate_pv(const Integrand& numerator, double pole, Interval iv,
                              QuadratureTolerance tol = {});

}  // namespace causalshift
