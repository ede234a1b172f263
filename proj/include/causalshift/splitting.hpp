#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "causalshift/quadrature.hpp"

namespace causalshift {

enum class Parity { even, odd, none };

/// A one-dimensional momentum-space distribution d(k) vanishing for
/// |k| < k_min, with singular order omega.
struct CausalDistribution1D {
  std::function<Complex(double)> evaluate;
  int singular_order = 0;
  double k_min = 0.0;
  Parity parity = Parity::none;
  /// |d(k)| <= const |k|^large_k_growth for large |k|.
  int large_k_growth = 0;
};

/// Grids never come closer than this to |p0| = k_min.
inline constexpr double kBranchExclusion = 1e-6;

struct SplitTolerance {
  double rel = 1e-11;
  double abs = 1e-15;
};

/// Central splitting with subtraction at k = 0:
///   r(p0) = (i/2pi) p0^(w+1) int dk d(k) / [(k - i0)^(w+1) (p0 - k + i0)].
/// The i0 prescriptions are resolved as a principal value plus the pole
/// contribution d(p0)/2. Requires k_min > 0; throws DomainError when |p0|
/// is within kBranchExclusion of k_min.
Complex retarded_part_central(const CausalDistribution1D& d, double p0, SplitTolerance tol = {});

/// r(p0) - d(p0).
Complex advanced_part(const CausalDistribution1D& d, double p0, SplitTolerance tol = {});

/// Advanced part computed directly with 1/(p0 - k - i0): principal value
/// minus d(p0)/2.
Complex advanced_part_mirrored(const CausalDistribution1D& d, double p0, SplitTolerance tol = {});

/// Same construction with the Taylor subtraction moved to k = q, which must
/// lie in the support gap (|q| < k_min).
Complex retarded_part_shifted(const CausalDistribution1D& d, double p0, double q,
                              SplitTolerance tol = {});

struct RetardedPart {
  std::function<Complex(double)> evaluate;
  CausalDistribution1D source;
  double subtraction_point = 0.0;
};

RetardedPart make_retarded_part(const CausalDistribution1D& d, double q = 0.0,
                                SplitTolerance tol = {});

struct PolynomialResidual {
  /// Real part of rA - rB fitted by c0 + c1 p + ... + c_w p^w.
  std::vector<double> coefficients;
  std::vector<double> imag_coefficients;
  /// Largest |(rA - rB) - fit| on the grid, real and imaginary parts together.
  double max_abs_deviation = 0.0;
};

/// Least-squares polynomial of degree singular_order through rA - rB.
PolynomialResidual polynomial_residual(const RetardedPart& a, const RetardedPart& b,
                                       std::span<const double> grid);

/// Same fit applied to precomputed differences.
PolynomialResidual fit_polynomial(std::span<const double> grid, std::span<const Complex> diff,
                                  int degree);

}  // namespace causalshift
