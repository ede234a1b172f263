#include "causalshift/splitting.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "causalshift/errors.hpp"

namespace causalshift {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_source(const CausalDistribution1D& d) {
  if (!d.evaluate) throw DomainError("causal distribution has no evaluator");
  if (!(d.k_min > 0.0)) {
    throw DomainError("splitting requires a support gap around k = 0 (k_min > 0)");
  }
  if (d.singular_order < -1) throw DomainError("singular order must be >= -1");
}

void check_branch(const CausalDistribution1D& d, double p0) {
  if (std::abs(std::abs(p0) - d.k_min) < kBranchExclusion) {
    std::ostringstream msg;
    msg << "p0 = " << p0 << " lies on the support edge |p0| = " << d.k_min
        << " (branch point)";
    throw DomainError(msg.str());
  }
}

// PV int_{|k| >= k_min} d(k) / [(k - q)^(w+1) (p0 - k)] dk
Complex dispersion_pv(const CausalDistribution1D& d, double p0, double q,
                      const SplitTolerance& tol) {
  const int n = d.singular_order + 1;
  // h(k) = d(k)/(k-q)^n; the integral is -PV int h(k)/(k - p0).
  auto h = [&d, q, n](double k) { return d.evaluate(k) / std::pow(k - q, n); };
  QuadratureTolerance qt;
  qt.rel = tol.rel;
  qt.abs = tol.abs;

  QuadratureResult total;
  auto add_regular = [&](Interval iv) {
    total += integrate_adaptive([&](double k) { return h(k) / (k - p0); }, iv, qt);
  };
  if (std::abs(p0) < d.k_min) {
    add_regular({-kInf, -d.k_min});
    add_regular({d.k_min, kInf});
  } else if (p0 > 0.0) {
    add_regular({-kInf, -d.k_min});
    total += integrate_pv(h, p0, {d.k_min, kInf}, qt);
  } else {
    total += integrate_pv(h, p0, {-kInf, -d.k_min}, qt);
    add_regular({d.k_min, kInf});
  }
  return -total.value;
}

Complex split(const CausalDistribution1D& d, double p0, double q, double pole_sign,
              const SplitTolerance& tol) {
  check_source(d);
  check_branch(d, p0);
  const Complex i(0.0, 1.0);
  const Complex pv = dispersion_pv(d, p0, q, tol);
  const Complex r = i / (2.0 * std::numbers::pi) * std::pow(p0 - q, d.singular_order + 1) * pv;
  if (std::abs(p0) < d.k_min) return r;
  return r + pole_sign * 0.5 * d.evaluate(p0);
}

}  // namespace

Complex retarded_part_central(const CausalDistribution1D& d, double p0, SplitTolerance tol) {
  return split(d, p0, 0.0, +1.0, tol);
}

Complex advanced_part(const CausalDistribution1D& d, double p0, SplitTolerance tol) {
  return retarded_part_central(d, p0, tol) - d.evaluate(p0);
}

Complex advanced_part_mirrored(const CausalDistribution1D& d, double p0, SplitTolerance tol) {
  return split(d, p0, 0.0, -1.0, tol);
}

Complex retarded_part_shifted(const CausalDistribution1D& d, double p0, double q,
                              SplitTolerance tol) {
  check_source(d);
  if (!(std::abs(q) < d.k_min)) {
    std::ostringstream msg;
    msg << "subtraction point q = " << q << " lies on the support (k_min = " << d.k_min << ")";
    throw DomainError(msg.str());
  }
  return split(d, p0, q, +1.0, tol);
}

RetardedPart make_retarded_part(const CausalDistribution1D& d, double q, SplitTolerance tol) {
  check_source(d);
  if (!(std::abs(q) < d.k_min)) throw DomainError("subtraction point must lie in the support gap");
  RetardedPart r;
  r.source = d;
  r.subtraction_point = q;
  r.evaluate = [d, q, tol](double p0) { return retarded_part_shifted(d, p0, q, tol); };
  return r;
}

PolynomialResidual fit_polynomial(std::span<const double> grid, std::span<const Complex> diff,
                                  int degree) {
  if (degree < 0) degree = 0;
  const auto m = static_cast<Eigen::Index>(grid.size());
  const Eigen::Index n = degree + 1;
  if (grid.size() != diff.size()) throw DomainError("grid and data sizes differ");
  if (m < n + 1) {
    std::ostringstream msg;
    msg << "polynomial residual of degree " << degree << " needs at least " << n + 1
        << " grid points, got " << m;
    throw DomainError(msg.str());
  }
  Eigen::MatrixXd a(m, n);
  Eigen::MatrixXd y(m, 2);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double x = grid[static_cast<std::size_t>(i)];
    double v = 1.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      a(i, j) = v;
      v *= x;
    }
    y(i, 0) = diff[static_cast<std::size_t>(i)].real();
    y(i, 1) = diff[static_cast<std::size_t>(i)].imag();
  }
  Eigen::VectorXd scale(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    scale(j) = a.col(j).norm();
    if (scale(j) == 0.0) scale(j) = 1.0;
    a.col(j) /= scale(j);
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  const Eigen::MatrixXd c = qr.solve(y);
  const Eigen::MatrixXd res = a * c - y;

  PolynomialResidual out;
  for (Eigen::Index j = 0; j < n; ++j) {
    out.coefficients.push_back(c(j, 0) / scale(j));
    out.imag_coefficients.push_back(c(j, 1) / scale(j));
  }
  for (Eigen::Index i = 0; i < m; ++i) {
    out.max_abs_deviation = std::max(out.max_abs_deviation, std::hypot(res(i, 0), res(i, 1)));
  }
  return out;
}

PolynomialResidual polynomial_residual(const RetardedPart& a, const RetardedPart& b,
                                       std::span<const double> grid) {
  std::vector<Complex> diff;
  diff.reserve(grid.size());
  const int degree = a.source.singular_order;
  if (grid.size() < static_cast<std::size_t>(std::max(degree, 0) + 2)) {
    throw DomainError("polynomial residual needs more than singular_order + 1 grid points");
  }
  for (double p : grid) diff.push_back(a.evaluate(p) - b.evaluate(p));
  return fit_polynomial(grid, diff, degree);
}

}  // namespace causalshift
