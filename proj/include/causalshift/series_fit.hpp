#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "causalshift/errors.hpp"

namespace causalshift {

/// One column of a series basis: x^power, optionally times ln x.
struct BasisTerm {
  int power = 0;
  bool log = false;

  std::string label() const {
    std::string s;
    if (power == 0) {
      s = log ? "" : "1";
    } else if (power == 1) {
      s = "x";
    } else {
      s = "x^" + std::to_string(power);
    }
    if (log) s += s.empty() ? "ln x" : " ln x";
    return s;
  }

  template <class Scalar>
  Scalar operator()(Scalar x) const {
    using std::log;
    using std::pow;
    Scalar v = power == 0 ? Scalar(1) : pow(x, Scalar(power));
    return this->log ? v * log(x) : v;
  }

  friend bool operator==(const BasisTerm&, const BasisTerm&) = default;
};

/// {1, x, x^2, x^3, x^3 ln x}
inline std::vector<BasisTerm> standard_series_basis() {
  return {{0, false}, {1, false}, {2, false}, {3, false}, {3, true}};
}

/// x^n and x^n ln x for n in [from, to]; appended to absorb truncation.
inline std::vector<BasisTerm> nuisance_terms(int from, int to) {
  std::vector<BasisTerm> out;
  for (int n = from; n <= to; ++n) {
    out.push_back({n, false});
    out.push_back({n, true});
  }
  return out;
}

template <class Scalar>
struct Sample {
  Scalar x;
  Scalar y;
};

template <class Scalar>
struct SeriesFit {
  std::vector<BasisTerm> basis;
  std::vector<Scalar> coefficients;
  Scalar residual_norm = 0;
  /// Ratio of extreme singular values of the column-normalized design.
  Scalar condition = 0;

  Scalar coefficient(const BasisTerm& term) const {
    for (std::size_t i = 0; i < basis.size(); ++i) {
      if (basis[i] == term) return coefficients[i];
    }
    throw DomainError("basis term '" + term.label() + "' not part of the fit");
  }

  std::map<std::string, Scalar> by_label() const {
    std::map<std::string, Scalar> out;
    for (std::size_t i = 0; i < basis.size(); ++i) out[basis[i].label()] = coefficients[i];
    return out;
  }

  Scalar evaluate(Scalar x) const {
    Scalar s = 0;
    for (std::size_t i = 0; i < basis.size(); ++i) s += coefficients[i] * basis[i](x);
    return s;
  }
};

struct FitOptions {
  /// Condition threshold, in units of 1/epsilon of the scalar type.
  double max_condition_eps = 1e-3;
  bool require_decade = true;
};

/// Linear least squares of samples against `basis`.
///
/// Columns are scaled to unit norm before a column-pivoting QR solve. The
/// condition estimate comes from an SVD of the scaled design; above
/// max_condition_eps/epsilon a FitError naming the most collinear column pair
/// is thrown.
template <class Scalar>
SeriesFit<Scalar> fit_series(std::span<const Sample<Scalar>> samples,
                             std::span<const BasisTerm> basis, FitOptions options = {}) {
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using std::abs;
  using std::sqrt;

  const auto m = static_cast<Eigen::Index>(samples.size());
  const auto n = static_cast<Eigen::Index>(basis.size());
  if (n == 0) throw DomainError("empty basis");
  if (m < 2 * n) {
    std::ostringstream msg;
    msg << "fit_series needs at least " << 2 * n << " samples for " << n
        << " basis terms, got " << m;
    throw DomainError(msg.str());
  }
  Scalar xmin = samples[0].x;
  Scalar xmax = samples[0].x;
  for (const auto& s : samples) {
    if (!(s.x > Scalar(0))) throw DomainError("fit_series requires x > 0");
    xmin = std::min(xmin, s.x);
    xmax = std::max(xmax, s.x);
  }
  if (options.require_decade && xmax < Scalar(10) * xmin) {
    throw DomainError("fit_series samples must span at least one decade in x");
  }

  Mat a(m, n);
  Vec y(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    y(i) = samples[static_cast<std::size_t>(i)].y;
    for (Eigen::Index j = 0; j < n; ++j) {
      a(i, j) = basis[static_cast<std::size_t>(j)](samples[static_cast<std::size_t>(i)].x);
    }
  }
  Vec scale(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    scale(j) = a.col(j).norm();
    if (scale(j) == Scalar(0)) scale(j) = Scalar(1);
    a.col(j) /= scale(j);
  }

  Eigen::JacobiSVD<Mat> svd(a);
  const Vec sv = svd.singularValues();
  const Scalar smax = sv(0);
  const Scalar smin = sv(n - 1);
  const Scalar limit =
      Scalar(options.max_condition_eps) / std::numeric_limits<Scalar>::epsilon();
  const Scalar cond =
      smin > Scalar(0) ? smax / smin : std::numeric_limits<Scalar>::infinity();
  if (!(cond <= limit)) {
    Eigen::Index bi = 0;
    Eigen::Index bj = n > 1 ? 1 : 0;
    Scalar best = -1;
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = i + 1; j < n; ++j) {
        const Scalar c = abs(a.col(i).dot(a.col(j)));
        if (c > best) {
          best = c;
          bi = i;
          bj = j;
        }
      }
    }
    const std::string first = basis[static_cast<std::size_t>(bi)].label();
    const std::string second = basis[static_cast<std::size_t>(bj)].label();
    std::ostringstream msg;
    msg << "ill-conditioned series fit (condition " << static_cast<double>(cond)
        << "); most collinear columns: '" << first << "' and '" << second << "'";
    throw FitError(msg.str(), first, second);
  }

  Eigen::ColPivHouseholderQR<Mat> qr(a);
  const Vec scaled = qr.solve(y);

  SeriesFit<Scalar> fit;
  fit.basis.assign(basis.begin(), basis.end());
  fit.coefficients.resize(static_cast<std::size_t>(n));
  for (Eigen::Index j = 0; j < n; ++j) {
    fit.coefficients[static_cast<std::size_t>(j)] = scaled(j) / scale(j);
  }
  fit.residual_norm = (a * scaled - y).norm();
  fit.condition = cond;
  return fit;
}

template <class Scalar>
SeriesFit<Scalar> fit_series(const std::vector<Sample<Scalar>>& samples,
                             const std::vector<BasisTerm>& basis, FitOptions options = {}) {
  return fit_series<Scalar>(std::span<const Sample<Scalar>>(samples),
                            std::span<const BasisTerm>(basis), options);
}

}  // namespace causalshift
