#include "causalshift/wavepacket.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "causalshift/errors.hpp"
#include "causalshift/quadrature.hpp"

namespace causalshift {

namespace {

constexpr double kPi = std::numbers::pi;

double bump_tail(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }

double smoothstep_squared_integral() {
  static const double value = [] {
    QuadratureTolerance tol;
    tol.rel = 1e-14;
    return integrate_adaptive([](double s) { return smoothstep(s) * smoothstep(s); },
                              Interval{0.0, 1.0}, tol)
        .value.real();
  }();
  return value;
}

Complex sinc_phase(double theta) {
  // exp(-i theta/2) sin(theta/2)/(theta/2)
  const double h = 0.5 * theta;
  const double sinc = std::abs(h) < 1e-8 ? 1.0 - h * h / 6.0 : std::sin(h) / h;
  return std::polar(sinc, -h);
}

// G(q)/L for plateau L and ramp R, written in s = q L.
Complex scaled_transform(double s, double ratio) {
  const double w = s * ratio;
  const Complex j = ramp_transform(w);
  const Complex left = std::polar(1.0, w) * j;
  const Complex right = std::polar(1.0, -(s + w)) * std::conj(j);
  return sinc_phase(s) + ratio * (left + right);
}

}  // namespace

double smoothstep(double s) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  const double a = bump_tail(s);
  return a / (a + bump_tail(1.0 - s));
}

TestFunction::TestFunction(double t_g, double ramp, double c) : t_g_(t_g), ramp_(ramp), c_(c) {
  if (!(t_g > 0.0) || !(ramp > 0.0) || !(c > 0.0)) {
    throw DomainError("test function needs positive t_g, ramp and c");
  }
}

double TestFunction::operator()(double x0) const {
  const double len = plateau_length();
  const double r = ramp_length();
  if (x0 < 0.0) return smoothstep((x0 + r) / r);
  if (x0 > len) return smoothstep((len + r - x0) / r);
  return 1.0;
}

double TestFunction::norm_squared() const {
  return plateau_length() + 2.0 * ramp_length() * smoothstep_squared_integral();
}

TestFunction bump_g(double t_g, double ramp, double c) { return TestFunction(t_g, ramp, c); }

double smoothstep_derivative(double s) {
  if (s <= 0.0 || s >= 1.0) return 0.0;
  const double a = bump_tail(s);
  const double b = bump_tail(1.0 - s);
  const double d = a + b;
  return a * b * (1.0 / (s * s) + 1.0 / ((1.0 - s) * (1.0 - s))) / (d * d);
}

Complex ramp_transform_direct(double w) {
  const int panels = std::max(1, static_cast<int>(std::ceil(std::abs(w) / kPi)));
  std::vector<double> breaks(static_cast<std::size_t>(panels) + 1);
  for (int i = 0; i <= panels; ++i) breaks[static_cast<std::size_t>(i)] = double(i) / panels;
  QuadratureTolerance tol;
  tol.rel = 1e-13;
  tol.abs = 1e-15;
  return integrate_adaptive([w](double s) { return smoothstep(s) * std::polar(1.0, -w * s); },
                            std::span<const double>(breaks), tol)
      .value;
}

Complex ramp_transform(double w) {
  // Integration by parts leaves F(w) = int_0^1 rho'(s) exp(-i w s) ds; rho'
  // vanishes with all derivatives at both ends, so the trapezoid rule
  // converges faster than any power of the node count.
  constexpr int kNodes = 1024;
  static const std::vector<double> table = [] {
    std::vector<double> t(kNodes + 1);
    for (int j = 0; j <= kNodes; ++j) t[static_cast<std::size_t>(j)] = smoothstep_derivative(double(j) / kNodes);
    return t;
  }();
  if (std::abs(w) < 0.5) {
    // sum_n (-i w)^n M_n / n!, M_n = int_0^1 rho(s) s^n ds
    constexpr int kTerms = 24;
    static const std::vector<double> moments = [] {
      std::vector<double> m(kTerms);
      QuadratureTolerance tol;
      tol.rel = 1e-15;
      tol.abs = 1e-18;
      for (int n = 0; n < kTerms; ++n) {
        m[static_cast<std::size_t>(n)] =
            integrate_adaptive([n](double x) { return smoothstep(x) * std::pow(x, n); },
                               Interval{0.0, 1.0}, tol)
                .value.real();
      }
      return m;
    }();
    Complex term = 1.0;
    Complex sum = 0.0;
    for (int n = 0; n < kTerms; ++n) {
      sum += term * moments[static_cast<std::size_t>(n)];
      term *= Complex(0.0, -w) / double(n + 1);
    }
    return sum;
  }
  const double h = 1.0 / kNodes;
  const Complex rot = std::polar(1.0, -w * h);
  Complex phase = 1.0;
  Complex f = 0.0;
  for (int j = 0; j <= kNodes; ++j) {
    if (j % 64 == 0) phase = std::polar(1.0, -w * h * j);  // limit recurrence drift
    f += table[static_cast<std::size_t>(j)] * phase;
    phase *= rot;
  }
  f *= h;
  const Complex iw(0.0, w);
  return (f - std::polar(1.0, -w)) / iw;
}

Complex g_fourier(const TestFunction& g, double q) {
  const double len = g.plateau_length();
  const double r = g.ramp_length();
  const Complex j = ramp_transform(q * r);
  const Complex plateau = len * sinc_phase(q * len);
  const Complex left = r * std::polar(1.0, q * r) * j;
  const Complex right = r * std::polar(1.0, -q * (len + r)) * std::conj(j);
  return (plateau + left + right) / std::sqrt(2.0 * kPi);
}

Wavepacket::Wavepacket(Eigen::Vector3d center_k, double sigma_k, const AtomParams& atom)
    : center_(std::move(center_k)), sigma_(sigma_k) {
  if (!(sigma_k > 0.0)) throw DomainError("wavepacket width must be positive");
  const double premise = sigma_k * atom.lambda_bar_e();
  if (!(premise < 1e-3)) {
    std::ostringstream msg;
    msg << "wavepacket too broad for the narrow-width reduction: sigma_k lbar_e = " << premise;
    throw DomainError(msg.str());
  }
}

Complex Wavepacket::operator()(const Eigen::Vector3d& k) const {
  const double norm = std::pow(2.0 * kPi * sigma_ * sigma_, -0.75);
  return norm * std::exp(-(k - center_).squaredNorm() / (4.0 * sigma_ * sigma_));
}

ZComparison z_numerical(const AtomParams& atom_in, const NormalizationConstants& C,
                        const TestFunction& g, ZOptions options) {
  const AtomParams atom = atom_in.with_t_g(g.t_g());
  const double len = g.plateau_length();
  const double ratio = g.ramp_length() / len;
  const double du = atom.delta_u();
  const double lb = atom.lambda_bar_g();
  const double step = lb / len;  // change of u per unit s

  auto bracket = [&](double delta) {
    return t2_sym_bracket_offset<double>(delta, C.C0, C.C1, C.C2).sum();
  };
  const Complex b_res = bracket(du);

  ZComparison out;
  {
    const double h = 1e-4 * du;
    const Complex db = (bracket(du + h) - bracket(du - h)) / (2.0 * h);
    out.regime_metric = std::abs(db) * step / std::abs(b_res);
    out.regime_ok = out.regime_metric < 0.1;
  }

  // Pre-split into panels of one sinc period, plus the branch point u = 1.
  const double s_max = options.w_max / ratio;
  const double s_branch = -du / step;
  const int half_panels = static_cast<int>(std::ceil(s_max / (2.0 * kPi)));
  std::vector<double> breaks;
  breaks.reserve(2 * static_cast<std::size_t>(half_panels) + 2);
  for (int i = -half_panels; i <= half_panels; ++i) breaks.push_back(2.0 * kPi * i);
  if (s_branch > breaks.front() && s_branch < breaks.back()) {
    auto it = std::lower_bound(breaks.begin(), breaks.end(), s_branch);
    if (*it != s_branch) breaks.insert(it, s_branch);
  }

  QuadratureTolerance tol;
  tol.rel = options.rel_tol;
  tol.abs = 1e-14 * std::abs(b_res);
  tol.max_evaluations = options.max_evaluations;

  auto density = [&](double s) { return std::norm(scaled_transform(s, ratio)); };
  auto unit = [&](double s) {
    const double delta = du + s * step;
    if (delta == 0.0) return Complex(0.0);
    return bracket(delta) * density(s);
  };
  auto weighted = [&](double s) {
    const double delta = du + s * step;
    if (delta == 0.0) return Complex(0.0);
    return bracket(delta) * density(s) * ((1.0 + du) / (1.0 + delta));
  };
  const QuadratureResult r1 = integrate_adaptive(unit, std::span<const double>(breaks), tol);
  const QuadratureResult r2 = integrate_adaptive(weighted, std::span<const double>(breaks), tol);

  const double pref = t2_prefactor(atom);
  // Z = 4 pi int dq T |G|^2 = 4 pi P L int ds B |G/L|^2
  out.z_numerical = 4.0 * kPi * pref * len * r1.value;
  out.z_numerical_wp = 4.0 * kPi * pref * len * r2.value;
  out.z_closed = z_factor(atom, C);
  out.z_closed_effective = 8.0 * kPi * kPi * pref * b_res * g.norm_squared();
  out.rel_error = std::abs(out.z_numerical - out.z_closed) / std::abs(out.z_closed);
  out.rel_error_wp = std::abs(out.z_numerical_wp - out.z_closed) / std::abs(out.z_closed);
  out.rel_error_effective =
      std::abs(out.z_numerical - out.z_closed_effective) / std::abs(out.z_closed_effective);
  out.evaluations = r1.evaluations + r2.evaluations;
  return out;
}

}  // namespace causalshift
