#include "causalshift/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

namespace causalshift {

namespace {

// QUADPACK qk21 abscissae and weights.
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208745107180, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5, 7, 9).
constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr long kEvalsPerPanel = 21;

struct Panel {
  double a = 0.0;
  double b = 0.0;
  Complex value{};
  double error = 0.0;
  double floor = 0.0;
  bool roundoff_limited = false;
};

bool worse(const Panel& lhs, const Panel& rhs) {
  if (lhs.error != rhs.error) return lhs.error < rhs.error;
  return lhs.a > rhs.a;
}

Complex checked(const Integrand& h, double t) {
  const Complex v = h(t);
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
    std::ostringstream msg;
    msg << "non-finite integrand value at transformed abscissa " << t;
    throw QuadratureError(msg.str(), {});
  }
  return v;
}

Panel gauss_kronrod(const Integrand& h, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  std::array<Complex, 21> fv;
  fv[0] = checked(h, center);
  for (std::size_t j = 0; j < 10; ++j) {
    const double dx = half * kXgk[j];
    fv[1 + 2 * j] = checked(h, center - dx);
    fv[2 + 2 * j] = checked(h, center + dx);
  }

  Complex kronrod = kWgk[10] * fv[0];
  Complex gauss{};
  double resabs = kWgk[10] * std::abs(fv[0]);
  for (std::size_t j = 0; j < 10; ++j) {
    const Complex pair = fv[1 + 2 * j] + fv[2 + 2 * j];
    kronrod += kWgk[j] * pair;
    resabs += kWgk[j] * (std::abs(fv[1 + 2 * j]) + std::abs(fv[2 + 2 * j]));
    if (j % 2 == 1) gauss += kWg[j / 2] * pair;
  }
  const Complex mean = 0.5 * kronrod;
  double resasc = kWgk[10] * std::abs(fv[0] - mean);
  for (std::size_t j = 0; j < 10; ++j) {
    resasc += kWgk[j] * (std::abs(fv[1 + 2 * j] - mean) + std::abs(fv[2 + 2 * j] - mean));
  }

  const double width = std::abs(half);
  resabs *= width;
  resasc *= width;
  Panel p;
  p.a = a;
  p.b = b;
  p.value = kronrod * half;
  double err = std::abs((kronrod - gauss) * half);
  if (resasc != 0.0 && err != 0.0) {
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  }
  const double floor = 50.0 * kEps * resabs;
  p.floor = floor;
  if (resabs > std::numeric_limits<double>::min() / (50.0 * kEps) && err <= floor) {
    err = floor;
    p.roundoff_limited = true;
  }
  p.error = err;
  return p;
}

bool splittable(const Panel& p) {
  if (p.roundoff_limited) return false;
  const double mid = 0.5 * (p.a + p.b);
  if (!(p.a < mid && mid < p.b)) return false;
  const double scale = std::max(std::abs(p.a), std::abs(p.b));
  return (p.b - p.a) > 64.0 * kEps * scale;
}

QuadratureResult collect(std::vector<Panel>& panels, long evaluations) {
  std::sort(panels.begin(), panels.end(),
            [](const Panel& l, const Panel& r) { return l.a < r.a; });
  QuadratureResult out;
  for (const Panel& p : panels) {
    out.value += p.value;
    out.abs_error_estimate += p.error;
  }
  out.evaluations = evaluations;
  return out;
}

QuadratureResult adaptive_core(const Integrand& h, std::span<const double> breaks,
                               const QuadratureTolerance& tol) {
  if (!(tol.rel > 0.0) && !(tol.abs > 0.0)) {
    throw DomainError("quadrature tolerances must be positive");
  }
  std::vector<Panel> heap;
  std::vector<Panel> done;
  long evaluations = 0;
  Complex total{};
  double total_error = 0.0;
  double total_floor = 0.0;

  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    Panel p = gauss_kronrod(h, breaks[i], breaks[i + 1]);
    evaluations += kEvalsPerPanel;
    total += p.value;
    total_error += p.error;
    total_floor += p.floor;
    heap.push_back(p);
  }
  std::make_heap(heap.begin(), heap.end(), worse);

  long iteration = 0;
  for (;;) {
    if (++iteration % 256 == 0) {
      total = {};
      total_error = 0.0;
      total_floor = 0.0;
      for (const auto* group : {&heap, &done}) {
        for (const Panel& p : *group) {
          total += p.value;
          total_error += p.error;
          total_floor += p.floor;
        }
      }
    }
    if (total_error <= std::max(tol.abs, tol.rel * std::abs(total))) break;
    // Remaining error is cancellation roundoff; subdividing cannot reduce it.
    if (total_error <= 2.0 * total_floor) break;
    if (heap.empty()) break;

    std::pop_heap(heap.begin(), heap.end(), worse);
    Panel worst = heap.back();
    heap.pop_back();
    if (!splittable(worst)) {
      done.push_back(worst);
      continue;
    }
    if (evaluations + 2 * kEvalsPerPanel > tol.max_evaluations) {
      heap.push_back(worst);
      heap.insert(heap.end(), done.begin(), done.end());
      QuadratureResult partial = collect(heap, evaluations);
      std::ostringstream msg;
      msg << "adaptive quadrature did not converge within " << tol.max_evaluations
          << " evaluations (estimate " << partial.value << ", error "
          << partial.abs_error_estimate << ")";
      throw QuadratureError(msg.str(), partial);
    }
    const double mid = 0.5 * (worst.a + worst.b);
    Panel left = gauss_kronrod(h, worst.a, mid);
    Panel right = gauss_kronrod(h, mid, worst.b);
    evaluations += 2 * kEvalsPerPanel;
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    total_floor += left.floor + right.floor - worst.floor;
    heap.push_back(left);
    std::push_heap(heap.begin(), heap.end(), worse);
    heap.push_back(right);
    std::push_heap(heap.begin(), heap.end(), worse);
  }

  heap.insert(heap.end(), done.begin(), done.end());
  return collect(heap, evaluations);
}

}  // namespace

bool Interval::lo_infinite() const { return std::isinf(lo); }
bool Interval::hi_infinite() const { return std::isinf(hi); }

void Interval::validate() const {
  if (std::isnan(lo) || std::isnan(hi) || !(lo < hi)) {
    std::ostringstream msg;
    msg << "invalid interval [" << lo << ", " << hi << "]";
    throw DomainError(msg.str());
  }
}

QuadratureResult& QuadratureResult::operator+=(const QuadratureResult& other) {
  value += other.value;
  abs_error_estimate += other.abs_error_estimate;
  evaluations += other.evaluations;
  return *this;
}

QuadratureResult integrate_adaptive(const Integrand& f, Interval iv, QuadratureTolerance tol) {
  iv.validate();
  if (!iv.lo_infinite() && !iv.hi_infinite()) {
    const std::array<double, 2> breaks{iv.lo, iv.hi};
    return adaptive_core(f, breaks, tol);
  }
  const std::array<double, 2> unit{0.0, 1.0};
  if (iv.lo_infinite() && iv.hi_infinite()) {
    const std::array<double, 2> sym{-1.0, 1.0};
    auto h = [&f](double t) {
      const double d = 1.0 - t * t;
      return f(t / d) * ((1.0 + t * t) / (d * d));
    };
    return adaptive_core(h, sym, tol);
  }
  if (iv.hi_infinite()) {
    const double lo = iv.lo;
    auto h = [&f, lo](double t) {
      const double d = 1.0 - t;
      return f(lo + t / d) / (d * d);
    };
    return adaptive_core(h, unit, tol);
  }
  const double hi = iv.hi;
  auto h = [&f, hi](double t) {
    const double d = 1.0 - t;
    return f(hi - t / d) / (d * d);
  };
  return adaptive_core(h, unit, tol);
}

QuadratureResult integrate_adaptive(const Integrand& f, std::span<const double> breakpoints,
                                    QuadratureTolerance tol) {
  if (breakpoints.size() < 2) throw DomainError("need at least two breakpoints");
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    Interval{breakpoints[i], breakpoints[i + 1]}.validate();
    if (std::isinf(breakpoints[i]) || std::isinf(breakpoints[i + 1])) {
      throw DomainError("breakpoint form requires a finite range");
    }
  }
  return adaptive_core(f, breakpoints, tol);
}

QuadratureResult integrate_pv(const Integrand& numerator, double pole, Interval iv,
                              QuadratureTolerance tol) {
  iv.validate();
  if (!(pole > iv.lo && pole < iv.hi)) {
    std::ostringstream msg;
    msg << "principal-value pole " << pole << " must lie strictly inside [" << iv.lo << ", "
        << iv.hi << "]";
    throw DomainError(msg.str());
  }
  const double half_width = std::min(pole - iv.lo, iv.hi - pole);

  // Each piece gets the full relative tolerance; the absolute one is shared.
  QuadratureTolerance piece = tol;
  piece.abs = tol.abs / 3.0;

  auto fold = [&numerator, pole](double t) {
    return (numerator(pole + t) - numerator(pole - t)) / t;
  };
  QuadratureResult out = integrate_adaptive(fold, Interval{0.0, half_width}, piece);

  auto regular = [&numerator, pole](double x) { return numerator(x) / (x - pole); };
  if (pole - half_width > iv.lo) {
    out += integrate_adaptive(regular, Interval{iv.lo, pole - half_width}, piece);
  }
  if (pole + half_width < iv.hi) {
    out += integrate_adaptive(regular, Interval{pole + half_width, iv.hi}, piece);
  }
  return out;
}

}  // namespace causalshift
