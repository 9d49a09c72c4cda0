#pragma once

#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "zaslab/errors.hpp"

namespace zaslab::quad {

struct Options {
  double rel_tol = 1e-10;
  /// Maximum number of bisections of any one subinterval.
  unsigned max_depth = 24;
  /// Cap on the number of live subintervals.
  std::size_t max_intervals = 4096;
};

namespace detail {

struct Panel {
  double a;
  double b;
  double value;
  double error;
  double l1;
  unsigned depth;
  bool operator<(const Panel& o) const { return error < o.error; }
};

// Kronrod 15 / Gauss 7 pair on [a, b] with Boost's nodes and weights.
template <class F>
Panel kronrodPanel(F& f, double a, double b, unsigned depth) {
  using K = boost::math::quadrature::gauss_kronrod<double, 15>;
  using G = boost::math::quadrature::gauss<double, 7>;
  const auto& x = K::abscissa();
  const auto& wk = K::weights();
  const auto& wg = G::weights();
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double f0 = f(mid);
  double kron = f0 * wk[0];
  double gauss = f0 * wg[0];
  double l1 = std::abs(f0) * wk[0];
  for (std::size_t i = 1; i < x.size(); ++i) {
    const double fp = f(mid + half * x[i]);
    const double fm = f(mid - half * x[i]);
    kron += (fp + fm) * wk[i];
    l1 += (std::abs(fp) + std::abs(fm)) * wk[i];
    if (i % 2 == 0) gauss += (fp + fm) * wg[i / 2];
  }
  const double value = half * kron;
  const double abs_l1 = std::abs(half) * l1;
  // Differences below a few ulps of the L1 mass are rounding, not truncation.
  double error = std::abs(half * (kron - gauss));
  if (error <= 50.0 * std::numeric_limits<double>::epsilon() * abs_l1) error = 0.0;
  return {a, b, value, error, abs_l1, depth};
}

}  // namespace detail

/// Globally adaptive 15-point Gauss-Kronrod on a finite interval [a, b].
/// Throws QuadratureError when the budget runs out before the summed error
/// estimate falls under rel_tol times the L1 norm of the integrand.
template <class F>
double integrate(F&& f, double a, double b, const Options& opt = {}) {
  if (!(std::isfinite(a) && std::isfinite(b))) {
    throw QuadratureError("quad::integrate: bounds must be finite");
  }
  if (a == b) return 0.0;
  std::priority_queue<detail::Panel> heap;
  heap.push(detail::kronrodPanel(f, a, b, 0));
  double value = heap.top().value, error = heap.top().error, l1 = heap.top().l1;
  while (error > opt.rel_tol * l1) {
    const detail::Panel worst = heap.top();
    if (worst.depth >= opt.max_depth || heap.size() >= opt.max_intervals) {
      throw QuadratureError("quad::integrate: refinement budget exhausted on [" + std::to_string(a) + ", " +
                            std::to_string(b) + "], error estimate " + std::to_string(error));
    }
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const detail::Panel left = detail::kronrodPanel(f, worst.a, mid, worst.depth + 1);
    const detail::Panel right = detail::kronrodPanel(f, mid, worst.b, worst.depth + 1);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    l1 += left.l1 + right.l1 - worst.l1;
    heap.push(left);
    heap.push(right);
    if (error < 0.0) error = 0.0;
  }
  // Re-sum to shed the drift of the running updates.
  value = 0.0;
  while (!heap.empty()) {
    value += heap.top().value;
    heap.pop();
  }
  if (!std::isfinite(value)) {
    throw QuadratureError("quad::integrate: non-finite integral on [" + std::to_string(a) + ", " +
                          std::to_string(b) + "]");
  }
  return value;
}

/// Integral over [a, b] of an integrand with an integrable endpoint singularity
/// at `pole` <= a. Uses s = pole + e^t, which turns power-law blowups
/// (s - pole)^(-p), p < 1, into decaying exponentials. f receives s - pole.
template <class F>
double integrateNearPole(F&& f, double pole, double a, double b, const Options& opt = {}) {
  if (b <= a) return 0.0;
  const double t_lo = std::log(a - pole);
  const double t_hi = std::log(b - pole);
  return integrate(
      [&](double t) {
        const double offset = std::exp(t);
        return f(offset) * offset;
      },
      t_lo, t_hi, opt);
}

/// Integral over [a, inf) using v = 1/s; g receives s and must decay at least
/// like s^-2 so that g(1/v)/v^2 stays bounded at v = 0.
template <class F>
double integrateToInfinity(F&& g, double a, const Options& opt = {}) {
  if (!(a > 0.0)) throw QuadratureError("quad::integrateToInfinity: lower bound must be positive");
  return integrate(
      [&](double v) {
        const double s = 1.0 / v;
        return g(s) * s * s;
      },
      0.0, 1.0 / a, opt);
}

}  // namespace zaslab::quad
