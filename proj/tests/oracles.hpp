#pragma once

// Brute-force reference computations used by the tests. Nothing here calls
// into the library's quadrature, spline or extrapolation code.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <utility>

namespace oracle {

inline constexpr double pi = 3.14159265358979323846;

using Fn = std::function<double(double)>;

// Conformal factors written out directly.
inline Fn negSchwarzschildPhi(double m) { return [m](double r) { return 1.0 + m / (2.0 * r); }; }
inline Fn posSchwarzschildPhi(double m) { return [m](double r) { return 1.0 + m / (2.0 * r); }; }
inline Fn powerLawPhi(double alpha, double r0) {
  return [alpha, r0](double r) { return std::pow((r - r0) / r, alpha); };
}
inline Fn boostedPhi(double r0, double a) { return [r0, a](double r) { return (r - r0) * (r + a) / (r * r); }; }

namespace detail {

inline double simpsonRec(const Fn& f, double a, double b, double fa, double fm, double fb, double whole, double eps,
                         int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double diff = left + right - whole;
  const double noise = 64.0 * std::numeric_limits<double>::epsilon() * (std::abs(left) + std::abs(right));
  if (depth <= 0 || std::abs(diff) <= std::max(15.0 * eps, noise)) return left + right + diff / 15.0;
  return simpsonRec(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
         simpsonRec(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson on a closed interval with finite endpoint values. `rel`
/// is relative to a 256-panel composite estimate of int |f|.
inline double simpson(const Fn& f, double a, double b, double rel = 1e-12, int depth = 40) {
  const int n = 256;
  const double h = (b - a) / n;
  double scale = 0.0;
  for (int i = 0; i <= n; ++i) scale += (i == 0 || i == n ? 0.5 : 1.0) * std::abs(f(a + i * h));
  scale *= std::abs(h);
  const double eps = std::max(rel * scale, 1e-300);
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::simpsonRec(f, a, b, fa, fm, fb, whole, eps, depth);
}

/// int_a^inf f(s) ds via v = 1/s; g(v) = f(1/v)/v^2 must have a finite limit at v = 0.
inline double simpsonToInfinity(const Fn& f, double a, double eps = 1e-12) {
  auto g = [&](double v) {
    if (v == 0.0) {
      const double s = 1e12;
      return f(s) * s * s;
    }
    const double s = 1.0 / v;
    return f(s) * s * s;
  };
  return simpson(g, 0.0, 1.0 / a, eps);
}

/// Fourth-order central difference with step h.
inline double derivative(const Fn& f, double x, double h = 1e-3) {
  return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

inline double secondDerivative(const Fn& f, double x, double h = 1e-3) {
  return (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x) + 16 * f(x - h) - f(x - 2 * h)) / (12 * h * h);
}

/// Uniform grid search followed by golden-section refinement around the best node.
inline std::pair<double, double> gridMinimize(const Fn& f, double a, double b, int n = 4000) {
  double best_x = a, best_f = f(a);
  const double step = (b - a) / n;
  for (int i = 1; i <= n; ++i) {
    const double x = a + i * step;
    const double v = f(x);
    if (v < best_f) best_f = v, best_x = x;
  }
  double lo = std::max(a, best_x - step), hi = std::min(b, best_x + step);
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
    const double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
    if (f(x1) < f(x2)) hi = x2;
    else lo = x1;
  }
  const double x = 0.5 * (lo + hi);
  return {x, f(x)};
}

/// Sphere area of phi^4 delta at coordinate radius r.
inline double area(const Fn& phi, double r) {
  const double p = phi(r);
  return 4.0 * pi * r * r * p * p * p * p;
}

/// Mean curvature as the logarithmic rate of change of area along the unit normal,
/// H = (dA/ds)/A with ds = phi^2 dr.
inline double meanCurvature(const Fn& phi, double r, double h = 1e-4) {
  auto A = [&](double x) { return area(phi, x); };
  const double p = phi(r);
  return derivative(A, r, h) / (p * p * A(r));
}

/// Hawking mass with int H^2 dA evaluated by Simpson over the polar angle.
inline double hawkingMass(const Fn& phi, double r) {
  const double A = area(phi, r);
  const double H = meanCurvature(phi, r);
  const double p = phi(r);
  const double g = r * r * p * p * p * p;
  const double willmore = 2.0 * pi * simpson([&](double th) { return H * H * g * std::sin(th); }, 0.0, pi, 1e-13);
  return std::sqrt(A / (16.0 * pi)) * (1.0 - willmore / (16.0 * pi));
}

/// Scalar curvature -8 phi^-5 (flat Laplacian of phi) by finite differences.
inline double scalarCurvature(const Fn& phi, double r, double h = 1e-3) {
  const double lap = secondDerivative(phi, r, h) + 2.0 / r * derivative(phi, r, h);
  return -8.0 * lap / std::pow(phi(r), 5);
}

/// ADM mass from a two-term fit phi - 1 = C/r + D/r^2 at two large radii.
inline double admMassFit(const Fn& phi, double R = 1e4) {
  const double r1 = R, r2 = 2 * R;
  const double y1 = (phi(r1) - 1.0) * r1, y2 = (phi(r2) - 1.0) * r2;  // C + D/r
  const double C = (y2 * r2 - y1 * r1) / (r2 - r1);
  return 2.0 * C;
}

/// int_a^inf ds / (s^2 phi^2).
inline double inverseFlux(const Fn& phi, double a, double eps = 1e-13) {
  return simpsonToInfinity(
      [&](double s) {
        const double p = phi(s);
        return 1.0 / (s * s * p * p);
      },
      a, eps);
}

/// Regular mass of the sphere at r, -2 c^2 / (r phi^2) with c = 1/inverseFlux.
inline double sphereRegularMass(const Fn& phi, double r, double eps = 1e-13) {
  const double c = 1.0 / inverseFlux(phi, r, eps);
  const double p = phi(r);
  return -2.0 * c * c / (r * p * p);
}

}  // namespace oracle
