#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "zaslab/errors.hpp"
#include "zaslab/geometry.hpp"
#include "zaslab/limits.hpp"
#include "zaslab/profile.hpp"
#include "zaslab/quadrature.hpp"

namespace zaslab {

/// Radial solution of Laplace's equation for g = phi^4 delta,
/// (phi^2 r^2 h')' = 0, with h = 0 on the inner sphere and h = outer_value on
/// the outer sphere (outer_radius = inf means h -> outer_value at infinity).
struct HarmonicFunction {
  RadialProfile profile = RadialProfile::flat();
  double inner_radius = 0.0;
  double outer_radius = kInf;
  double outer_value = 1.0;
  /// Flux constant: h'(r) = c / (r^2 phi^2).
  double c = 0.0;
  /// Coefficient of h = outer_value - C / r + o(1/r); only for unbounded exteriors.
  std::optional<double> C;

  [[nodiscard]] double value(double r) const {
    if (r < inner_radius || r > outer_radius) throw DomainError("HarmonicFunction: r outside the solution domain");
    if (r == inner_radius) return 0.0;
    return c * inverseFluxIntegral(profile, inner_radius, r);
  }

  /// Coordinate derivative h'(r).
  [[nodiscard]] double derivative(double r) const {
    const double phi = profile.evaluate(r).phi;
    return c / (r * r * phi * phi);
  }

  /// |grad h|_g = phi^-2 h' = c / (r^2 phi^4), the normal derivative on spheres.
  [[nodiscard]] double normalDerivative(double r) const {
    const double phi = profile.evaluate(r).phi;
    return c / (r * r * phi * phi * phi * phi);
  }

  /// The harmonic function with boundary value factor * outer_value.
  [[nodiscard]] HarmonicFunction scaled(double factor) const {
    HarmonicFunction h = *this;
    h.outer_value *= factor;
    h.c *= factor;
    if (h.C) *h.C *= factor;
    return h;
  }
};

namespace detail {

// lim_{R->inf} R (outer_value - h(R)) from three doublings and two Richardson levels.
inline double asymptoticCoefficient(const HarmonicFunction& h) {
  const double r_far = 65536.0 * h.profile.rScale();
  double f[3];
  for (int k = 0; k < 3; ++k) {
    const double r = std::ldexp(r_far, k);
    f[k] = r * h.c * inverseFluxIntegral(h.profile, r, kInf, quad::Options{1e-13, 30});
  }
  const double e1 = 2.0 * f[1] - f[0];
  const double e2 = 2.0 * f[2] - f[1];
  return (4.0 * e2 - e1) / 3.0;
}

}  // namespace detail

/// Harmonic function vanishing on the sphere r_inner and equal to outer_value
/// on r_outer (or at infinity).
inline HarmonicFunction solveHarmonic(const RadialProfile& profile, double r_inner, double r_outer = kInf,
                                      double outer_value = 1.0, const quad::Options& opt = {}) {
  if (!(r_inner > profile.rMin())) throw DomainError("solveHarmonic: r_inner must exceed r_min");
  if (!(r_outer > r_inner)) throw DomainError("solveHarmonic: r_outer must exceed r_inner");
  HarmonicFunction h;
  h.profile = profile;
  h.inner_radius = r_inner;
  h.outer_radius = r_outer;
  h.outer_value = outer_value;
  const double integral = inverseFluxIntegral(profile, r_inner, r_outer, opt);
  if (!(integral > 0.0) || !std::isfinite(integral)) {
    throw QuadratureError("solveHarmonic: inverse flux integral not positive and finite");
  }
  h.c = outer_value / integral;
  if (std::isinf(r_outer)) {
    const double C = detail::asymptoticCoefficient(h);
    if (std::abs(C - h.c) > 1e-9 * std::abs(h.c)) {
      throw ConvergenceError("solveHarmonic: flux constant " + std::to_string(h.c) +
                             " and asymptotic coefficient " + std::to_string(C) + " disagree");
    }
    h.C = C;
  }
  return h;
}

/// Capacity inf { int |grad u|^2 dV : u = 1 on the sphere, u -> 0 at infinity },
/// attained by u = 1 - h, giving 4 pi c. Flat unit sphere: 4 pi.
inline double capacitySurface(const RadialProfile& profile, double r) {
  return 4.0 * kPi * solveHarmonic(profile, r).c;
}

struct CapacityLimit {
  double value = 0.0;
  double error_estimate = 0.0;
  std::vector<double> radii;
  std::vector<double> capacities;
};

/// Capacity of the singular point: limit of sphere capacities along r_i -> r_min.
/// Values under zero_tol are reported as 0.
inline CapacityLimit capacityZAS(const RadialProfile& profile, const std::vector<double>& radii,
                                 double zero_tol = 1e-9) {
  if (!hasZeroAreaSingularity(profile)) throw DomainError("capacityZAS: " + profile.id() + " has no ZAS");
  if (radii.size() < 2) throw DomainError("capacityZAS: need at least two radii");
  CapacityLimit out;
  out.radii = radii;
  double prev = kInf;
  for (double r : radii) {
    if (!(r < prev)) throw DomainError("capacityZAS: radii must strictly decrease");
    prev = r;
    out.capacities.push_back(capacitySurface(profile, r));
  }
  const SequenceLimit lim = extrapolateLimit(out.capacities);
  out.value = std::max(0.0, lim.value);
  out.error_estimate = lim.error_estimate;
  if (out.value < zero_tol) out.value = 0.0;
  return out;
}

inline CapacityLimit capacityZAS(const RadialProfile& profile, const LimitOptions& opt = {}) {
  return capacityZAS(profile, approachRadii(profile.rMin(), opt.first_index, opt.last_index));
}

/// Radial test function u with u' and the radii where u' may jump.
/// support_end: u vanishes identically beyond it (inf if it only decays).
struct TestFunction {
  std::function<double(double)> value;
  std::function<double(double)> derivative;
  std::vector<double> breakpoints;
  double support_end = kInf;
};

/// Dirichlet energy int |grad u|^2 dV over the exterior of the sphere r_inner,
/// which radially is 4 pi int phi^2 r^2 u'^2 dr.
inline double energy(const RadialProfile& profile, const TestFunction& u, double r_inner,
                     const quad::Options& opt = {}) {
  if (!(r_inner > profile.rMin())) throw DomainError("energy: r_inner must exceed r_min");
  if (std::abs(u.value(r_inner) - 1.0) > 1e-12) throw DomainError("energy: test function must equal 1 on the sphere");
  std::vector<double> cuts{r_inner};
  for (double b : u.breakpoints) {
    if (b > r_inner && b < u.support_end) cuts.push_back(b);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  auto density = [&](double r) {
    const double phi = profile.evaluate(r).phi;
    const double du = u.derivative(r);
    return phi * phi * r * r * du * du;
  };
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) total += quad::integrate(density, cuts[i], cuts[i + 1], opt);
  if (std::isinf(u.support_end)) {
    total += quad::integrateToInfinity(density, cuts.back(), opt);
  } else {
    total += quad::integrate(density, cuts.back(), u.support_end, opt);
  }
  return 4.0 * kPi * total;
}

}  // namespace zaslab
