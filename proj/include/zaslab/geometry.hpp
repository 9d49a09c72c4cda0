#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "zaslab/errors.hpp"
#include "zaslab/profile.hpp"

namespace zaslab {

/// Centered coordinate sphere {|x| = r} measured in g = phi^4 delta.
struct SphereGeometry {
  double r;
  double area;            // 4 pi r^2 phi^4
  double areal_radius;    // r phi^2
  double mean_curvature;  // outward, in g
};

namespace detail {

inline SphereGeometry sphereFromValue(double r, const ProfileValue& v) {
  const double phi2 = v.phi * v.phi;
  const double areal = r * phi2;
  const double h = (2.0 / areal) * (1.0 + 2.0 * r * v.dphi / v.phi);
  return {r, 4.0 * kPi * areal * areal, areal, h};
}

// Flat Laplacian of a radial function with terms that cancel below rounding
// snapped to zero, so harmonic factors report R = 0 instead of noise.
inline double radialLaplacian(double r, const ProfileValue& v) {
  const double radial = 2.0 * v.dphi / r;
  const double sum = v.d2phi + radial;
  const double noise = 64.0 * std::numeric_limits<double>::epsilon() * (std::abs(v.d2phi) + std::abs(radial));
  return std::abs(sum) <= noise ? 0.0 : sum;
}

}  // namespace detail

inline SphereGeometry sphereGeometry(const RadialProfile& profile, double r) {
  if (r == profile.rMin()) throw DomainError("sphereGeometry: sphere at r_min is degenerate");
  return detail::sphereFromValue(r, profile.evaluate(r));
}

/// Sphere at r_min + offset, evaluated with offset-accurate closed forms.
inline SphereGeometry sphereGeometryOffset(const RadialProfile& profile, double offset) {
  if (!(offset > 0.0)) throw DomainError("sphereGeometryOffset: offset must be positive");
  return detail::sphereFromValue(profile.rMin() + offset, profile.evaluateOffset(offset));
}

/// Scalar curvature of phi^4 delta: R = -8 phi^-5 (phi'' + 2 phi'/r).
inline double scalarCurvature(const RadialProfile& profile, double r) {
  if (r == profile.rMin()) throw DomainError("scalarCurvature: r must exceed r_min");
  const ProfileValue v = profile.evaluate(r);
  return -8.0 * detail::radialLaplacian(r, v) / std::pow(v.phi, 5);
}

/// Mean curvature of a surface after the conformal change g = phibar^4 gbar,
/// given phibar, its gbar-normal derivative and the gbar mean curvature.
inline double meanCurvatureTransform(double phi_bar, double dphi_bar_dnu, double mean_curvature_bar) {
  if (!(phi_bar > 0.0)) throw DomainError("meanCurvatureTransform: phi_bar must be positive");
  return mean_curvature_bar / (phi_bar * phi_bar) + 4.0 * dphi_bar_dnu / (phi_bar * phi_bar * phi_bar);
}

/// Positive radial weight lambda(r) with its derivative.
class RadialWeight {
 public:
  struct Value {
    double value;
    double derivative;
  };

  RadialWeight() : RadialWeight(constant(1.0)) {}

  static RadialWeight constant(double c) {
    return RadialWeight([c](double) { return Value{c, 0.0}; }, "const(" + fmt(c) + ")", c == 1.0);
  }

  /// 1 + a exp(-b r)
  static RadialWeight exponential(double a, double b) {
    return RadialWeight(
        [a, b](double r) {
          const double e = a * std::exp(-b * r);
          return Value{1.0 + e, -b * e};
        },
        "1+" + fmt(a) + "*exp(-" + fmt(b) + "r)");
  }

  /// 1 + a exp(-b (r - c)^2)
  static RadialWeight gaussian(double a, double b, double c) {
    return RadialWeight(
        [a, b, c](double r) {
          const double x = r - c;
          const double e = a * std::exp(-b * x * x);
          return Value{1.0 + e, -2.0 * b * x * e};
        },
        "1+" + fmt(a) + "*exp(-" + fmt(b) + "(r-" + fmt(c) + ")^2)");
  }

  /// Pointwise product, the weight of two successive rescalings.
  [[nodiscard]] RadialWeight times(const RadialWeight& other) const {
    if (identity_) return other;
    if (other.identity_) return *this;
    auto f = fn_;
    auto g = other.fn_;
    return RadialWeight(
        [f, g](double r) {
          const Value a = f(r), b = g(r);
          return Value{a.value * b.value, a.derivative * b.value + a.value * b.derivative};
        },
        label_ + "*" + other.label_);
  }

  [[nodiscard]] Value operator()(double r) const { return fn_(r); }
  [[nodiscard]] const std::string& label() const noexcept { return label_; }
  [[nodiscard]] bool isIdentity() const noexcept { return identity_; }

 private:
  RadialWeight(std::function<Value(double)> fn, std::string label, bool identity = false)
      : fn_(std::move(fn)), label_(std::move(label)), identity_(identity) {}

  static std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
  }

  std::function<Value(double)> fn_;
  std::string label_;
  bool identity_ = false;
};

/// Resolution of a regular singularity in the radial gauge:
/// background gbar = lambda^4 delta, conformal function phibar = phi / lambda,
/// so that phibar^4 gbar = phi^4 delta for every lambda.
struct Resolution {
  RadialProfile profile = RadialProfile::flat();
  RadialWeight weight;

  /// phibar and its radial coordinate derivative.
  [[nodiscard]] std::pair<double, double> phiBar(double r) const {
    const ProfileValue v = profile.evaluate(r);
    const RadialWeight::Value l = weight(r);
    return {v.phi / l.value, (v.dphi * l.value - v.phi * l.derivative) / (l.value * l.value)};
  }
};

inline Resolution defaultResolution(const RadialProfile& profile) { return Resolution{profile, RadialWeight{}}; }

namespace detail {

inline std::vector<double> weightSampleRadii(const RadialProfile& profile) {
  const double r_min = profile.rMin();
  const double base = r_min > 0.0 ? r_min : profile.rScale();
  const double r_far = std::min(profile.rMax(), 65536.0 * profile.rScale());
  std::vector<double> radii;
  if (r_min > 0.0) radii.push_back(r_min);
  for (int k = -160;; ++k) {
    const double r = r_min + base * std::exp2(k / 4.0);
    if (r > r_far) break;
    radii.push_back(r);
  }
  return radii;
}

}  // namespace detail

/// Rescales the background by lambda: gtilde = lambda^4 gbar, phitilde = phibar / lambda.
/// The physical metric is unchanged.
inline Resolution rescaleResolution(const Resolution& res, const RadialWeight& lambda) {
  for (double r : detail::weightSampleRadii(res.profile)) {
    const double l = lambda(r).value;
    if (!(l > 0.0) || !std::isfinite(l)) {
      throw DomainError("rescaleResolution: weight " + lambda.label() + " not positive at r = " + std::to_string(r));
    }
  }
  return Resolution{res.profile, res.weight.times(lambda)};
}

/// Whether r_min is a zero area singularity: r_min > 0 and sphere areas
/// shrink to zero as r -> r_min.
inline bool hasZeroAreaSingularity(const RadialProfile& profile) {
  const double r_min = profile.rMin();
  if (!(r_min > 0.0)) return false;
  if (profile.admitsBoundaryEvaluation()) {
    return std::abs(profile.evaluate(r_min).phi) <= 1e-14;
  }
  // Areas follow a power of the offset; require a positive, stable log-slope.
  double prev_log_area = 0.0, prev_log_offset = 0.0, prev_slope = 0.0;
  for (int k = 20; k <= 44; k += 8) {
    const double offset = std::ldexp(r_min, -k);
    const double area = sphereGeometryOffset(profile, offset).area;
    if (!(area > 0.0)) return false;
    const double la = std::log(area), lo = std::log(offset);
    if (k > 20) {
      const double slope = (la - prev_log_area) / (lo - prev_log_offset);
      if (!(slope > 1e-3)) return false;
      if (k > 28 && std::abs(slope - prev_slope) > 0.1 * std::abs(slope)) return false;
      prev_slope = slope;
    }
    prev_log_area = la;
    prev_log_offset = lo;
  }
  return true;
}

/// One-sided phi'(r_min) when it exists and is nonzero; NaN otherwise.
inline double boundaryDerivative(const RadialProfile& profile) {
  if (!hasZeroAreaSingularity(profile)) return std::numeric_limits<double>::quiet_NaN();
  if (profile.admitsBoundaryEvaluation()) {
    const double d = profile.evaluate(profile.rMin()).dphi;
    return (std::isfinite(d) && d != 0.0) ? d : std::numeric_limits<double>::quiet_NaN();
  }
  double prev = 0.0;
  for (int k = 20; k <= 44; k += 8) {
    const double d = profile.evaluateOffset(std::ldexp(profile.rMin(), -k)).dphi;
    if (!std::isfinite(d)) return std::numeric_limits<double>::quiet_NaN();
    if (k > 20 && std::abs(d - prev) > 1e-6 * std::abs(d)) return std::numeric_limits<double>::quiet_NaN();
    prev = d;
  }
  return prev != 0.0 ? prev : std::numeric_limits<double>::quiet_NaN();
}

inline bool hasRegularSingularity(const RadialProfile& profile) { return !std::isnan(boundaryDerivative(profile)); }

struct ValidityReport {
  bool positive = true;
  bool asymptotically_flat = false;
  double decay_sup = 0.0;  // sup of |r (phi - 1)| over sampled r >= r_scale
  double decay_tail = 0.0;  // r (phi - 1) at the outermost sample
  bool zero_area_singularity = false;
  bool regular = false;
  double boundary_derivative = std::numeric_limits<double>::quiet_NaN();
  double min_scalar_curvature = kInf;
  double r_at_min_scalar_curvature = 0.0;
  bool nonnegative_scalar_curvature = false;
  std::vector<std::string> notes;
};

/// Sampled sanity checks of the hypotheses the theorems rely on.
/// Never throws; failures are recorded in the report.
inline ValidityReport validateProfile(const RadialProfile& profile, double curvature_tol = 1e-9) {
  ValidityReport rep;
  const double r_min = profile.rMin();
  const double scale = profile.rScale();
  const double r_far = 65536.0 * scale;

  std::vector<double> radii;
  if (r_min > 0.0) {
    for (int k = 40; k >= 1; --k) radii.push_back(r_min + std::ldexp(r_min, -k));
    for (int k = 4; r_min * std::exp2(k / 4.0) <= r_far; ++k) radii.push_back(r_min * std::exp2(k / 4.0));
  } else {
    for (int k = -40; k <= 64; ++k) radii.push_back(scale * std::exp2(k / 4.0));
  }
  if (profile.rMax() < r_far) {
    rep.notes.push_back("tabulated range ends at r = " + std::to_string(profile.rMax()) +
                        "; decay checked only inside the table");
  }

  double prev_tail = std::numeric_limits<double>::quiet_NaN();
  for (double r : radii) {
    if (r > profile.rMax()) break;
    ProfileValue v{};
    try {
      v = r_min > 0.0 ? profile.evaluateOffset(r - r_min) : profile.evaluate(r);
    } catch (const Error& e) {
      rep.positive = false;
      rep.notes.push_back(std::string("evaluation failed: ") + e.what());
      continue;
    }
    if (!(v.phi > 0.0)) {
      rep.positive = false;
      rep.notes.push_back("phi not positive at r = " + std::to_string(r));
      continue;
    }
    const double R = -8.0 * detail::radialLaplacian(r, v) / std::pow(v.phi, 5);
    if (std::isfinite(R) && R < rep.min_scalar_curvature) {
      rep.min_scalar_curvature = R;
      rep.r_at_min_scalar_curvature = r;
    }
    if (r >= scale) {
      const double tail = r * (v.phi - 1.0);
      rep.decay_sup = std::max(rep.decay_sup, std::abs(tail));
      prev_tail = rep.decay_tail;
      rep.decay_tail = tail;
    }
  }
  const bool reached_far = profile.rMax() >= r_far;
  rep.asymptotically_flat = reached_far && std::isfinite(rep.decay_sup) &&
                            std::abs(rep.decay_tail - prev_tail) <= 1e-3 * (1.0 + std::abs(rep.decay_tail));
  if (!rep.asymptotically_flat) rep.notes.push_back("r (phi - 1) not seen to settle on the sampled grid");

  try {
    rep.zero_area_singularity = hasZeroAreaSingularity(profile);
    rep.boundary_derivative = boundaryDerivative(profile);
    rep.regular = !std::isnan(rep.boundary_derivative);
  } catch (const Error& e) {
    rep.notes.push_back(std::string("singularity probe failed: ") + e.what());
  }
  const double scale_curv = 1.0 / (scale * scale);
  rep.nonnegative_scalar_curvature = rep.min_scalar_curvature >= -curvature_tol * scale_curv;
  rep.notes.push_back("Ricci lower bound of the asymptotic-flatness definition is not checked");
  return rep;
}

}  // namespace zaslab
