#pragma once

#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "zaslab/errors.hpp"
#include "zaslab/quadrature.hpp"
#include "zaslab/spline.hpp"

namespace zaslab {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class ProfileKind { negSchwarzschild, posSchwarzschild, powerLaw, boosted, tabulated, flat };

/// Conformal factor and its first two radial derivatives at one radius.
struct ProfileValue {
  double phi;
  double dphi;
  double d2phi;
};

/// Compactly supported smooth additive bump,
/// w(r) = amplitude * exp(-1 / (1 - x^2)), x = (r - center) / half_width.
struct Bump {
  double center;
  double half_width;
  double amplitude;
};

/// Multiplies the conformal factor by w = 1 + coefficient * I(r), where
/// I(r) = int_r^inf ds / (s^2 phi^2). w is harmonic for phi^4 delta and
/// expands as 1 + coefficient / r + O(r^-2).
struct HarmonicFactor {
  double coefficient;
};

using Modifier = std::variant<Bump, HarmonicFactor>;

class RadialProfile;

/// int_a^b ds / (s^2 phi(s)^2); b may be +inf. This is the reciprocal of the
/// flux constant of the radial harmonic function vanishing at a.
double inverseFluxIntegral(const RadialProfile& profile, double a, double b, const quad::Options& opt = {});

/// Radial conformal factor phi(r) of the metric g = phi^4 delta on r > r_min.
/// Value type; tabulated data is shared and immutable.
class RadialProfile {
 public:
  static RadialProfile flat() { return RadialProfile(ProfileKind::flat, 0.0, 0.0); }

  static RadialProfile negSchwarzschild(double m) {
    if (!(m < 0.0) || !std::isfinite(m)) throw DomainError("negSchwarzschild: mass must be negative");
    return RadialProfile(ProfileKind::negSchwarzschild, m, 0.0);
  }

  static RadialProfile posSchwarzschild(double m) {
    if (!(m > 0.0) || !std::isfinite(m)) throw DomainError("posSchwarzschild: mass must be positive");
    return RadialProfile(ProfileKind::posSchwarzschild, m, 0.0);
  }

  static RadialProfile powerLaw(double alpha, double r0) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("powerLaw: exponent must be positive");
    if (!(r0 > 0.0) || !std::isfinite(r0)) throw DomainError("powerLaw: r0 must be positive");
    return RadialProfile(ProfileKind::powerLaw, alpha, r0);
  }

  static RadialProfile boosted(double r0, double a) {
    if (!(r0 > 0.0) || !std::isfinite(r0)) throw DomainError("boosted: r0 must be positive");
    if (!(a >= 0.0) || !std::isfinite(a)) throw DomainError("boosted: shift a must be >= 0");
    return RadialProfile(ProfileKind::boosted, r0, a);
  }

  /// Samples (r, phi) with strictly increasing r; r_min is the first radius.
  static RadialProfile tabulated(const std::vector<std::pair<double, double>>& samples, int asymptotic_order = 1) {
    std::vector<double> r, phi;
    r.reserve(samples.size());
    phi.reserve(samples.size());
    for (const auto& [ri, pi] : samples) {
      if (!std::isfinite(ri) || !std::isfinite(pi)) throw DomainError("tabulated: non-finite sample");
      if (pi < 0.0) throw DomainError("tabulated: phi must be nonnegative");
      r.push_back(ri);
      phi.push_back(pi);
    }
    if (!r.empty() && r.front() < 0.0) throw DomainError("tabulated: radii must be nonnegative");
    for (std::size_t i = 1; i < phi.size(); ++i) {
      if (!(phi[i] > 0.0)) throw DomainError("tabulated: phi must be positive beyond the first sample");
    }
    RadialProfile p(ProfileKind::tabulated, 0.0, 0.0);
    p.table_ = std::make_shared<const NaturalCubicSpline>(std::move(r), std::move(phi));
    p.asymptotic_order_ = asymptotic_order;
    p.base_r_min_ = p.table_->front();
    p.stage_r_min_ = {p.base_r_min_};
    return p;
  }

  [[nodiscard]] RadialProfile withBump(const Bump& bump) const {
    if (!(bump.half_width > 0.0)) throw DomainError("bump: half_width must be positive");
    if (!(bump.center - bump.half_width > rMin())) {
      throw DomainError("bump: support must stay away from r_min");
    }
    RadialProfile p = *this;
    p.modifiers_.emplace_back(bump);
    p.stage_r_min_.push_back(rMin());
    return p;
  }

  [[nodiscard]] RadialProfile withHarmonicFactor(double coefficient) const;

  [[nodiscard]] ProfileKind kind() const noexcept { return kind_; }
  [[nodiscard]] const std::vector<Modifier>& modifiers() const noexcept { return modifiers_; }
  [[nodiscard]] bool isModified() const noexcept { return !modifiers_.empty(); }

  /// Parameters of the closed-form kinds.
  [[nodiscard]] double mass() const noexcept { return p1_; }
  [[nodiscard]] double alpha() const noexcept { return p1_; }
  [[nodiscard]] double r0() const noexcept {
    return kind_ == ProfileKind::powerLaw ? p2_ : p1_;
  }
  [[nodiscard]] double shift() const noexcept { return p2_; }
  [[nodiscard]] const NaturalCubicSpline* table() const noexcept { return table_.get(); }

  [[nodiscard]] double rMin() const noexcept { return stage_r_min_.back(); }
  [[nodiscard]] double rMax() const noexcept { return table_ ? table_->back() : kInf; }
  [[nodiscard]] int asymptoticOrder() const noexcept { return asymptotic_order_; }

  /// Characteristic length of the geometry; sets where "far away" begins.
  [[nodiscard]] double rScale() const noexcept {
    double s = 1.0;
    switch (kind_) {
      case ProfileKind::flat: s = 1.0; break;
      case ProfileKind::negSchwarzschild:
      case ProfileKind::posSchwarzschild: s = 0.5 * std::abs(p1_); break;
      case ProfileKind::powerLaw: s = p2_; break;
      case ProfileKind::boosted: s = std::max(p1_, p2_); break;
      case ProfileKind::tabulated: s = base_r_min_ > 0.0 ? base_r_min_ : 1.0; break;
    }
    for (const auto& mod : modifiers_) {
      if (const auto* b = std::get_if<Bump>(&mod)) s = std::max(s, b->center + b->half_width);
      if (const auto* h = std::get_if<HarmonicFactor>(&mod)) s = std::max(s, std::abs(h->coefficient));
    }
    return std::max(s, rMin());
  }

  /// Whether phi and phi' have finite one-sided limits at r_min (evaluation at
  /// r = r_min is then allowed).
  [[nodiscard]] bool admitsBoundaryEvaluation() const noexcept {
    if (rMin() != base_r_min_ || !admitsBoundaryEvaluationBase()) return false;
    for (const auto& mod : modifiers_) {
      if (std::holds_alternative<HarmonicFactor>(mod)) return false;
    }
    return true;
  }

  /// phi, phi', phi'' at r. Throws DomainError below r_min and
  /// InterpolationError outside a tabulated range.
  [[nodiscard]] ProfileValue evaluate(double r) const { return evaluateStage(r, modifiers_.size()); }

  /// Same as evaluate(rMin() + offset) but closed forms use the offset
  /// directly, so phi stays accurate when offset << r_min.
  [[nodiscard]] ProfileValue evaluateOffset(double offset) const {
    if (!(offset >= 0.0)) throw DomainError("evaluateOffset: negative offset");
    if (offset == 0.0 && !admitsBoundaryEvaluation()) {
      throw DomainError("evaluateOffset: r_min is not an admissible evaluation point for " + id());
    }
    if (rMin() != base_r_min_ || kind_ == ProfileKind::tabulated || base_r_min_ == 0.0) {
      return evaluate(rMin() + offset);
    }
    ProfileValue v = baseOffset(offset);
    return applyModifiers(rMin() + offset, v, modifiers_.size());
  }

  [[nodiscard]] double phi(double r) const { return evaluate(r).phi; }

  /// Profile with only the first `stages` modifiers applied.
  [[nodiscard]] RadialProfile truncated(std::size_t stages) const {
    RadialProfile p = *this;
    p.modifiers_.resize(std::min(stages, modifiers_.size()));
    p.stage_r_min_.resize(p.modifiers_.size() + 1);
    return p;
  }

  /// Human-readable identifier, e.g. "negSchwarzschild(m=-1)".
  [[nodiscard]] std::string id() const {
    char buf[160];
    switch (kind_) {
      case ProfileKind::flat: std::snprintf(buf, sizeof buf, "flat"); break;
      case ProfileKind::negSchwarzschild: std::snprintf(buf, sizeof buf, "negSchwarzschild(m=%g)", p1_); break;
      case ProfileKind::posSchwarzschild: std::snprintf(buf, sizeof buf, "posSchwarzschild(m=%g)", p1_); break;
      case ProfileKind::powerLaw: std::snprintf(buf, sizeof buf, "powerLaw(alpha=%g,r0=%g)", p1_, p2_); break;
      case ProfileKind::boosted: std::snprintf(buf, sizeof buf, "boosted(r0=%g,a=%g)", p1_, p2_); break;
      case ProfileKind::tabulated:
        std::snprintf(buf, sizeof buf, "tabulated(n=%zu,r=[%g,%g])", table_->abscissae().size(), table_->front(),
                      table_->back());
        break;
    }
    std::string s = buf;
    for (const auto& mod : modifiers_) {
      if (const auto* b = std::get_if<Bump>(&mod)) {
        std::snprintf(buf, sizeof buf, "+bump(c=%g,w=%g,eps=%g)", b->center, b->half_width, b->amplitude);
      } else {
        std::snprintf(buf, sizeof buf, "*harmonic(C=%g)", std::get<HarmonicFactor>(mod).coefficient);
      }
      s += buf;
    }
    return s;
  }

 private:
  RadialProfile(ProfileKind kind, double p1, double p2) : kind_(kind), p1_(p1), p2_(p2) {
    switch (kind) {
      case ProfileKind::negSchwarzschild: base_r_min_ = -0.5 * p1; break;
      case ProfileKind::powerLaw: base_r_min_ = p2; break;
      case ProfileKind::boosted: base_r_min_ = p1; break;
      default: base_r_min_ = 0.0; break;
    }
    stage_r_min_ = {base_r_min_};
  }

  [[nodiscard]] ProfileValue baseValue(double r) const {
    switch (kind_) {
      case ProfileKind::flat: return {1.0, 0.0, 0.0};
      case ProfileKind::negSchwarzschild: return baseOffset(r - base_r_min_);
      case ProfileKind::posSchwarzschild: {
        const double m = p1_;
        return {1.0 + m / (2.0 * r), -m / (2.0 * r * r), m / (r * r * r)};
      }
      case ProfileKind::powerLaw: return baseOffset(r - p2_);
      case ProfileKind::boosted: {
        const double r0 = p1_, a = p2_;
        const double b = a - r0, q = a * r0;
        const double r2 = r * r, r3 = r2 * r;
        return {(r - r0) * (r + a) / r2, -b / r2 + 2.0 * q / r3, 2.0 * b / r3 - 6.0 * q / (r3 * r)};
      }
      case ProfileKind::tabulated: {
        const auto s = (*table_)(r);
        return {s.value, s.first, s.second};
      }
    }
    return {1.0, 0.0, 0.0};
  }

  // Closed forms written in terms of d = r - r_min.
  [[nodiscard]] ProfileValue baseOffset(double d) const {
    switch (kind_) {
      case ProfileKind::negSchwarzschild: {
        const double r = base_r_min_ + d;
        const double m = p1_;
        return {d / r, -m / (2.0 * r * r), m / (r * r * r)};
      }
      case ProfileKind::powerLaw: {
        const double alpha = p1_, r0 = p2_;
        const double r = r0 + d;
        const double x = d / r;            // 1 - r0/r
        const double dx = r0 / (r * r);    // dx/dr
        const double d2x = -2.0 * r0 / (r * r * r);
        if (d == 0.0) {
          if (alpha == 1.0) return {0.0, dx, d2x};
          return {0.0, alpha < 1.0 ? kInf : 0.0, alpha < 2.0 ? kInf : 0.0};
        }
        const double xa1 = std::pow(x, alpha - 1.0);
        const double phi = xa1 * x;
        const double dphi = alpha * xa1 * dx;
        const double d2phi = alpha * (alpha - 1.0) * (xa1 / x) * dx * dx + alpha * xa1 * d2x;
        return {phi, dphi, d2phi};
      }
      case ProfileKind::boosted: {
        const double r0 = p1_, a = p2_;
        const double r = r0 + d;
        ProfileValue v = baseValue(r);
        v.phi = d * (r + a) / (r * r);
        return v;
      }
      default: return baseValue(base_r_min_ + d);
    }
  }

  [[nodiscard]] ProfileValue applyModifiers(double r, ProfileValue v, std::size_t stages) const;

  [[nodiscard]] ProfileValue evaluateStage(double r, std::size_t stages) const {
    const double r_min = stage_r_min_[stages];
    if (!(r >= r_min) || std::isnan(r)) {
      throw DomainError("evaluate: r = " + std::to_string(r) + " below r_min = " + std::to_string(r_min));
    }
    if (r == r_min && !truncated(stages).admitsBoundaryEvaluation()) {
      throw DomainError("evaluate: r_min is not an admissible evaluation point for " + id());
    }
    if (table_ && r > table_->back()) {
      throw InterpolationError("evaluate: r = " + std::to_string(r) + " beyond tabulated range");
    }
    return applyModifiers(r, baseValue(r), stages);
  }

  [[nodiscard]] bool admitsBoundaryEvaluationBase() const noexcept {
    switch (kind_) {
      case ProfileKind::negSchwarzschild:
      case ProfileKind::boosted:
      case ProfileKind::tabulated: return true;
      case ProfileKind::powerLaw: return p1_ == 1.0;
      default: return false;
    }
  }

  ProfileKind kind_;
  double p1_ = 0.0;
  double p2_ = 0.0;
  int asymptotic_order_ = 1;
  double base_r_min_ = 0.0;
  std::shared_ptr<const NaturalCubicSpline> table_;
  std::vector<Modifier> modifiers_;
  std::vector<double> stage_r_min_;  // r_min after each modifier stage; size = modifiers + 1
};

inline ProfileValue RadialProfile::applyModifiers(double r, ProfileValue v, std::size_t stages) const {
  for (std::size_t k = 0; k < stages; ++k) {
    if (const auto* b = std::get_if<Bump>(&modifiers_[k])) {
      const double x = (r - b->center) / b->half_width;
      if (std::abs(x) < 1.0) {
        const double q = 1.0 - x * x;
        const double w = b->amplitude * std::exp(-1.0 / q);
        const double g1 = -2.0 * x / (q * q);
        const double g2 = -2.0 / (q * q) - 8.0 * x * x / (q * q * q);
        const double h = b->half_width;
        v.phi += w;
        v.dphi += w * g1 / h;
        v.d2phi += w * (g1 * g1 + g2) / (h * h);
      }
    } else {
      const double coef = std::get<HarmonicFactor>(modifiers_[k]).coefficient;
      const RadialProfile parent = truncated(k);
      const double integral = inverseFluxIntegral(parent, r, kInf, quad::Options{1e-13, 30});
      const double w = 1.0 + coef * integral;
      const double r2 = r * r;
      const double phi2 = v.phi * v.phi;
      const double dw = -coef / (r2 * phi2);
      const double d2w = coef * (2.0 / (r2 * r * phi2) + 2.0 * v.dphi / (r2 * phi2 * v.phi));
      v = {v.phi * w, v.dphi * w + v.phi * dw, v.d2phi * w + 2.0 * v.dphi * dw + v.phi * d2w};
    }
  }
  return v;
}

inline RadialProfile RadialProfile::withHarmonicFactor(double coefficient) const {
  if (!std::isfinite(coefficient)) throw DomainError("harmonic factor: coefficient must be finite");
  RadialProfile p = *this;
  double r_min = rMin();
  if (coefficient < 0.0) {
    // The factor vanishes where I(r) = -1/coefficient; the new domain starts there.
    const double target = -1.0 / coefficient;
    double lo = r_min > 0.0 ? r_min * (1.0 + 1e-12) : 1e-12 * rScale();
    auto integral = [&](double r) { return inverseFluxIntegral(*this, r, kInf, quad::Options{1e-13, 30}); };
    if (integral(lo) > target) {
      double hi = std::max(lo, rScale());
      while (integral(hi) > target) hi *= 2.0;
      for (int it = 0; it < 200 && hi - lo > 4e-16 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (integral(mid) > target ? lo : hi) = mid;
      }
      r_min = hi;
    }
  }
  p.modifiers_.emplace_back(HarmonicFactor{coefficient});
  p.stage_r_min_.push_back(r_min);
  return p;
}

inline double inverseFluxIntegral(const RadialProfile& profile, double a, double b, const quad::Options& opt) {
  const double r_min = profile.rMin();
  if (!(a > r_min)) throw DomainError("inverseFluxIntegral: lower radius must exceed r_min");
  if (!(b >= a)) throw DomainError("inverseFluxIntegral: upper radius below lower radius");
  if (b == a) return 0.0;
  double total = 0.0;
  double start = a;
  if (r_min > 0.0 && a < 2.0 * r_min) {
    // Log-offset substitution resolves the (r - r_min)^(-2 alpha) growth.
    const double split = std::min(b, 2.0 * r_min);
    total += quad::integrateNearPole(
        [&](double offset) {
          const double s = r_min + offset;
          const double phi = profile.evaluateOffset(offset).phi;
          return 1.0 / (s * s * phi * phi);
        },
        r_min, a, split, opt);
    start = split;
  }
  if (r_min == 0.0 && start < profile.rScale() && b > start) {
    // s = e^u keeps the stretch below r_scale from dominating the v = 1/s map.
    const double split = std::min(b, profile.rScale());
    total += quad::integrate(
        [&](double u) {
          const double s = std::exp(u);
          const double phi = profile.evaluate(s).phi;
          return 1.0 / (s * phi * phi);
        },
        std::log(start), std::log(split), opt);
    start = split;
  }
  if (b > start) {
    if (std::isinf(b)) {
      total += quad::integrate(
          [&](double v) {
            const double phi = profile.evaluate(1.0 / v).phi;
            return 1.0 / (phi * phi);
          },
          0.0, 1.0 / start, opt);
    } else {
      total += quad::integrate(
          [&](double v) {
            const double phi = profile.evaluate(1.0 / v).phi;
            return 1.0 / (phi * phi);
          },
          1.0 / b, 1.0 / start, opt);
    }
  }
  return total;
}

}  // namespace zaslab
