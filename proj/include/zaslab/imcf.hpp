#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "zaslab/elliptic.hpp"
#include "zaslab/errors.hpp"
#include "zaslab/geometry.hpp"
#include "zaslab/mass.hpp"
#include "zaslab/profile.hpp"
#include "zaslab/quadrature.hpp"
#include "zaslab/report.hpp"

namespace zaslab {

/// Sphere areas A(r) on [r_start, r_end] with every interior local minimum
/// located to rounding accuracy. Supports the two queries weak IMCF needs:
/// the largest minimizer of A (the minimizing hull) and the generalized
/// inverse of the monotone envelope M(r) = min_{s >= r} A(s).
class AreaEnvelope {
 public:
  struct Jump {
    double area;      // A at the target sphere
    double r_before;  // largest radius below the bump with the same area
    double r_after;   // the strictly minimizing sphere flow jumps to
  };

  /// The grid extends past 64 r_scale and until A exceeds area_cap on an
  /// increasing branch.
  AreaEnvelope(const RadialProfile& profile, double r_start, double area_cap) : profile_(profile) {
    if (!(r_start > profile.rMin())) throw DomainError("AreaEnvelope: start radius must exceed r_min");
    if (r_start > profile.rMax()) throw DomainError("AreaEnvelope: start radius beyond tabulated range");
    const double r_min = profile.rMin();
    const double q = std::exp2(1.0 / 64.0);
    const double r_floor = 64.0 * profile.rScale();
    double r = r_start;
    double prev_slope = slopeSign(r);
    push(r, false);
    for (std::size_t n = 0;; ++n) {
      if (n > 64 * 4096) throw EnvelopeError("AreaEnvelope: area never exceeded the cap on " + profile.id());
      double next = (r_min > 0.0 && r - r_min < r_min) ? r_min + (r - r_min) * q : r * q;
      bool last = false;
      if (next >= profile.rMax()) {
        next = profile.rMax();
        last = true;
      }
      const double slope = slopeSign(next);
      if (prev_slope < 0.0 && slope >= 0.0) push(locateMinimum(r, next), true);
      push(next, false);
      r = next;
      prev_slope = slope;
      if (last || (r >= r_floor && slope > 0.0 && a_.back() > area_cap)) break;
    }
    // Largest minimizer; areas tied within 1e-12 go to the larger radius.
    double best = a_.front();
    hull_ = 0;
    for (std::size_t i = 1; i < a_.size(); ++i) {
      if (a_[i] <= best * (1.0 + 1e-12)) {
        hull_ = i;
        best = std::min(best, a_[i]);
      }
    }
    suffix_min_.assign(a_.size(), kInf);
    for (std::size_t i = a_.size() - 1; i-- > 0;) suffix_min_[i] = std::min(suffix_min_[i + 1], a_[i + 1]);
  }

  [[nodiscard]] double area(double r) const { return sphereGeometry(profile_, r).area; }
  [[nodiscard]] double hullRadius() const { return r_[hull_]; }
  [[nodiscard]] double hullArea() const { return a_[hull_]; }
  [[nodiscard]] double maxArea() const { return a_.back(); }
  [[nodiscard]] const std::vector<double>& radii() const noexcept { return r_; }
  [[nodiscard]] const std::vector<double>& areas() const noexcept { return a_; }

  /// min_{s >= r} A(s) on the grid, with r snapped to the next grid point.
  [[nodiscard]] double envelope(double r) const {
    auto it = std::lower_bound(r_.begin(), r_.end(), r);
    if (it == r_.end()) throw EnvelopeError("AreaEnvelope: radius beyond grid");
    const auto i = static_cast<std::size_t>(it - r_.begin());
    return std::min(a_[i], suffix_min_[i]);
  }

  /// Largest r >= hull with A(r) <= target, found by bisection.
  [[nodiscard]] double radiusAtArea(double target) const {
    if (target < a_[hull_] * (1.0 - 1e-12)) throw EnvelopeError("AreaEnvelope: target below the hull area");
    if (target <= a_[hull_]) return r_[hull_];
    std::size_t j = a_.size();
    for (std::size_t i = a_.size(); i-- > hull_;) {
      if (a_[i] <= target) {
        j = i;
        break;
      }
    }
    if (j + 1 >= a_.size()) throw EnvelopeError("AreaEnvelope: target area beyond the sampled range");
    return crossing(r_[j], r_[j + 1], target);
  }

  /// Jumps of r(t): local minima that are strict suffix minima and lie past
  /// the hull, in increasing order of area.
  [[nodiscard]] std::vector<Jump> jumps() const {
    std::vector<Jump> out;
    for (std::size_t b = hull_ + 1; b + 1 < a_.size(); ++b) {
      if (!is_min_[b]) continue;
      if (!(a_[b] < suffix_min_[b] - 1e-12 * a_[b])) continue;
      if (!(a_[b] > a_[hull_] * (1.0 + 1e-12))) continue;
      std::size_t k = b;
      while (k > hull_ && a_[k - 1] >= a_[b]) --k;
      if (k == hull_ && a_[k] >= a_[b]) continue;
      out.push_back({a_[b], crossing(r_[k - 1], r_[k], a_[b]), r_[b]});
    }
    return out;
  }

 private:
  // Sign of A'(r), which is the sign of phi + 2 r phi'.
  [[nodiscard]] double slopeSign(double r) const {
    const ProfileValue v = profile_.evaluate(r);
    return v.phi + 2.0 * r * v.dphi;
  }

  void push(double r, bool is_min) {
    r_.push_back(r);
    a_.push_back(area(r));
    is_min_.push_back(is_min);
  }

  [[nodiscard]] double locateMinimum(double lo, double hi) const {
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (!(mid > lo && mid < hi)) break;
      (slopeSign(mid) < 0.0 ? lo : hi) = mid;
    }
    return hi;
  }

  // Largest point of [lo, hi] with A <= target, given A(lo) <= target < A(hi).
  [[nodiscard]] double crossing(double lo, double hi, double target) const {
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (!(mid > lo && mid < hi)) break;
      (area(mid) <= target ? lo : hi) = mid;
    }
    return lo;
  }

  RadialProfile profile_;
  std::vector<double> r_;
  std::vector<double> a_;
  std::vector<bool> is_min_;
  std::vector<double> suffix_min_;  // min of a_ strictly after each index
  std::size_t hull_ = 0;
};

/// Radius of the minimizing hull of the sphere at r: the largest minimizer of
/// A over [r, inf).
inline double minimizingHullRadius(const RadialProfile& profile, double r) {
  if (!(r > profile.rMin())) throw DomainError("minimizingHullRadius: r must exceed r_min");
  const double a = sphereGeometry(profile, r).area;
  return AreaEnvelope(profile, r, a).hullRadius();
}

struct FlowSample {
  double t;
  double r;
  double area;
  double H;
  double m_H;
};

struct FlowJump {
  double t;
  double r_before;
  double r_after;
};

struct FlowTrace {
  std::vector<FlowSample> samples;
  std::vector<FlowJump> jumps;
  double A0 = 0.0;
  double m0 = 0.0;
};

inline FlowSample flowSample(const RadialProfile& profile, double t, double r) {
  const SphereGeometry s = sphereGeometry(profile, r);
  return {t, r, s.area, s.mean_curvature, hawkingMass(profile, r)};
}

/// Weak IMCF of the centered sphere at r0, sampled at n_samples times
/// uniformly spaced on [0, t_max]. The surface at time t is the outermost
/// sphere of area A0 e^t; jumps over bumps of A are recorded.
inline FlowTrace weakFlow(const RadialProfile& profile, double r0, double t_max, int n_samples) {
  if (!(r0 > profile.rMin())) throw DomainError("weakFlow: r0 must exceed r_min");
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw DomainError("weakFlow: t_max must be positive");
  if (n_samples < 2) throw DomainError("weakFlow: need at least two samples");
  const double a_start = sphereGeometry(profile, r0).area;
  AreaEnvelope env(profile, r0, a_start);
  const double hull = env.hullRadius();
  FlowTrace trace;
  trace.A0 = env.hullArea();
  trace.m0 = hawkingMass(profile, hull);
  const double cap = trace.A0 * std::exp(t_max);
  if (env.maxArea() <= cap) env = AreaEnvelope(profile, r0, cap);
  if (env.maxArea() <= cap) throw EnvelopeError("weakFlow: profile range too short for t_max");
  if (hull != r0) trace.jumps.push_back({0.0, r0, hull});
  for (const auto& j : env.jumps()) {
    const double t = std::log(j.area / trace.A0);
    if (t <= t_max) trace.jumps.push_back({t, j.r_before, j.r_after});
  }
  trace.samples.reserve(static_cast<std::size_t>(n_samples));
  for (int k = 0; k < n_samples; ++k) {
    const double t = (k + 1 == n_samples) ? t_max : t_max * k / (n_samples - 1);
    const double r = k == 0 ? hull : env.radiusAtArea(trace.A0 * std::exp(t));
    trace.samples.push_back(flowSample(profile, t, r));
  }
  return trace;
}

/// Flow time at which weak IMCF from r0 reaches the sphere at r_target.
inline double flowTimeToRadius(const RadialProfile& profile, double r0, double r_target) {
  const double hull = minimizingHullRadius(profile, r0);
  return std::log(sphereGeometry(profile, r_target).area / sphereGeometry(profile, hull).area);
}

/// Geroch monotonicity audit: every adjacent pair must have
/// m_H(t_{k+1}) >= m_H(t_k) - tol. Only asserted when R >= 0 was verified.
inline SuiteReport gerochReport(const FlowTrace& trace, bool nonnegative_scalar_curvature, double tol,
                                const std::string& profile_id = "") {
  SuiteReport rep;
  rep.suite = "geroch";
  rep.tolerances["monotonicity"] = tol;
  double worst = kInf;
  std::size_t violations = 0;
  for (std::size_t k = 0; k + 1 < trace.samples.size(); ++k) {
    const double step = trace.samples[k + 1].m_H - trace.samples[k].m_H;
    worst = std::min(worst, step);
    if (step < -tol) {
      ++violations;
      SuiteCase c = inequalityCase(profile_id, "m_H(t_k+1) >= m_H(t_k)", trace.samples[k + 1].m_H,
                                   trace.samples[k].m_H, tol);
      c.quantities["t_k"] = trace.samples[k].t;
      c.quantities["t_k+1"] = trace.samples[k + 1].t;
      if (!nonnegative_scalar_curvature) c.status = CaseStatus::informational;
      rep.cases.push_back(c);
    }
  }
  SuiteCase summary;
  summary.profile_id = profile_id;
  summary.relation = "m_H nondecreasing along the flow";
  summary.margin = std::isfinite(worst) ? worst : 0.0;
  summary.tolerance = tol;
  summary.quantities["samples"] = static_cast<double>(trace.samples.size());
  summary.quantities["violations"] = static_cast<double>(violations);
  summary.quantities["m_H_first"] = trace.samples.empty() ? 0.0 : trace.samples.front().m_H;
  summary.quantities["m_H_last"] = trace.samples.empty() ? 0.0 : trace.samples.back().m_H;
  if (!nonnegative_scalar_curvature) {
    summary.status = CaseStatus::hypothesis_unmet;
    summary.note = "scalar curvature not verified nonnegative; monotonicity not asserted";
  } else {
    summary.status = violations == 0 ? CaseStatus::pass : CaseStatus::fail;
  }
  rep.cases.push_back(summary);
  return rep;
}

/// lim m_H along the flow, extrapolated to 1/r = 0 through the samples
/// nearest to R, R/2 and R/4 (R the final radius) by Neville's scheme.
inline double extrapolatedHawkingLimit(const FlowTrace& trace) {
  if (trace.samples.size() < 3) throw ConvergenceError("extrapolatedHawkingLimit: need three samples");
  const double r_last = trace.samples.back().r;
  std::vector<std::size_t> picks{trace.samples.size() - 1};
  for (double f : {0.5, 0.25}) {
    std::size_t best = 0;
    for (std::size_t k = 0; k < trace.samples.size(); ++k) {
      if (std::abs(trace.samples[k].r - f * r_last) < std::abs(trace.samples[best].r - f * r_last)) best = k;
    }
    picks.push_back(best);
  }
  std::sort(picks.begin(), picks.end());
  picks.erase(std::unique(picks.begin(), picks.end()), picks.end());
  if (picks.size() < 3) return trace.samples.back().m_H;
  double x[3], p[3];
  for (int i = 0; i < 3; ++i) {
    x[i] = 1.0 / trace.samples[picks[static_cast<std::size_t>(i)]].r;
    p[i] = trace.samples[picks[static_cast<std::size_t>(i)]].m_H;
  }
  for (int level = 1; level < 3; ++level) {
    for (int i = 0; i + level < 3; ++i) p[i] = (x[i + level] * p[i] - x[i] * p[i + 1]) / (x[i + level] - x[i]);
  }
  return p[0];
}

/// lim m_H(N_t) <= m_ADM. Requires the trace to reach 2^10 r_scale.
inline SuiteReport hawkingLimitVsADM(const RadialProfile& profile, const FlowTrace& trace, double tol) {
  SuiteReport rep;
  rep.suite = "hawking-limit";
  rep.tolerances["limit"] = tol;
  const double adm = admMass(profile).value;
  const double lim = extrapolatedHawkingLimit(trace);
  SuiteCase c = inequalityCase(profile.id(), "lim m_H(N_t) <= m_ADM", adm, lim, tol);
  c.quantities["m_ADM"] = adm;
  c.quantities["lim_m_H"] = lim;
  c.quantities["final_r"] = trace.samples.back().r;
  if (trace.samples.back().r < 1024.0 * profile.rScale()) {
    c.status = CaseStatus::hypothesis_unmet;
    c.note = "trace ends before 2^10 r_scale";
  }
  rep.cases.push_back(c);
  return rep;
}

/// 2 sqrt(alpha) + 2 sqrt(beta) with alpha = 16 pi A0 and
/// beta = (16 pi)^(3/2) sqrt(A0) |m0|.
inline double capacityEnergyBound(double A0, double m0) {
  if (!(A0 >= 0.0)) throw DomainError("capacityEnergyBound: area must be nonnegative");
  const double alpha = 16.0 * kPi * A0;
  const double beta = std::pow(16.0 * kPi, 1.5) * std::sqrt(A0) * std::abs(m0);
  return 2.0 * std::sqrt(alpha) + 2.0 * std::sqrt(beta);
}

/// Energy of the test function u = 1 - t on [0, 1] (0 afterwards) built from
/// the weak flow out of the sphere at r0: int_0^1 int_{N_t} |H| dA dt.
inline double imcfTestEnergy(const RadialProfile& profile, double r0) {
  const double a_start = sphereGeometry(profile, r0).area;
  AreaEnvelope env(profile, r0, a_start);
  const double A0 = env.hullArea();
  if (env.maxArea() <= A0 * std::exp(1.0)) env = AreaEnvelope(profile, r0, A0 * std::exp(1.0));
  std::vector<double> cuts{0.0};
  for (const auto& j : env.jumps()) {
    const double t = std::log(j.area / A0);
    if (t > 0.0 && t < 1.0) cuts.push_back(t);
  }
  cuts.push_back(1.0);
  double total = 0.0;
  auto integrand = [&](double t) {
    const double area = A0 * std::exp(t);
    const double r = t == 0.0 ? env.hullRadius() : env.radiusAtArea(area);
    return std::abs(sphereGeometry(profile, r).mean_curvature) * area;
  };
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    total += quad::integrate(integrand, cuts[i], cuts[i + 1], quad::Options{1e-9, 30, 4096});
  }
  return total;
}

}  // namespace zaslab
