#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "zaslab/elliptic.hpp"
#include "zaslab/errors.hpp"
#include "zaslab/geometry.hpp"
#include "zaslab/limits.hpp"
#include "zaslab/profile.hpp"

namespace zaslab {

enum class MassKind { hawking, adm, regular_zas, zas_limit, conformal_shift };

inline const char* toString(MassKind kind) {
  switch (kind) {
    case MassKind::hawking: return "hawking";
    case MassKind::adm: return "adm";
    case MassKind::regular_zas: return "regular_zas";
    case MassKind::zas_limit: return "zas_limit";
    case MassKind::conformal_shift: return "conformal_shift";
  }
  return "unknown";
}

/// Intermediate quantities kept alongside a result. Ordered maps keep
/// serialized output deterministic.
struct Diagnostics {
  std::map<std::string, double> scalars;
  std::map<std::string, std::vector<double>> series;
  std::vector<std::string> notes;
};

struct MassReport {
  MassKind kind = MassKind::hawking;
  double value = 0.0;
  std::optional<double> r;
  Diagnostics diagnostics;
};

/// Hawking mass sqrt(|S|/16 pi) (1 - (1/16 pi) int H^2) of the centered sphere;
/// H is constant on it so the integral is H^2 |S|.
inline double hawkingMass(const RadialProfile& profile, double r) {
  const SphereGeometry s = sphereGeometry(profile, r);
  return std::sqrt(s.area / (16.0 * kPi)) * (1.0 - s.mean_curvature * s.mean_curvature * s.area / (16.0 * kPi));
}

inline double hawkingMassOffset(const RadialProfile& profile, double offset) {
  const SphereGeometry s = sphereGeometryOffset(profile, offset);
  return std::sqrt(s.area / (16.0 * kPi)) * (1.0 - s.mean_curvature * s.mean_curvature * s.area / (16.0 * kPi));
}

inline MassReport hawkingMassReport(const RadialProfile& profile, double r) {
  const SphereGeometry s = sphereGeometry(profile, r);
  MassReport rep{MassKind::hawking, hawkingMass(profile, r), r, {}};
  rep.diagnostics.scalars["area"] = s.area;
  rep.diagnostics.scalars["mean_curvature"] = s.mean_curvature;
  rep.diagnostics.scalars["areal_radius"] = s.areal_radius;
  return rep;
}

/// ADM mass 2 lim r (phi - 1). r (phi - 1) is sampled at R, 2R, 4R, 8R with
/// R = 2^10 r_scale and extrapolated by a Richardson table whose first error
/// exponent is the declared asymptotic order.
inline MassReport admMass(const RadialProfile& profile) {
  const int order = profile.asymptoticOrder();
  if (order < 1) throw DomainError("admMass: asymptotic order must be >= 1");
  MassReport rep{MassKind::adm, 0.0, std::nullopt, {}};
  double base = 1024.0 * profile.rScale();
  if (8.0 * base > profile.rMax()) {
    base = profile.rMax() / 8.0;
    if (!(base > profile.rMin())) throw DomainError("admMass: tabulated range too short for the far-field fit");
    rep.diagnostics.notes.push_back("sample radius limited by the tabulated range");
  }
  std::vector<double> radii, samples;
  for (int k = 0; k < 4; ++k) {
    const double r = std::ldexp(base, k);
    radii.push_back(r);
    samples.push_back(r * (profile.evaluate(r).phi - 1.0));
  }
  // Richardson table; level j eliminates r^-(order + j - 1).
  std::vector<std::vector<double>> table{samples};
  for (int j = 1; j < 4; ++j) {
    const double factor = std::ldexp(1.0, order + j - 1);
    const auto& prev = table.back();
    std::vector<double> next;
    for (std::size_t i = 0; i + 1 < prev.size(); ++i) next.push_back((factor * prev[i + 1] - prev[i]) / (factor - 1.0));
    table.push_back(std::move(next));
  }
  const double last = table[3][0];
  const double before = table[2][1];
  const double change = std::abs(last - before);
  if (change > std::max(1e-8 * std::abs(last), 1e-12)) {
    throw ConvergenceError("admMass: far-field extrapolation changed by " + std::to_string(change));
  }
  rep.value = 2.0 * last;
  rep.diagnostics.series["radii"] = radii;
  rep.diagnostics.series["r_times_phi_minus_1"] = samples;
  rep.diagnostics.scalars["monopole_coefficient"] = last;
  rep.diagnostics.scalars["extrapolation_change"] = change;
  return rep;
}

/// F = int_S nu(h)^(4/3) dA for the sphere at r and h vanishing on it.
/// nu(h) = |grad h|_g = c / (r^2 phi^4) is constant on the sphere.
inline double fluxIntegral(const RadialProfile& profile, const HarmonicFunction& h, double r) {
  if (!(r > profile.rMin())) throw DomainError("fluxIntegral: r must exceed r_min");
  if (h.inner_radius != r) throw MismatchError("fluxIntegral: harmonic function does not vanish on this sphere");
  const SphereGeometry s = sphereGeometry(profile, r);
  const double nu = h.normalDerivative(r);
  if (!(nu >= 0.0)) throw MismatchError("fluxIntegral: harmonic function decreasing outward");
  return s.area * std::pow(nu, 4.0 / 3.0);
}

/// -1/4 ((1/pi) F)^(3/2), defined for F >= 0.
inline double massFromFlux(double flux) {
  if (!(flux >= 0.0)) throw DomainError("massFromFlux: flux must be nonnegative");
  return -0.25 * std::pow(flux / kPi, 1.5);
}

/// Regular mass of the singularity from a resolution with background
/// lambda^4 delta. Pi is the sphere r = r_min, nu-bar = lambda^-2 d/dr and
/// dA-bar integrates to 4 pi r_min^2 lambda^4.
inline MassReport regularMass(const Resolution& res) {
  const RadialProfile& profile = res.profile;
  const double d = boundaryDerivative(profile);
  if (std::isnan(d)) throw NotRegularError("regularMass: " + profile.id() + " has no regular resolution");
  const double r_min = profile.rMin();
  const RadialWeight::Value lambda = res.weight(r_min);
  // phibar = phi / lambda and phi(r_min) = 0, so d phibar / dr = phi' / lambda there.
  const double dphibar =
      profile.admitsBoundaryEvaluation() ? res.phiBar(r_min).second : d / lambda.value;
  const double l2 = lambda.value * lambda.value;
  const double nu = std::abs(dphibar) / l2;
  const double area = 4.0 * kPi * r_min * r_min * l2 * l2;
  const double flux = std::pow(nu, 4.0 / 3.0) * area;
  MassReport rep{MassKind::regular_zas, massFromFlux(flux), r_min, {}};
  rep.diagnostics.scalars["boundary_derivative"] = d;
  rep.diagnostics.scalars["lambda_at_r_min"] = lambda.value;
  rep.diagnostics.scalars["flux"] = flux;
  rep.diagnostics.notes.push_back("resolution weight " + res.weight.label());
  return rep;
}

inline MassReport regularMass(const RadialProfile& profile) { return regularMass(defaultResolution(profile)); }

/// m_reg(p_i) of the sphere at r resolved by the harmonic function that is 0
/// on it and 1 at r_outer (or at infinity).
inline double sphereRegularMass(const RadialProfile& profile, double r, double r_outer = kInf,
                                double* flux_constant = nullptr) {
  const HarmonicFunction h = solveHarmonic(profile, r, r_outer);
  if (flux_constant) *flux_constant = h.c;
  return massFromFlux(fluxIntegral(profile, h, r));
}

namespace detail {

inline void finishZasLimit(MassReport& rep, const std::vector<double>& seq) {
  const SequenceLimit lim = extrapolateLimit(seq);
  rep.value = std::min(0.0, lim.value);
  rep.diagnostics.scalars["error_estimate"] = lim.error_estimate;
}

inline MassReport zasReportSkeleton(const RadialProfile& profile, double r_outer) {
  if (!hasZeroAreaSingularity(profile)) throw DomainError("zasMass: " + profile.id() + " has no ZAS");
  MassReport rep{MassKind::zas_limit, 0.0, profile.rMin(), {}};
  rep.diagnostics.notes.push_back("sphere-family ZAS mass (centered coordinate spheres only)");
  if (std::isfinite(r_outer)) {
    rep.diagnostics.notes.push_back("harmonic functions normalized to 1 on the sphere r = " + std::to_string(r_outer));
    rep.diagnostics.scalars["outer_radius"] = r_outer;
  }
  return rep;
}

}  // namespace detail

/// Sphere-family ZAS mass along the given radii (strictly decreasing to r_min).
/// Returns -inf when the sequence is falling with widening gaps and its last
/// three values are below the divergence threshold.
inline MassReport zasMass(const RadialProfile& profile, const std::vector<double>& radii, double r_outer = kInf,
                          double divergence_threshold = -1e6) {
  MassReport rep = detail::zasReportSkeleton(profile, r_outer);
  if (radii.size() < 2) throw DomainError("zasMass: need at least two radii");
  std::vector<double> seq, flux_constants;
  double prev = kInf;
  for (double r : radii) {
    if (!(r < prev)) throw DomainError("zasMass: radii must strictly decrease");
    prev = r;
    double c = 0.0;
    seq.push_back(sphereRegularMass(profile, r, r_outer, &c));
    flux_constants.push_back(c);
  }
  rep.diagnostics.series["radii"] = radii;
  rep.diagnostics.series["m_reg"] = seq;
  rep.diagnostics.series["c"] = flux_constants;
  if (fallsWithWideningGaps(seq)) {
    if (!belowThresholdAndDecreasing(seq, divergence_threshold)) {
      throw ConvergenceError("zasMass: sequence is falling without reaching the divergence threshold");
    }
    rep.value = -kInf;
    rep.diagnostics.notes.push_back("diverges to -inf");
    return rep;
  }
  detail::finishZasLimit(rep, seq);
  return rep;
}

/// Sphere-family ZAS mass on r_i = r_min (1 + 2^-i). Divergent sequences are
/// followed past last_index, up to max_index, until they pass the threshold.
inline MassReport zasMass(const RadialProfile& profile, const LimitOptions& opt = {}, double r_outer = kInf) {
  MassReport rep = detail::zasReportSkeleton(profile, r_outer);
  const double r_min = profile.rMin();
  std::vector<double> radii, seq, flux_constants;
  auto push = [&](int i) {
    const double r = r_min + std::ldexp(r_min, -i);
    if (!(r > r_min) || (!radii.empty() && !(r < radii.back()))) {
      throw ConvergenceError("zasMass: radii no longer resolvable in double precision");
    }
    double c = 0.0;
    seq.push_back(sphereRegularMass(profile, r, r_outer, &c));
    radii.push_back(r);
    flux_constants.push_back(c);
  };
  for (int i = opt.first_index; i <= opt.last_index; ++i) push(i);
  bool diverged = false;
  if (fallsWithWideningGaps(seq)) {
    int i = opt.last_index;
    while (!belowThresholdAndDecreasing(seq, opt.divergence_threshold)) {
      if (++i > opt.max_index) {
        rep.diagnostics.series["radii"] = radii;
        rep.diagnostics.series["m_reg"] = seq;
        throw ConvergenceError("zasMass: sequence falling without reaching the divergence threshold by i = " +
                               std::to_string(opt.max_index));
      }
      push(i);
    }
    diverged = true;
  }
  rep.diagnostics.series["radii"] = radii;
  rep.diagnostics.series["m_reg"] = seq;
  rep.diagnostics.series["c"] = flux_constants;
  if (diverged) {
    rep.value = -kInf;
    rep.diagnostics.notes.push_back("diverges to -inf");
    return rep;
  }
  detail::finishZasLimit(rep, seq);
  return rep;
}

/// ADM mass after multiplying phi by a g-harmonic factor 1 + C/r + o(1/r).
inline double conformalMassShift(double m, double C) { return m + 2.0 * C; }

}  // namespace zaslab
