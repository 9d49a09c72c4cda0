#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "zaslab/elliptic.hpp"
#include "zaslab/geometry.hpp"
#include "zaslab/imcf.hpp"
#include "zaslab/mass.hpp"
#include "zaslab/profile.hpp"
#include "zaslab/report.hpp"

namespace zaslab {

struct Tolerances {
  double equality = 1e-6;  // relative
  double limit = 1e-4;
  double identity = 1e-9;
  double monotonicity = 1e-8;
  double hull = 1e-10;

  [[nodiscard]] Tolerances scaled(double factor) const {
    return {equality * factor, limit * factor, identity * factor, monotonicity * factor, hull * factor};
  }
};

inline std::vector<RadialProfile> defaultCatalog() {
  return {RadialProfile::flat(),
          RadialProfile::negSchwarzschild(-1.0),
          RadialProfile::posSchwarzschild(1.0),
          RadialProfile::powerLaw(0.25, 1.0),
          RadialProfile::powerLaw(0.75, 1.0),
          RadialProfile::boosted(0.5, 1.0)};
}

/// Tabulated phi = sqrt(1 + 1/r + 1/(2 r^3)) on [0.05, 2^20]: areas fall to a
/// minimal neck at r = 1 and grow again, so every sphere inside the neck has
/// the neck as its minimizing hull, and spheres close to r = 0.05 carry
/// negative Hawking mass.
inline RadialProfile neckProfile() {
  std::vector<std::pair<double, double>> samples;
  const double r_lo = 0.05, r_hi = 1048576.0;
  const int per_octave = 256;
  const int n = static_cast<int>(std::ceil(std::log2(r_hi / r_lo) * per_octave));
  for (int k = 0; k <= n; ++k) {
    const double r = k == n ? r_hi : r_lo * std::exp2(static_cast<double>(k) / per_octave);
    samples.emplace_back(r, std::sqrt(1.0 + 1.0 / r + 0.5 / (r * r * r)));
  }
  return RadialProfile::tabulated(samples, 1);
}

namespace detail {

inline SuiteCase infoCase(const std::string& id, const std::string& relation, const std::string& note) {
  SuiteCase c;
  c.profile_id = id;
  c.relation = relation;
  c.status = CaseStatus::informational;
  c.note = note;
  return c;
}

// Spheres used for per-sphere checks: close to the singularity and out to a
// few r_scale.
inline std::vector<double> probeRadii(const RadialProfile& profile) {
  const double r_min = profile.rMin();
  std::vector<double> radii;
  if (r_min > 0.0) {
    for (int k : {12, 8, 4, 2, 1}) radii.push_back(r_min + std::ldexp(r_min, -k));
    radii.push_back(2.0 * r_min + profile.rScale());
  } else {
    for (double f : {0.25, 0.6, 1.0, 2.0, 4.0}) radii.push_back(f * profile.rScale());
  }
  return radii;
}

inline bool isSchwarzschild(const RadialProfile& p) {
  return !p.isModified() &&
         (p.kind() == ProfileKind::negSchwarzschild || p.kind() == ProfileKind::posSchwarzschild);
}

}  // namespace detail

/// m_ADM >= m_ZAS for every profile with a ZAS and R >= 0.
inline SuiteReport penroseSuite(const std::vector<RadialProfile>& catalog, const Tolerances& tol = {}) {
  SuiteReport rep;
  rep.suite = "penrose";
  rep.tolerances["limit"] = tol.limit;
  const std::string relation = "m_ADM >= m_ZAS";
  for (const auto& p : catalog) {
    const ValidityReport v = validateProfile(p, tol.identity);
    if (!v.zero_area_singularity) {
      rep.cases.push_back(detail::infoCase(p.id(), relation, "no zero area singularity; not applicable"));
      continue;
    }
    const double adm = admMass(p).value;
    const MassReport zas = zasMass(p);
    SuiteCase c = inequalityCase(p.id(), relation, adm, zas.value, tol.limit);
    c.quantities["m_ADM"] = adm;
    c.quantities["m_ZAS"] = zas.value;
    c.quantities["min_scalar_curvature"] = v.min_scalar_curvature;
    c.note = "sphere-family ZAS mass";
    if (std::isinf(zas.value)) c.note += "; m_ZAS = -inf, holds trivially";
    if (v.regular) {
      const double reg = regularMass(p).value;
      c.quantities["m_reg"] = reg;
    }
    if (!v.nonnegative_scalar_curvature) {
      c.status = CaseStatus::hypothesis_unmet;
      c.note += "; scalar curvature negative somewhere";
    }
    rep.cases.push_back(c);
  }
  return rep;
}

/// Capacity theorem checks: positive capacity forces m_H -> -inf on the
/// shrinking spheres; bounded m_H forces zero capacity; the flow energy bound
/// dominates the capacity of outward-minimizing spheres.
inline SuiteReport capacityTheoremSuite(const std::vector<RadialProfile>& catalog, const Tolerances& tol = {}) {
  SuiteReport rep;
  rep.suite = "capacity";
  rep.tolerances["equality"] = tol.equality;
  rep.tolerances["identity"] = tol.identity;
  for (const auto& p : catalog) {
    const ValidityReport v = validateProfile(p, tol.identity);
    if (v.zero_area_singularity) {
      const CapacityLimit cap = capacityZAS(p);
      std::vector<double> m_h;
      for (int i = 4; i <= 20; ++i) m_h.push_back(hawkingMassOffset(p, std::ldexp(p.rMin(), -i)));
      const std::size_t n = m_h.size();
      // power-law blow-up: each halving of the offset multiplies m_H by a fixed factor > 1
      bool diverging = m_h[n - 1] < -1e2;
      for (std::size_t k = n - 3; k < n; ++k) diverging = diverging && m_h[k] < 0.0 && m_h[k] / m_h[k - 1] > 1.1;
      SuiteCase c;
      c.profile_id = p.id();
      c.quantities["capacity"] = cap.value;
      c.quantities["capacity_error_estimate"] = cap.error_estimate;
      c.quantities["m_H_last"] = m_h.back();
      c.tolerance = tol.equality;
      if (cap.value > tol.equality) {
        c.relation = "C(p) > 0 implies m_H(r_i) -> -inf";
        c.margin = -1e3 - m_h.back();
        c.status = diverging ? CaseStatus::pass : CaseStatus::fail;
      } else if (!diverging) {
        c.relation = "m_H(r_i) bounded implies C(p) = 0";
        c.margin = tol.equality - cap.value;
        c.status = CaseStatus::pass;
      } else {
        c.relation = "C(p) = 0 with m_H(r_i) -> -inf";
        c.status = CaseStatus::informational;
        c.note = "contrapositive not violated";
      }
      if (!v.nonnegative_scalar_curvature && c.status != CaseStatus::informational) {
        c.status = CaseStatus::hypothesis_unmet;
        c.note = "scalar curvature negative somewhere";
      }
      rep.cases.push_back(c);
    }
    for (double r : detail::probeRadii(p)) {
      const double hull = minimizingHullRadius(p, r);
      const std::string relation = "2 sqrt(alpha) + 2 sqrt(beta) >= C(S_r)";
      if (hull != r) {
        SuiteCase c = detail::infoCase(p.id(), relation, "sphere not outward-minimizing; skipped");
        c.quantities["r"] = r;
        c.quantities["hull"] = hull;
        rep.cases.push_back(c);
        continue;
      }
      const SphereGeometry s = sphereGeometry(p, r);
      const double m0 = hawkingMass(p, r);
      const double bound = capacityEnergyBound(s.area, m0);
      const double cap = capacitySurface(p, r);
      const double energy = imcfTestEnergy(p, r);
      SuiteCase c = inequalityCase(p.id(), relation, bound, cap, tol.identity * std::max(1.0, cap));
      c.quantities["r"] = r;
      c.quantities["area"] = s.area;
      c.quantities["m_H"] = m0;
      c.quantities["bound"] = bound;
      c.quantities["capacity"] = cap;
      c.quantities["flow_test_energy"] = energy;
      if (!(energy >= cap * (1.0 - tol.identity) && energy <= bound * (1.0 + tol.identity))) {
        c.status = CaseStatus::fail;
        c.note = "flow test-function energy outside [capacity, bound]";
      }
      if (!v.nonnegative_scalar_curvature) {
        c.status = CaseStatus::hypothesis_unmet;
        c.note = "scalar curvature negative somewhere";
      }
      rep.cases.push_back(c);
    }
  }
  return rep;
}

/// Weights for the resolution-independence suite: identity, 1 + e^-r, the
/// constant 2 and `random_count` seeded gaussian / exponential bumps.
inline std::vector<RadialWeight> resolutionWeights(int random_count = 10, unsigned seed = 20240611u) {
  std::vector<RadialWeight> weights{RadialWeight::constant(1.0), RadialWeight::exponential(1.0, 1.0),
                                    RadialWeight::constant(2.0)};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> amp(-0.9, 2.0), rate(0.1, 3.0), center(0.0, 3.0);
  for (int k = 0; k < random_count; ++k) {
    const double a = amp(rng), b = rate(rng), c = center(rng);
    weights.push_back(k % 2 == 0 ? RadialWeight::gaussian(a, b, c) : RadialWeight::exponential(a, b));
  }
  return weights;
}

/// Regular mass is the same for every rescaled resolution.
inline SuiteReport resolutionIndependenceSuite(const std::vector<RadialProfile>& catalog,
                                               const std::vector<RadialWeight>& weights, const Tolerances& tol = {}) {
  SuiteReport rep;
  rep.suite = "resolution";
  rep.tolerances["identity"] = tol.identity;
  for (const auto& p : catalog) {
    if (!hasRegularSingularity(p)) continue;
    const Resolution base = defaultResolution(p);
    const double m = regularMass(base).value;
    for (const auto& w : weights) {
      const double mw = regularMass(rescaleResolution(base, w)).value;
      SuiteCase c = equalityCase(p.id(), "m_reg(lambda) = m_reg(1), lambda = " + w.label(), mw, m, tol.identity);
      c.quantities["m_reg"] = m;
      c.quantities["m_reg_rescaled"] = mw;
      rep.cases.push_back(c);
    }
  }
  return rep;
}

inline SuiteReport resolutionIndependenceSuite(const std::vector<RadialProfile>& catalog, const Tolerances& tol = {}) {
  return resolutionIndependenceSuite(catalog, resolutionWeights(), tol);
}

namespace detail {

inline bool sameMass(double a, double b, double tol) {
  if (std::isinf(a) || std::isinf(b)) return a == b;
  return std::abs(a - b) <= tol;
}

inline SuiteCase massAgreement(const std::string& id, const std::string& relation, double a, double b, double tol) {
  SuiteCase c;
  c.profile_id = id;
  c.relation = relation;
  c.tolerance = tol;
  c.quantities["reference"] = a;
  c.quantities["value"] = b;
  const double diff = (a == b) ? 0.0 : std::abs(a - b);
  c.margin = tol - diff;
  c.status = sameMass(a, b, tol) ? CaseStatus::pass : CaseStatus::fail;
  return c;
}

}  // namespace detail

/// Locality: the ZAS mass only sees a neighborhood of the singularity.
/// Compactly supported bumps beyond r_sep = 4 r_min leave it unchanged, and
/// normalizing the harmonic functions to 1 on the sphere r_sep instead of at
/// infinity gives the same limit.
inline SuiteReport localitySuite(const std::vector<RadialProfile>& catalog, const Tolerances& tol = {}) {
  SuiteReport rep;
  rep.suite = "locality";
  rep.tolerances["limit"] = tol.limit;
  for (const auto& p : catalog) {
    if (!hasZeroAreaSingularity(p)) continue;
    const double r_min = p.rMin();
    const double r_sep = 4.0 * r_min;
    const double half = r_min;
    const double center = r_sep + half;
    double phi_min = kInf;
    for (int k = 0; k <= 64; ++k) phi_min = std::min(phi_min, p.phi(r_sep + 2.0 * half * k / 64.0));
    const double reference = zasMass(p).value;
    for (double amplitude : {0.0, 0.5, -phi_min}) {
      const RadialProfile q = p.withBump({center, half, amplitude});
      const double m = zasMass(q).value;
      SuiteCase c = detail::massAgreement(q.id(), "m_ZAS(bumped) = m_ZAS(original)", reference, m, tol.limit);
      c.quantities["r_sep"] = r_sep;
      c.quantities["bump_amplitude"] = amplitude;
      if (amplitude == 0.0) {
        c.relation = "m_ZAS(zero bump) == m_ZAS(original)";
        c.status = (m == reference) ? CaseStatus::pass : CaseStatus::fail;
      }
      rep.cases.push_back(c);
      const double m_sep = zasMass(q, LimitOptions{}, r_sep).value;
      SuiteCase d = detail::massAgreement(q.id(), "m_ZAS(h = 1 on S_sep) = m_ZAS", reference, m_sep, tol.limit);
      d.quantities["r_sep"] = r_sep;
      d.quantities["bump_amplitude"] = amplitude;
      rep.cases.push_back(d);
    }
  }
  return rep;
}

/// m_H(S) <= m_H(hull(S)) whenever one of them is negative.
inline SuiteReport hullMonotonicitySuite(const std::vector<RadialProfile>& catalog, const Tolerances& tol = {},
                                         bool include_neck = true) {
  SuiteReport rep;
  rep.suite = "hull";
  rep.tolerances["hull"] = tol.hull;
  std::vector<RadialProfile> profiles = catalog;
  std::vector<std::vector<double>> radii;
  for (const auto& p : catalog) radii.push_back(detail::probeRadii(p));
  if (include_neck) {
    profiles.push_back(neckProfile());
    radii.push_back({0.06, 0.1, 0.2, 0.5, 0.9, 1.0, 2.0});
  }
  const std::string relation = "m_H(S) <= m_H(hull(S))";
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    const auto& p = profiles[i];
    int self_hulls = 0;
    for (double r : radii[i]) {
      const double hull = minimizingHullRadius(p, r);
      if (hull == r) {
        ++self_hulls;
        continue;
      }
      const double m_r = hawkingMass(p, r);
      const double m_hull = hawkingMass(p, hull);
      SuiteCase c = inequalityCase(p.id(), relation, m_hull, m_r, tol.hull);
      c.quantities["r"] = r;
      c.quantities["hull"] = hull;
      c.quantities["m_H"] = m_r;
      c.quantities["m_H_hull"] = m_hull;
      if (!(m_r < 0.0 || m_hull < 0.0)) {
        c.status = CaseStatus::hypothesis_unmet;
        c.note = "neither Hawking mass negative";
      }
      rep.cases.push_back(c);
    }
    if (self_hulls > 0) {
      SuiteCase c = equalityCase(p.id(), relation + " (hull = S)", 0.0, 0.0, tol.hull);
      c.quantities["spheres"] = self_hulls;
      c.note = "outward-minimizing spheres are their own hulls";
      rep.cases.push_back(c);
    }
  }
  return rep;
}

/// Starting radius of the audited flow: 1.2 r_min for singular profiles,
/// 0.6 r_scale otherwise.
inline double gerochStartRadius(const RadialProfile& p) {
  return p.rMin() > 0.0 ? 1.2 * p.rMin() : 0.6 * p.rScale();
}

/// Geroch monotonicity and lim m_H <= m_ADM along weak IMCF traces run out
/// past 2^11 r_scale.
inline SuiteReport gerochSuite(const std::vector<RadialProfile>& catalog, const Tolerances& tol = {},
                               int n_samples = 512) {
  SuiteReport rep;
  rep.suite = "geroch";
  rep.tolerances["monotonicity"] = tol.monotonicity;
  rep.tolerances["limit"] = tol.limit;
  for (const auto& p : catalog) {
    const ValidityReport v = validateProfile(p, tol.identity);
    const double r0 = gerochStartRadius(p);
    const double t_max = std::max(10.0, flowTimeToRadius(p, r0, 2048.0 * p.rScale()));
    const FlowTrace trace = weakFlow(p, r0, t_max, n_samples);
    SuiteReport g = gerochReport(trace, v.nonnegative_scalar_curvature, tol.monotonicity, p.id());
    for (auto& c : g.cases) rep.cases.push_back(c);
    SuiteReport h = hawkingLimitVsADM(p, trace, tol.limit);
    for (auto& c : h.cases) rep.cases.push_back(c);
    if (detail::isSchwarzschild(p)) {
      double worst = 0.0;
      for (const auto& s : trace.samples) worst = std::max(worst, std::abs(s.m_H - p.mass()));
      SuiteCase c = equalityCase(p.id(), "m_H constant along the flow", worst, 0.0, tol.identity * 0.1);
      rep.cases.push_back(c);
      const double lim = h.cases.front().quantities.at("lim_m_H");
      const double adm = h.cases.front().quantities.at("m_ADM");
      rep.cases.push_back(equalityCase(p.id(), "lim m_H(N_t) = m_ADM", lim, adm, tol.limit));
    }
  }
  return rep;
}

inline const std::vector<std::string>& suiteNames() {
  static const std::vector<std::string> names{"penrose", "capacity", "resolution", "locality", "geroch", "hull"};
  return names;
}

/// Runs one suite by name, or every suite for "all".
inline SuiteReport runSuite(const std::string& name, const std::vector<RadialProfile>& catalog,
                            const Tolerances& tol = {}) {
  if (name == "penrose") return penroseSuite(catalog, tol);
  if (name == "capacity") return capacityTheoremSuite(catalog, tol);
  if (name == "resolution") return resolutionIndependenceSuite(catalog, tol);
  if (name == "locality") return localitySuite(catalog, tol);
  if (name == "geroch") return gerochSuite(catalog, tol);
  if (name == "hull") return hullMonotonicitySuite(catalog, tol);
  if (name == "all") {
    SuiteReport all;
    all.suite = "all";
    for (const auto& n : suiteNames()) all.append(runSuite(n, catalog, tol));
    return all;
  }
  throw DomainError("unknown suite '" + name + "'");
}

}  // namespace zaslab
