#include <cmath>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "zaslab/elliptic.hpp"
#include "zaslab/imcf.hpp"
#include "zaslab/verify.hpp"

using namespace zaslab;

TEST(Hull, FlatSphereIsItsOwnHull) { EXPECT_EQ(minimizingHullRadius(RadialProfile::flat(), 1.0), 1.0); }

TEST(Hull, PositiveSchwarzschildJumpsToHorizon) {
  const RadialProfile p = RadialProfile::posSchwarzschild(1);
  const double hull = minimizingHullRadius(p, 0.3);
  EXPECT_NEAR(hull, 0.5, 1e-10);
  // grid minimization of A over [0.3, 5]
  const auto [x, a] = oracle::gridMinimize([&](double r) { return oracle::area(oracle::posSchwarzschildPhi(1), r); },
                                           0.3, 5.0);
  EXPECT_NEAR(x, 0.5, 1e-6);
  EXPECT_NEAR(hull, x, 1e-6);
}

TEST(Hull, NegativeSchwarzschildSpheresAreOutwardMinimizing) {
  const RadialProfile p = RadialProfile::negSchwarzschild(-1);
  const auto phi = oracle::negSchwarzschildPhi(-1);
  for (double r : {0.5001, 0.6, 1.0, 3.0}) {
    EXPECT_EQ(minimizingHullRadius(p, r), r);
    const auto [x, a] = oracle::gridMinimize([&](double s) { return oracle::area(phi, s); }, r, 10.0 * r);
    EXPECT_NEAR(x, r, 1e-9 * r);
  }
  EXPECT_THROW(minimizingHullRadius(p, 0.5), DomainError);
}

TEST(Hull, NeckProfileHasInteriorMinimum) {
  const RadialProfile p = neckProfile();
  const double hull = minimizingHullRadius(p, 0.06);
  EXPECT_GT(hull, 0.06);
  const auto phi = [](double r) { return std::sqrt(1.0 + 1.0 / r + 0.5 / (r * r * r)); };
  const auto [x, a] = oracle::gridMinimize([&](double r) { return oracle::area(phi, r); }, 0.06, 50.0, 20000);
  EXPECT_NEAR(hull, x, 1e-5);
}

TEST(Envelope, RadiusAtAreaInvertsArea) {
  const RadialProfile p = RadialProfile::boosted(0.5, 1);
  const AreaEnvelope env(p, 0.6, 1e4);
  for (double r : {0.7, 1.3, 8.0}) {
    const double a = sphereGeometry(p, r).area;
    EXPECT_NEAR(env.radiusAtArea(a), r, 1e-10 * r);
  }
}

TEST(Flow, FlatSpheresGrowExponentially) {
  const FlowTrace tr = weakFlow(RadialProfile::flat(), 1.0, std::log(4.0), 9);
  ASSERT_EQ(tr.samples.size(), 9u);
  EXPECT_TRUE(tr.jumps.empty());
  for (const auto& s : tr.samples) EXPECT_NEAR(s.r, std::exp(s.t / 2), 1e-10);
  EXPECT_NEAR(tr.samples.back().r, 2.0, 1e-10);
  EXPECT_NEAR(tr.samples.back().area, 16 * kPi, 1e-9);
}

TEST(Flow, NegativeSchwarzschildHasConstantMass) {
  const FlowTrace tr = weakFlow(RadialProfile::negSchwarzschild(-1), 0.6, 2.0, 64);
  EXPECT_TRUE(tr.jumps.empty());
  for (const auto& s : tr.samples) EXPECT_NEAR(s.m_H, -1.0, 1e-10);
}

TEST(Flow, PositiveSchwarzschildInitialJump) {
  const FlowTrace tr = weakFlow(RadialProfile::posSchwarzschild(1), 0.3, 3.0, 64);
  ASSERT_EQ(tr.jumps.size(), 1u);
  EXPECT_EQ(tr.jumps[0].t, 0.0);
  EXPECT_EQ(tr.jumps[0].r_before, 0.3);
  EXPECT_NEAR(tr.jumps[0].r_after, 0.5, 1e-10);
  for (const auto& s : tr.samples) EXPECT_NEAR(s.m_H, 1.0, 1e-10);
  EXPECT_NEAR(tr.A0, 16 * kPi, 1e-9);  // horizon areal radius 2m
}

TEST(Flow, BoostedMassRisesTowardAdm) {
  const RadialProfile p = RadialProfile::boosted(0.5, 1);
  const FlowTrace tr = weakFlow(p, 0.6, 12.0, 512);
  EXPECT_TRUE(tr.jumps.empty());
  const auto phi = oracle::boostedPhi(0.5, 1);
  EXPECT_NEAR(tr.samples.front().m_H, oracle::hawkingMass(phi, 0.6), 1e-6);
  EXPECT_NEAR(tr.samples.front().m_H, -5.574074074, 1e-8);
  for (std::size_t k = 1; k < tr.samples.size(); ++k) EXPECT_GE(tr.samples[k].m_H, tr.samples[k - 1].m_H - 1e-8);
  EXPECT_LT(tr.samples.back().m_H, 1.0);
  EXPECT_NEAR(extrapolatedHawkingLimit(tr), 1.0, 1e-4);
}

TEST(Flow, Errors) {
  EXPECT_THROW(weakFlow(RadialProfile::negSchwarzschild(-1), 0.4, 1.0, 8), DomainError);
  EXPECT_THROW(weakFlow(RadialProfile::flat(), 1.0, -1.0, 8), DomainError);
  EXPECT_THROW(weakFlow(RadialProfile::flat(), 1.0, 1.0, 1), DomainError);
}

TEST(Flow, TimeToRadius) {
  EXPECT_NEAR(flowTimeToRadius(RadialProfile::flat(), 1.0, 2.0), std::log(4.0), 1e-14);
}

TEST(Geroch, FlatAndNegativeSchwarzschildPass) {
  const SuiteReport flat = gerochReport(weakFlow(RadialProfile::flat(), 1.0, 2.0, 32), true, 1e-8, "flat");
  EXPECT_TRUE(flat.overall());
  EXPECT_EQ(flat.cases.back().status, CaseStatus::pass);
  const SuiteReport ns =
      gerochReport(weakFlow(RadialProfile::negSchwarzschild(-1), 0.6, 5.0, 128), true, 1e-8, "negSchwarzschild");
  EXPECT_EQ(ns.cases.back().status, CaseStatus::pass);
}

TEST(Geroch, DetectsInjectedViolation) {
  FlowTrace tr = weakFlow(RadialProfile::flat(), 1.0, 1.0, 8);
  tr.samples[4].m_H = -1e-3;
  const SuiteReport rep = gerochReport(tr, true, 1e-8);
  EXPECT_FALSE(rep.overall());
  const SuiteReport unmet = gerochReport(tr, false, 1e-8);
  EXPECT_TRUE(unmet.overall());
  EXPECT_EQ(unmet.cases.back().status, CaseStatus::hypothesis_unmet);
}

TEST(HawkingLimit, FlatAndSchwarzschild) {
  const RadialProfile flat = RadialProfile::flat();
  const SuiteReport f = hawkingLimitVsADM(flat, weakFlow(flat, 1.0, 16.0, 256), 1e-4);
  EXPECT_EQ(f.cases.front().status, CaseStatus::pass);
  EXPECT_NEAR(f.cases.front().quantities.at("lim_m_H"), 0.0, 1e-12);
  const RadialProfile ns = RadialProfile::negSchwarzschild(-1);
  const SuiteReport n = hawkingLimitVsADM(ns, weakFlow(ns, 0.6, 28.0, 256), 1e-4);
  EXPECT_EQ(n.cases.front().status, CaseStatus::pass);
  EXPECT_NEAR(n.cases.front().quantities.at("lim_m_H"), -1.0, 1e-9);
}

TEST(HawkingLimit, ShortTraceIsNotJudged) {
  const RadialProfile p = RadialProfile::boosted(0.5, 1);
  EXPECT_EQ(hawkingLimitVsADM(p, weakFlow(p, 0.6, 2.0, 16), 1e-4).cases.front().status, CaseStatus::hypothesis_unmet);
}

TEST(EnergyBound, Arithmetic) {
  EXPECT_NEAR(capacityEnergyBound(4 * kPi, 0.0), 16 * kPi, 1e-12);
  EXPECT_NEAR(capacityEnergyBound(4 * kPi, 0.0), 50.27, 1e-2);
  EXPECT_GE(capacityEnergyBound(4 * kPi, 0.0), capacitySurface(RadialProfile::flat(), 1.0));
  const double b = capacityEnergyBound(4 * kPi * 0.0625, -1.0);
  const double by_hand = 2 * std::sqrt(4 * kPi * kPi) + 2 * std::sqrt(std::pow(16 * kPi, 1.5) * std::sqrt(kPi) / 2);
  EXPECT_NEAR(b, by_hand, 1e-12);
  EXPECT_GE(b, capacitySurface(RadialProfile::negSchwarzschild(-1), 1.0));
  double prev = kInf;
  for (double a : {1.0, 1e-4, 1e-8, 1e-12, 1e-20}) {
    const double v = capacityEnergyBound(a, -3.0);
    EXPECT_LT(v, prev);
    prev = v;
  }
  EXPECT_LT(prev, 1e-3);  // A^(1/4) decay
}

TEST(EnergyBound, FlowTestEnergyBetweenCapacityAndBound) {
  for (const auto& [p, r] : {std::pair{RadialProfile::flat(), 1.0}, std::pair{RadialProfile::negSchwarzschild(-1), 1.0},
                             std::pair{RadialProfile::boosted(0.5, 1), 0.8}}) {
    const double e = imcfTestEnergy(p, r);
    const SphereGeometry s = sphereGeometry(p, r);
    EXPECT_GE(e, capacitySurface(p, r) * (1 - 1e-9)) << p.id();
    EXPECT_LE(e, capacityEnergyBound(s.area, hawkingMass(p, r))) << p.id();
  }
  // flat: |H| A = 8 pi r, r = e^(t/2): int_0^1 8 pi e^(t/2) dt
  EXPECT_NEAR(imcfTestEnergy(RadialProfile::flat(), 1.0), 16 * kPi * (std::exp(0.5) - 1), 1e-8);
}
