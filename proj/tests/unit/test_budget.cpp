#include <gtest/gtest.h>

#include <cmath>

#include "bhd/budget.hpp"
#include "bhd/constants.hpp"
#include "bhd/errors.hpp"
#include "oracles.hpp"

using namespace bhd;

namespace {

DifferentialCoefficients unbalanced(double cmrr) {
  const HomodyneOptics o{0.5, 0.0, 0.98, 0.98};
  const auto b = balance_for_cmrr(o, Topology::variable_gain, 2e4, cmrr);
  return subtract_output(derive_coefficients(LocalOscillator::from_power(1e-3), o), b.g1, b.g2,
                         Topology::variable_gain);
}

}  // namespace

TEST(HannKernel, MatchesWindowTransform) {
  for (double u : {0.0, 0.1, 0.5, 0.9, 1.0, 1.5, 2.25, 3.7, 5.5}) {
    EXPECT_NEAR(hann_kernel(u), oracle::hann_response(u, 8192), 1e-4 * (1.0 + hann_kernel(0.0))) << u;
  }
  EXPECT_NEAR(hann_kernel(0.0), 0.25 / 0.375, 1e-12);
  EXPECT_NEAR(hann_kernel(2.0), 0.0, 1e-30);
}

TEST(HannKernel, UnitArea) {
  double acc = 0.0;
  const double h = 1e-3;
  for (double u = -200.0 + h / 2; u < 200.0; u += h) acc += hann_kernel(u) * h;
  EXPECT_NEAR(acc, 1.0, 1e-5);
}

TEST(Budget, VacuumOnlyIsShotFloor) {
  const auto d = unbalanced(40.0);
  const double e2 = kElectronCharge * kElectronCharge;
  const double expect = e2 * 2.0 *
                        (d.g1 * d.diode1_scaled.dc + d.g2 * d.diode2_scaled.dc);
  EXPECT_NEAR(quantum_shot_floor(d) / expect, 1.0, 1e-12);
  EXPECT_NEAR(budget_psd(d, {}, 123.0), quantum_shot_floor(d), 0.0);
}

TEST(Budget, ExcessAndReplacement) {
  const auto d = unbalanced(30.0);
  const double e2x2 = 2.0 * kElectronCharge * kElectronCharge;
  const double floor = quantum_shot_floor(d);
  const std::vector<BudgetSource> lo{{"rin", "lo", NoisePsd::white(1e4)}};
  EXPECT_NEAR(budget_psd(d, lo, 10.0) - floor, e2x2 * d.diff.c_lo * d.diff.c_lo * 1e4, 1e-9 * floor);
  const std::vector<BudgetSource> sq{{"sq", "signal", NoisePsd::white(0.1), true}};
  EXPECT_NEAR(budget_psd(d, sq, 10.0) - floor, e2x2 * d.diff.c_sig * d.diff.c_sig * (0.1 - 1.0), 1e-9 * floor);
  const std::vector<BudgetSource> add{{"dark", "additive", NoisePsd::white(3e-15)}};
  EXPECT_NEAR(budget_psd(d, add, 10.0) - floor, 3e-15, 1e-9 * floor);
}

TEST(Budget, UnmappedSourceNamesItself) {
  const auto d = unbalanced(30.0);
  try {
    budget_psd(d, {{"mystery", "arm7", NoisePsd::white(1.0)}}, 1.0);
    FAIL();
  } catch (const UnmappedSourceError& e) {
    EXPECT_NE(std::string(e.what()).find("mystery"), std::string::npos);
  }
}

TEST(Budget, WhiteSourcesGiveFlatTrace) {
  const auto d = unbalanced(30.0);
  const auto t = analytic_budget(d, {{"w", "lo", NoisePsd::white(5.0)}}, BudgetGrid{800.0, 800, 10, true});
  EXPECT_TRUE(t.raw);
  ASSERT_EQ(t.size(), 801u);
  const double level = budget_psd(d, {{"w", "lo", NoisePsd::white(5.0)}}, 1.0);
  for (double v : t.value) EXPECT_NEAR(v / level, 1.0, 1e-12);
}

TEST(Budget, SmoothingMatchesWindowConvolution) {
  const auto d = unbalanced(20.0);
  const std::vector<BudgetSource> src{{"line", "lo", NoisePsd::rin(1e6, 3.0)}};
  const BudgetGrid g{100.0, 100, 1, true};
  const auto t = analytic_budget(d, src, g);
  for (std::size_t b : {1u, 2u, 3u, 5u, 10u}) {
    double num = 0.0, den = 0.0;
    const int steps = 400;
    for (int j = 0; j < 12 * steps; ++j) {
      const double u = -6.0 + (j + 0.5) / steps;
      const double w = oracle::hann_response(u, 2048);
      num += w * budget_psd(d, src, std::abs(static_cast<double>(b) + u));
      den += w;
    }
    EXPECT_NEAR(t.value[b] / (num / den), 1.0, 2e-3) << b;
  }
}

TEST(Budget, RinSuppressedByCmrr) {
  const auto d = unbalanced(80.0);
  const std::vector<BudgetSource> src{{"rin", "lo", NoisePsd::rin_anchored(1e4, 10.0, 1000.0)}};
  const auto t = analytic_budget(d, src, SpanPlan::parse("100:400:1, 6400:800:1"));
  const double floor = quantum_shot_floor(d);
  for (double v : t.value) EXPECT_LE(oracle::db((v - floor) / floor), -40.0);
}
