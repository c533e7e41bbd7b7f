#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "bhd/errors.hpp"
#include "bhd/pointing.hpp"

using namespace bhd;

TEST(Pointing, UniformMapResponse) {
  const auto m = PhotodiodeMap::uniform(101, 101, 20e-6, 0.93);
  const BeamProfile b{200e-6, 50e-6, -20e-6, 1e-3};  // tails stay on the 2 mm map
  EXPECT_NEAR(response(m, b), 0.93, 1e-12);
  EXPECT_NEAR(overlap(m, b), 1.0, 1e-9);
  const auto g = pointing_coefficient(m, b);
  EXPECT_NEAR(g.d_dx, 0.0, 1e-9);
  EXPECT_NEAR(g.d_dy, 0.0, 1e-9);
}

TEST(Pointing, LinearGradientIsExact) {
  // Bilinear interpolation reproduces a plane, so the Gaussian average is its centre value.
  const double eta0 = 0.9, gx = 40.0, gy = -15.0;
  const auto m = PhotodiodeMap::gradient(201, 201, 15e-6, eta0, gx, gy);
  const BeamProfile b{400e-6, 30e-6, 10e-6, 1e-3};
  EXPECT_NEAR(response(m, b), eta0 * (1.0 + gx * 30e-6 + gy * 10e-6), 1e-9);
  const auto g = pointing_coefficient(m, b);
  EXPECT_NEAR(g.d_dx, eta0 * gx, 1e-6);
  EXPECT_NEAR(g.d_dy, eta0 * gy, 1e-6);
}

TEST(Pointing, BilinearBetweenNodes) {
  const auto m = PhotodiodeMap(2, 2, 1.0, {0.0, 1.0, 0.5, 0.5});
  // Nodes at x, y = -0.5, 0.5; row 0 is y = -0.5.
  EXPECT_NEAR(m.eta(0.0, -0.5), 0.5, 1e-15);
  EXPECT_NEAR(m.eta(0.0, 0.0), 0.5, 1e-15);
  EXPECT_NEAR(m.eta(-0.5, 0.0), 0.25, 1e-15);
  EXPECT_EQ(m.eta(3.0, 0.0), 0.0);
}

TEST(Pointing, ClippingIsAnError) {
  const auto m = PhotodiodeMap::uniform(21, 21, 20e-6, 0.9);
  EXPECT_THROW(response(m, BeamProfile{400e-6, 0.0, 0.0, 1e-3}), ClippingError);
}

TEST(Pointing, DeadSpotLowersResponse) {
  const auto m = PhotodiodeMap::uniform(201, 201, 15e-6, 0.9);
  const BeamProfile b{300e-6, 0.0, 0.0, 1e-3};
  const auto dead = m.with_dead_spot(0.0, 0.0, 50e-6);
  EXPECT_LT(response(dead, b), response(m, b));
  // Disc of radius r under a Gaussian holds 1 - exp(-2 r^2 / w^2) of the power.
  const double lost = 0.9 * (1.0 - std::exp(-2.0 * 50e-6 * 50e-6 / (300e-6 * 300e-6)));
  EXPECT_NEAR(response(m, b) - response(dead, b), lost, 0.15 * lost);
}

TEST(Pointing, SyntheticMapStatistics) {
  const auto m = PhotodiodeMap::synthetic(201, 201, 15e-6, 0.95, 0.005, 100e-6, 4);
  double sum = 0.0, sq = 0.0;
  for (std::size_t r = 0; r < 201; ++r) {
    for (std::size_t c = 0; c < 201; ++c) {
      sum += m.at(r, c);
      sq += m.at(r, c) * m.at(r, c);
    }
  }
  const double n = 201.0 * 201.0;
  EXPECT_NEAR(sum / n, 0.95, 1e-3);
  EXPECT_NEAR(std::sqrt(sq / n - (sum / n) * (sum / n)), 0.005, 5e-4);
  const auto again = PhotodiodeMap::synthetic(201, 201, 15e-6, 0.95, 0.005, 100e-6, 4);
  EXPECT_EQ(again.at(17, 33), m.at(17, 33));
}

TEST(Pointing, LoadFromText) {
  std::istringstream is("2 3 1e-5\n0.9 0.9 0.9\n0.8 0.8 0.8\n");
  const auto m = PhotodiodeMap::load(is);
  EXPECT_EQ(m.rows(), 2u);
  EXPECT_EQ(m.cols(), 3u);
  EXPECT_NEAR(m.at(1, 2), 0.8, 1e-15);
}

TEST(Modecleaner, HomSuppression) {
  JitterProcess j{NoisePsd::white(1e-18), NoisePsd::white(4e-18), 0.0};
  const auto none = modecleaner_filter(j, {4.7e6, 1.0, 50.0});
  EXPECT_NEAR(none.residual.displacement_x(10.0), 1e-18, 1e-30);
  EXPECT_TRUE(none.relative_intensity.is_zero());
  const auto mc = modecleaner_filter(j, {4.7e6, 100.0, 50.0});
  EXPECT_NEAR(mc.residual.displacement_y(10.0), 4e-20, 1e-29);
  EXPECT_NEAR(mc.converted_x(10.0), 0.99e-18, 1e-27);
  EXPECT_NEAR(mc.relative_intensity(10.0), 2500.0 * 0.99 * 5e-18, 1e-22);
  const auto perfect = modecleaner_filter(j, {4.7e6, INFINITY, 50.0});
  EXPECT_TRUE(perfect.residual.displacement_x.is_zero());
}
