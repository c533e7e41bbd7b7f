#include <gtest/gtest.h>

#include <cmath>

#include "bhd/dust.hpp"
#include "bhd/errors.hpp"

using namespace bhd;

TEST(Dust, PoissonCountAndRanges) {
  DustEventProcess p;
  p.rate_hz = 2.0;
  const auto ev = draw_dust_events(p, 5000.0, 1);
  EXPECT_NEAR(static_cast<double>(ev.size()), 10000.0, 400.0);
  double log_depth = 0.0;
  for (const auto& e : ev) {
    EXPECT_GE(e.depth, p.depth_min);
    EXPECT_LE(e.depth, p.depth_max);
    EXPECT_GE(e.duration_s, p.duration_min_s);
    EXPECT_LE(e.duration_s, p.duration_max_s);
    EXPECT_GE(e.start_s, 0.0);
    EXPECT_LT(e.start_s, 5000.0);
    log_depth += std::log(e.depth) / ev.size();
  }
  // Log-uniform: mean of log depth is the midpoint of the log range.
  EXPECT_NEAR(log_depth, 0.5 * (std::log(p.depth_min) + std::log(p.depth_max)), 0.03);
}

TEST(Dust, RenderShapes) {
  const std::vector<DustEvent> ev{{0.1, 0.01, 0.1}};
  const auto rect = render_dust_events(ev, PulseShape::rectangular, 1.0, 1000.0);
  ASSERT_EQ(rect.size(), 1000u);
  EXPECT_EQ(rect[50], 0.0);
  EXPECT_DOUBLE_EQ(rect[150], 0.01);
  EXPECT_EQ(rect[250], 0.0);
  const auto rc = render_dust_events(ev, PulseShape::raised_cosine, 1.0, 1000.0);
  EXPECT_NEAR(rc[150], 0.01, 1e-6);
  EXPECT_LT(rc[101], 1e-4);
}

TEST(Dust, OverlapsClampBelowOne) {
  const std::vector<DustEvent> ev{{0.0, 0.9, 1.0}, {0.0, 0.9, 1.0}};
  const auto t = render_dust_events(ev, PulseShape::rectangular, 1.0, 100.0);
  for (std::size_t i = 0; i < t.size(); ++i) EXPECT_LT(t[i], 1.0);
}

TEST(Dust, Validation) {
  DustEventProcess p;
  p.rate_hz = 1.0;
  p.depth_max = 1.0;
  EXPECT_THROW(p.validate(), DomainError);
  p.depth_max = 0.01;
  p.rate_hz = -1.0;
  EXPECT_THROW(p.validate(), DomainError);
  DustEventProcess none;
  EXPECT_TRUE(draw_dust_events(none, 100.0, 1).empty());
}

TEST(Dust, Deterministic) {
  DustEventProcess p;
  p.rate_hz = 0.5;
  const auto a = sample_dust_events(p, 30.0, 9);
  const auto b = sample_dust_events(p, 30.0, 9);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) ASSERT_EQ(a[i], b[i]);
}
