#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include "bhd/errors.hpp"
#include "bhd/random.hpp"
#include "bhd/spectral.hpp"
#include "oracles.hpp"

using namespace bhd;

namespace {

TimeSeries white(double sigma, double fs, double span, std::size_t lines, std::size_t avg, std::uint64_t seed) {
  return TimeSeries(gaussian_samples(welch_required_samples(fs, span, lines, avg), sigma, seed), fs);
}

double mean_of(const std::vector<double>& v, std::size_t a, std::size_t b) {
  return std::accumulate(v.begin() + a, v.begin() + b, 0.0) / static_cast<double>(b - a);
}

}  // namespace

TEST(Welch, GridAndMetadata) {
  const auto t = welch_psd(white(1.0, 4000.0, 1000.0, 400, 10, 1), 1000.0, 400, 10, 1);
  ASSERT_EQ(t.size(), 401u);
  EXPECT_TRUE(t.raw);
  EXPECT_DOUBLE_EQ(t.frequency_hz[0], 0.0);
  EXPECT_DOUBLE_EQ(t.frequency_hz[400], 1000.0);
  EXPECT_DOUBLE_EQ(t.rbw(), 2.5);
  EXPECT_EQ(t.averages[3], 10u);
}

TEST(Welch, WhiteNoiseLevel) {
  // sigma^2 spread over fs/2: one-sided level 2 sigma^2 / fs.
  const double fs = 4000.0, sigma = 0.3;
  const auto t = welch_psd(white(sigma, fs, 2000.0, 800, 200, 2), 2000.0, 800, 200, 1);
  const double level = 2.0 * sigma * sigma / fs;
  for (std::size_t q = 0; q < 4; ++q) {
    const double m = mean_of(t.value, 2 + q * 199, 2 + (q + 1) * 199);
    EXPECT_NEAR(oracle::db(m / level), 0.0, 0.2) << "quarter " << q;
  }
}

TEST(Welch, SineRecovery) {
  const double fs = 8000.0, span = 2000.0, amp = 0.7;
  const std::size_t lines = 400, avg = 20;
  const std::size_t n = welch_required_samples(fs, span, lines, avg);
  for (double f0 : {500.0, 512.3, 1733.75}) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = amp * std::sin(2.0 * oracle::kPi * f0 * i / fs + 0.3);
    const auto t = welch_psd(TimeSeries(x, fs), span, lines, avg, 1);
    EXPECT_NEAR(t.band_power(f0 - 6 * t.rbw(), f0 + 6 * t.rbw()) / (amp * amp / 2.0), 1.0, 0.01) << f0;
  }
}

TEST(Welch, AveragingVarianceScaling) {
  const double fs = 4000.0, span = 1000.0;
  auto rel_var = [&](std::size_t avg) {
    double acc = 0.0;
    const int reps = 4;
    for (int r = 0; r < reps; ++r) {
      const auto t = welch_psd(white(1.0, fs, span, 400, avg, 100 + r), span, 400, avg, 1);
      const double m = mean_of(t.value, 1, 400);
      double v = 0.0;
      for (std::size_t i = 1; i < 400; ++i) v += (t.value[i] - m) * (t.value[i] - m);
      acc += v / 398.0 / (m * m) / reps;
    }
    return acc;
  };
  const double v16 = rel_var(16), v64 = rel_var(64);
  EXPECT_NEAR(v16 / v64, 4.0, 0.8);
}

TEST(Welch, DeterministicAcrossWorkers) {
  const auto x = white(1.0, 4000.0, 1000.0, 400, 37, 5);
  const auto a = welch_psd(x, 1000.0, 400, 37, 1);
  const auto b = welch_psd(x, 1000.0, 400, 37, 8);
  EXPECT_EQ(a.value, b.value);
}

TEST(Welch, Errors) {
  const auto x = white(1.0, 4000.0, 1000.0, 400, 10, 1);
  EXPECT_THROW(welch_psd(x, 1000.0, 400, 11, 1), InsufficientDataError);
  EXPECT_THROW(welch_psd(x, 3000.0, 400, 1, 1), DomainError);
  EXPECT_THROW(welch_psd(x, 1500.0, 400, 1, 1), DomainError);  // 1066.7-sample segment
  try {
    welch_psd(x, 1000.0, 400, 11, 1);
  } catch (const InsufficientDataError& e) {
    EXPECT_NEAR(e.required_duration_s(), (1600.0 + 800.0 * 10) / 4000.0, 1e-12);
  }
}

TEST(Stitch, EarliestSpanWinsAndDropsLowBins) {
  SpectrumTrace a, b;
  for (std::size_t k = 0; k <= 10; ++k) a.push_back(k * 1.0, 1.0, 1.0, 5);
  for (std::size_t k = 0; k <= 10; ++k) b.push_back(k * 4.0, 2.0, 4.0, 5);
  a.raw = b.raw = true;
  const auto s = stitch_spans({a, b});
  EXPECT_FALSE(s.raw);
  EXPECT_DOUBLE_EQ(s.frequency_hz.front(), 2.0);
  for (std::size_t i = 0; i < s.size(); ++i) {
    EXPECT_EQ(s.value[i], s.frequency_hz[i] <= 10.0 ? 1.0 : 2.0);
    if (i) {
      EXPECT_GT(s.frequency_hz[i], s.frequency_hz[i - 1]);
    }
  }
  EXPECT_DOUBLE_EQ(s.frequency_hz.back(), 40.0);
  ASSERT_EQ(s.seams_hz.size(), 1u);
  // A stitched trace passes through unchanged.
  const auto again = stitch_spans({s});
  EXPECT_EQ(again.frequency_hz, s.frequency_hz);
  EXPECT_EQ(again.value, s.value);
}

TEST(Stitch, GapIsReported) {
  SpectrumTrace a, b;
  for (std::size_t k = 0; k <= 10; ++k) a.push_back(k * 1.0, 1.0, 1.0, 5);
  for (std::size_t k = 0; k <= 10; ++k) b.push_back(k * 40.0, 2.0, 40.0, 5);
  a.raw = b.raw = true;
  try {
    stitch_spans({a, b});
    FAIL();
  } catch (const StitchGapError& e) {
    EXPECT_DOUBLE_EQ(e.gap_low_hz(), 10.0);
    EXPECT_DOUBLE_EQ(e.gap_high_hz(), 80.0);
  }
}

TEST(SpanPlan, ParseAndValidate) {
  const auto p = SpanPlan::parse("800:800:200, 6400:800:100");
  ASSERT_EQ(p.spans.size(), 2u);
  EXPECT_DOUBLE_EQ(p.spans[1].rbw_hz(), 8.0);
  EXPECT_EQ(p.spans[1].averages, 100u);
  EXPECT_THROW(SpanPlan::parse("800:800"), DomainError);
  EXPECT_THROW(SpanPlan::parse("800:800:1, 400:800:1").validate(), DomainError);
}

TEST(Normalize, RoundTripAndErrors) {
  SpectrumTrace m, s;
  for (std::size_t k = 1; k <= 5; ++k) {
    m.push_back(k, 2.0 * k, 1.0, 1);
    s.push_back(k, 2.0, 1.0, 1);
  }
  const auto n = normalize_to_shot(m, s);
  EXPECT_EQ(n.units, TraceUnits::shot_relative_db);
  EXPECT_NEAR(n.value[2], oracle::db(3.0), 1e-12);
  const auto back = denormalize(n, s);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_NEAR(back.value[i], m.value[i], 1e-12);
  SpectrumTrace other = s;
  other.frequency_hz[1] = 2.5;
  EXPECT_THROW(normalize_to_shot(m, other), BinMismatchError);
}

TEST(DarkCorrection, PairFromMeasurement) {
  const double dark = solve_dark_level(-11.6, -11.9);
  EXPECT_NEAR(dark_correct(-11.6, dark), -11.9, 1e-12);
  // Independent linear formula.
  const double vm = oracle::undb(-11.6), vd = oracle::undb(dark);
  EXPECT_NEAR(oracle::db((vm - vd) / (1.0 - vd)), -11.9, 1e-12);
  EXPECT_NEAR(dark, -23.07, 0.01);
  EXPECT_THROW(dark_correct_linear(0.1, 0.2), DomainError);
  EXPECT_THROW(dark_correct_linear(2.0, 1.0), DomainError);
}

TEST(Csv, RoundTripIsExact) {
  SpectrumTrace t;
  t.units = TraceUnits::shot_relative_db;
  for (std::size_t k = 1; k < 50; ++k) t.push_back(k * 0.1 + 1e-9, std::sin(k) * 1e-7 + 1.0 / 3.0, 0.1, 200);
  t.value[3] = 4.9e-324;
  std::stringstream ss;
  write_csv(t, ss);
  const auto r = read_csv(ss);
  EXPECT_EQ(r.frequency_hz, t.frequency_hz);
  EXPECT_EQ(r.value, t.value);
  EXPECT_EQ(r.rbw_hz, t.rbw_hz);
  EXPECT_EQ(r.averages, t.averages);
  EXPECT_EQ(r.units, t.units);
}

TEST(Csv, RejectsMalformed) {
  std::stringstream bad("frequency_hz,value,units,rbw_hz,averages\n1,2,V2_per_Hz,x,3\n");
  EXPECT_ANY_THROW(read_csv(bad));
}
