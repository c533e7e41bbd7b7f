#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "bhd/colored_noise.hpp"
#include "bhd/errors.hpp"
#include "bhd/noise_psd.hpp"
#include "bhd/random.hpp"
#include "bhd/spectral.hpp"
#include "oracles.hpp"

using namespace bhd;

TEST(NoisePsd, ClosedForms) {
  EXPECT_DOUBLE_EQ(NoisePsd::white(3.0)(17.0), 3.0);
  EXPECT_NEAR(NoisePsd::one_over_f(2.0, 10.0)(5.0), 4.0, 1e-15);
  EXPECT_NEAR(NoisePsd::one_over_f(2.0, 10.0, 2.0)(5.0), 8.0, 1e-14);
  EXPECT_NEAR(NoisePsd::rin(1.0, 100.0)(100.0), 0.5, 1e-15);
  EXPECT_NEAR(NoisePsd::rin_anchored(1e4, 10.0, 1000.0)(10.0), 1e4, 1e-9);
  const auto b = NoisePsd::broken_power_law(1.0, 50.0, 2.0, 0.0);
  EXPECT_NEAR(b(5.0), 100.0, 1e-12);
  EXPECT_NEAR(b(500.0), 1.0, 1e-15);
}

TEST(NoisePsd, ComposedModels) {
  const auto s = NoisePsd::sum({NoisePsd::white(1.0), NoisePsd::one_over_f(1.0, 1.0)});
  EXPECT_NEAR(s(0.5), 3.0, 1e-14);
  EXPECT_NEAR(s.scaled(2.0)(0.5), 6.0, 1e-14);
  EXPECT_NEAR(NoisePsd::white(4.0).lowpassed(10.0)(10.0), 2.0, 1e-14);
  EXPECT_TRUE(NoisePsd::zero().is_zero());
  EXPECT_TRUE(NoisePsd::white(1.0).scaled(0.0).is_zero());
  EXPECT_FALSE(s.is_zero());
}

TEST(NoisePsd, RejectsBadInput) {
  EXPECT_THROW(NoisePsd::white(1.0)(0.0), DomainError);
  EXPECT_THROW(NoisePsd::white(1.0)(-3.0), DomainError);
  EXPECT_THROW(NoisePsd::white(-1.0), DomainError);
  EXPECT_THROW(NoisePsd::rin(1.0, 0.0), DomainError);
}

TEST(NoisePsd, BandVarianceMatchesQuadrature) {
  const auto m = NoisePsd::sum({NoisePsd::rin_anchored(1e3, 10.0, 300.0), NoisePsd::one_over_f(2.0, 1.0, 1.5)});
  const double ref = oracle::log_trapezoid([&](double f) { return m(f); }, 0.5, 5e3);
  EXPECT_NEAR(band_variance(m, 0.5, 5e3) / ref, 1.0, 1e-6);
  // Closed form for a pure 1/f: L f0 ln(f2/f1).
  EXPECT_NEAR(band_variance(NoisePsd::one_over_f(3.0, 2.0), 1.0, 100.0), 6.0 * std::log(100.0), 1e-6);
}

TEST(ColoredNoise, FastSizes) {
  EXPECT_EQ(fast_fft_size(1), 1u);
  EXPECT_EQ(fast_fft_size(7), 8u);
  EXPECT_EQ(fast_fft_size(1001), 1024u);
  EXPECT_EQ(fast_fft_size(321600), 324000u);
}

TEST(ColoredNoise, DeterministicPerSeed) {
  const auto m = NoisePsd::one_over_f(1.0, 1.0);
  EXPECT_EQ(synthesize_samples(m, 4096, 100.0, 5), synthesize_samples(m, 4096, 100.0, 5));
  EXPECT_NE(synthesize_samples(m, 4096, 100.0, 5), synthesize_samples(m, 4096, 100.0, 6));
}

TEST(ColoredNoise, WhiteVariance) {
  // One-sided level S at rate fs: variance S fs / 2.
  const auto x = synthesize_samples(NoisePsd::white(2e-3), 200000, 1000.0, 3);
  const double var = std::inner_product(x.begin(), x.end(), x.begin(), 0.0) / x.size();
  EXPECT_NEAR(var, 1.0, 0.02);
}

TEST(ColoredNoise, VarianceMatchesIntegratedPsd) {
  const double fs = 2000.0;
  const std::size_t n = 1 << 18;
  const auto m = NoisePsd::rin(1.0, 50.0);
  double var = 0.0;
  for (std::uint64_t s = 1; s <= 8; ++s) {
    const auto x = synthesize_samples(m, n, fs, s);
    var += std::inner_product(x.begin(), x.end(), x.begin(), 0.0) / x.size() / 8.0;
  }
  const double df = fs / n;
  const double ref = oracle::log_trapezoid([&](double f) { return m(f); }, df, fs / 2.0);
  EXPECT_NEAR(var / ref, 1.0, 0.03);
}

TEST(ColoredNoise, SpectrumFollowsModel) {
  const double fs = 4000.0;
  const auto m = NoisePsd::sum({NoisePsd::white(1.0), NoisePsd::rin_anchored(30.0, 20.0, 200.0)});
  const std::size_t n = welch_required_samples(fs, 1000.0, 400, 1000);
  const TimeSeries x(synthesize_samples(m, n, fs, 9), fs);
  const auto t = welch_psd(x, 1000.0, 400, 1000, 1);
  // Groups of 8 bins keep the estimator scatter near 0.1 dB.
  for (std::size_t i = 8; i + 8 < t.size(); i += 8) {
    double est = 0.0, model = 0.0;
    for (std::size_t k = i; k < i + 8; ++k) {
      est += t.value[k];
      model += m(t.frequency_hz[k]);
    }
    EXPECT_NEAR(oracle::db(est / model), 0.0, 0.35) << t.frequency_hz[i];
  }
}

TEST(Random, SeedDerivationIsStable) {
  EXPECT_EQ(derive_seed(1, "a", 2), derive_seed(1, "a", 2));
  EXPECT_NE(derive_seed(1, "a", 2), derive_seed(1, "a", 3));
  EXPECT_NE(derive_seed(1, "a"), derive_seed(1, "b"));
  EXPECT_NE(derive_seed(1, "a"), derive_seed(2, "a"));
  EXPECT_EQ(gaussian_samples(10, 1.0, 4), gaussian_samples(10, 1.0, 4));
}
