#include <gtest/gtest.h>

#include <cmath>

#include "bhd/constants.hpp"
#include "bhd/electronics.hpp"
#include "bhd/errors.hpp"
#include "bhd/spectral.hpp"
#include "oracles.hpp"

using namespace bhd;

TEST(Electronics, MetalFilmBelowCarbon) {
  EXPECT_NEAR(oracle::db(flicker_coefficient(ResistorType::carbon) / flicker_coefficient(ResistorType::metal_film)),
              32.0, 0.05);
  EXPECT_EQ(parse_resistor_type("melf"), ResistorType::metal_film);
  EXPECT_THROW(parse_resistor_type("wirewound"), DomainError);
}

TEST(Electronics, FlickerFormulas) {
  DetectorDesign d;
  d.topology = Topology::variable_gain;
  d.g1 = 1e4;
  d.g2 = 2e4;
  d.flicker_override = 1e-12;
  const auto vg = flicker_psd(d, 1e-3, 4e-4);
  EXPECT_NEAR(vg(10.0), 1e-12 / 10.0 * (1e8 * 1e-6 + 4e8 * 16e-8), 1e-25);
  d.topology = Topology::current_subtracting;
  EXPECT_TRUE(flicker_psd(d, 5e-4, 5e-4).is_zero());
  EXPECT_NEAR(flicker_psd(d, 5e-4, 4e-4)(2.0), 1e-12 / 2.0 * 1e8 * 1e-8, 1e-26);
}

TEST(Electronics, CarbonCrossesShotNearHundredHertz) {
  DetectorDesign d;
  d.resistor_type = ResistorType::carbon;
  const double i = d.responsivity * 1.3e-3 / 2.0;
  const auto f = flicker_psd(d, i, i);
  EXPECT_NEAR(f(100.0) / shot_psd_v2(d, 1.3e-3), 1.0, 0.01);
}

TEST(Electronics, DefaultDarkClearance) {
  DetectorDesign d;
  EXPECT_NEAR(dark_clearance_db(d, 1e-3), 20.0, 1e-9);
  EXPECT_NEAR(dark_clearance_db(d, 1.9e-3), 20.0 + oracle::db(1.9), 1e-9);
  const auto dark = default_dark_noise(2e4, 0.85, 30.0, 20.0);
  EXPECT_NEAR(dark(30.0) / dark(1e6), 2.0, 1e-3);
}

TEST(Electronics, ResponsivityBounded) {
  DetectorDesign d;
  d.responsivity = 0.9;
  EXPECT_THROW(d.validate(), DomainError);
  d.responsivity = 0.85;
  EXPECT_NEAR(d.quantum_efficiency(), 0.85 / kIdealResponsivity, 1e-15);
}

TEST(Electronics, OutputSpectrumMatchesModel) {
  DetectorDesign d;
  d.topology = Topology::variable_gain;
  d.resistor_type = ResistorType::carbon;
  d.g1 = d.g2 = 2e4;
  const double fs = 4000.0, span = 1000.0;
  const std::size_t lines = 500, avg = 400;
  const std::size_t n = welch_required_samples(fs, span, lines, avg);
  const TimeSeries i1(std::vector<double>(n, 6e-4), fs);
  const TimeSeries i2(std::vector<double>(n, 5e-4), fs);
  const auto out = detector_output(d, i1, i2, 17);
  EXPECT_NEAR(out.dc1_v, 12.0, 1e-9);
  EXPECT_NEAR(out.dc2_v, 10.0, 1e-9);
  const auto t = welch_psd(out.differential, span, lines, avg, 1);
  const auto model = NoisePsd::sum({flicker_psd(d, 6e-4, 5e-4), d.dark_noise});
  for (std::size_t b = 20; b + 10 < t.size(); b += 40) {
    double est = 0.0, ref = 0.0;
    for (std::size_t k = b; k < b + 10; ++k) {
      est += t.value[k];
      ref += model(t.frequency_hz[k]);
    }
    EXPECT_NEAR(oracle::db(est / ref), 0.0, 0.4) << t.frequency_hz[b];
  }
}
