#include "bhd/electronics.hpp"

#include <cmath>
#include <string>

#include "bhd/colored_noise.hpp"
#include "bhd/constants.hpp"
#include "bhd/errors.hpp"
#include "bhd/random.hpp"

namespace bhd {
namespace {

// Carbon: flicker equals the shot noise of a 1.3 mW balanced pair at 100 Hz
// with a variable-gain detector, K = 400 e / (R * 1.3 mW).
constexpr double kCarbonFlicker = 5.8e-14;
constexpr double kMetalFilmFlicker = kCarbonFlicker / 1600.0;  // 32 dB lower

}  // namespace

ResistorType parse_resistor_type(std::string_view name) {
  if (name == "carbon") return ResistorType::carbon;
  if (name == "metal_film" || name == "melf") return ResistorType::metal_film;
  throw DomainError("unknown resistor_type '" + std::string(name) + "' (carbon, metal_film)");
}

std::string_view to_string(ResistorType r) { return r == ResistorType::carbon ? "carbon" : "metal_film"; }

double flicker_coefficient(ResistorType r) {
  return r == ResistorType::carbon ? kCarbonFlicker : kMetalFilmFlicker;
}

NoisePsd default_dark_noise(double gain, double responsivity, double corner_hz, double clearance_db) {
  const double at_1khz = gain * gain * 2.0 * kElectronCharge * responsivity * 1e-3 / from_db(clearance_db);
  if (corner_hz <= 0.0) return NoisePsd::white(at_1khz);
  const double d0 = at_1khz / (1.0 + corner_hz / 1000.0);
  return NoisePsd::sum({NoisePsd::white(d0), NoisePsd::one_over_f(d0, corner_hz)});
}

void DetectorDesign::validate() const {
  if (!(g1 > 0.0) || !(g2 > 0.0)) throw DomainError("detector gains must be > 0");
  if (!(responsivity > 0.0 && responsivity <= kIdealResponsivity * (1.0 + 1e-12))) {
    throw DomainError("responsivity must be in (0, " + std::to_string(kIdealResponsivity) + "] A/W");
  }
}

double DetectorDesign::flicker() const { return flicker_override >= 0.0 ? flicker_override : flicker_coefficient(resistor_type); }

double DetectorDesign::quantum_efficiency() const { return responsivity / kIdealResponsivity; }

NoisePsd flicker_psd(const DetectorDesign& d, double i1_dc, double i2_dc) {
  const double k = d.flicker();
  double dc2;
  if (d.topology == Topology::variable_gain) {
    dc2 = d.g1 * d.g1 * i1_dc * i1_dc + d.g2 * d.g2 * i2_dc * i2_dc;
  } else {
    const double r = i1_dc - i2_dc;
    dc2 = d.g1 * d.g1 * r * r;
  }
  return NoisePsd::one_over_f(k * dc2, 1.0);
}

DetectorOutput detector_output(const DetectorDesign& d, const TimeSeries& i1, const TimeSeries& i2,
                               std::uint64_t seed) {
  d.validate();
  if (i1.size() != i2.size() || i1.sample_rate_hz() != i2.sample_rate_hz()) {
    throw DomainError("detector_output: photocurrent series differ in length or rate");
  }
  const std::size_t n = i1.size();
  const double fs = i1.sample_rate_hz();
  const double g2 = d.gain2();
  const double m1 = i1.mean();
  const double m2 = i2.mean();

  std::vector<double> v(n);
  for (std::size_t k = 0; k < n; ++k) v[k] = d.g1 * i1[k] - g2 * i2[k];

  const double kf = d.flicker();
  if (kf > 0.0) {
    const NoisePsd unit = NoisePsd::one_over_f(kf, 1.0);
    if (d.topology == Topology::variable_gain) {
      const auto n1 = synthesize_samples(unit, n, fs, derive_seed(seed, "flicker", 1));
      const auto n2 = synthesize_samples(unit, n, fs, derive_seed(seed, "flicker", 2));
      for (std::size_t k = 0; k < n; ++k) v[k] += d.g1 * m1 * n1[k] + g2 * m2 * n2[k];
    } else {
      const auto n1 = synthesize_samples(unit, n, fs, derive_seed(seed, "flicker", 0));
      for (std::size_t k = 0; k < n; ++k) v[k] += d.g1 * (m1 - m2) * n1[k];
    }
  }
  if (!d.dark_noise.is_zero()) {
    const auto dark = synthesize_samples(d.dark_noise, n, fs, derive_seed(seed, "dark"));
    for (std::size_t k = 0; k < n; ++k) v[k] += dark[k];
  }
  return {TimeSeries(std::move(v), fs, seed), d.g1 * m1, g2 * m2};
}

double shot_psd_v2(const DetectorDesign& d, double lo_power_w) {
  const double i_half = d.responsivity * lo_power_w / 2.0;
  const double g2 = d.gain2();
  return 2.0 * kElectronCharge * i_half * (d.g1 * d.g1 + g2 * g2);
}

double dark_clearance_db(const DetectorDesign& d, double lo_power_w, double reference_hz) {
  if (!(lo_power_w > 0.0)) throw DomainError("dark_clearance_db: LO power must be > 0");
  return to_db(shot_psd_v2(d, lo_power_w) / d.dark_noise(reference_hz));
}

}  // namespace bhd
