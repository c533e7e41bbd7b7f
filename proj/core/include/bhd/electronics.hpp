#pragma once

#include <cstdint>
#include <string_view>

#include "bhd/field_algebra.hpp"
#include "bhd/noise_psd.hpp"
#include "bhd/time_series.hpp"

namespace bhd {

enum class ResistorType { carbon, metal_film };
ResistorType parse_resistor_type(std::string_view name);
std::string_view to_string(ResistorType r);

/// Flicker coefficient K of the transimpedance resistor: the voltage across it
/// fluctuates with relative PSD K / f.
double flicker_coefficient(ResistorType r);

inline constexpr double kDefaultResponsivity = 0.85;   // A/W
inline constexpr double kDefaultGain = 2.0e4;          // V/A
inline constexpr double kDefaultDarkCornerHz = 30.0;

/// D0 (1 + corner/f) in V^2/Hz, with D0 chosen so that the dark noise at 1 kHz
/// sits clearance_db below the shot noise of a 1 mW LO.
NoisePsd default_dark_noise(double gain, double responsivity, double corner_hz = kDefaultDarkCornerHz,
                            double clearance_db = 20.0);

struct DetectorDesign {
  Topology topology = Topology::variable_gain;
  double g1 = kDefaultGain;  // also the single gain g of current_subtracting
  double g2 = kDefaultGain;
  ResistorType resistor_type = ResistorType::metal_film;
  double flicker_override = -1.0;  // >= 0 replaces the preset coefficient
  NoisePsd dark_noise = default_dark_noise(kDefaultGain, kDefaultResponsivity);
  double responsivity = kDefaultResponsivity;

  void validate() const;
  double flicker() const;
  double gain2() const { return topology == Topology::current_subtracting ? g1 : g2; }
  /// Quantum efficiency implied by the responsivity.
  double quantum_efficiency() const;
};

struct DetectorOutput {
  TimeSeries differential;  // V
  double dc1_v = 0.0;
  double dc2_v = 0.0;
};

/// Photocurrents (A) to output voltage, adding flicker and dark noise.
DetectorOutput detector_output(const DetectorDesign& design, const TimeSeries& i1, const TimeSeries& i2,
                               std::uint64_t seed);

/// Flicker PSD (V^2/Hz) at the output for given mean photocurrents.
NoisePsd flicker_psd(const DetectorDesign& design, double i1_dc, double i2_dc);

/// Shot PSD (V^2/Hz) of a balanced pair sharing lo_power_w equally.
double shot_psd_v2(const DetectorDesign& design, double lo_power_w);

/// 10 log10(shot / dark) at the reference frequency.
double dark_clearance_db(const DetectorDesign& design, double lo_power_w, double reference_hz = 1000.0);

}  // namespace bhd
