#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "bhd/field_algebra.hpp"
#include "bhd/noise_psd.hpp"
#include "bhd/spectral.hpp"

namespace bhd {

/// Where the forward-scattered light rejoins the beam.
enum class ScatterLocation { arm1, lo_path_pre_bs, lo_path_pre_mc, signal_port };
ScatterLocation parse_scatter_location(std::string_view name);
std::string_view to_string(ScatterLocation l);

/// 1/f^2 below the corner, white above.
NoisePsd default_displacement_psd(double level_m2_per_hz = 1e-20, double corner_hz = 50.0);

struct ScatterPath {
  double backscatter_power_fraction = 0.0;
  ScatterLocation forward_location = ScatterLocation::arm1;
  NoisePsd phase_process = default_displacement_psd();  // surface displacement, m^2/Hz
  std::optional<double> static_fringe_phase;             // unset: uniform in [0, 2pi) from the seed
  double isolation_db = 0.0;            // attenuation applied to the backscatter fraction
  double isolator_self_scatter = 0.0;   // fraction added by the isolator itself

  void validate() const;
  /// Scattered power relative to the beam at the scattering point.
  double effective_fraction() const;
};

struct DitherDrive {
  double frequency_hz = 750.0;
  double amplitude_cycles = 0.0;
  bool enabled = false;
};

/// Rises 0 -> 1 over the first half period, back to 0 over the second.
double triangle_wave(double cycles);

/// Multipliers taking the beat power 2 sqrt(P_lo P_sc) cos(phi) to the power
/// modulation on each diode. Signs carry the correlation signature.
struct DiodeWeights {
  double w1 = 0.0;
  double w2 = 0.0;
};
DiodeWeights location_weights(ScatterLocation where, const HomodyneOptics& optics);

/// phi0 + (4 pi / lambda) x(t), x drawn from the path's displacement PSD.
std::vector<double> phase_trajectory(const ScatterPath& path, std::size_t n, double sample_rate_hz,
                                     std::uint64_t seed);

/// Add the triangle phase ramp, peak-to-peak 2 pi * amplitude. No-op when disabled.
void apply_dither(std::span<double> phase, const DitherDrive& dither, double sample_rate_hz);

/// Beat power at one instant (W).
double fringe_intensity(const ScatterPath& path, double lo_power_w, double phase_rad);

struct FringeIntensity {
  std::vector<double> diode1_w;
  std::vector<double> diode2_w;
};

/// Power modulation on each diode for a phase trajectory. Throws
/// LinearizationError if the scattered power exceeds 1 % of the LO.
FringeIntensity fringe_intensity(const ScatterPath& path, const HomodyneOptics& optics, double lo_power_w,
                                 std::span<const double> phase, double sample_rate_hz,
                                 double modecleaner_linewidth_hz = 4.7e6);

struct ScatterAnalysis {
  HomodyneOptics optics;
  double lo_power_w = 1e-3;
  double g1 = 1.0;
  double g2 = 1.0;
  double span_hz = 1000.0;
  std::size_t lines = 250;
  std::size_t averages = 100;
  double sample_rate_hz = 0.0;  // 0: four times the span
  double modecleaner_linewidth_hz = 4.7e6;
  unsigned workers = 0;

  double rate() const { return sample_rate_hz > 0.0 ? sample_rate_hz : 4.0 * span_hz; }
};

enum class ScatterChannel { differential, diode1, diode2 };

/// Monte-Carlo fringe PSD relative to the quantum shot floor of the
/// differential channel. Raw Welch bins, linear units.
SpectrumTrace scatter_psd(const ScatterPath& path, const DitherDrive& dither, const ScatterAnalysis& analysis,
                          std::uint64_t seed, ScatterChannel channel = ScatterChannel::differential);

struct DitherScanPoint {
  double amplitude_cycles = 0.0;
  double residual = 0.0;  // shot-relative power integrated over the low band
};

/// Residual fringe power below band_hi_hz for each dither amplitude; the same
/// phase realization is reused for every amplitude.
std::vector<DitherScanPoint> dither_amplitude_scan(const ScatterPath& path, double dither_frequency_hz,
                                                   const std::vector<double>& amplitudes,
                                                   const ScatterAnalysis& analysis, double band_hi_hz,
                                                   std::uint64_t seed);

}  // namespace bhd
