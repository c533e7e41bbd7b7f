#pragma once

#include "bhd/noise_psd.hpp"

namespace bhd {

struct OpoParams {
  double pump_ratio = 0.0;               // P / P_threshold
  double cavity_linewidth_hz = 10e6;     // FWHM
  double phase_noise_rms_rad = 0.0;

  void validate() const;
};

struct EfficiencyChain {
  double escape = 1.0;
  double propagation = 1.0;
  double visibility = 1.0;  // fringe visibility, enters squared
  double quantum_efficiency = 1.0;

  void validate() const;
};

/// escape * propagation * visibility^2 * quantum_efficiency
double total_efficiency(const EfficiencyChain& chain);

struct QuadratureVariances {
  double v_sq = 1.0;
  double v_anti = 1.0;
};

/// Below-threshold OPO: V-/+ = 1 -/+ eta 4x / ((1 +/- x)^2 + (2f/linewidth)^2), x = sqrt(pump).
/// Phase noise mixes a fraction sin^2(rms) of the conjugate quadrature into each.
QuadratureVariances opo_variances(const OpoParams& opo, double eta_tot, double f_hz);

/// Mixing weight on the squeezed quadrature for a measurement at `angle`
/// (0 = squeezed, pi/2 = anti-squeezed).
double squeezed_weight(double angle_rad, double phase_noise_rms_rad);

/// Shot-relative PSD seen at the homodyne signal port.
NoisePsd squeezed_signal_psd(const OpoParams& opo, const EfficiencyChain& chain, double quadrature_angle_rad);
NoisePsd squeezed_signal_psd(const OpoParams& opo, double eta_tot, double quadrature_angle_rad);

}  // namespace bhd
