#pragma once

#include <string>
#include <vector>

#include "bhd/field_algebra.hpp"
#include "bhd/noise_psd.hpp"
#include "bhd/spectral.hpp"

namespace bhd {

/// A stationary noise source attached to one input of the coupling model.
///   port "lo" / "lo_intensity", "signal", "v0", "v1", "v2": psd is the
///     shot-relative quadrature PSD (vacuum = 1). By default it is excess
///     noise added on top of the vacuum; replaces_vacuum makes it the total.
///   port "additive" / "electronic": psd is already in output units^2/Hz.
struct BudgetSource {
  std::string name;
  std::string port;
  NoisePsd psd;
  bool replaces_vacuum = false;
};

struct BudgetGrid {
  double span_hz = 0.0;
  std::size_t lines = 0;
  std::size_t averages = 1;
  /// Match the expectation of a Hann-windowed estimate instead of sampling
  /// the PSD at bin centres.
  bool smooth = true;
};

/// Output PSD at f, unsmoothed: e^2 * 2 * sum_p c_p^2 s_p(f) + additive terms.
/// Coefficients are in flux units times gain, so e converts to output units.
double budget_psd(const DifferentialCoefficients& diff, const std::vector<BudgetSource>& sources, double f_hz);

/// The vacuum-only floor, e^2 * 2 * sum_p c_p^2.
double quantum_shot_floor(const DifferentialCoefficients& diff);

/// Raw-bin trace (DC up to the span) on the Welch grid of one span.
SpectrumTrace analytic_budget(const DifferentialCoefficients& diff, const std::vector<BudgetSource>& sources,
                              const BudgetGrid& grid);

/// Every span of the plan, stitched.
SpectrumTrace analytic_budget(const DifferentialCoefficients& diff, const std::vector<BudgetSource>& sources,
                              const SpanPlan& plan, bool smooth = true);

/// Hann spectral window |W(u)|^2 normalized to unit area, u in bins.
double hann_kernel(double u);

}  // namespace bhd
