#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bhd/budget.hpp"
#include "bhd/electronics.hpp"
#include "bhd/field_algebra.hpp"
#include "bhd/pointing.hpp"
#include "bhd/scenario.hpp"
#include "bhd/spectral.hpp"

namespace bhd {

/// What the analyzer is looking at: LO with vacuum, LO blocked, or the LO
/// with squeezed light at either quadrature.
enum class Measurement { shot, dark, squeezed, anti_squeezed };
std::string_view to_string(Measurement m);

/// Beam-position coupling through the two photodiode maps.
struct JitterCoupling {
  double k1x = 0.0;  // relative efficiency change per metre, diode 1
  double k1y = 0.0;
  double k2x = 0.0;
  double k2y = 0.0;
  JitterProcess at_diodes;         // displacement reaching the diodes
  NoisePsd lo_relative_intensity;  // 1/Hz, from modecleaner conversion
};

/// Everything derived from a config before any noise is drawn.
struct ScenarioModel {
  LocalOscillator lo;
  HomodyneOptics optics;  // after balancing
  DetectorDesign design;
  BalanceSetting balance;
  CouplingCoefficients coeffs;
  DifferentialCoefficients diff;  // gains applied
  double shot_floor_v2 = 0.0;     // quantum shot floor of diff, V^2/Hz
  double cmrr_db = 0.0;
  std::optional<JitterCoupling> jitter;
};

ScenarioModel build_model(const ScenarioConfig& config);

/// Stationary sources for a measurement, in the form analytic_budget takes.
std::vector<BudgetSource> budget_sources(const ScenarioConfig& config, const ScenarioModel& model, Measurement m);

/// Measurements the scenario asks for (analysis.outputs, squeezing only with an OPO).
std::vector<Measurement> requested_measurements(const ScenarioConfig& config);

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct RunReport {
  std::string scenario;
  std::string command;
  std::vector<std::pair<std::string, SpectrumTrace>> traces;
  std::vector<Table> tables;
  std::vector<std::pair<std::string, double>> scalars;
  std::vector<std::string> notes;

  bool has_trace(const std::string& name) const;
  const SpectrumTrace& trace(const std::string& name) const;
  const Table& table(const std::string& name) const;
  double scalar(const std::string& name) const;
  void set_scalar(const std::string& name, double value);

  /// One CSV per trace and table, plus report.txt with scalars and notes.
  void write(const std::string& dir) const;
  std::string summary() const;
};

struct RunOptions {
  unsigned workers = 0;
  std::optional<std::uint64_t> seed;  // overrides analysis.seed
};

RunReport run_budget(const ScenarioConfig& config, const RunOptions& opts = {});
RunReport run_monte_carlo(const ScenarioConfig& config, const RunOptions& opts = {});
RunReport run_cmrr(const ScenarioConfig& config);
RunReport run_dither_scan(const ScenarioConfig& config, const std::vector<double>& cycles,
                          const RunOptions& opts = {});
RunReport run_squeeze_predict(const ScenarioConfig& config);
RunReport run_dust_monitor(const ScenarioConfig& config, const RunOptions& opts = {});

/// Mean of a dB trace over [lo, hi], averaged in linear units. Empty when no bin falls inside.
std::optional<double> band_mean_db(const SpectrumTrace& db_trace, double lo_hz, double hi_hz);

/// Scalars shared by every report that carries a model.
void add_model_scalars(RunReport& report, const ScenarioConfig& config, const ScenarioModel& model);
/// Band means of the squeezed, anti-squeezed and dark traces, plus the dark-corrected squeezing.
void add_band_scalars(RunReport& report, const ScenarioConfig& config);

/// One simulated span before stitching, V^2/Hz. Exposed for tests and benchmarks.
SpectrumTrace simulate_span(const ScenarioConfig& config, const ScenarioModel& model, Measurement m,
                            std::size_t span_index, std::uint64_t seed, unsigned workers = 1);

/// Sample rate and record length the Monte-Carlo path uses for a span.
double span_sample_rate(const ScenarioConfig& config, std::size_t span_index);
std::size_t span_record_length(const ScenarioConfig& config, std::size_t span_index);

}  // namespace bhd
