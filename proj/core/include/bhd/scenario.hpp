#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bhd/dust.hpp"
#include "bhd/electronics.hpp"
#include "bhd/field_algebra.hpp"
#include "bhd/noise_psd.hpp"
#include "bhd/pointing.hpp"
#include "bhd/scatter.hpp"
#include "bhd/spectral.hpp"
#include "bhd/squeezing.hpp"

namespace bhd {

struct LaserConfig {
  double power_w = 1e-3;
  bool rin_enabled = false;
  double rin_db = 40.0;              // excess over shot noise at the anchor frequency
  double rin_anchor_hz = 10.0;
  double rin_corner_hz = 1000.0;
  double rin_reference_power_w = 0;  // power at which rin_db holds; 0 means power_w
};

struct ModecleanerConfig {
  bool enabled = true;
  ModecleanerCavity cavity{4.7e6, 1000.0, 50.0};
};

enum class BalanceMode { optimize, manual, cmrr };

struct HomodyneConfig {
  HomodyneOptics optics;
  Topology topology = Topology::variable_gain;
  double g1 = kDefaultGain;
  std::optional<double> g2;
  BalanceMode balance = BalanceMode::optimize;
  double target_cmrr_db = 80.0;
};

struct ElectronicsConfig {
  ResistorType resistor_type = ResistorType::metal_film;
  double flicker_coefficient = -1.0;  // >= 0 overrides the preset
  double responsivity = kDefaultResponsivity;
  std::string dark = "default";       // default, white, none
  double dark_corner_hz = kDefaultDarkCornerHz;
  double dark_clearance_db = 20.0;    // at 1 kHz against a 1 mW LO
  double dark_level_v2_per_hz = 0.0;  // for dark = white
};

struct NoiseSourceConfig {
  std::string name;
  std::string port;
  NoisePsd psd;
  bool replaces_vacuum = false;
};

struct ScatterConfig {
  std::string name;
  bool enabled = true;
  ScatterPath path;
};

enum class DustLocation { arm1, common };

struct DustConfig {
  bool enabled = false;
  DustEventProcess process;
  DustLocation location = DustLocation::arm1;
  double monitor_duration_s = 60.0;
  double monitor_rate_hz = 1000.0;
};

enum class JitterLocation { pre_mc, post_mc };

struct MapConfig {
  std::string kind = "uniform";  // uniform, gradient, synthetic, file
  std::string file;
  double nominal = 0.0;          // 0: diode efficiency from the homodyne block
  double rms = 0.005;
  double correlation_m = 100e-6;
  double gradient_per_m = 0.0;
  std::size_t nodes = 201;
  double pitch_m = 15e-6;
};

struct JitterConfig {
  bool enabled = false;
  JitterLocation location = JitterLocation::post_mc;
  JitterProcess process;
  double waist_m = 500e-6;
  MapConfig map;
};

struct OpoConfig {
  bool enabled = false;
  OpoParams params{0.65, 10e6, 0.0};
  EfficiencyChain chain;  // detector efficiency is applied by the homodyne block
};

struct AnalysisConfig {
  SpanPlan plan;
  std::uint64_t seed = 1;
  double sample_rate_hz = 0.0;  // 0: four times each span edge
  double duration_s = 0.0;      // 0: as long as each span needs
  double reference_hz = 1000.0;
  double band_lo_hz = 1600.0;
  double band_hi_hz = 6400.0;
  std::vector<std::string> outputs;  // empty: every output the scenario supports
};

struct ScenarioConfig {
  std::string source;  // path or label
  LaserConfig laser;
  ModecleanerConfig modecleaner;
  HomodyneConfig homodyne;
  ElectronicsConfig electronics;
  std::vector<NoiseSourceConfig> noise;
  std::vector<ScatterConfig> scatter;
  DitherDrive dither;
  DustConfig dust;
  JitterConfig jitter;
  OpoConfig opo;
  AnalysisConfig analysis;
  std::vector<std::string> warnings;

  bool wants(const std::string& output) const;
};

struct ParseOptions {
  bool strict = true;
  /// "section.key=value" entries applied on top of the file.
  std::vector<std::string> overrides;
};

ScenarioConfig parse_scenario(const std::string& path, const ParseOptions& opts = {});
ScenarioConfig parse_scenario_text(const std::string& text, const ParseOptions& opts = {},
                                   const std::string& label = "<text>");

}  // namespace bhd
