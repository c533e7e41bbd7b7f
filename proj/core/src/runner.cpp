#include "bhd/runner.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bhd/constants.hpp"
#include "bhd/dust.hpp"
#include "bhd/errors.hpp"
#include "bhd/random.hpp"
#include "bhd/scatter.hpp"
#include "bhd/squeezing.hpp"

namespace bhd {

std::string_view to_string(Measurement m) {
  switch (m) {
    case Measurement::shot: return "shot";
    case Measurement::dark: return "dark";
    case Measurement::squeezed: return "squeezed";
    case Measurement::anti_squeezed: return "anti_squeezed";
  }
  return "?";
}

namespace {

PhotodiodeMap make_map(const ScenarioConfig& c, double eta, std::uint64_t seed) {
  const MapConfig& m = c.jitter.map;
  const double nominal = m.nominal > 0.0 ? m.nominal : eta;
  if (m.kind == "file") return PhotodiodeMap::load(m.file);
  if (m.kind == "gradient") return PhotodiodeMap::gradient(m.nodes, m.nodes, m.pitch_m, nominal, m.gradient_per_m);
  if (m.kind == "synthetic") {
    return PhotodiodeMap::synthetic(m.nodes, m.nodes, m.pitch_m, nominal, m.rms, m.correlation_m, seed);
  }
  return PhotodiodeMap::uniform(m.nodes, m.nodes, m.pitch_m, nominal);
}

JitterCoupling make_jitter(const ScenarioConfig& c, const ScenarioModel& model) {
  JitterCoupling j;
  const BeamProfile beam{c.jitter.waist_m, 0.0, 0.0, c.laser.power_w};
  const auto seed = c.analysis.seed;
  const PhotodiodeMap m1 = make_map(c, model.optics.eta_pd1, derive_seed(seed, "map", 1));
  const PhotodiodeMap m2 = make_map(c, model.optics.eta_pd2, derive_seed(seed, "map", 2));
  const double r1 = response(m1, beam);
  const double r2 = response(m2, beam);
  const auto g1 = pointing_coefficient(m1, beam);
  const auto g2 = pointing_coefficient(m2, beam);
  j.k1x = r1 > 0 ? g1.d_dx / r1 : 0.0;
  j.k1y = r1 > 0 ? g1.d_dy / r1 : 0.0;
  j.k2x = r2 > 0 ? g2.d_dx / r2 : 0.0;
  j.k2y = r2 > 0 ? g2.d_dy / r2 : 0.0;

  if (c.jitter.location == JitterLocation::pre_mc && c.modecleaner.enabled) {
    const auto mc = modecleaner_filter(c.jitter.process, c.modecleaner.cavity);
    j.at_diodes = mc.residual;
    j.lo_relative_intensity = mc.relative_intensity;
  } else {
    j.at_diodes = c.jitter.process;
    j.lo_relative_intensity = NoisePsd::zero();
  }
  return j;
}

}  // namespace

ScenarioModel build_model(const ScenarioConfig& c) {
  ScenarioModel m;
  m.lo = LocalOscillator::from_power(c.laser.power_w);
  m.optics = c.homodyne.optics;
  m.optics.validate();

  const auto& h = c.homodyne;
  switch (h.balance) {
    case BalanceMode::optimize: m.balance = optimize_balance(m.optics, h.topology, h.g1); break;
    case BalanceMode::cmrr: m.balance = balance_for_cmrr(m.optics, h.topology, h.g1, h.target_cmrr_db); break;
    case BalanceMode::manual: m.balance = {h.g1, h.g2.value_or(h.g1), m.optics.eta_bs}; break;
  }
  m.optics.eta_bs = m.balance.eta_bs;

  DetectorDesign& d = m.design;
  d.topology = h.topology;
  d.g1 = m.balance.g1;
  d.g2 = h.topology == Topology::current_subtracting ? m.balance.g1 : m.balance.g2;
  d.resistor_type = c.electronics.resistor_type;
  d.flicker_override = c.electronics.flicker_coefficient;
  d.responsivity = c.electronics.responsivity;
  if (c.electronics.dark == "none") {
    d.dark_noise = NoisePsd::zero();
  } else if (c.electronics.dark == "white") {
    d.dark_noise = NoisePsd::white(c.electronics.dark_level_v2_per_hz);
  } else {
    d.dark_noise = default_dark_noise(d.g1, d.responsivity, c.electronics.dark_corner_hz,
                                      c.electronics.dark_clearance_db);
  }
  d.validate();

  m.coeffs = derive_coefficients(m.lo, m.optics);
  m.diff = subtract_output(m.coeffs, d.g1, d.gain2(), d.topology);
  m.shot_floor_v2 = quantum_shot_floor(m.diff);
  m.cmrr_db = cmrr_db(m.diff);
  if (c.jitter.enabled) m.jitter = make_jitter(c, m);
  return m;
}

std::vector<Measurement> requested_measurements(const ScenarioConfig& c) {
  std::vector<Measurement> out;
  if (c.wants("shot")) out.push_back(Measurement::shot);
  if (c.wants("dark")) out.push_back(Measurement::dark);
  if (c.opo.enabled) {
    if (c.wants("squeezed")) out.push_back(Measurement::squeezed);
    if (c.wants("anti_squeezed")) out.push_back(Measurement::anti_squeezed);
  } else if (!c.analysis.outputs.empty() && (c.wants("squeezed") || c.wants("anti_squeezed"))) {
    throw ConfigError("analysis.outputs asks for squeezing but [opo] is not enabled", 0, "outputs");
  }
  return out;
}

std::vector<BudgetSource> budget_sources(const ScenarioConfig& c, const ScenarioModel& m, Measurement meas) {
  std::vector<BudgetSource> src;
  if (!m.design.dark_noise.is_zero()) src.push_back({"dark", "additive", m.design.dark_noise, false});
  if (meas == Measurement::dark) return src;

  if (c.laser.rin_enabled) {
    const double ref = c.laser.rin_reference_power_w > 0.0 ? c.laser.rin_reference_power_w : c.laser.power_w;
    const double level = from_db(c.laser.rin_db) * c.laser.power_w / ref;
    src.push_back({"laser_rin", "lo", NoisePsd::rin_anchored(level, c.laser.rin_anchor_hz, c.laser.rin_corner_hz)});
  }
  for (const auto& n : c.noise) src.push_back({n.name, n.port, n.psd, n.replaces_vacuum});

  const double i1 = kElectronCharge * m.coeffs.diode1.dc;
  const double i2 = kElectronCharge * m.coeffs.diode2.dc;
  const NoisePsd flicker = flicker_psd(m.design, i1, i2);
  if (!flicker.is_zero()) src.push_back({"flicker", "additive", flicker, false});

  if (m.jitter) {
    const auto& j = *m.jitter;
    const double g2 = m.design.gain2();
    const double kx = m.design.g1 * i1 * j.k1x - g2 * i2 * j.k2x;
    const double ky = m.design.g1 * i1 * j.k1y - g2 * i2 * j.k2y;
    if (kx != 0.0) src.push_back({"jitter_x", "additive", j.at_diodes.displacement_x.scaled(kx * kx)});
    if (ky != 0.0) src.push_back({"jitter_y", "additive", j.at_diodes.displacement_y.scaled(ky * ky)});
    if (!j.lo_relative_intensity.is_zero()) {
      // delta X_a = alpha * r(t); relative to the vacuum PSD of 2.
      const double a2 = m.lo.flux();
      src.push_back({"jitter_intensity", "lo", j.lo_relative_intensity.scaled(a2 / kVacuumQuadraturePsd)});
    }
  }

  if (meas == Measurement::squeezed || meas == Measurement::anti_squeezed) {
    const double angle = meas == Measurement::squeezed ? 0.0 : kPi / 2.0;
    src.push_back({"squeezing", "signal", squeezed_signal_psd(c.opo.params, c.opo.chain, angle), true});
  }
  return src;
}

bool RunReport::has_trace(const std::string& name) const {
  for (const auto& [n, t] : traces) {
    if (n == name) return true;
  }
  return false;
}

const SpectrumTrace& RunReport::trace(const std::string& name) const {
  for (const auto& [n, t] : traces) {
    if (n == name) return t;
  }
  throw std::out_of_range("report has no trace '" + name + "'");
}

const Table& RunReport::table(const std::string& name) const {
  for (const auto& t : tables) {
    if (t.name == name) return t;
  }
  throw std::out_of_range("report has no table '" + name + "'");
}

double RunReport::scalar(const std::string& name) const {
  for (const auto& [n, v] : scalars) {
    if (n == name) return v;
  }
  throw std::out_of_range("report has no scalar '" + name + "'");
}

void RunReport::set_scalar(const std::string& name, double value) {
  for (auto& [n, v] : scalars) {
    if (n == name) {
      v = value;
      return;
    }
  }
  scalars.emplace_back(name, value);
}

std::string RunReport::summary() const {
  std::ostringstream os;
  os << command << ": " << scenario << "\n";
  char buf[256];
  for (const auto& [n, v] : scalars) {
    std::snprintf(buf, sizeof buf, "  %-34s %.6g\n", n.c_str(), v);
    os << buf;
  }
  for (const auto& [n, t] : traces) os << "  trace " << n << " (" << t.size() << " bins)\n";
  for (const auto& t : tables) os << "  table " << t.name << " (" << t.rows.size() << " rows)\n";
  for (const auto& n : notes) os << "  note: " << n << "\n";
  return os.str();
}

void RunReport::write(const std::string& dir) const {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  for (const auto& [n, t] : traces) write_csv(t, (fs::path(dir) / (n + ".csv")).string());
  char buf[64];
  for (const auto& t : tables) {
    const std::string path = (fs::path(dir) / (t.name + ".csv")).string();
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    os << "\n";
    for (const auto& row : t.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", row[i]);
        os << (i ? "," : "") << buf;
      }
      os << "\n";
    }
  }
  std::ofstream os((fs::path(dir) / "report.txt").string(), std::ios::binary);
  os << summary();
}

namespace {

SpectrumTrace flat_like(const SpectrumTrace& t, double level) {
  SpectrumTrace s = t;
  for (double& v : s.value) v = level;
  return s;
}

}  // namespace

std::optional<double> band_mean_db(const SpectrumTrace& t, double lo, double hi) {
  double acc = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t.frequency_hz[i] >= lo && t.frequency_hz[i] <= hi) {
      acc += from_db(t.value[i]);
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return to_db(acc / static_cast<double>(n));
}

void add_band_scalars(RunReport& r, const ScenarioConfig& c) {
  auto put = [&](const char* trace, const char* name) {
    if (!r.has_trace(trace)) return;
    if (auto v = band_mean_db(r.trace(trace), c.analysis.band_lo_hz, c.analysis.band_hi_hz)) r.set_scalar(name, *v);
  };
  put("squeezed", "mean_squeezing_db");
  put("anti_squeezed", "mean_anti_squeezing_db");
  put("dark", "mean_dark_db");
  const auto has = [&](const char* n) {
    for (const auto& [k, v] : r.scalars) {
      if (k == n) return true;
    }
    return false;
  };
  if (has("mean_squeezing_db") && has("mean_dark_db")) {
    r.set_scalar("mean_squeezing_dark_corrected_db",
                 dark_correct(r.scalar("mean_squeezing_db"), r.scalar("mean_dark_db")));
  }
}

void add_model_scalars(RunReport& r, const ScenarioConfig& c, const ScenarioModel& m) {
  r.set_scalar("lo_power_w", c.laser.power_w);
  r.set_scalar("shot_floor_v2_per_hz", m.shot_floor_v2);
  r.set_scalar("cmrr_db", m.cmrr_db);
  r.set_scalar("g1_v_per_a", m.design.g1);
  r.set_scalar("g2_v_per_a", m.design.gain2());
  r.set_scalar("eta_bs", m.optics.eta_bs);
  if (!m.design.dark_noise.is_zero()) {
    r.set_scalar("dark_clearance_db", to_db(m.shot_floor_v2 / m.design.dark_noise(c.analysis.reference_hz)));
  }
}


RunReport run_budget(const ScenarioConfig& c, const RunOptions&) {
  const ScenarioModel m = build_model(c);
  RunReport r;
  r.scenario = c.source;
  r.command = "budget";
  add_model_scalars(r, c, m);
  for (Measurement meas : requested_measurements(c)) {
    const DifferentialCoefficients diff = meas == Measurement::dark ? DifferentialCoefficients{} : m.diff;
    const auto raw = analytic_budget(diff, budget_sources(c, m, meas), c.analysis.plan);
    r.traces.emplace_back(std::string(to_string(meas)), normalize_to_shot(raw, flat_like(raw, m.shot_floor_v2)));
  }
  add_band_scalars(r, c);
  for (const auto& s : c.scatter) {
    if (s.enabled && s.path.backscatter_power_fraction + s.path.isolator_self_scatter > 0.0) {
      r.notes.push_back("scatter." + s.name + " is not stationary; only the Monte-Carlo path includes it");
    }
  }
  if (c.dust.enabled) r.notes.push_back("dust transients are not stationary; only the Monte-Carlo path includes them");
  return r;
}

RunReport run_cmrr(const ScenarioConfig& c) {
  const ScenarioModel m = build_model(c);
  RunReport r;
  r.scenario = c.source;
  r.command = "cmrr";
  add_model_scalars(r, c, m);
  r.set_scalar("dc1_v", m.design.g1 * kElectronCharge * m.coeffs.diode1.dc);
  r.set_scalar("dc2_v", m.design.gain2() * kElectronCharge * m.coeffs.diode2.dc);
  r.set_scalar("dark_clearance_1khz_db", dark_clearance_db(m.design, c.laser.power_w));
  if (c.dust.enabled) {
    // Largest dust event taken as an extra static loss in arm 1.
    HomodyneOptics o = m.optics;
    const double depth = c.dust.process.depth_max;
    if (c.dust.location == DustLocation::arm1) o.eta_l = 1.0 - (1.0 - o.eta_l) * (1.0 - depth);
    const auto coeffs = derive_coefficients(m.lo, o);
    const auto diff = subtract_output(coeffs, m.design.g1, m.design.gain2(), m.design.topology);
    r.set_scalar("cmrr_during_largest_dust_event_db", cmrr_db(diff));
  }
  return r;
}

RunReport run_squeeze_predict(const ScenarioConfig& c) {
  if (!c.opo.enabled) throw ConfigError("squeeze-predict needs an enabled [opo] section");
  const ScenarioModel m = build_model(c);
  RunReport r;
  r.scenario = c.source;
  r.command = "squeeze-predict";
  const double eta_chain = total_efficiency(c.opo.chain);
  const double eta_det = 0.5 * (m.optics.eta_pd1 + m.optics.eta_pd2);
  r.set_scalar("eta_chain", eta_chain);
  r.set_scalar("eta_total", eta_chain * eta_det);
  OpoParams ideal = c.opo.params;
  ideal.phase_noise_rms_rad = 0.0;
  const double f = c.analysis.reference_hz;
  const auto v0 = opo_variances(ideal, eta_chain * eta_det, f);
  const auto v = opo_variances(c.opo.params, eta_chain * eta_det, f);
  r.set_scalar("predicted_squeezing_db", to_db(v0.v_sq));
  r.set_scalar("predicted_anti_squeezing_db", to_db(v0.v_anti));
  r.set_scalar("predicted_squeezing_with_phase_noise_db", to_db(v.v_sq));
  r.set_scalar("predicted_anti_squeezing_with_phase_noise_db", to_db(v.v_anti));

  ScenarioConfig budget_cfg = c;
  budget_cfg.analysis.outputs = {"shot", "dark", "squeezed", "anti_squeezed"};
  RunReport b = run_budget(budget_cfg);
  for (auto& t : b.traces) r.traces.push_back(std::move(t));
  for (const auto& [n, val] : b.scalars) r.set_scalar(n, val);
  return r;
}

RunReport run_dither_scan(const ScenarioConfig& c, const std::vector<double>& cycles, const RunOptions& opts) {
  if (cycles.empty()) throw ConfigError("dither-scan needs at least one amplitude (--cycles)");
  const ScatterConfig* path = nullptr;
  for (const auto& s : c.scatter) {
    if (s.enabled) {
      path = &s;
      break;
    }
  }
  if (!path) throw ConfigError("dither-scan needs an enabled [scatter.*] section");
  const ScenarioModel m = build_model(c);
  ScatterAnalysis a;
  a.optics = m.optics;
  a.lo_power_w = c.laser.power_w;
  a.g1 = m.design.g1;
  a.g2 = m.design.gain2();
  const SpanSpec& span = c.analysis.plan.spans.back();
  a.span_hz = span.span_hz;
  a.lines = span.lines;
  a.averages = span.averages;
  a.sample_rate_hz = span_sample_rate(c, c.analysis.plan.spans.size() - 1);
  a.modecleaner_linewidth_hz = c.modecleaner.enabled ? c.modecleaner.cavity.linewidth_hz : 0.0;
  a.workers = opts.workers;
  const double band_hi = c.dither.frequency_hz / 2.0;
  const std::uint64_t seed = derive_seed(opts.seed.value_or(c.analysis.seed), "scatter/" + path->name);
  const auto scan = dither_amplitude_scan(path->path, c.dither.frequency_hz, cycles, a, band_hi, seed);

  RunReport r;
  r.scenario = c.source;
  r.command = "dither-scan";
  Table t{"dither_scan", {"amplitude_cycles", "residual_shot_units"}, {}};
  std::size_t best = 0;
  for (std::size_t i = 0; i < scan.size(); ++i) {
    t.rows.push_back({scan[i].amplitude_cycles, scan[i].residual});
    if (scan[i].residual < scan[best].residual) best = i;
  }
  r.tables.push_back(std::move(t));
  r.set_scalar("dither_frequency_hz", c.dither.frequency_hz);
  r.set_scalar("band_hi_hz", band_hi);
  r.set_scalar("best_amplitude_cycles", scan[best].amplitude_cycles);
  r.set_scalar("best_residual_shot_units", scan[best].residual);
  return r;
}

RunReport run_dust_monitor(const ScenarioConfig& c, const RunOptions& opts) {
  if (!c.dust.enabled) throw ConfigError("dust-monitor needs an enabled [dust] section");
  const ScenarioModel m = build_model(c);
  const std::uint64_t seed = derive_seed(opts.seed.value_or(c.analysis.seed), "dust/monitor");
  const auto events = draw_dust_events(c.dust.process, c.dust.monitor_duration_s, seed);
  const TimeSeries loss = render_dust_events(events, c.dust.process.pulse_shape, c.dust.monitor_duration_s,
                                             c.dust.monitor_rate_hz, seed);
  const double v1 = m.design.g1 * kElectronCharge * m.coeffs.diode1.dc;
  const double v2 = m.design.gain2() * kElectronCharge * m.coeffs.diode2.dc;
  const bool common = c.dust.location == DustLocation::common;

  Table t{"dc_monitor", {"time_s", "diode1_v", "diode2_v", "differential_v"}, {}};
  t.rows.reserve(loss.size());
  double max_dip1 = 0.0;
  double max_dip_diff = 0.0;
  std::size_t dips = 0;
  bool in_dip = false;
  const double baseline = v1 - v2;
  const double threshold = 1e-3;  // V
  for (std::size_t i = 0; i < loss.size(); ++i) {
    const double keep = 1.0 - loss[i];
    const double d1 = v1 * keep;
    const double d2 = common ? v2 * keep : v2;
    const double diff = d1 - d2;
    t.rows.push_back({static_cast<double>(i) / loss.sample_rate_hz(), d1, d2, diff});
    max_dip1 = std::max(max_dip1, v1 - d1);
    const double excursion = std::abs(diff - baseline);
    max_dip_diff = std::max(max_dip_diff, excursion);
    if (excursion > threshold && !in_dip) ++dips;
    in_dip = excursion > threshold;
  }

  RunReport r;
  r.scenario = c.source;
  r.command = "dust-monitor";
  r.tables.push_back(std::move(t));
  r.set_scalar("dc1_v", v1);
  r.set_scalar("dc2_v", v2);
  r.set_scalar("dust_events", static_cast<double>(events.size()));
  r.set_scalar("max_dip_diode1_v", max_dip1);
  r.set_scalar("max_excursion_differential_v", max_dip_diff);
  r.set_scalar("differential_dips", static_cast<double>(dips));
  return r;
}

}  // namespace bhd
