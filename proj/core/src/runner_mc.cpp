#include <array>
#include <cmath>
#include <sstream>

#include "bhd/colored_noise.hpp"
#include "bhd/constants.hpp"
#include "bhd/dust.hpp"
#include "bhd/errors.hpp"
#include "bhd/parallel.hpp"
#include "bhd/random.hpp"
#include "bhd/runner.hpp"
#include "bhd/scatter.hpp"

namespace bhd {

double span_sample_rate(const ScenarioConfig& c, std::size_t i) {
  if (c.analysis.sample_rate_hz > 0.0) return c.analysis.sample_rate_hz;
  return 4.0 * c.analysis.plan.spans.at(i).span_hz;
}

std::size_t span_record_length(const ScenarioConfig& c, std::size_t i) {
  const SpanSpec& s = c.analysis.plan.spans.at(i);
  const double fs = span_sample_rate(c, i);
  const std::size_t required = welch_required_samples(fs, s.span_hz, s.lines, s.averages);
  if (c.analysis.duration_s <= 0.0) return required;
  const auto n = static_cast<std::size_t>(std::llround(c.analysis.duration_s * fs));
  if (n < required) {
    const double need = static_cast<double>(required) / fs;
    std::ostringstream os;
    os << "analysis.duration_s = " << c.analysis.duration_s << " s is too short for span " << s.span_hz
       << " Hz; it needs at least " << need << " s";
    throw InsufficientDataError(os.str(), need);
  }
  return n;
}

namespace {

bool handled_physically(const BudgetSource& s) {
  return s.name == "dark" || s.name == "flicker" || s.name == "jitter_x" || s.name == "jitter_y";
}

void add_scaled(std::vector<double>& acc, const std::vector<double>& x, double k) {
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += k * x[i];
}

}  // namespace

SpectrumTrace simulate_span(const ScenarioConfig& c, const ScenarioModel& m, Measurement meas, std::size_t si,
                            std::uint64_t seed, unsigned workers) {
  const SpanSpec& span = c.analysis.plan.spans.at(si);
  const double fs = span_sample_rate(c, si);
  const std::size_t n = span_record_length(c, si);

  std::vector<double> flux1(n, 0.0);
  std::vector<double> flux2(n, 0.0);

  if (meas != Measurement::dark) {
    const auto sources = budget_sources(c, m, meas);
    const CouplingCoefficients& k = m.coeffs;

    for (Port p : kAllPorts) {
      const double c1 = k.diode1[p];
      const double c2 = k.diode2[p];
      if (c1 == 0.0 && c2 == 0.0) continue;
      const std::string label = "port/" + std::string(to_string(p));

      // Quadrature fluctuation of the port, photon-flux units: vacuum PSD 2.
      bool replaced = false;
      std::vector<double> dx(n, 0.0);
      std::size_t idx = 0;
      for (const auto& s : sources) {
        ++idx;
        if (s.port == "additive" || s.port == "electronic" || handled_physically(s)) continue;
        if (parse_port(s.port) != p) continue;
        const auto x = synthesize_samples(s.psd.scaled(kVacuumQuadraturePsd), n, fs,
                                          derive_seed(seed, label + "/" + s.name, idx));
        add_scaled(dx, x, 1.0);
        replaced = replaced || s.replaces_vacuum;
      }
      if (!replaced) {
        add_scaled(dx, gaussian_samples(n, std::sqrt(kVacuumQuadraturePsd * fs / 2.0), derive_seed(seed, label)),
                   1.0);
      }
      add_scaled(flux1, dx, c1);
      add_scaled(flux2, dx, c2);
    }
    for (std::size_t i = 0; i < n; ++i) {
      flux1[i] += k.diode1.dc;
      flux2[i] += k.diode2.dc;
    }

    if (m.jitter) {
      const auto& j = *m.jitter;
      const auto x = synthesize_samples(j.at_diodes.displacement_x, n, fs, derive_seed(seed, "jitter/x"));
      const auto y = synthesize_samples(j.at_diodes.displacement_y, n, fs, derive_seed(seed, "jitter/y"));
      for (std::size_t i = 0; i < n; ++i) {
        flux1[i] += k.diode1.dc * (j.k1x * x[i] + j.k1y * y[i]);
        flux2[i] += k.diode2.dc * (j.k2x * x[i] + j.k2y * y[i]);
      }
    }

    for (const auto& s : c.scatter) {
      if (!s.enabled) continue;
      std::vector<double> phase = phase_trajectory(s.path, n, fs, derive_seed(seed, "scatter/" + s.name));
      apply_dither(phase, c.dither, fs);
      const double lw = c.modecleaner.enabled ? c.modecleaner.cavity.linewidth_hz : 0.0;
      const auto fi = fringe_intensity(s.path, m.optics, c.laser.power_w, phase, fs, lw);
      add_scaled(flux1, fi.diode1_w, 1.0 / kPhotonEnergy);
      add_scaled(flux2, fi.diode2_w, 1.0 / kPhotonEnergy);
    }

    if (c.dust.enabled) {
      const double duration = static_cast<double>(n) / fs;
      const std::uint64_t ds = derive_seed(seed, "dust");
      const auto events = draw_dust_events(c.dust.process, duration, ds);
      const TimeSeries loss = render_dust_events(events, c.dust.process.pulse_shape, duration, fs, ds);
      const bool common = c.dust.location == DustLocation::common;
      for (std::size_t i = 0; i < n && i < loss.size(); ++i) {
        const double keep = 1.0 - loss[i];
        flux1[i] *= keep;
        if (common) flux2[i] *= keep;
      }
    }
  }

  for (double& v : flux1) v *= kElectronCharge;
  for (double& v : flux2) v *= kElectronCharge;
  const TimeSeries i1(std::move(flux1), fs, seed);
  const TimeSeries i2(std::move(flux2), fs, seed);
  DetectorOutput out = detector_output(m.design, i1, i2, derive_seed(seed, "detector"));

  if (meas != Measurement::dark) {
    std::size_t idx = 0;
    for (const auto& s : budget_sources(c, m, meas)) {
      ++idx;
      if (handled_physically(s) || !(s.port == "additive" || s.port == "electronic")) continue;
      const auto v = synthesize_samples(s.psd, n, fs, derive_seed(seed, "additive/" + s.name, idx));
      add_scaled(out.differential.mutable_samples(), v, 1.0);
    }
  }
  return welch_psd(out.differential, span.span_hz, span.lines, span.averages, workers);
}

RunReport run_monte_carlo(const ScenarioConfig& c, const RunOptions& opts) {
  const ScenarioModel m = build_model(c);
  const std::uint64_t master = opts.seed.value_or(c.analysis.seed);
  const auto meas = requested_measurements(c);
  const std::size_t nspan = c.analysis.plan.spans.size();
  c.analysis.plan.validate();
  for (std::size_t i = 0; i < nspan; ++i) (void)span_record_length(c, i);

  std::vector<SpectrumTrace> raw(meas.size() * nspan);
  parallel_for(
      raw.size(),
      [&](std::size_t t) {
        const Measurement mm = meas[t / nspan];
        const std::size_t si = t % nspan;
        const std::uint64_t seed = derive_seed(master, "mc/" + std::string(to_string(mm)), si);
        raw[t] = simulate_span(c, m, mm, si, seed, 1);
      },
      opts.workers);

  RunReport r;
  r.scenario = c.source;
  r.command = "simulate";
  add_model_scalars(r, c, m);
  for (std::size_t mi = 0; mi < meas.size(); ++mi) {
    std::vector<SpectrumTrace> spans(raw.begin() + static_cast<std::ptrdiff_t>(mi * nspan),
                                     raw.begin() + static_cast<std::ptrdiff_t>((mi + 1) * nspan));
    SpectrumTrace stitched = stitch_spans(spans);
    SpectrumTrace shot = stitched;
    for (double& v : shot.value) v = m.shot_floor_v2;
    r.traces.emplace_back(std::string(to_string(meas[mi])), normalize_to_shot(stitched, shot));
  }

  add_band_scalars(r, c);
  return r;
}

}  // namespace bhd
